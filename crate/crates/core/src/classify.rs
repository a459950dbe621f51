//! Closed-form planar-intersection counts of the Hermitian curve with
//! parabolas, and the census tables built from them.
//!
//! A parabola `y = ax² + bx + c` is first moved by an automorphism in Λ so
//! that its linear term vanishes (when possible). The count then depends only
//! on `a` and the trace `T₀` of the new constant term:
//!
//! | q    | class of `a`                    | `T₀ = 0` | `T₀ ≠ 0`     |
//! |------|---------------------------------|----------|--------------|
//! | odd  | `Δ = 1 − 4N(a)` square in GF(q)* | 1        | q + 1        |
//! | odd  | `Δ` non-square                  | 2q − 1   | q − 1        |
//! | odd  | `Δ = 0`                         | q        | 2q or 0      |
//! | even | `Tr_{GF(q)/GF(2)}(a^{q+1}) = 0` | 1        | q + 1        |
//! | even | `Tr_{GF(q)/GF(2)}(a^{q+1}) = 1` | 2q − 1   | q − 1        |
//!
//! With `Δ = 0` the linear term can only be removed when `2ab^q + b = 0`;
//! otherwise the parabola is equivalent to `a(x + v)²` and meets the curve in
//! `q` points.

use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::census::{CensusMode, CensusTable};
use crate::curve::Parabola;
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx, LinMap};
use crate::RunOptions;

/// `N(x) − Tr(ax²) = x^{q+1} − a^q x^{2q} − a x²`.
pub fn f_a(ctx: &FieldCtx, a: Elem, x: Elem) -> Result<Elem> {
    if a.is_zero() {
        return Err(Error::ZeroA);
    }
    Ok(f_a_unchecked(ctx, a, x))
}

fn f_a_unchecked(ctx: &FieldCtx, a: Elem, x: Elem) -> Elem {
    ctx.sub(ctx.norm(x), ctx.trace(ctx.mul(a, ctx.mul(x, x))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DeltaKind {
    Zero,
    SquareInFq,
    NonSquareInFq,
    EvenChar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DeltaClass {
    /// `1 − 4N(a)`
    pub delta: Elem,
    pub kind: DeltaKind,
    /// Canonical square root of `delta` in GF(q²); `None` when `delta = 0`.
    pub z: Option<Elem>,
}

pub fn delta_class(ctx: &FieldCtx, a: Elem) -> Result<DeltaClass> {
    if a.is_zero() {
        return Err(Error::ZeroA);
    }
    let four = ctx.from_prime(4);
    let delta = ctx.sub(ctx.one(), ctx.mul(four, ctx.norm(a)));
    let z = (!delta.is_zero()).then(|| ctx.sqrt(delta)).transpose()?;
    let kind = if ctx.is_even() {
        DeltaKind::EvenChar
    } else if delta.is_zero() {
        DeltaKind::Zero
    } else if ctx.quad_char(delta)? == 1 {
        DeltaKind::SquareInFq
    } else {
        DeltaKind::NonSquareInFq
    };
    Ok(DeltaClass { delta, kind, z })
}

/// The simplest member of a parabola's Λ-orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Representative {
    /// `y = ax² + c₀` with `trace(c₀) = T₀`
    Centered { a: Elem, c0: Elem },
    /// `y = a(x + v)²`
    Shifted { a: Elem, v: Elem },
}

impl fmt::Display for Representative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Representative::Centered { a, c0 } => write!(f, "({a},0,{c0})"),
            Representative::Shifted { a, v } => write!(f, "{a}(x+{v})^2"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduction {
    /// The translation `γ` that removes the linear term, when one exists.
    pub gamma: Option<Elem>,
    /// `B = 2ab^q + b`, computed only when `Δ = 0`.
    pub b_invariant: Option<Elem>,
    /// Trace of the reduced constant term.
    pub t0: Option<Elem>,
    pub representative: Representative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    OddSquareT0Zero,
    OddSquareT0Nonzero,
    OddNonSquareT0Zero,
    OddNonSquareT0Nonzero,
    OddDeltaZeroShifted,
    OddDeltaZeroT0Zero,
    OddDeltaZeroSolvable,
    OddDeltaZeroUnsolvable,
    EvenBit0T0Zero,
    EvenBit0T0Nonzero,
    EvenBit1T0Zero,
    EvenBit1T0Nonzero,
}

impl Branch {
    pub fn tag(self) -> &'static str {
        match self {
            Branch::OddSquareT0Zero => "Odd/DeltaSq/T0=0",
            Branch::OddSquareT0Nonzero => "Odd/DeltaSq/T0!=0",
            Branch::OddNonSquareT0Zero => "Odd/DeltaNonSq/T0=0",
            Branch::OddNonSquareT0Nonzero => "Odd/DeltaNonSq/T0!=0",
            Branch::OddDeltaZeroShifted => "Odd/Delta0/B!=0",
            Branch::OddDeltaZeroT0Zero => "Odd/Delta0/B0/T0=0",
            Branch::OddDeltaZeroSolvable => "Odd/Delta0/B0/T0!=0/InImage",
            Branch::OddDeltaZeroUnsolvable => "Odd/Delta0/B0/T0!=0/NotInImage",
            Branch::EvenBit0T0Zero => "Even/bit0/T0=0",
            Branch::EvenBit0T0Nonzero => "Even/bit0/T0!=0",
            Branch::EvenBit1T0Zero => "Even/bit1/T0=0",
            Branch::EvenBit1T0Nonzero => "Even/bit1/T0!=0",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl Serialize for Branch {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationResult {
    pub count: u64,
    pub branch: Branch,
    pub reduced: Representative,
}

/// `T₀ = trace(c) + F_a(γ)`: the trace of the constant term after the
/// substitution by `(γ, δ)`, whatever `δ` is.
fn reduced_trace(ctx: &FieldCtx, p: &Parabola, gamma: Elem) -> Elem {
    ctx.add(ctx.trace(p.c), f_a_unchecked(ctx, p.a, gamma))
}

fn centered(ctx: &FieldCtx, a: Elem, t0: Elem) -> Representative {
    Representative::Centered {
        a,
        c0: ctx.trace_lift(t0),
    }
}

/// Finds `v` such that some `σ ∈ Λ` carries `p` to `a(x + v)²`.
fn shift_representative(ctx: &FieldCtx, p: &Parabola) -> Result<Elem> {
    let two_a = ctx.mul(ctx.from_prime(2), p.a);
    let inv_two_a = ctx.inv(two_a)?;
    for g in ctx.elements() {
        let lin = ctx.add(ctx.sub(ctx.mul(two_a, g), ctx.frob(g)), p.b);
        let v = ctx.mul(lin, inv_two_a);
        let konst = ctx.add(ctx.add(ctx.mul(p.a, ctx.mul(g, g)), ctx.mul(p.b, g)), p.c);
        let delta = ctx.sub(konst, ctx.mul(p.a, ctx.mul(v, v)));
        if ctx.trace(delta) == ctx.norm(g) {
            return Ok(v);
        }
    }
    Err(Error::Internal(format!("{p} has no a(x+v)^2 form")))
}

/// Moves `p` to the representative of its Λ-orbit used by the classifier.
pub fn reduce_parabola(ctx: &FieldCtx, p: &Parabola) -> Result<Reduction> {
    if p.a.is_zero() {
        return Err(Error::ZeroA);
    }
    if ctx.is_even() {
        let gamma = ctx.frob(p.b);
        let t0 = reduced_trace(ctx, p, gamma);
        return Ok(Reduction {
            gamma: Some(gamma),
            b_invariant: None,
            t0: Some(t0),
            representative: centered(ctx, p.a, t0),
        });
    }
    let minus_b = ctx.neg(p.b);
    let dc = delta_class(ctx, p.a)?;
    let b_invariant = if dc.kind == DeltaKind::Zero {
        let two_a = ctx.mul(ctx.from_prime(2), p.a);
        let big_b = ctx.add(ctx.mul(two_a, ctx.frob(p.b)), p.b);
        if !big_b.is_zero() {
            return Ok(Reduction {
                gamma: None,
                b_invariant: Some(big_b),
                t0: None,
                representative: Representative::Shifted {
                    a: p.a,
                    v: shift_representative(ctx, p)?,
                },
            });
        }
        Some(big_b)
    } else {
        None
    };
    let gammas = ctx.linmap_solve(p.a, minus_b, LinMap::TwoAxMinusFrob)?;
    let &gamma = gammas.first().ok_or(Error::NoGamma)?;
    if dc.kind != DeltaKind::Zero && gammas.len() != 1 {
        return Err(Error::Internal("2ax - x^q not bijective although Delta != 0".into()));
    }
    let t0 = reduced_trace(ctx, p, gamma);
    Ok(Reduction {
        gamma: Some(gamma),
        b_invariant,
        t0: Some(t0),
        representative: centered(ctx, p.a, t0),
    })
}

/// Count for `Δ = 0`, linear term removed, reduced trace `t0`.
fn delta_zero_count(ctx: &FieldCtx, a: Elem, t0: Elem) -> Result<(u64, Branch)> {
    let q = ctx.q();
    if t0.is_zero() {
        return Ok((q, Branch::OddDeltaZeroT0Zero));
    }
    // F_a(x) = T₀ becomes (x^q − 2ax)² = −4a·T₀; a is a square here, so is −4aT₀.
    let rhs = ctx.mul(ctx.neg(ctx.mul(ctx.from_prime(4), a)), t0);
    let s = ctx
        .sqrt(rhs)
        .map_err(|_| Error::Internal(format!("-4aT0 = {rhs} is not a square")))?;
    // solutions of the −s equation are the negatives of those of the +s one
    let n = ctx.linmap_solve(a, s, LinMap::FrobMinusTwoAx)?.len() as u64;
    if n == 0 {
        Ok((0, Branch::OddDeltaZeroUnsolvable))
    } else {
        Ok((2 * n, Branch::OddDeltaZeroSolvable))
    }
}

/// For `Δ = 0, B = 0`: whether every `γ` removing the linear term leads to
/// the same count.
pub fn gamma_choices_agree(ctx: &FieldCtx, p: &Parabola) -> Result<bool> {
    let gammas = ctx.linmap_solve(p.a, ctx.neg(p.b), LinMap::TwoAxMinusFrob)?;
    let mut counts = gammas
        .iter()
        .map(|&g| delta_zero_count(ctx, p.a, reduced_trace(ctx, p, g)).map(|r| r.0));
    let Some(first) = counts.next().transpose()? else {
        return Ok(true);
    };
    for c in counts {
        if c? != first {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact number of affine points shared by the curve and `p`.
pub fn classify(ctx: &FieldCtx, p: &Parabola) -> Result<ClassificationResult> {
    let red = reduce_parabola(ctx, p)?;
    let q = ctx.q();
    let (count, branch) = if ctx.is_even() {
        let t0 = red.t0.expect("even reduction sets T0");
        let bit = ctx.abs_trace(ctx.norm(p.a))?;
        match (bit, t0.is_zero()) {
            (0, true) => (1, Branch::EvenBit0T0Zero),
            (0, false) => (q + 1, Branch::EvenBit0T0Nonzero),
            (_, true) => (2 * q - 1, Branch::EvenBit1T0Zero),
            (_, false) => (q - 1, Branch::EvenBit1T0Nonzero),
        }
    } else {
        match (delta_class(ctx, p.a)?.kind, red.t0) {
            (DeltaKind::Zero, None) => (q, Branch::OddDeltaZeroShifted),
            (DeltaKind::Zero, Some(t0)) => {
                debug_assert!(gamma_choices_agree(ctx, p)?);
                delta_zero_count(ctx, p.a, t0)?
            }
            (DeltaKind::SquareInFq, Some(t0)) if t0.is_zero() => (1, Branch::OddSquareT0Zero),
            (DeltaKind::SquareInFq, Some(_)) => (q + 1, Branch::OddSquareT0Nonzero),
            (DeltaKind::NonSquareInFq, Some(t0)) if t0.is_zero() => {
                (2 * q - 1, Branch::OddNonSquareT0Zero)
            }
            (DeltaKind::NonSquareInFq, Some(_)) => (q - 1, Branch::OddNonSquareT0Nonzero),
            (kind, t0) => {
                return Err(Error::Internal(format!(
                    "unexpected reduction {kind:?}/{t0:?}"
                )))
            }
        }
    };
    Ok(ClassificationResult {
        count,
        branch,
        reduced: red.representative,
    })
}

fn halve(n: u64) -> u64 {
    debug_assert_eq!(n % 2, 0);
    n / 2
}

/// The census predicted by the closed-form class sizes.
pub fn census_closed(q: u64) -> CensusTable {
    let mut t = CensusTable::for_parabolas(q, CensusMode::Closed);
    if q % 2 == 1 {
        let h = q * q * (q + 1);
        t.add(0, halve(h * (q - 1)));
        t.add(1, halve(h * q * (q - 3)));
        t.add(q - 1, halve(h * q * (q - 1) * (q - 1)));
        t.add(q, h * (q * q - q + 1));
        t.add(q + 1, halve(h * q * (q - 1) * (q - 3)));
        t.add(2 * q - 1, halve(h * q * (q - 1)));
        t.add(2 * q, halve(h * (q - 1)));
    } else {
        let g = q * q * q * (q + 1);
        let half = q / 2;
        t.add(1, g * (half - 1));
        t.add(q - 1, g * (q - 1) * half);
        t.add(q + 1, g * (q - 1) * (half - 1));
        t.add(2 * q - 1, g * half);
    }
    t
}

pub(crate) fn check_bound(ctx: &FieldCtx, opts: &RunOptions) -> Result<()> {
    if ctx.q() > opts.max_q {
        return Err(Error::BoundExceeded {
            q: ctx.q(),
            bound: opts.max_q,
        });
    }
    Ok(())
}

/// Census obtained by classifying one parabola per `(a, b, trace(c))` and
/// weighting it by the `q` constants sharing that trace.
pub fn census_by_classifier(ctx: &FieldCtx, opts: &RunOptions) -> Result<CensusTable> {
    check_bound(ctx, opts)?;
    let q = ctx.q();
    let lifts: Vec<Elem> = ctx.subfield().map(|t| ctx.trace_lift(t)).collect();
    let parts: Vec<Result<CensusTable>> = opts.install(|| {
        ctx.nonzero()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|a| {
                let mut t = CensusTable::empty(q, CensusMode::Classifier);
                for b in ctx.elements() {
                    for &c in &lifts {
                        let r = classify(ctx, &Parabola { a, b, c })?;
                        t.add(r.count, q);
                    }
                }
                Ok(t)
            })
            .collect()
    });
    let mut table = CensusTable::for_parabolas(q, CensusMode::Classifier);
    for part in parts {
        table.merge(&part?);
    }
    Ok(table)
}

/// Exhaustive census of the `q⁴` non-vertical lines `y = mx + c`.
pub fn line_census(ctx: &FieldCtx, opts: &RunOptions) -> Result<CensusTable> {
    check_bound(ctx, opts)?;
    let q = ctx.q();
    let norms: Vec<(Elem, Elem)> = ctx.elements().map(|x| (x, ctx.norm(x))).collect();
    let parts: Vec<CensusTable> = opts.install(|| {
        ctx.elements()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|m| {
                let mut t = CensusTable::empty(q, CensusMode::Lines);
                for c in ctx.elements() {
                    let hits = norms
                        .iter()
                        .filter(|&&(x, n)| ctx.trace(ctx.add(ctx.mul(m, x), c)) == n)
                        .count();
                    t.add(hits as u64, 1);
                }
                t
            })
            .collect()
    });
    let mut table = CensusTable::empty(q, CensusMode::Lines);
    for part in &parts {
        table.merge(part);
    }
    Ok(table)
}
