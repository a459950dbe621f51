//! Exhaustive ground truth for intersection counts.
//!
//! Substituting `y = ax² + bx + c` into the curve equation gives
//! `x^{q+1} − a^q x^{2q} − a x² − b^q x^q − b x = trace(c)`; the count is the
//! number of `x ∈ GF(q²)` satisfying it. Nothing here uses the classifier.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::census::{CensusMode, CensusTable};
use crate::classify::check_bound;
use crate::curve::{act_on_parabola, lambda_elements, LambdaAut, Parabola};
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};
use crate::RunOptions;

/// Per-`x` powers used by the scan.
struct PowerTable {
    /// `(x, x^q, x², x^{2q}, x^{q+1})`
    rows: Vec<[Elem; 5]>,
}

impl PowerTable {
    fn new(ctx: &FieldCtx) -> Self {
        let rows = ctx
            .elements()
            .map(|x| {
                let xq = ctx.frob(x);
                [x, xq, ctx.mul(x, x), ctx.mul(xq, xq), ctx.norm(x)]
            })
            .collect();
        PowerTable { rows }
    }

    /// `x^{q+1} − a^q x^{2q} − a x² − b^q x^q − b x` for every `x`.
    fn residues<'a>(
        &'a self,
        ctx: &'a FieldCtx,
        a: Elem,
        b: Elem,
    ) -> impl Iterator<Item = Elem> + 'a {
        let (na, naq) = (ctx.neg(a), ctx.neg(ctx.frob(a)));
        let (nb, nbq) = (ctx.neg(b), ctx.neg(ctx.frob(b)));
        self.rows.iter().map(move |&[x, xq, x2, x2q, xn]| {
            let s = ctx.add(xn, ctx.mul(naq, x2q));
            let s = ctx.add(s, ctx.mul(na, x2));
            let s = ctx.add(s, ctx.mul(nbq, xq));
            ctx.add(s, ctx.mul(nb, x))
        })
    }
}

/// Number of affine points common to the curve and `p`, by direct evaluation
/// at every `x`.
pub fn brute_count(ctx: &FieldCtx, p: &Parabola) -> Result<u64> {
    if p.a.is_zero() {
        return Err(Error::ZeroA);
    }
    let tc = ctx.trace(p.c);
    let hits = ctx
        .elements()
        .filter(|&x| {
            let y = p.eval(ctx, x);
            ctx.norm(x) == ctx.trace(y)
        })
        .count();
    debug_assert_eq!(
        hits,
        PowerTable::new(ctx)
            .residues(ctx, p.a, p.b)
            .filter(|&r| r == tc)
            .count()
    );
    Ok(hits as u64)
}

/// Exact census of all `q⁴(q²−1)` parabolas.
///
/// For each `(a, b)` one pass over `x` tabulates how often each value of
/// `t ∈ GF(q)` is hit by the left-hand side; the count of every parabola with
/// `trace(c) = t` is that tally, and each trace value is shared by `q`
/// constants `c`.
pub fn brute_census(ctx: &FieldCtx, opts: &RunOptions) -> Result<CensusTable> {
    check_bound(ctx, opts)?;
    let q = ctx.q();
    let powers = PowerTable::new(ctx);
    let parts: Vec<Result<CensusTable>> = opts.install(|| {
        ctx.nonzero()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|a| {
                let mut t = CensusTable::empty(q, CensusMode::Brute);
                let mut tally = vec![0u64; q as usize];
                for b in ctx.elements() {
                    tally.iter_mut().for_each(|n| *n = 0);
                    for r in powers.residues(ctx, a, b) {
                        let i = ctx.subfield_index(r).ok_or_else(|| {
                            Error::Internal(format!("residue {r} outside GF(q)"))
                        })?;
                        tally[i] += 1;
                    }
                    for &n in &tally {
                        t.add(n, q);
                    }
                }
                Ok(t)
            })
            .collect()
    });
    let mut table = CensusTable::for_parabolas(q, CensusMode::Brute);
    for part in parts {
        table.merge(&part?);
    }
    Ok(table)
}

/// Every parabola over GF(q²), in `(a, b, c)` element order.
pub fn all_parabolas(ctx: &FieldCtx) -> Vec<Parabola> {
    let mut out = Vec::new();
    for a in ctx.nonzero() {
        for b in ctx.elements() {
            for c in ctx.elements() {
                out.push(Parabola { a, b, c });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitViolation {
    pub parabola: Parabola,
    pub automorphism: LambdaAut,
    pub before: u64,
    pub after: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub q: u64,
    pub exhaustive: bool,
    pub parabolas: usize,
    pub automorphisms: usize,
    pub pairs: usize,
    pub violations: Vec<OrbitViolation>,
}

/// Checks that moving a parabola by any `σ ∈ Λ` keeps its brute count.
/// Exhaustive over all parabolas for `q ≤ 3`; otherwise `samples` parabolas
/// drawn with a fixed seed.
pub fn orbit_check(ctx: &FieldCtx, samples: usize, opts: &RunOptions) -> Result<OrbitReport> {
    let lam = lambda_elements(ctx);
    let exhaustive = ctx.q() <= 3;
    let mut parabolas = all_parabolas(ctx);
    if !exhaustive {
        let mut rng = ChaCha8Rng::seed_from_u64(0x4845_524d);
        parabolas.shuffle(&mut rng);
        parabolas.truncate(samples);
        parabolas.sort();
    }
    let per: Vec<Result<Vec<OrbitViolation>>> = opts.install(|| {
        parabolas
            .par_iter()
            .map(|p| {
                let before = brute_count(ctx, p)?;
                let mut bad = Vec::new();
                for &s in &lam {
                    let after = brute_count(ctx, &act_on_parabola(ctx, s, *p))?;
                    if after != before {
                        bad.push(OrbitViolation {
                            parabola: *p,
                            automorphism: s,
                            before,
                            after,
                        });
                    }
                }
                Ok(bad)
            })
            .collect()
    });
    let mut violations = Vec::new();
    for v in per {
        violations.extend(v?);
    }
    Ok(OrbitReport {
        q: ctx.q(),
        exhaustive,
        parabolas: parabolas.len(),
        automorphisms: lam.len(),
        pairs: parabolas.len() * lam.len(),
        violations,
    })
}
