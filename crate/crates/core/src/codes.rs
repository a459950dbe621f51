//! Hermitian codes `C(m, q)`: duals of the evaluation codes spanned by the
//! monomials `x^r y^s` with `qr + (q+1)s ≤ m` on the `q³` affine points.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::census::{CensusMode, CensusTable};
use crate::curve::curve_points;
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};
use crate::linalg;
use crate::RunOptions;

/// Upper bound on the number of 4-column supports `weight4_brute` will scan.
pub const MAX_SUPPORTS: u64 = 20_000_000;

const MATRIX_MAGIC: &[u8; 4] = b"HRMC";

pub fn max_m(q: u64) -> u64 {
    q * q * q + q * q - q - 2
}

fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialBasis {
    pub q: u64,
    pub m: u64,
    /// `(r, s)` for `x^r y^s`, ordered by `s` then `r`.
    pub monomials: Vec<(u64, u64)>,
}

impl MonomialBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }
}

pub fn monomial_basis(q: u64, m: u64) -> Result<MonomialBasis> {
    if m > max_m(q) {
        return Err(Error::MOutOfRange { m, max: max_m(q) });
    }
    let monomials = (0..q)
        .flat_map(|s| (0..q * q).map(move |r| (r, s)))
        .filter(|&(r, s)| q * r + (q + 1) * s <= m)
        .collect();
    Ok(MonomialBasis { q, m, monomials })
}

/// Row-major `|B| × n` matrix of monomial evaluations; column `j` belongs to
/// the `j`-th point of [`curve_points`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckMatrix {
    pub q: u64,
    pub m: u64,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Elem>,
}

impl CheckMatrix {
    pub fn row(&self, i: usize) -> &[Elem] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn rank(&self, ctx: &FieldCtx) -> usize {
        linalg::rank(ctx, &self.to_rows())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(Elem::to_string).collect();
            writeln!(out, "{}", line.join(",")).unwrap();
        }
        out
    }

    /// `HRMC`, then `q, m, rows, cols` and one value per entry, all `u32`
    /// little-endian; an entry is its exponent, or `0xFFFFFFFF` for zero.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(20 + 4 * self.entries.len());
        out.extend_from_slice(MATRIX_MAGIC);
        for v in [self.q, self.m, self.rows as u64, self.cols as u64] {
            out.extend_from_slice(&(v as u32).to_le_bytes());
        }
        for e in &self.entries {
            out.extend_from_slice(&e.log().unwrap_or(u32::MAX).to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let word = |i: usize| -> Result<u32> {
            bytes
                .get(4 * i..4 * i + 4)
                .map(|w| u32::from_le_bytes(w.try_into().unwrap()))
                .ok_or_else(|| Error::Format("truncated matrix".into()))
        };
        if bytes.get(..4) != Some(MATRIX_MAGIC) {
            return Err(Error::Format("bad matrix magic".into()));
        }
        let (q, m, rows, cols) = (word(1)?, word(2)?, word(3)? as usize, word(4)? as usize);
        if bytes.len() != 20 + 4 * rows * cols {
            return Err(Error::Format("matrix length does not match header".into()));
        }
        let entries = (0..rows * cols)
            .map(|i| match word(5 + i)? {
                u32::MAX => Ok(Elem::Zero),
                k => Ok(Elem::Pow(k)),
            })
            .collect::<Result<_>>()?;
        Ok(CheckMatrix {
            q: q as u64,
            m: m as u64,
            rows,
            cols,
            entries,
        })
    }
}

fn evaluation_matrix(ctx: &FieldCtx, m: u64, monomials: &[(u64, u64)]) -> CheckMatrix {
    let pts = curve_points(ctx);
    let mut entries = Vec::with_capacity(monomials.len() * pts.len());
    for &(r, s) in monomials {
        entries.extend(pts.iter().map(|p| ctx.mul(ctx.pow(p.x, r), ctx.pow(p.y, s))));
    }
    CheckMatrix {
        q: ctx.q(),
        m,
        rows: monomials.len(),
        cols: pts.len(),
        entries,
    }
}

pub fn check_matrix(ctx: &FieldCtx, m: u64) -> Result<CheckMatrix> {
    let basis = monomial_basis(ctx.q(), m)?;
    Ok(evaluation_matrix(ctx, m, &basis.monomials))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodeSpec {
    pub q: u64,
    pub m: u64,
    pub n: u64,
    pub phase: u8,
    pub a: Option<u64>,
    pub b: Option<u64>,
    pub d: u64,
    pub k: u64,
    /// `n − |B_{m,q}|`, the dimension read off the monomial basis.
    pub k_from_basis: u64,
    /// Set when `m` has no row decomposition and the parameters were taken
    /// from this `m'` with the same monomial basis.
    pub equivalent_m: Option<u64>,
}

/// `(phase, a, b, d, k)` for every phase row whose stated ranges admit `m`.
fn phase_rows(q: u64, m: u64) -> Vec<(u8, Option<u64>, Option<u64>, u64, u64)> {
    let n = q * q * q;
    let mut out = Vec::new();
    if m + 2 <= q * q {
        for a in 0..q {
            for b in 0..=a {
                if b != q - 1 && a * q + b == m {
                    let d = if a > b { a + 1 } else { a + 2 };
                    out.push((1, Some(a), Some(b), d, n - a * (a + 1) / 2 - (b + 1)));
                }
            }
        }
    }
    if q >= 3 && q * q - 1 <= m && m + 2 * q + 3 <= 2 * q * q {
        for a in 1..=q - 2 {
            for b in 0..=q - 2 {
                if 2 * q * q - q - a * q - b - 3 == m {
                    let d = if a <= b { (q - a) * q - b - 1 } else { (q - a) * q };
                    // n − q(3q−1)/2 + aq + b + 2
                    let k = n + a * q + b + 2 - q * (3 * q - 1) / 2;
                    out.push((2, Some(a), Some(b), d, k));
                }
            }
        }
    }
    if 2 * q * q <= m + 2 * q + 2 && m + 2 <= n {
        out.push((3, None, None, m + q + 2 - q * q, n + q * (q - 1) / 2 - m - 1));
    }
    if n <= m + 1 && m + q + 2 <= n + q * q {
        for a in 0..=q.saturating_sub(2) {
            for b in 0..=a {
                if n + q * q - q - 2 - a * q - b == m {
                    out.push((4, Some(a), Some(b), n - a * q - b, a * (a + 1) / 2 + b + 1));
                }
            }
        }
    }
    out
}

fn spec_from_rows(q: u64, m: u64) -> Result<Option<CodeSpec>> {
    let rows = phase_rows(q, m);
    let Some(&(phase, a, b, d, k)) = rows.first() else {
        return Ok(None);
    };
    if rows.iter().any(|r| (r.3, r.4) != (d, k)) {
        return Err(Error::PhaseAmbiguous {
            m,
            phases: rows.iter().map(|r| r.0).collect(),
        });
    }
    let n = q * q * q;
    Ok(Some(CodeSpec {
        q,
        m,
        n,
        phase,
        a,
        b,
        d,
        k,
        k_from_basis: n - monomial_basis(q, m)?.len() as u64,
        equivalent_m: None,
    }))
}

/// Distance and dimension of `C(m, q)` from the phase formulas.
///
/// When `m` itself admits no `(a, b)`, the nearest `m'` with the same
/// monomial basis that does is used and recorded in `equivalent_m`.
pub fn phase_params(q: u64, m: u64) -> Result<CodeSpec> {
    let basis = monomial_basis(q, m)?;
    if let Some(spec) = spec_from_rows(q, m)? {
        return Ok(spec);
    }
    let same = |m2: u64| monomial_basis(q, m2).map(|b| b.monomials == basis.monomials);
    let below = (0..m).rev().take_while(|&m2| same(m2).unwrap_or(false));
    let above = (m + 1..=max_m(q)).take_while(|&m2| same(m2).unwrap_or(false));
    for m2 in below.chain(above) {
        if let Some(mut spec) = spec_from_rows(q, m2)? {
            spec.equivalent_m = Some(m2);
            spec.m = m;
            return Ok(spec);
        }
    }
    Err(Error::PhaseDecompositionFailed { m })
}

/// Monomials of the corner code `H⁰_d` (j = 0) or the edge code `H^j_d`.
pub fn corner_edge_monomials(d: u64, j: u64) -> Vec<(u64, u64)> {
    let mut mons: Vec<(u64, u64)> = (0..=d - 2)
        .flat_map(|s| (0..=d - 2 - s).map(move |r| (r, s)))
        .collect();
    mons.extend((0..j).map(|i| (d - 1 - i, i)));
    mons.sort_by_key(|&(r, s)| (s, r));
    mons
}

/// The corner (`j = 0`) or edge code with designed distance `d`.
pub fn corner_edge_code(ctx: &FieldCtx, d: u64, j: u64) -> Result<(CodeSpec, CheckMatrix)> {
    let q = ctx.q();
    if d < 2 || d > q {
        return Err(Error::DOutOfRange { d, q });
    }
    if j >= d {
        return Err(Error::JOutOfRange { j, max: d - 1 });
    }
    let m = if j == 0 {
        (d - 2) * (q + 1)
    } else {
        (d - 1) * q + j - 1
    };
    let mons = corner_edge_monomials(d, j);
    if monomial_basis(q, m)?.monomials != mons {
        return Err(Error::Internal(format!("B_(m={m}) differs from the corner/edge basis")));
    }
    Ok((phase_params(q, m)?, evaluation_matrix(ctx, m, &mons)))
}

/// Which first-phase code of distance 3 a weight-4 count refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Distance3Code {
    #[serde(rename = "H0_3")]
    Corner,
    #[serde(rename = "H1_3")]
    Edge1,
    #[serde(rename = "H2_3")]
    Edge2,
}

impl Distance3Code {
    pub fn j(self) -> u64 {
        match self {
            Distance3Code::Corner => 0,
            Distance3Code::Edge1 => 1,
            Distance3Code::Edge2 => 2,
        }
    }

    pub fn from_j(j: u64) -> Option<Self> {
        match j {
            0 => Some(Distance3Code::Corner),
            1 => Some(Distance3Code::Edge1),
            2 => Some(Distance3Code::Edge2),
            _ => None,
        }
    }
}

/// `N_k`: parabolas plus non-vertical lines meeting the curve in `k` points.
pub fn nk_table(parabolas: &CensusTable, lines: &CensusTable) -> CensusTable {
    let mut t = CensusTable::empty(parabolas.q, CensusMode::Closed);
    t.merge(parabolas);
    t.merge(lines);
    t
}

fn exact_div(n: i128, d: i128, what: &'static str) -> Result<i128> {
    if n % d != 0 {
        return Err(Error::InexactDivision(what));
    }
    Ok(n / d)
}

/// Closed-form number of weight-4 codewords; `nk` is required for `H¹₃`.
pub fn weight4_formula(q: u64, code: Distance3Code, nk: Option<&CensusTable>) -> Result<u64> {
    if q < 3 {
        return Err(Error::QTooSmall(q));
    }
    let qi = q as i128;
    let b = |n: u64, k: u64| binom(n, k) as i128;
    let value = match code {
        Distance3Code::Corner => {
            let inner = b(q * q * q, 3) * (qi + 1)
                - qi * qi * b(q + 1, 3) * (3 * qi.pow(3) + 2 * qi * qi - 8);
            exact_div(inner, 4, "corner code A4")? * (qi - 1) * (qi.pow(3) - 3)
        }
        Distance3Code::Edge1 => {
            let nk = nk.ok_or_else(|| Error::Format("H1_3 needs an N_k table".into()))?;
            let first = qi * qi * b(q, 4) * (qi.pow(4) - 4 * qi * qi + 3);
            let second = exact_div(
                qi.pow(4) * (qi * qi - 1).pow(2) * (qi - 1).pow(2),
                8,
                "edge code H1_3 A4",
            )?;
            let tail: i128 = (4..=2 * q).map(|k| nk.get(k) as i128 * b(k, 4)).sum();
            first + second + (qi * qi - 1) * tail
        }
        Distance3Code::Edge2 => {
            qi * qi * (qi - 1) * b(q + 1, 4) * (2 * qi.pow(3) - 3 * qi * qi - 4 * qi + 9)
        }
    };
    u64::try_from(value).map_err(|_| Error::Internal(format!("A4 = {value} out of range")))
}

/// Number of vectors in `{v : Hv = 0}` supported exactly on `cols`, by
/// inclusion–exclusion over the nullities of the column subsets.
fn full_support_solutions(ctx: &FieldCtx, h: &CheckMatrix, cols: &[usize]) -> i64 {
    let big_q = ctx.size() as i64;
    let w = cols.len();
    let mut total = 0i64;
    let mut pick = Vec::with_capacity(w);
    for mask in 0u32..(1 << w) {
        pick.clear();
        pick.extend((0..w).filter(|i| mask >> i & 1 == 1).map(|i| cols[i]));
        let nullity = pick.len() - linalg::column_rank(ctx, &h.entries, h.cols, &pick);
        let term = big_q.pow(nullity as u32);
        if (w - pick.len()).is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Weight-4 codewords of the code with parity-check matrix `h`, by scanning
/// every 4-column support.
pub fn weight4_brute(ctx: &FieldCtx, h: &CheckMatrix, opts: &RunOptions) -> Result<u64> {
    let n = h.cols;
    let supports = binom(n as u64, 4) as u64;
    if supports > MAX_SUPPORTS {
        return Err(Error::TooManySupports(supports));
    }
    let total: i64 = opts.install(|| {
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut acc = 0i64;
                for j in i + 1..n {
                    for k in j + 1..n {
                        for l in k + 1..n {
                            let cols = [i, j, k, l];
                            if linalg::column_rank(ctx, &h.entries, n, &cols) == 4 {
                                continue;
                            }
                            acc += full_support_solutions(ctx, h, &cols);
                        }
                    }
                }
                acc
            })
            .sum()
    });
    u64::try_from(total).map_err(|_| Error::Internal("negative weight-4 count".into()))
}

/// Smallest `w ≤ max_w` such that some `w` columns of `h` are dependent,
/// i.e. the minimum distance of the code when it is at most `max_w`.
pub fn min_distance_by_supports(
    ctx: &FieldCtx,
    h: &CheckMatrix,
    max_w: usize,
    opts: &RunOptions,
) -> Option<u64> {
    fn any_dependent(
        ctx: &FieldCtx,
        h: &CheckMatrix,
        w: usize,
        start: usize,
        pick: &mut Vec<usize>,
    ) -> bool {
        if pick.len() == w {
            return linalg::column_rank(ctx, &h.entries, h.cols, pick) < w;
        }
        for c in start..h.cols {
            pick.push(c);
            let hit = any_dependent(ctx, h, w, c + 1, pick);
            pick.pop();
            if hit {
                return true;
            }
        }
        false
    }
    (1..=max_w.min(h.cols)).find(|&w| {
        opts.install(|| {
            (0..h.cols).into_par_iter().any(|first| {
                let mut pick = vec![first];
                any_dependent(ctx, h, w, first + 1, &mut pick)
            })
        })
    })
    .map(|w| w as u64)
}

/// Minimum weight over all nonzero codewords, enumerating the whole code.
/// `None` when the code has more than `2^22` words or is zero.
pub fn min_distance_by_codewords(ctx: &FieldCtx, h: &CheckMatrix) -> Option<u64> {
    let gens = linalg::nullspace(ctx, &h.to_rows());
    let k = gens.len() as u32;
    let big_q = ctx.size();
    if k == 0 || big_q.checked_pow(k).is_none_or(|s| s > 1 << 22) {
        return None;
    }
    let elems: Vec<Elem> = ctx.elements().collect();
    let mut best = u64::MAX;
    let mut word = vec![Elem::Zero; h.cols];
    for idx in 1..big_q.pow(k) {
        word.iter_mut().for_each(|x| *x = Elem::Zero);
        let mut rest = idx;
        for g in &gens {
            let coef = elems[(rest % big_q) as usize];
            rest /= big_q;
            if coef.is_zero() {
                continue;
            }
            for (w, &gi) in word.iter_mut().zip(g) {
                *w = ctx.add(*w, ctx.mul(coef, gi));
            }
        }
        best = best.min(word.iter().filter(|x| !x.is_zero()).count() as u64);
    }
    Some(best)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NkRow {
    pub k: u64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Weight4Report {
    pub code: Distance3Code,
    pub q: u64,
    pub a4_formula: u64,
    pub a4_brute: Option<u64>,
    pub nk: Option<Vec<NkRow>>,
}

impl Weight4Report {
    pub fn agrees(&self) -> bool {
        self.a4_brute.is_none_or(|b| b == self.a4_formula)
    }
}

/// Evaluates the weight-4 formula (building `N_k` for `H¹₃`) and, when
/// `brute` is set, counts the words directly.
pub fn weight4_report(
    ctx: &FieldCtx,
    code: Distance3Code,
    brute: bool,
    opts: &RunOptions,
) -> Result<Weight4Report> {
    let q = ctx.q();
    let nk = if code == Distance3Code::Edge1 {
        let lines = crate::classify::line_census(ctx, opts)?;
        Some(nk_table(&crate::classify::census_closed(q), &lines))
    } else {
        None
    };
    let a4_formula = weight4_formula(q, code, nk.as_ref())?;
    let a4_brute = if brute {
        let (_, h) = corner_edge_code(ctx, 3, code.j())?;
        Some(weight4_brute(ctx, &h, opts)?)
    } else {
        None
    };
    Ok(Weight4Report {
        code,
        q,
        a4_formula,
        a4_brute,
        nk: nk.map(|t| {
            t.rows
                .iter()
                .map(|(&k, &count)| NkRow { k, count })
                .collect()
        }),
    })
}
