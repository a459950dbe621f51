//! Dense Gaussian elimination over GF(q²) on `Elem` matrices.

use crate::gf::{Elem, FieldCtx};

/// Particular solution plus a basis of the homogeneous solution space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<Elem>,
    pub kernel: Vec<Vec<Elem>>,
}

/// Reduces `m` in place to reduced row echelon form; returns pivot columns.
pub fn row_reduce(ctx: &FieldCtx, m: &mut [Vec<Elem>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = ctx.inv(m[r][c]).expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = ctx.mul(*x, inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = ctx.neg(m[i][c]);
                for j in c..cols {
                    let v = ctx.mul(f, m[r][j]);
                    m[i][j] = ctx.add(m[i][j], v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(ctx: &FieldCtx, m: &[Vec<Elem>]) -> usize {
    let mut work = m.to_vec();
    row_reduce(ctx, &mut work).len()
}

/// Rank of the submatrix formed by the given columns of a row-major matrix
/// with `cols` columns. Forward elimination only.
pub fn column_rank(ctx: &FieldCtx, entries: &[Elem], cols: usize, pick: &[usize]) -> usize {
    let rows = entries.len() / cols;
    let w = pick.len();
    let mut buf: Vec<Elem> = Vec::with_capacity(rows * w);
    for r in 0..rows {
        buf.extend(pick.iter().map(|&c| entries[r * cols + c]));
    }
    let mut rank = 0;
    for c in 0..w {
        let Some(pr) = (rank..rows).find(|&i| !buf[i * w + c].is_zero()) else {
            continue;
        };
        if pr != rank {
            for j in 0..w {
                buf.swap(pr * w + j, rank * w + j);
            }
        }
        let inv = ctx.inv(buf[rank * w + c]).expect("pivot is nonzero");
        for i in rank + 1..rows {
            let lead = buf[i * w + c];
            if lead.is_zero() {
                continue;
            }
            let f = ctx.neg(ctx.mul(lead, inv));
            for j in c..w {
                let v = ctx.mul(f, buf[rank * w + j]);
                buf[i * w + j] = ctx.add(buf[i * w + j], v);
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace(ctx: &FieldCtx, m: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut work = m.to_vec();
    let pivots = row_reduce(ctx, &mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Elem::Zero; cols];
            v[f] = ctx.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = ctx.neg(work[r][f]);
            }
            v
        })
        .collect()
}

/// Solves `m x = rhs`; `None` when inconsistent.
pub fn solve(ctx: &FieldCtx, m: &[Vec<Elem>], rhs: &[Elem]) -> Option<Solution> {
    let cols = m.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Elem>> = m
        .iter()
        .zip(rhs)
        .map(|(row, &b)| {
            let mut r = row.clone();
            r.push(b);
            r
        })
        .collect();
    let pivots = row_reduce(ctx, &mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut particular = vec![Elem::Zero; cols];
    for (r, &pc) in pivots.iter().enumerate() {
        particular[pc] = aug[r][cols];
    }
    Some(Solution {
        particular,
        kernel: nullspace(ctx, m),
    })
}
