//! Affine points of the Hermitian curve `x^{q+1} = y^q + y` and the
//! translation subgroup Λ of its automorphisms.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: Elem,
    pub y: Elem,
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// The automorphism `x ↦ x + γ, y ↦ y + γ^q x + δ` for a curve point `(γ, δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LambdaAut {
    pub gamma: Elem,
    pub delta: Elem,
}

impl LambdaAut {
    pub const IDENTITY: LambdaAut = LambdaAut {
        gamma: Elem::Zero,
        delta: Elem::Zero,
    };

    /// `self ∘ other` as point maps (apply `other` first).
    pub fn compose(self, ctx: &FieldCtx, other: LambdaAut) -> LambdaAut {
        LambdaAut {
            gamma: ctx.add(self.gamma, other.gamma),
            delta: ctx.add(
                ctx.add(self.delta, other.delta),
                ctx.mul(ctx.frob(self.gamma), other.gamma),
            ),
        }
    }

    pub fn inverse(self, ctx: &FieldCtx) -> LambdaAut {
        // (γ, δ)^{-1} = (−γ, −δ + γ^{q+1})
        LambdaAut {
            gamma: ctx.neg(self.gamma),
            delta: ctx.add(ctx.neg(self.delta), ctx.norm(self.gamma)),
        }
    }
}

/// `y = ax² + bx + c` with `a ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Parabola {
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
}

impl Parabola {
    pub fn new(a: Elem, b: Elem, c: Elem) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::ZeroA);
        }
        Ok(Parabola { a, b, c })
    }

    pub fn eval(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        let ax2 = ctx.mul(self.a, ctx.mul(x, x));
        ctx.add(ctx.add(ax2, ctx.mul(self.b, x)), self.c)
    }
}

impl fmt::Display for Parabola {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

pub fn is_on_curve(ctx: &FieldCtx, x: Elem, y: Elem) -> bool {
    ctx.norm(x) == ctx.trace(y)
}

/// All `q³` affine points, sorted by `(x, y)` with zero first.
pub fn curve_points(ctx: &FieldCtx) -> Vec<CurvePoint> {
    let q = ctx.q() as usize;
    // y grouped by trace, each fiber already in element order
    let mut fibers: Vec<Vec<Elem>> = vec![Vec::with_capacity(q); q];
    for y in ctx.elements() {
        let t = ctx.subfield_index(ctx.trace(y)).expect("trace lies in GF(q)");
        fibers[t].push(y);
    }
    let mut pts = Vec::with_capacity(q * q * q);
    for x in ctx.elements() {
        let t = ctx.subfield_index(ctx.norm(x)).expect("norm lies in GF(q)");
        pts.extend(fibers[t].iter().map(|&y| CurvePoint { x, y }));
    }
    pts
}

pub fn act_on_point(ctx: &FieldCtx, s: LambdaAut, p: CurvePoint) -> Result<CurvePoint> {
    if !is_on_curve(ctx, p.x, p.y) {
        return Err(Error::NotOnCurve);
    }
    Ok(CurvePoint {
        x: ctx.add(p.x, s.gamma),
        y: ctx.add(ctx.add(p.y, ctx.mul(ctx.frob(s.gamma), p.x)), s.delta),
    })
}

/// `(a, 2aγ − γ^q + b, aγ² + bγ − δ + c)`.
///
/// This is the substitution of `s` into the parabola's equation, so its
/// affine points are the preimages under `s` of the original parabola's
/// points. Leading coefficient is unchanged.
pub fn act_on_parabola(ctx: &FieldCtx, s: LambdaAut, p: Parabola) -> Parabola {
    let g = s.gamma;
    let two_a_g = ctx.mul(ctx.mul(ctx.from_prime(2), p.a), g);
    let b = ctx.add(ctx.sub(two_a_g, ctx.frob(g)), p.b);
    let c = ctx.add(
        ctx.sub(ctx.add(ctx.mul(p.a, ctx.mul(g, g)), ctx.mul(p.b, g)), s.delta),
        p.c,
    );
    Parabola { a: p.a, b, c }
}

/// Λ in curve-point order, one automorphism per point.
pub fn lambda_elements(ctx: &FieldCtx) -> Vec<LambdaAut> {
    curve_points(ctx)
        .into_iter()
        .map(|p| LambdaAut {
            gamma: p.x,
            delta: p.y,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn point_counts() {
        for q in [2, 3, 4, 5] {
            let ctx = FieldCtx::for_q(q).unwrap();
            let pts = curve_points(&ctx);
            assert_eq!(pts.len() as u64, q * q * q);
            assert!(pts.windows(2).all(|w| w[0] < w[1]));
            assert!(pts.iter().all(|p| is_on_curve(&ctx, p.x, p.y)));
            assert_eq!(pts[0], CurvePoint { x: Elem::Zero, y: Elem::Zero });
        }
        let ctx = FieldCtx::for_q(3).unwrap();
        for x in ctx.elements() {
            assert_eq!(curve_points(&ctx).iter().filter(|p| p.x == x).count(), 3);
        }
    }

    #[test]
    fn membership() {
        let ctx = FieldCtx::for_q(2).unwrap();
        for c in ctx.elements() {
            assert_eq!(is_on_curve(&ctx, Elem::Zero, c), ctx.trace(c).is_zero());
        }
        let ys = ctx.elements().filter(|&y| is_on_curve(&ctx, ctx.alpha(), y)).count();
        assert_eq!(ys, 2);
    }

    #[test]
    fn lambda_is_a_group_acting_on_points() {
        for q in [2, 3] {
            let ctx = FieldCtx::for_q(q).unwrap();
            let lam = lambda_elements(&ctx);
            assert_eq!(lam.len() as u64, q * q * q);
            assert!(lam.contains(&LambdaAut::IDENTITY));
            let set: BTreeSet<_> = lam.iter().copied().collect();
            let pts = curve_points(&ctx);
            for &s in &lam {
                assert!(set.contains(&s.inverse(&ctx)));
                assert_eq!(s.compose(&ctx, s.inverse(&ctx)), LambdaAut::IDENTITY);
                for &t in &lam {
                    let st = s.compose(&ctx, t);
                    assert!(set.contains(&st));
                    for &p in &pts {
                        let two_step = act_on_point(&ctx, s, act_on_point(&ctx, t, p).unwrap());
                        assert_eq!(two_step.unwrap(), act_on_point(&ctx, st, p).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn orbit_of_origin_is_whole_curve() {
        let ctx = FieldCtx::for_q(2).unwrap();
        let o = CurvePoint { x: Elem::Zero, y: Elem::Zero };
        let orbit: BTreeSet<_> = lambda_elements(&ctx)
            .into_iter()
            .map(|s| act_on_point(&ctx, s, o).unwrap())
            .collect();
        assert_eq!(orbit.len(), 8);
    }

    #[test]
    fn act_on_point_rejects_off_curve() {
        let ctx = FieldCtx::for_q(3).unwrap();
        let bad = CurvePoint { x: Elem::Zero, y: ctx.one() };
        assert_eq!(act_on_point(&ctx, LambdaAut::IDENTITY, bad), Err(Error::NotOnCurve));
    }

    #[test]
    fn parabola_action_examples() {
        let ctx = FieldCtx::for_q(3).unwrap();
        let p = Parabola::new(ctx.alpha(), Elem::Pow(3), Elem::Pow(6)).unwrap();
        assert_eq!(act_on_parabola(&ctx, LambdaAut::IDENTITY, p), p);
        let two = ctx.from_prime(2);
        for s in lambda_elements(&ctx) {
            let img = act_on_parabola(&ctx, s, p);
            assert_eq!(img.a, p.a);
            // b = c = 0 reduces to y = ax² + x(2aγ − γ^q) + aγ² − δ
            let p0 = Parabola::new(p.a, Elem::Zero, Elem::Zero).unwrap();
            let g = s.gamma;
            let expect = Parabola {
                a: p.a,
                b: ctx.sub(ctx.mul(ctx.mul(two, p.a), g), ctx.frob(g)),
                c: ctx.sub(ctx.mul(p.a, ctx.mul(g, g)), s.delta),
            };
            assert_eq!(act_on_parabola(&ctx, s, p0), expect);
        }
    }

    #[test]
    fn parabola_action_pulls_back_points() {
        let ctx = FieldCtx::for_q(3).unwrap();
        let pts = curve_points(&ctx);
        let p = Parabola::new(Elem::Pow(2), Elem::Pow(5), Elem::Pow(1)).unwrap();
        let on = |par: &Parabola, pt: &CurvePoint| par.eval(&ctx, pt.x) == pt.y;
        for s in lambda_elements(&ctx) {
            let img = act_on_parabola(&ctx, s, p);
            for pt in &pts {
                let moved = act_on_point(&ctx, s, *pt).unwrap();
                assert_eq!(on(&img, pt), on(&p, &moved));
            }
        }
        // composing substitutions: (s∘t)^* = t^* s^*
        let lam = lambda_elements(&ctx);
        for &s in lam.iter().step_by(5) {
            for &t in lam.iter().step_by(7) {
                assert_eq!(
                    act_on_parabola(&ctx, s.compose(&ctx, t), p),
                    act_on_parabola(&ctx, t, act_on_parabola(&ctx, s, p))
                );
            }
        }
    }

    #[test]
    fn zero_a_rejected() {
        assert_eq!(Parabola::new(Elem::Zero, Elem::Zero, Elem::Zero), Err(Error::ZeroA));
    }
}
