//! Fixtures shared by the criterion benches.

use hermitian_core::{Elem, FieldCtx, Parabola};

/// Every `step`-th parabola of the field, in `(a, b, c)` order.
pub fn parabola_sample(ctx: &FieldCtx, step: usize) -> Vec<Parabola> {
    let mut out = Vec::new();
    let mut i = 0usize;
    for a in ctx.nonzero() {
        for b in ctx.elements() {
            for c in ctx.elements() {
                if i.is_multiple_of(step) {
                    out.push(Parabola { a, b, c });
                }
                i += 1;
            }
        }
    }
    out
}

pub fn field(q: u64) -> FieldCtx {
    FieldCtx::for_q(q).expect("q is a small prime power")
}

pub fn zero() -> Elem {
    Elem::Zero
}
