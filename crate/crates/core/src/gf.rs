//! Arithmetic in the tower GF(p) ⊂ GF(q) ⊂ GF(q²).
//!
//! Elements are kept in discrete-log form relative to a primitive element
//! `alpha` of GF(q²). Multiplication, powers, norm and Frobenius are exponent
//! arithmetic; addition goes through a Zech logarithm table.
//!
//! The field is realised as GF(p)[X]/(m(X)) with `deg m = 2e` and `alpha = X`.
//! Internally every element also has a "polynomial integer" encoding
//! `c_0 + c_1 p + ... + c_{2e-1} p^{2e-1}` of its coefficient vector; the
//! prime field GF(p) is exactly the set of encodings below `p`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Default upper bound on `q²`, the number of elements of the top field.
pub const DEFAULT_TABLE_BOUND: u64 = 1 << 24;

const NONE: u32 = u32::MAX;

/// An element of GF(q²): zero, or `alpha^k` with `0 <= k < q² - 1`.
///
/// The derived ordering puts `Zero` first and then sorts by exponent, which is
/// the canonical enumeration order used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Zero,
    Pow(u32),
}

impl Elem {
    pub fn is_zero(self) -> bool {
        matches!(self, Elem::Zero)
    }

    /// Exponent of a nonzero element.
    pub fn log(self) -> Option<u32> {
        match self {
            Elem::Zero => None,
            Elem::Pow(k) => Some(k),
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Zero => write!(f, "0"),
            Elem::Pow(k) => write!(f, "a^{k}"),
        }
    }
}

/// Parses `0` or `a^k`. The exponent is not reduced; see [`FieldCtx::normalize`].
impl FromStr for Elem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Elem::Zero);
        }
        s.strip_prefix("a^")
            .and_then(|k| k.parse::<u32>().ok())
            .map(Elem::Pow)
            .ok_or_else(|| Error::ParseElem(s.to_string()))
    }
}

impl Serialize for Elem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Elem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Which of the two GF(q)-linear maps `linmap_solve` inverts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinMap {
    /// `x ↦ 2ax − x^q`
    TwoAxMinusFrob,
    /// `x ↦ x^q − 2ax`
    FrobMinusTwoAx,
}

/// Serialized description of a field: enough to rebuild it bit-for-bit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub e: u32,
    /// Coefficients `c_0 .. c_{2e}` of the monic defining polynomial.
    pub modulus: Vec<u64>,
}

/// The field tower for one prime power `q = p^e`. Immutable after construction.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u32,
    e: u32,
    q: u32,
    order: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    neg_one: Elem,
    trace_one: Elem,
    inv_basis_gap: Elem,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^e`.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p, e))
}

fn field_size(p: u64, e: u32, bound: u64) -> Result<u64> {
    let size = p
        .checked_pow(2 * e)
        .filter(|&s| s <= bound)
        .ok_or(Error::TooLarge {
            size: p.saturating_pow(2 * e),
            bound,
        })?;
    Ok(size)
}

/// Walks the powers of X modulo `X^D + tail`. Returns the exp/log tables when
/// X has multiplicative order exactly `p^D − 1`, which also certifies that
/// the polynomial is irreducible.
fn primitive_tables(p: u32, tail: &[u32], size: usize) -> Option<(Vec<u32>, Vec<u32>)> {
    if tail[0] == 0 {
        return None;
    }
    let mut x = vec![0u32; tail.len()];
    x[1] = 1;
    power_tables(p, tail, &x, size)
}

/// `u·v mod (X^D + tail)` over GF(p).
fn mul_mod(p: u32, tail: &[u32], u: &[u32], v: &[u32]) -> Vec<u32> {
    let d = tail.len();
    let mut prod = vec![0u64; 2 * d - 1];
    for (i, &a) in u.iter().enumerate() {
        for (j, &b) in v.iter().enumerate() {
            prod[i + j] = (prod[i + j] + a as u64 * b as u64) % p as u64;
        }
    }
    for k in (d..2 * d - 1).rev() {
        let top = prod[k];
        if top != 0 {
            prod[k] = 0;
            for i in 0..d {
                let j = k - d + i;
                prod[j] = (prod[j] + (p as u64 - top) * tail[i] as u64) % p as u64;
            }
        }
    }
    prod[..d].iter().map(|&c| c as u32).collect()
}

/// Exp/log tables for the powers of `gen`, or `None` unless `gen` has order
/// exactly `p^D − 1`. Only a field has a unit of that order, so success also
/// certifies irreducibility.
fn power_tables(p: u32, tail: &[u32], gen: &[u32], size: usize) -> Option<(Vec<u32>, Vec<u32>)> {
    let d = tail.len();
    let order = size - 1;
    let mut cur = vec![0u32; d];
    cur[0] = 1;
    let mut exp = Vec::with_capacity(order);
    let mut log = vec![NONE; size];
    for k in 0..order {
        let v = cur.iter().rev().fold(0usize, |acc, &c| acc * p as usize + c as usize);
        if log[v] != NONE {
            return None;
        }
        log[v] = k as u32;
        exp.push(v as u32);
        cur = mul_mod(p, tail, &cur, gen);
    }
    let back_to_one = cur[0] == 1 && cur[1..].iter().all(|&c| c == 0);
    back_to_one.then_some((exp, log))
}

/// Tables for an irreducible but possibly non-primitive modulus: the
/// generator is X when X is primitive, otherwise the primitive element with
/// the smallest integer encoding.
fn generator_tables(p: u32, tail: &[u32], size: usize) -> Option<(Vec<u32>, Vec<u32>)> {
    if let Some(t) = primitive_tables(p, tail, size) {
        return Some(t);
    }
    if tail[0] == 0 {
        return None;
    }
    let d = tail.len();
    (2..size).find_map(|n| {
        let mut gen = vec![0u32; d];
        let mut rest = n;
        for c in gen.iter_mut() {
            *c = (rest % p as usize) as u32;
            rest /= p as usize;
        }
        power_tables(p, tail, &gen, size)
    })
}

impl FieldCtx {
    /// Builds GF(p^{2e}) with the default table bound.
    pub fn build(p: u64, e: u32) -> Result<Self> {
        Self::build_bounded(p, e, DEFAULT_TABLE_BOUND)
    }

    /// Builds the field from the prime power `q` of the middle field.
    pub fn for_q(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q)?;
        Self::build(p, e)
    }

    /// Deterministic construction: the defining polynomial is the first monic
    /// degree-2e polynomial, in lexicographic order of `[c_0, c_1, ..]`, whose
    /// root X is primitive.
    pub fn build_bounded(p: u64, e: u32, bound: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidModulus("e must be positive".into()));
        }
        let size = field_size(p, e, bound)? as usize;
        let d = 2 * e as usize;
        let p32 = p as u32;
        let mut tail = vec![0u32; d];
        for n in 0..size {
            // c_0 is the most significant digit of n.
            let mut rest = n;
            for i in (0..d).rev() {
                tail[i] = (rest % p as usize) as u32;
                rest /= p as usize;
            }
            if let Some((exp, log)) = primitive_tables(p32, &tail, size) {
                return Ok(Self::assemble(p32, e, &tail, exp, log));
            }
        }
        Err(Error::NoIrreducibleFound { p, degree: 2 * e })
    }

    /// Builds the field from explicit coefficients `c_0 .. c_{2e}` (monic).
    /// The polynomial must be irreducible; when X is not primitive, `alpha`
    /// is the primitive element with the smallest integer encoding.
    pub fn with_modulus(p: u64, e: u32, modulus: &[u64]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let size = field_size(p, e, DEFAULT_TABLE_BOUND)? as usize;
        let d = 2 * e as usize;
        if modulus.len() != d + 1 {
            return Err(Error::InvalidModulus(format!(
                "expected {} coefficients, got {}",
                d + 1,
                modulus.len()
            )));
        }
        if modulus[d] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidModulus(
                "coefficients must be reduced mod p and the polynomial monic".into(),
            ));
        }
        let tail: Vec<u32> = modulus[..d].iter().map(|&c| c as u32).collect();
        let (exp, log) = generator_tables(p as u32, &tail, size)
            .ok_or_else(|| Error::InvalidModulus("polynomial is not irreducible".into()))?;
        Ok(Self::assemble(p as u32, e, &tail, exp, log))
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self> {
        Self::with_modulus(spec.p, spec.e, &spec.modulus)
    }

    fn assemble(p: u32, e: u32, tail: &[u32], exp: Vec<u32>, log: Vec<u32>) -> Self {
        let order = exp.len() as u32;
        let q = p.pow(e);
        let zech = (0..order)
            .map(|k| {
                let v = exp[k as usize];
                let c0 = v % p;
                log[(v - c0 + (c0 + 1) % p) as usize]
            })
            .collect();
        let mut modulus = tail.to_vec();
        modulus.push(1);
        let mut ctx = FieldCtx {
            p,
            e,
            q,
            order,
            modulus,
            exp,
            log,
            zech,
            neg_one: if p == 2 { Elem::Pow(0) } else { Elem::Pow(order / 2) },
            trace_one: Elem::Zero,
            inv_basis_gap: Elem::Zero,
        };
        let alpha = ctx.alpha();
        let gap = ctx.sub(alpha, ctx.frob(alpha));
        ctx.inv_basis_gap = ctx.inv(gap).expect("alpha lies outside GF(q)");
        let one = ctx.one();
        let w = ctx
            .elements()
            .find(|&w| ctx.trace(w) == one)
            .expect("trace is surjective");
        ctx.trace_one = w;
        ctx
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q as u64
    }

    /// Number of elements of GF(q²).
    pub fn size(&self) -> u64 {
        self.order as u64 + 1
    }

    /// `q² − 1`, the order of the multiplicative group.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_even(&self) -> bool {
        self.p == 2
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p as u64,
            e: self.e,
            modulus: self.modulus.iter().map(|&c| c as u64).collect(),
        }
    }

    pub fn one(&self) -> Elem {
        Elem::Pow(0)
    }

    pub fn alpha(&self) -> Elem {
        Elem::Pow(1 % self.order)
    }

    /// `alpha^{q+1}`, a primitive element of GF(q).
    pub fn beta(&self) -> Elem {
        Elem::Pow((self.q + 1) % self.order)
    }

    /// `alpha^k` for any integer exponent.
    pub fn elem(&self, k: i64) -> Elem {
        Elem::Pow(k.rem_euclid(self.order as i64) as u32)
    }

    /// Reduces the exponent of `x` into `[0, q² − 2]`.
    pub fn normalize(&self, x: Elem) -> Elem {
        match x {
            Elem::Zero => Elem::Zero,
            Elem::Pow(k) => Elem::Pow(k % self.order),
        }
    }

    pub fn parse(&self, s: &str) -> Result<Elem> {
        s.parse().map(|x| self.normalize(x))
    }

    /// All elements: zero first, then `alpha^0, alpha^1, ...`.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        std::iter::once(Elem::Zero).chain((0..self.order).map(Elem::Pow))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.order).map(Elem::Pow)
    }

    /// The elements of GF(q): zero, then `beta^0 .. beta^{q-2}`.
    pub fn subfield(&self) -> impl Iterator<Item = Elem> + '_ {
        let step = self.q + 1;
        std::iter::once(Elem::Zero).chain((0..self.q - 1).map(move |i| Elem::Pow(i * step)))
    }

    /// Position of a GF(q) element in [`FieldCtx::subfield`] order.
    pub fn subfield_index(&self, x: Elem) -> Option<usize> {
        match x {
            Elem::Zero => Some(0),
            Elem::Pow(k) if k % (self.q + 1) == 0 => Some(1 + (k / (self.q + 1)) as usize),
            _ => None,
        }
    }

    pub fn in_subfield(&self, x: Elem) -> bool {
        self.subfield_index(x).is_some()
    }

    /// The integer `j mod p` viewed as an element of the prime field.
    pub fn from_prime(&self, j: i64) -> Elem {
        let r = j.rem_euclid(self.p as i64) as usize;
        if r == 0 {
            Elem::Zero
        } else {
            Elem::Pow(self.log[r])
        }
    }

    /// Residue in `[0, p)` of a prime-field element.
    pub fn prime_residue(&self, x: Elem) -> Option<u32> {
        match x {
            Elem::Zero => Some(0),
            Elem::Pow(k) => {
                let v = self.exp[k as usize];
                (v < self.p).then_some(v)
            }
        }
    }

    /// Coefficient vector `c_0 .. c_{2e-1}` of `x` as a polynomial in alpha.
    pub fn coefficients(&self, x: Elem) -> Vec<u32> {
        let mut v = match x {
            Elem::Zero => 0,
            Elem::Pow(k) => self.exp[k as usize],
        };
        (0..2 * self.e)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    /// `log(1 + alpha^k)`, or `None` when `1 + alpha^k = 0`.
    pub fn zech(&self, k: u32) -> Option<u32> {
        let z = self.zech[k as usize];
        (z != NONE).then_some(z)
    }

    #[inline]
    fn add_exp(&self, i: u32, j: u32) -> u32 {
        let s = i + j;
        if s >= self.order {
            s - self.order
        } else {
            s
        }
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        match (x, y) {
            (Elem::Zero, y) => y,
            (x, Elem::Zero) => x,
            (Elem::Pow(i), Elem::Pow(j)) => {
                let d = if j >= i { j - i } else { j + self.order - i };
                match self.zech[d as usize] {
                    NONE => Elem::Zero,
                    z => Elem::Pow(self.add_exp(i, z)),
                }
            }
        }
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        self.mul(x, self.neg_one)
    }

    #[inline]
    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        match (x, y) {
            (Elem::Pow(i), Elem::Pow(j)) => Elem::Pow(self.add_exp(i, j)),
            _ => Elem::Zero,
        }
    }

    pub fn inv(&self, x: Elem) -> Result<Elem> {
        match x {
            Elem::Zero => Err(Error::DivisionByZero),
            Elem::Pow(k) => Ok(Elem::Pow((self.order - k) % self.order)),
        }
    }

    pub fn div(&self, x: Elem, y: Elem) -> Result<Elem> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// `x^n`, with the convention `0^0 = 1` used for monomial evaluation.
    #[inline]
    pub fn pow(&self, x: Elem, n: u64) -> Elem {
        match x {
            _ if n == 0 => self.one(),
            Elem::Zero => Elem::Zero,
            Elem::Pow(k) => {
                Elem::Pow(((k as u64 * (n % self.order as u64)) % self.order as u64) as u32)
            }
        }
    }

    /// `x^q`.
    #[inline]
    pub fn frob(&self, x: Elem) -> Elem {
        self.pow(x, self.q as u64)
    }

    /// `x^{q+1}`.
    #[inline]
    pub fn norm(&self, x: Elem) -> Elem {
        self.pow(x, self.q as u64 + 1)
    }

    /// `x + x^q`.
    #[inline]
    pub fn trace(&self, x: Elem) -> Elem {
        self.add(x, self.frob(x))
    }

    /// Trace from GF(q) down to GF(p), returned as a residue in `[0, p)`.
    pub fn abs_trace(&self, x: Elem) -> Result<u32> {
        if !self.in_subfield(x) {
            return Err(Error::NotInSubfield);
        }
        let mut acc = Elem::Zero;
        let mut term = x;
        for _ in 0..self.e {
            acc = self.add(acc, term);
            term = self.pow(term, self.p as u64);
        }
        self.prime_residue(acc)
            .ok_or_else(|| Error::Internal("absolute trace left the prime field".into()))
    }

    /// Canonical square root: exponent halving, wrapping by `q² − 1` when the
    /// group order is odd (characteristic 2).
    pub fn sqrt(&self, x: Elem) -> Result<Elem> {
        match x {
            Elem::Zero => Ok(Elem::Zero),
            Elem::Pow(k) if k % 2 == 0 => Ok(Elem::Pow(k / 2)),
            Elem::Pow(k) => {
                let wrapped = k + self.order;
                if wrapped.is_multiple_of(2) {
                    Ok(Elem::Pow(wrapped / 2 % self.order))
                } else {
                    Err(Error::NoSquareRoot)
                }
            }
        }
    }

    /// Quadratic character of GF(q), read off the parity of the beta-exponent.
    pub fn quad_char(&self, a: Elem) -> Result<i8> {
        if self.is_even() {
            return Err(Error::EvenCharacteristic);
        }
        match self.subfield_index(a) {
            None => Err(Error::NotInSubfield),
            Some(0) => Ok(0),
            Some(i) if (i - 1) % 2 == 0 => Ok(1),
            Some(_) => Ok(-1),
        }
    }

    /// `Σ_{γ ∈ GF(q)} η(aγ² + bγ + c)` for `a, b, c ∈ GF(q)`, `a ≠ 0`.
    pub fn char_sum(&self, a: Elem, b: Elem, c: Elem) -> Result<i64> {
        if self.is_even() {
            return Err(Error::EvenCharacteristic);
        }
        if a.is_zero() {
            return Err(Error::ZeroA);
        }
        if ![a, b, c].iter().all(|&x| self.in_subfield(x)) {
            return Err(Error::NotInSubfield);
        }
        let mut sum = 0i64;
        for g in self.subfield() {
            let v = self.add(self.add(self.mul(a, self.mul(g, g)), self.mul(b, g)), c);
            sum += self.quad_char(v)? as i64;
        }
        Ok(sum)
    }

    /// All `x` with `x^{q−1} = t`, in ascending exponent order.
    pub fn hilbert90_solutions(&self, t: Elem) -> Result<Vec<Elem>> {
        let k = t.log().ok_or(Error::ZeroInput)?;
        let qm1 = self.q - 1;
        if k % qm1 != 0 {
            return Ok(Vec::new());
        }
        let base = k / qm1;
        let mut sols: Vec<Elem> = (0..qm1)
            .map(|i| Elem::Pow((base + i * (self.q + 1)) % self.order))
            .collect();
        sols.sort();
        Ok(sols)
    }

    /// Coordinates `(u, v)` in GF(q) with `y = u + v·alpha`.
    pub fn coords(&self, y: Elem) -> (Elem, Elem) {
        let v = self.mul(self.sub(y, self.frob(y)), self.inv_basis_gap);
        let u = self.sub(y, self.mul(v, self.alpha()));
        (u, v)
    }

    pub fn from_coords(&self, u: Elem, v: Elem) -> Elem {
        self.add(u, self.mul(v, self.alpha()))
    }

    /// An element `w` with `trace(w) = 1`; `t·w` lifts any `t ∈ GF(q)`.
    pub fn trace_one(&self) -> Elem {
        self.trace_one
    }

    /// An element whose trace is `t` (`t` must lie in GF(q)).
    pub fn trace_lift(&self, t: Elem) -> Elem {
        self.mul(t, self.trace_one)
    }

    pub fn linmap_apply(&self, a: Elem, map: LinMap, x: Elem) -> Elem {
        let two_ax = self.mul(self.mul(self.from_prime(2), a), x);
        match map {
            LinMap::TwoAxMinusFrob => self.sub(two_ax, self.frob(x)),
            LinMap::FrobMinusTwoAx => self.sub(self.frob(x), two_ax),
        }
    }

    fn linmap_matrix(&self, a: Elem, map: LinMap) -> Vec<Vec<Elem>> {
        let (u1, v1) = self.coords(self.linmap_apply(a, map, self.one()));
        let (u2, v2) = self.coords(self.linmap_apply(a, map, self.alpha()));
        vec![vec![u1, u2], vec![v1, v2]]
    }

    /// Dimension over GF(q) of the kernel of the selected map.
    pub fn linmap_kernel_dim(&self, a: Elem, map: LinMap) -> Result<usize> {
        if a.is_zero() {
            return Err(Error::ZeroA);
        }
        Ok(2 - linalg::rank(self, &self.linmap_matrix(a, map)))
    }

    /// All solutions of `f(x) = k` for the selected GF(q)-linear map, found by
    /// solving the 2×2 system over GF(q). Sorted.
    pub fn linmap_solve(&self, a: Elem, k: Elem, map: LinMap) -> Result<Vec<Elem>> {
        if a.is_zero() {
            return Err(Error::ZeroA);
        }
        let m = self.linmap_matrix(a, map);
        let (ku, kv) = self.coords(k);
        let Some(sol) = linalg::solve(self, &m, &[ku, kv]) else {
            return Ok(Vec::new());
        };
        let mut points = vec![sol.particular.clone()];
        for dir in &sol.kernel {
            let mut next = Vec::with_capacity(points.len() * self.q as usize);
            for pt in &points {
                for lam in self.subfield() {
                    next.push(
                        pt.iter()
                            .zip(dir)
                            .map(|(&p, &d)| self.add(p, self.mul(lam, d)))
                            .collect::<Vec<_>>(),
                    );
                }
            }
            points = next;
        }
        let mut out: Vec<Elem> = points
            .iter()
            .map(|uv| self.from_coords(uv[0], uv[1]))
            .collect();
        out.sort();
        Ok(out)
    }
}
