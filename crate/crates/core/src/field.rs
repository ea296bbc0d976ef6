//! Binary fields GF(2^m) in a polynomial basis, and the extension
//! GF(q^d) of a base field GF(q), q = 2^n, with an explicit embedding.
//!
//! Elements are bit vectors packed into a `u32` (bit `i` is the coefficient
//! of `x^i`). Degrees up to 24 are supported, which covers base fields with
//! `n <= 12` and the extensions used for degree-2 and degree-3 places.

use std::fmt;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest supported base-field degree.
pub const MIN_BASE_DEGREE: u32 = 2;
/// Largest supported base-field degree.
pub const MAX_BASE_DEGREE: u32 = 12;
/// Largest supported absolute degree of any field (base or extension).
pub const MAX_FIELD_DEGREE: u32 = 24;

/// An element of some GF(2^m), as its polynomial-basis coordinate vector.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: Self = FieldElement(0);
    pub const ONE: Self = FieldElement(1);

    #[inline]
    pub const fn from_bits(bits: u32) -> Self {
        FieldElement(bits)
    }

    #[inline]
    pub const fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Lowercase hex of the coefficient vector, low bit = constant term.
    pub fn to_hex(self) -> String {
        format!("{:x}", self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        u32::from_str_radix(s, 16)
            .map(FieldElement)
            .map_err(|_| Error::Format(format!("bad field element hex {s:?}")))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:x}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        FieldElement(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl AddAssign for FieldElement {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        self.0 ^= rhs.0;
    }
}

/// Degree of a GF(2) polynomial packed in a `u64`; `None` for zero.
#[inline]
pub fn poly_degree(p: u64) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(63 - p.leading_zeros())
    }
}

/// Remainder of `a` modulo `b` in GF(2)[x].
pub fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = poly_degree(b).expect("division by the zero polynomial");
    while let Some(da) = poly_degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Irreducibility over GF(2) by trial division with every polynomial of
/// degree `1..=deg/2`.
pub fn is_irreducible(p: u64) -> bool {
    let Some(deg) = poly_degree(p) else {
        return false;
    };
    if deg == 0 {
        return false;
    }
    for div_deg in 1..=deg / 2 {
        for low in 0..(1u64 << div_deg) {
            let divisor = (1u64 << div_deg) | low;
            if poly_rem(p, divisor) == 0 {
                return false;
            }
        }
    }
    true
}

/// The irreducible polynomial of degree `m` whose coefficient vector is the
/// smallest integer.
pub fn smallest_irreducible(m: u32) -> u64 {
    assert!((1..=MAX_FIELD_DEGREE).contains(&m));
    let top = 1u64 << m;
    (top..top << 1)
        .find(|&p| is_irreducible(p))
        .expect("an irreducible polynomial exists in every degree")
}

/// Incremental GF(2) row space with preimage tracking.
///
/// Each inserted vector carries a tag (a GF(2) combination of "sources");
/// [`Gf2Span::express`] returns the tag of a combination that hits a target.
#[derive(Clone, Debug, Default)]
pub(crate) struct Gf2Span {
    // pivots[b] = (vector with leading bit b, tag)
    pivots: Vec<Option<(u32, u32)>>,
}

impl Gf2Span {
    pub(crate) fn new() -> Self {
        Gf2Span {
            pivots: vec![None; 32],
        }
    }

    /// Returns false when `v` was already in the span.
    pub(crate) fn insert(&mut self, mut v: u32, mut tag: u32) -> bool {
        while v != 0 {
            let b = 31 - v.leading_zeros() as usize;
            match self.pivots[b] {
                Some((pv, pt)) => {
                    v ^= pv;
                    tag ^= pt;
                }
                None => {
                    self.pivots[b] = Some((v, tag));
                    return true;
                }
            }
        }
        false
    }

    pub(crate) fn express(&self, mut v: u32) -> Option<u32> {
        let mut tag = 0;
        while v != 0 {
            let b = 31 - v.leading_zeros() as usize;
            let (pv, pt) = self.pivots[b]?;
            v ^= pv;
            tag ^= pt;
        }
        Some(tag)
    }
}

/// GF(2^m) for `1 <= m <= 24`, represented modulo an irreducible polynomial.
#[derive(Clone, Debug)]
pub struct BinaryField {
    degree: u32,
    modulus: u64,
    trace_mask: u32,
    // Only for even degree; odd degrees use the half-trace.
    artin_schreier: Option<Gf2Span>,
}

impl PartialEq for BinaryField {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.modulus == other.modulus
    }
}
impl Eq for BinaryField {}

impl BinaryField {
    /// Field of degree `m` modulo the given polynomial (bit `m` must be set).
    pub fn with_modulus(m: u32, modulus: u64) -> Result<Self> {
        if !(1..=MAX_FIELD_DEGREE).contains(&m) {
            return Err(Error::Unsupported(format!(
                "field degree {m} outside 1..={MAX_FIELD_DEGREE}"
            )));
        }
        if poly_degree(modulus) != Some(m) || !is_irreducible(modulus) {
            return Err(Error::Unsupported(format!(
                "modulus {modulus:#x} is not an irreducible polynomial of degree {m}"
            )));
        }
        let mut field = BinaryField {
            degree: m,
            modulus,
            trace_mask: 0,
            artin_schreier: None,
        };
        field.trace_mask = (0..m)
            .filter(|&i| field.trace_by_squaring(FieldElement(1 << i)))
            .fold(0, |mask, i| mask | 1 << i);
        if m.is_multiple_of(2) {
            let mut span = Gf2Span::new();
            for i in 0..m {
                let e = FieldElement(1 << i);
                span.insert((field.square(e) + e).0, 1 << i);
            }
            field.artin_schreier = Some(span);
        }
        Ok(field)
    }

    /// Field of degree `m` modulo the lexicographically smallest irreducible.
    pub fn smallest(m: u32) -> Result<Self> {
        if !(1..=MAX_FIELD_DEGREE).contains(&m) {
            return Err(Error::Unsupported(format!(
                "field degree {m} outside 1..={MAX_FIELD_DEGREE}"
            )));
        }
        Self::with_modulus(m, smallest_irreducible(m))
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of elements, 2^m.
    #[inline]
    pub fn order(&self) -> u64 {
        1u64 << self.degree
    }

    pub fn modulus_hex(&self) -> String {
        format!("{:x}", self.modulus)
    }

    /// All elements in increasing integer order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order() as u32).map(FieldElement)
    }

    #[inline]
    pub fn contains(&self, a: FieldElement) -> bool {
        (a.0 as u64) < self.order()
    }

    #[inline]
    fn reduce(&self, mut p: u64) -> FieldElement {
        let m = self.degree;
        while let Some(dp) = poly_degree(p) {
            if dp < m {
                break;
            }
            p ^= self.modulus << (dp - m);
        }
        FieldElement(p as u32)
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (mut x, mut y) = (a.0 as u64, b.0);
        let mut acc = 0u64;
        while y != 0 {
            if y & 1 != 0 {
                acc ^= x;
            }
            x <<= 1;
            y >>= 1;
        }
        self.reduce(acc)
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        // Squaring spreads the bits: sum a_i x^{2i}.
        let mut spread = 0u64;
        let mut v = a.0;
        let mut i = 0;
        while v != 0 {
            if v & 1 != 0 {
                spread |= 1 << (2 * i);
            }
            v >>= 1;
            i += 1;
        }
        self.reduce(spread)
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e != 0 {
            if e & 1 != 0 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in GF(2)[x].
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::InverseOfZero);
        }
        let (mut r0, mut r1) = (self.modulus, a.0 as u64);
        let (mut s0, mut s1) = (0u64, 1u64);
        while r1 != 1 {
            let d0 = poly_degree(r0).unwrap();
            let d1 = poly_degree(r1).unwrap();
            if d0 < d1 {
                std::mem::swap(&mut r0, &mut r1);
                std::mem::swap(&mut s0, &mut s1);
                continue;
            }
            let shift = d0 - d1;
            r0 ^= r1 << shift;
            s0 ^= s1 << shift;
        }
        Ok(self.reduce(s1))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// The unique square root (squaring is a bijection in characteristic 2).
    pub fn sqrt(&self, a: FieldElement) -> FieldElement {
        let mut r = a;
        for _ in 1..self.degree {
            r = self.square(r);
        }
        r
    }

    /// Absolute trace sum_{i<m} a^{2^i}, evaluated by repeated squaring.
    pub fn trace_by_squaring(&self, a: FieldElement) -> bool {
        let mut acc = a;
        let mut cur = a;
        for _ in 1..self.degree {
            cur = self.square(cur);
            acc += cur;
        }
        debug_assert!(acc.0 <= 1, "trace must land in GF(2)");
        acc.0 == 1
    }

    /// Absolute trace onto GF(2). Uses the linear mask derived from
    /// [`BinaryField::trace_by_squaring`] on the basis.
    #[inline]
    pub fn trace(&self, a: FieldElement) -> bool {
        (a.0 & self.trace_mask).count_ones() & 1 == 1
    }

    /// A solution `w` of `w^2 + w = v`, or `None` when `Tr(v) = 1`.
    /// The other solution is `w + 1`.
    pub fn solve_artin_schreier(&self, v: FieldElement) -> Option<FieldElement> {
        if self.trace(v) {
            return None;
        }
        match &self.artin_schreier {
            Some(span) => {
                let w = FieldElement(span.express(v.0).expect("trace-zero element lies in the image"));
                Some(w)
            }
            None => {
                // half-trace: sum_{i=0}^{(m-1)/2} v^{4^i}
                let mut acc = v;
                let mut cur = v;
                for _ in 0..(self.degree - 1) / 2 {
                    cur = self.square(self.square(cur));
                    acc += cur;
                }
                Some(acc)
            }
        }
    }

    /// Roots of `y^2 + c*y = u`, in increasing integer order.
    pub fn solve_quadratic(&self, c: FieldElement, u: FieldElement) -> QuadRoots {
        if c.is_zero() {
            return QuadRoots::One(self.sqrt(u));
        }
        let c2 = self.square(c);
        let v = self.mul(u, self.inv(c2).expect("c is nonzero"));
        match self.solve_artin_schreier(v) {
            None => QuadRoots::None,
            Some(w) => {
                let r0 = self.mul(c, w);
                let r1 = r0 + c;
                QuadRoots::Two(r0.min(r1), r0.max(r1))
            }
        }
    }
}

/// Root set of a characteristic-2 quadratic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadRoots {
    None,
    One(FieldElement),
    Two(FieldElement, FieldElement),
}

impl QuadRoots {
    pub fn len(&self) -> usize {
        match self {
            QuadRoots::None => 0,
            QuadRoots::One(_) => 1,
            QuadRoots::Two(..) => 2,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, QuadRoots::None)
    }

    pub fn to_vec(&self) -> Vec<FieldElement> {
        match *self {
            QuadRoots::None => vec![],
            QuadRoots::One(a) => vec![a],
            QuadRoots::Two(a, b) => vec![a, b],
        }
    }
}

/// Build GF(2^n), `2 <= n <= 12`, modulo the smallest irreducible of degree n.
pub fn make_field(n: u32) -> Result<BinaryField> {
    if !(MIN_BASE_DEGREE..=MAX_BASE_DEGREE).contains(&n) {
        return Err(Error::Unsupported(format!(
            "base field degree n={n} outside {MIN_BASE_DEGREE}..={MAX_BASE_DEGREE}"
        )));
    }
    BinaryField::smallest(n)
}

/// GF(q^d) together with the embedding of GF(q) and GF(q)-coordinates.
///
/// The embedding sends the base generator to `embed_image`, the smallest
/// root of the base modulus in the extension. Coordinates over GF(q) are
/// taken in the basis `1, w, ..., w^{d-1}` where `w` is the extension's
/// polynomial-basis generator.
#[derive(Clone, Debug)]
pub struct ExtField {
    base: BinaryField,
    ext: BinaryField,
    rel_degree: u32,
    embed_image: FieldElement,
    embed_powers: Vec<u32>,
    // coords_of_unit[r] = GF(2)-coordinates (index k*n + i for theta^i w^k)
    // of the r-th extension basis vector.
    coords_of_unit: Vec<u32>,
}

impl ExtField {
    pub fn base(&self) -> &BinaryField {
        &self.base
    }

    pub fn ext(&self) -> &BinaryField {
        &self.ext
    }

    pub fn rel_degree(&self) -> u32 {
        self.rel_degree
    }

    pub fn embed_image(&self) -> FieldElement {
        self.embed_image
    }

    /// Image of a base element under the ring embedding GF(q) -> GF(q^d).
    #[inline]
    pub fn embed(&self, a: FieldElement) -> FieldElement {
        let mut out = 0;
        let mut v = a.0;
        let mut i = 0;
        while v != 0 {
            if v & 1 != 0 {
                out ^= self.embed_powers[i];
            }
            v >>= 1;
            i += 1;
        }
        FieldElement(out)
    }

    /// `a^q`, the generator of Gal(GF(q^d)/GF(q)).
    #[inline]
    pub fn frobenius_q(&self, a: FieldElement) -> FieldElement {
        let mut r = a;
        for _ in 0..self.base.degree() {
            r = self.ext.square(r);
        }
        r
    }

    /// Coordinates `(c_0, ..., c_{d-1})` in GF(q) with `a = sum embed(c_k) w^k`.
    pub fn coordinates(&self, a: FieldElement) -> Vec<FieldElement> {
        let n = self.base.degree();
        let mut flat = 0u32;
        let mut v = a.0;
        let mut r = 0;
        while v != 0 {
            if v & 1 != 0 {
                flat ^= self.coords_of_unit[r];
            }
            v >>= 1;
            r += 1;
        }
        let mask = (1u32 << n) - 1;
        (0..self.rel_degree)
            .map(|k| FieldElement((flat >> (k * n)) & mask))
            .collect()
    }

    /// Inverse of [`ExtField::embed`] on the embedded base field.
    pub fn restrict(&self, a: FieldElement) -> Option<FieldElement> {
        let c = self.coordinates(a);
        if c[1..].iter().all(|x| x.is_zero()) {
            Some(c[0])
        } else {
            None
        }
    }
}

/// Build GF(q^d) with the smallest irreducible modulus of degree `n*d`.
pub fn make_ext(base: &BinaryField, d: u32) -> Result<ExtField> {
    let n = base.degree();
    if d == 0 || n * d > MAX_FIELD_DEGREE {
        return Err(Error::Unsupported(format!(
            "extension degree n*d = {} outside 1..={MAX_FIELD_DEGREE}",
            n * d
        )));
    }
    let ext = BinaryField::smallest(n * d)?;
    let base_mod = base.modulus();
    let eval_base_modulus = |theta: FieldElement| {
        // Horner over the GF(2) coefficients of the base modulus.
        let mut acc = FieldElement::ZERO;
        for i in (0..=n).rev() {
            acc = ext.mul(acc, theta);
            if base_mod >> i & 1 == 1 {
                acc += FieldElement::ONE;
            }
        }
        acc
    };
    let embed_image = ext
        .elements()
        .find(|&theta| eval_base_modulus(theta).is_zero())
        .expect("a degree-n polynomial splits in GF(2^{nd})");

    let mut embed_powers = Vec::with_capacity(n as usize);
    let mut p = FieldElement::ONE;
    for _ in 0..n {
        embed_powers.push(p.0);
        p = ext.mul(p, embed_image);
    }

    // GF(2)-basis theta^i w^k of the extension, indexed k*n + i.
    let mut span = Gf2Span::new();
    let mut w_k = FieldElement::ONE;
    let w = FieldElement(2);
    for k in 0..d {
        for i in 0..n {
            let b = ext.mul(FieldElement(embed_powers[i as usize]), w_k);
            let independent = span.insert(b.0, 1 << (k * n + i));
            assert!(independent, "1, w, .., w^(d-1) must be a GF(q)-basis");
        }
        w_k = ext.mul(w_k, w);
    }
    let coords_of_unit = (0..n * d)
        .map(|r| span.express(1 << r).expect("basis spans the extension"))
        .collect();

    Ok(ExtField {
        base: base.clone(),
        ext,
        rel_degree: d,
        embed_image,
        embed_powers,
        coords_of_unit,
    })
}

/// Serialized form of a field context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub n: u32,
    pub modulus: String,
}

impl From<&BinaryField> for FieldJson {
    fn from(f: &BinaryField) -> Self {
        FieldJson {
            n: f.degree(),
            modulus: f.modulus_hex(),
        }
    }
}

impl FieldJson {
    pub fn build(&self) -> Result<BinaryField> {
        let modulus = u64::from_str_radix(&self.modulus, 16)
            .map_err(|_| Error::Format(format!("bad modulus hex {:?}", self.modulus)))?;
        BinaryField::with_modulus(self.n, modulus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_roots(f: &BinaryField, c: FieldElement, u: FieldElement) -> Vec<FieldElement> {
        f.elements()
            .filter(|&y| f.square(y) + f.mul(c, y) == u)
            .collect()
    }

    #[test]
    fn make_field_range() {
        assert!(make_field(1).is_err());
        assert!(make_field(13).is_err());
        assert!(make_field(2).is_ok());
    }

    #[test]
    fn smallest_cubic_is_x3_x_1() {
        // brute-force scan of the degree-3 polynomials in integer order
        let first = (8u64..16)
            .find(|&p| (2u64..4).all(|d| poly_rem(p, d) != 0))
            .unwrap();
        assert_eq!(first, 0b1011);
        assert_eq!(make_field(3).unwrap().modulus(), 0b1011);
    }

    #[test]
    fn make_field_is_deterministic() {
        let a = make_field(6).unwrap();
        let b = make_field(6).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(poly_degree(a.modulus()), Some(6));
        assert!(is_irreducible(a.modulus()));
    }

    #[test]
    fn add_self_is_zero_and_inverses() {
        for n in 2..=8 {
            let f = make_field(n).unwrap();
            for a in f.elements() {
                assert!((a + a).is_zero());
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
                }
            }
        }
        assert!(make_field(4).unwrap().inv(FieldElement::ZERO).is_err());
    }

    #[test]
    fn fermat_exhaustive() {
        for n in 2..=6 {
            let f = make_field(n).unwrap();
            for a in f.elements() {
                assert_eq!(f.pow(a, f.order()), a);
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for n in 2..=4 {
            let f = make_field(n).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, b + c), f.mul(a, b) + f.mul(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn trace_examples() {
        let f2 = make_field(2).unwrap();
        assert!(!f2.trace(FieldElement::ZERO));
        assert!(!f2.trace(FieldElement::ONE));
        let f3 = make_field(3).unwrap();
        assert_eq!(f3.elements().filter(|&a| !f3.trace(a)).count(), 4);
    }

    #[test]
    fn trace_mask_matches_squaring_and_is_balanced() {
        for n in 2..=10 {
            let f = make_field(n).unwrap();
            let mut zeros = 0;
            for a in f.elements() {
                let t = f.trace_by_squaring(a);
                assert_eq!(t, f.trace(a));
                assert_eq!(f.trace(f.square(a)), t);
                if !t {
                    zeros += 1;
                }
            }
            assert_eq!(zeros, f.order() / 2);
        }
    }

    #[test]
    fn quadratic_special_cases() {
        let f = make_field(5).unwrap();
        assert_eq!(
            f.solve_quadratic(FieldElement::ZERO, FieldElement::ZERO),
            QuadRoots::One(FieldElement::ZERO)
        );
        assert_eq!(
            f.solve_quadratic(FieldElement::ONE, FieldElement::ZERO),
            QuadRoots::Two(FieldElement::ZERO, FieldElement::ONE)
        );
        for u in f.elements().filter(|&u| f.trace(u)) {
            assert!(f.solve_quadratic(FieldElement::ONE, u).is_empty());
        }
    }

    #[test]
    fn quadratic_matches_brute_force() {
        for m in [2, 3, 4, 5, 6] {
            let f = BinaryField::smallest(m).unwrap();
            for c in f.elements() {
                for u in f.elements() {
                    assert_eq!(f.solve_quadratic(c, u).to_vec(), brute_roots(&f, c, u));
                }
            }
        }
        // larger degrees: all u against a handful of c
        for m in [8, 9, 12] {
            let f = BinaryField::smallest(m).unwrap();
            for c in [0u32, 1, 2, 7, 0x53] {
                let c = FieldElement::from_bits(c);
                for u in f.elements() {
                    let roots = f.solve_quadratic(c, u).to_vec();
                    for &y in &roots {
                        assert_eq!(f.square(y) + f.mul(c, y), u);
                    }
                    let expect = if c.is_zero() {
                        1
                    } else if f.trace(f.div(u, f.square(c)).unwrap()) {
                        0
                    } else {
                        2
                    };
                    assert_eq!(roots.len(), expect);
                }
            }
        }
    }

    #[test]
    fn ext_embedding_is_homomorphism() {
        let base = make_field(3).unwrap();
        let ext = make_ext(&base, 2).unwrap();
        assert_eq!(ext.ext().degree(), 6);
        assert_eq!(ext.embed(FieldElement::ZERO), FieldElement::ZERO);
        assert_eq!(ext.embed(FieldElement::ONE), FieldElement::ONE);
        for a in base.elements() {
            for b in base.elements() {
                assert_eq!(ext.embed(a + b), ext.embed(a) + ext.embed(b));
                assert_eq!(ext.embed(base.mul(a, b)), ext.ext().mul(ext.embed(a), ext.embed(b)));
            }
            assert_eq!(ext.frobenius_q(ext.embed(a)), ext.embed(a));
            assert_eq!(ext.restrict(ext.embed(a)), Some(a));
        }
    }

    #[test]
    fn frobenius_properties() {
        for (n, d) in [(2, 2), (3, 2), (2, 3), (4, 3), (6, 2)] {
            let base = make_field(n).unwrap();
            let ext = make_ext(&base, d).unwrap();
            let big = ext.ext();
            let mut fixed = 0;
            for a in big.elements() {
                let mut r = a;
                for _ in 0..d {
                    r = ext.frobenius_q(r);
                }
                assert_eq!(r, a);
                if ext.frobenius_q(a) == a {
                    fixed += 1;
                    assert!(ext.restrict(a).is_some());
                }
            }
            assert_eq!(fixed, base.order());
            let (a, b) = (FieldElement::from_bits(5), FieldElement::from_bits(9 % big.order() as u32));
            assert_eq!(ext.frobenius_q(a + b), ext.frobenius_q(a) + ext.frobenius_q(b));
        }
    }

    #[test]
    fn trace_transitivity() {
        for n in 2..=4 {
            let base = make_field(n).unwrap();
            for d in 1..=3 {
                let ext = make_ext(&base, d).unwrap();
                for a in base.elements() {
                    let lhs = ext.ext().trace(ext.embed(a));
                    let rhs = (d % 2 == 1) && base.trace(a);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let base = make_field(4).unwrap();
        let ext = make_ext(&base, 3).unwrap();
        let big = ext.ext();
        let w = FieldElement::from_bits(2);
        for a in big.elements().step_by(37) {
            let c = ext.coordinates(a);
            let mut acc = FieldElement::ZERO;
            let mut wk = FieldElement::ONE;
            for ck in c {
                acc += big.mul(ext.embed(ck), wk);
                wk = big.mul(wk, w);
            }
            assert_eq!(acc, a);
        }
    }

    #[test]
    fn make_ext_size_limit() {
        let base = make_field(12).unwrap();
        assert!(make_ext(&base, 3).is_err());
        assert!(make_ext(&base, 0).is_err());
    }

    #[test]
    fn hex_round_trip() {
        let a = FieldElement::from_bits(0xab);
        assert_eq!(a.to_hex(), "ab");
        assert_eq!(FieldElement::from_hex("ab").unwrap(), a);
        let f = make_field(5).unwrap();
        let j = FieldJson::from(&f);
        assert_eq!(j.build().unwrap(), f);
    }
}
