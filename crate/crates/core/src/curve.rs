//! Elliptic curves `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over binary
//! fields: the chord-tangent group law, point counting by an x-sweep, and the
//! deterministic search for a cyclic curve with a prescribed Frobenius trace.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{make_field, BinaryField, FieldElement, FieldJson, QuadRoots};

/// A rational point, or a point with coordinates in an extension field.
///
/// Ordering puts the point at infinity first, then affine points by `(x, y)`
/// as integers; the cyclic-curve search uses it as a tie-break.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Infinity,
    Affine { x: FieldElement, y: FieldElement },
}

impl Point {
    pub fn affine(x: FieldElement, y: FieldElement) -> Self {
        Point::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<FieldElement> {
        match *self {
            Point::Infinity => None,
            Point::Affine { x, .. } => Some(x),
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "O"),
            Point::Affine { x, y } => write!(f, "({x:?}, {y:?})"),
        }
    }
}

/// Long Weierstrass coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Weierstrass {
    pub a1: FieldElement,
    pub a2: FieldElement,
    pub a3: FieldElement,
    pub a4: FieldElement,
    pub a6: FieldElement,
}

impl Weierstrass {
    /// `y^2 + xy = x^3 + a2 x^2 + a6`.
    pub fn ordinary(a2: FieldElement, a6: FieldElement) -> Self {
        Weierstrass {
            a1: FieldElement::ONE,
            a2,
            a3: FieldElement::ZERO,
            a4: FieldElement::ZERO,
            a6,
        }
    }

    /// `y^2 + a3 y = x^3 + a4 x + a6`.
    pub fn supersingular(a3: FieldElement, a4: FieldElement, a6: FieldElement) -> Self {
        Weierstrass {
            a1: FieldElement::ZERO,
            a2: FieldElement::ZERO,
            a3,
            a4,
            a6,
        }
    }

    /// Discriminant of the long Weierstrass model reduced to characteristic 2:
    /// `b2^2 b8 + b6^2 + b2 b4 b6`.
    pub fn discriminant(&self, f: &BinaryField) -> FieldElement {
        let Weierstrass { a1, a2, a3, a4, a6 } = *self;
        let b2 = f.square(a1);
        let b4 = f.mul(a1, a3);
        let b6 = f.square(a3);
        let b8 = f.mul(b2, a6) + f.mul(b4, a4) + f.mul(a2, b6) + f.square(a4);
        f.mul(f.square(b2), b8) + f.square(b6) + f.mul(f.mul(b2, b4), b6)
    }
}

/// The group law of a Weierstrass model over a particular field.
///
/// The same code serves rational points and points over GF(q^d); for the
/// latter the coefficients are the embedded base coefficients.
#[derive(Clone, Copy, Debug)]
pub struct GroupLaw<'a> {
    field: &'a BinaryField,
    w: Weierstrass,
}

impl<'a> GroupLaw<'a> {
    pub fn new(field: &'a BinaryField, w: Weierstrass) -> Self {
        GroupLaw { field, w }
    }

    pub fn field(&self) -> &'a BinaryField {
        self.field
    }

    pub fn coefficients(&self) -> Weierstrass {
        self.w
    }

    /// `x^3 + a2 x^2 + a4 x + a6`.
    #[inline]
    pub fn rhs(&self, x: FieldElement) -> FieldElement {
        let f = self.field;
        let x2 = f.square(x);
        f.mul(x2, x) + f.mul(self.w.a2, x2) + f.mul(self.w.a4, x) + self.w.a6
    }

    /// `a1 x + a3`, the linear coefficient of the quadratic in `y`.
    #[inline]
    pub fn y_coeff(&self, x: FieldElement) -> FieldElement {
        self.field.mul(self.w.a1, x) + self.w.a3
    }

    /// All `y` with `(x, y)` on the curve.
    #[inline]
    pub fn y_roots(&self, x: FieldElement) -> QuadRoots {
        self.field.solve_quadratic(self.y_coeff(x), self.rhs(x))
    }

    /// Number of `y` with `(x, y)` on the curve, without solving.
    #[inline]
    pub fn y_root_count(&self, x: FieldElement) -> u64 {
        let c = self.y_coeff(x);
        if c.is_zero() {
            return 1;
        }
        let f = self.field;
        let v = f.mul(self.rhs(x), f.inv(f.square(c)).expect("nonzero"));
        if f.trace(v) {
            0
        } else {
            2
        }
    }

    pub fn is_on_curve(&self, p: &Point) -> bool {
        match *p {
            Point::Infinity => true,
            Point::Affine { x, y } => {
                let f = self.field;
                f.contains(x)
                    && f.contains(y)
                    && f.square(y) + f.mul(self.y_coeff(x), y) == self.rhs(x)
            }
        }
    }

    /// `(x, y) -> (x, y + a1 x + a3)`.
    #[inline]
    pub fn neg(&self, p: &Point) -> Point {
        match *p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine {
                x,
                y: y + self.y_coeff(x),
            },
        }
    }

    /// Chord-tangent addition; operands are assumed to lie on the curve.
    pub fn add(&self, p: &Point, q: &Point) -> Point {
        let f = self.field;
        let (x1, y1, x2, y2) = match (*p, *q) {
            (Point::Infinity, _) => return *q,
            (_, Point::Infinity) => return *p,
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let Weierstrass { a1, a2, a3, a4, .. } = self.w;
        let lambda = if x1 != x2 {
            f.mul(y1 + y2, f.inv(x1 + x2).expect("distinct x"))
        } else {
            let denom = y1 + y2 + f.mul(a1, x2) + a3;
            if denom.is_zero() {
                // Q = -P (this also covers doubling a 2-torsion point)
                return Point::Infinity;
            }
            // tangent slope (3x^2 + 2 a2 x + a4 - a1 y) / (2y + a1 x + a3) in char 2
            let num = f.square(x1) + a4 + f.mul(a1, y1);
            f.mul(num, f.inv(f.mul(a1, x1) + a3).expect("non-2-torsion"))
        };
        let nu = y1 + f.mul(lambda, x1);
        let x3 = f.square(lambda) + f.mul(a1, lambda) + a2 + x1 + x2;
        let y3 = f.mul(lambda + a1, x3) + nu + a3;
        Point::Affine { x: x3, y: y3 }
    }

    pub fn checked_add(&self, p: &Point, q: &Point) -> Result<Point> {
        if !self.is_on_curve(p) || !self.is_on_curve(q) {
            return Err(Error::NotOnCurve);
        }
        Ok(self.add(p, q))
    }

    /// `[m]P` by double-and-add; negative `m` uses `[|m|](-P)`.
    pub fn scalar_mul(&self, m: i64, p: &Point) -> Point {
        let mut base = if m < 0 { self.neg(p) } else { *p };
        let mut k = m.unsigned_abs();
        let mut acc = Point::Infinity;
        while k != 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// Every point over this law's field, sorted, with `O` first.
    pub fn points(&self) -> Vec<Point> {
        let mut pts = vec![Point::Infinity];
        for x in self.field.elements() {
            for y in self.y_roots(x).to_vec() {
                pts.push(Point::Affine { x, y });
            }
        }
        pts
    }

    /// `1 + sum_x #{y}` over this law's field.
    pub fn count(&self) -> u64 {
        1 + self.field.elements().map(|x| self.y_root_count(x)).sum::<u64>()
    }
}

/// Integer square root (floor).
pub fn isqrt(v: u64) -> u64 {
    if v < 2 {
        return v;
    }
    let mut r = (v as f64).sqrt() as u64;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

/// `floor(2 sqrt(q))`, the Hasse-Weil/Serre constant for genus one.
pub fn serre_constant(q: u64) -> u64 {
    isqrt(4 * q)
}

/// Prime factorisation by trial division, primes ascending.
pub fn factorize(mut v: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= v {
        if v.is_multiple_of(p) {
            let mut e = 0;
            while v.is_multiple_of(p) {
                v /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if v > 1 {
        out.push((v, 1));
    }
    out
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Traces `t` for which a cyclic curve with `q + 1 + t` points exists over
/// GF(2^n): odd `|t| <= 2 sqrt(q)`, `t = 0`, and `t = +-sqrt(q)` (n even) or
/// `t = +-sqrt(2q)` (n odd). Sorted ascending.
pub fn admissible_t(n: u32) -> Vec<i64> {
    let q = 1u64 << n;
    let bound = serre_constant(q) as i64;
    let mut ts: Vec<i64> = (-bound..=bound).filter(|t| t % 2 != 0).collect();
    ts.push(0);
    let special = if n.is_multiple_of(2) { isqrt(q) } else { isqrt(2 * q) } as i64;
    ts.push(special);
    ts.push(-special);
    ts.sort_unstable();
    ts.dedup();
    ts
}

pub fn is_admissible(n: u32, t: i64) -> bool {
    admissible_t(n).contains(&t)
}

/// An elliptic curve over GF(2^n) with its cached point count.
#[derive(Clone, Debug)]
pub struct Curve {
    field: BinaryField,
    coeffs: Weierstrass,
    order: u64,
    trace: i64,
}

impl PartialEq for Curve {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl Curve {
    /// Validates smoothness, counts points and checks the Hasse bound.
    pub fn new(field: BinaryField, coeffs: Weierstrass) -> Result<Self> {
        for a in [coeffs.a1, coeffs.a2, coeffs.a3, coeffs.a4, coeffs.a6] {
            if !field.contains(a) {
                return Err(Error::Format(format!("coefficient {a:?} outside the field")));
            }
        }
        if coeffs.discriminant(&field).is_zero() {
            return Err(Error::SingularCurve);
        }
        let order = GroupLaw::new(&field, coeffs).count();
        let q = field.order();
        let trace = order as i64 - q as i64 - 1;
        assert!(
            trace.unsigned_abs() <= serre_constant(q),
            "Hasse bound violated: N={order}, q={q}"
        );
        Ok(Curve {
            field,
            coeffs,
            order,
            trace,
        })
    }

    pub fn field(&self) -> &BinaryField {
        &self.field
    }

    pub fn coefficients(&self) -> Weierstrass {
        self.coeffs
    }

    /// Number of rational points N = q + 1 + t.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Frobenius trace t = N - q - 1.
    pub fn trace(&self) -> i64 {
        self.trace
    }

    pub fn q(&self) -> u64 {
        self.field.order()
    }

    pub fn law(&self) -> GroupLaw<'_> {
        GroupLaw::new(&self.field, self.coeffs)
    }

    pub fn count_points(&self) -> u64 {
        self.law().count()
    }

    /// Oracle: all rational points by x-sweep, sorted with `O` first.
    pub fn enumerate_rational_points(&self) -> Vec<Point> {
        self.law().points()
    }

    /// Exact order of a rational point, given the factorisation of N.
    pub fn point_order(&self, p: &Point, factored: &[(u64, u32)]) -> u64 {
        let law = self.law();
        let mut order = self.order;
        for &(prime, _) in factored {
            while order.is_multiple_of(prime) && law.scalar_mul((order / prime) as i64, p).is_infinity() {
                order /= prime;
            }
        }
        order
    }

    /// Group invariants from a full enumeration of point orders.
    pub fn group_structure(&self) -> GroupStructure {
        let factored = factorize(self.order);
        let mut exponent = 1;
        let mut generator = None;
        for p in self.enumerate_rational_points() {
            let o = self.point_order(&p, &factored);
            exponent = exponent.max(o);
            if o == self.order && generator.is_none() {
                generator = Some(p);
            }
        }
        GroupStructure {
            order: self.order,
            exponent,
            second_invariant: self.order / exponent,
            generator,
        }
    }

    /// `Some(generator)` iff the rational points form a cyclic group; the
    /// generator is the smallest point of order N.
    pub fn is_cyclic(&self) -> Option<Point> {
        let factored = factorize(self.order);
        self.enumerate_rational_points()
            .into_iter()
            .find(|p| self.point_order(p, &factored) == self.order)
    }

    /// `[P_0 = O, P_1 = P, ..., P_{N-1}]` with `P_j = [j]P`.
    pub fn ordered_points(&self, generator: &Point) -> Result<Vec<Point>> {
        if !self.law().is_on_curve(generator) {
            return Err(Error::NotOnCurve);
        }
        let actual = self.point_order(generator, &factorize(self.order));
        if actual != self.order {
            return Err(Error::WrongGeneratorOrder {
                expected: self.order,
                actual,
            });
        }
        let law = self.law();
        let mut out = Vec::with_capacity(self.order as usize);
        let mut cur = Point::Infinity;
        for _ in 0..self.order {
            out.push(cur);
            cur = law.add(&cur, generator);
        }
        debug_assert!(cur.is_infinity());
        Ok(out)
    }

    pub fn to_json(&self) -> CurveJson {
        let w = self.coeffs;
        CurveJson {
            field: FieldJson::from(&self.field),
            a1: w.a1.to_hex(),
            a2: w.a2.to_hex(),
            a3: w.a3.to_hex(),
            a4: w.a4.to_hex(),
            a6: w.a6.to_hex(),
            order: self.order,
            t: self.trace,
        }
    }
}

/// `Z/e1 x Z/e2` description of the rational point group, `e2 | e1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupStructure {
    pub order: u64,
    pub exponent: u64,
    pub second_invariant: u64,
    pub generator: Option<Point>,
}

impl GroupStructure {
    pub fn is_cyclic(&self) -> bool {
        self.second_invariant == 1
    }
}

/// Which Weierstrass family the search sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelFamily {
    /// `y^2 + xy = x^3 + a2 x^2 + a6`, odd traces.
    Ordinary,
    /// `y^2 + a3 y = x^3 + a4 x + a6`, even traces.
    Supersingular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurveSearchSpec {
    pub n: u32,
    pub t: i64,
    pub family: ModelFamily,
}

impl CurveSearchSpec {
    /// Picks the family by the parity of `t` and rejects inadmissible traces.
    pub fn new(n: u32, t: i64) -> Result<Self> {
        make_field(n)?;
        if !is_admissible(n, t) {
            return Err(Error::InadmissibleTrace { n, t });
        }
        let family = if t % 2 != 0 {
            ModelFamily::Ordinary
        } else {
            ModelFamily::Supersingular
        };
        Ok(CurveSearchSpec { n, t, family })
    }

    pub fn target_order(&self) -> u64 {
        ((1i64 << self.n) + 1 + self.t) as u64
    }
}

fn sweep_family(
    field: &BinaryField,
    family: ModelFamily,
    target: u64,
) -> Option<(Curve, Point)> {
    let q = field.order() as u32;
    let fe = FieldElement::from_bits;
    let try_curve = |w: Weierstrass| -> Option<(Curve, Point)> {
        if w.discriminant(field).is_zero() {
            return None;
        }
        if GroupLaw::new(field, w).count() != target {
            return None;
        }
        let curve = Curve::new(field.clone(), w).ok()?;
        let g = curve.is_cyclic()?;
        Some((curve, g))
    };
    match family {
        ModelFamily::Ordinary => {
            for a2 in 0..q {
                for a6 in 1..q {
                    if let Some(hit) = try_curve(Weierstrass::ordinary(fe(a2), fe(a6))) {
                        return Some(hit);
                    }
                }
            }
        }
        ModelFamily::Supersingular => {
            for a3 in 1..q {
                for a4 in 0..q {
                    for a6 in 0..q {
                        if let Some(hit) =
                            try_curve(Weierstrass::supersingular(fe(a3), fe(a4), fe(a6)))
                        {
                            return Some(hit);
                        }
                    }
                }
            }
        }
    }
    None
}

/// First cyclic curve with `q + 1 + t` points in lexicographic coefficient
/// order, with its canonical generator.
pub fn search_cyclic_curve(spec: &CurveSearchSpec) -> Result<(Curve, Point)> {
    let field = make_field(spec.n)?;
    let target = spec.target_order();
    let other = match spec.family {
        ModelFamily::Ordinary => ModelFamily::Supersingular,
        ModelFamily::Supersingular => ModelFamily::Ordinary,
    };
    sweep_family(&field, spec.family, target)
        .or_else(|| sweep_family(&field, other, target))
        .ok_or(Error::SearchExhausted {
            n: spec.n,
            order: target,
        })
}

/// Serialized point: `"O"` or `{x, y}` in hex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointJson {
    Infinity(String),
    Affine { x: String, y: String },
}

impl From<&Point> for PointJson {
    fn from(p: &Point) -> Self {
        match p {
            Point::Infinity => PointJson::Infinity("O".into()),
            Point::Affine { x, y } => PointJson::Affine {
                x: x.to_hex(),
                y: y.to_hex(),
            },
        }
    }
}

impl PointJson {
    pub fn decode(&self) -> Result<Point> {
        match self {
            PointJson::Infinity(s) if s == "O" => Ok(Point::Infinity),
            PointJson::Infinity(s) => Err(Error::Format(format!("bad point {s:?}"))),
            PointJson::Affine { x, y } => Ok(Point::affine(
                FieldElement::from_hex(x)?,
                FieldElement::from_hex(y)?,
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    pub field: FieldJson,
    pub a1: String,
    pub a2: String,
    pub a3: String,
    pub a4: String,
    pub a6: String,
    #[serde(rename = "N")]
    pub order: u64,
    pub t: i64,
}

impl CurveJson {
    /// Rebuilds the curve and checks the recorded point count.
    pub fn build(&self) -> Result<Curve> {
        let field = self.field.build()?;
        let h = FieldElement::from_hex;
        let w = Weierstrass {
            a1: h(&self.a1)?,
            a2: h(&self.a2)?,
            a3: h(&self.a3)?,
            a4: h(&self.a4)?,
            a6: h(&self.a6)?,
        };
        let curve = Curve::new(field, w)?;
        if curve.order() != self.order || curve.trace() != self.t {
            return Err(Error::Format(format!(
                "recorded N={} but the curve has {} points",
                self.order,
                curve.order()
            )));
        }
        Ok(curve)
    }
}
