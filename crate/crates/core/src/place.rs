//! Degree-d places of a curve over GF(q): Frobenius orbits of points over
//! GF(q^d), their x-coordinate minimal polynomials, the closed-form place
//! count and its enumeration oracle, and translation by rational points.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::curve::{gcd, Curve, GroupLaw, Point, PointJson, Weierstrass};
use crate::error::{Error, Result};
use crate::field::{ExtField, FieldElement};

/// Largest extension size swept by the place search and enumeration.
pub const MAX_PLACE_FIELD_BITS: u32 = 20;

/// A degree-d place: one Frobenius orbit `R, R^q, ..., R^{q^{d-1}}` and the
/// monic polynomial `D(x) = prod (x - x(R_i))` over GF(q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceD {
    d: u32,
    orbit: Vec<Point>,
    dpoly: Vec<FieldElement>,
}

impl PlaceD {
    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn orbit(&self) -> &[Point] {
        &self.orbit
    }

    /// Coefficients of `D(x)`, constant term first; the last entry is 1.
    pub fn dpoly(&self) -> &[FieldElement] {
        &self.dpoly
    }

    pub fn representative(&self) -> Point {
        self.orbit[0]
    }

    /// Orbit as a sorted set, for comparing places.
    pub fn point_set(&self) -> Vec<Point> {
        let mut s = self.orbit.clone();
        s.sort();
        s
    }

    /// Orbit of exact size d, no point fixed by negation and the negated
    /// orbit disjoint from the orbit.
    pub fn is_regular(&self, law: &GroupLaw<'_>) -> bool {
        self.orbit.len() == self.d as usize
            && self.orbit.iter().all(|p| !self.orbit.contains(&law.neg(p)))
    }

    pub fn to_json(&self) -> PlaceJson {
        PlaceJson {
            d: self.d,
            dpoly: self.dpoly.iter().map(|c| c.to_hex()).collect(),
            representative: PointJson::from(&self.orbit[0]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceJson {
    pub d: u32,
    pub dpoly: Vec<String>,
    pub representative: PointJson,
}

impl PlaceJson {
    /// Rebuilds the orbit from the representative and checks `D(x)`.
    pub fn build(&self, curve: &Curve, ext: &ExtField) -> Result<PlaceD> {
        if self.d != ext.rel_degree() {
            return Err(Error::Format("place degree does not match the extension".into()));
        }
        let rep = self.representative.decode()?;
        let lifted = lift_coefficients(curve, ext);
        let law = GroupLaw::new(ext.ext(), lifted);
        if rep.is_infinity() || !law.is_on_curve(&rep) {
            return Err(Error::NotOnCurve);
        }
        let orbit = frobenius_orbit(ext, &rep);
        let place = place_from_orbit(ext, self.d, orbit)?;
        let dpoly: Vec<String> = place.dpoly.iter().map(|c| c.to_hex()).collect();
        if dpoly != self.dpoly {
            return Err(Error::Format("recorded D(x) does not match the orbit".into()));
        }
        Ok(place)
    }
}

/// The curve coefficients embedded into GF(q^d).
pub fn lift_coefficients(curve: &Curve, ext: &ExtField) -> Weierstrass {
    let w = curve.coefficients();
    Weierstrass {
        a1: ext.embed(w.a1),
        a2: ext.embed(w.a2),
        a3: ext.embed(w.a3),
        a4: ext.embed(w.a4),
        a6: ext.embed(w.a6),
    }
}

/// A rational point with its coordinates embedded into GF(q^d).
pub fn lift_point(ext: &ExtField, p: &Point) -> Point {
    match *p {
        Point::Infinity => Point::Infinity,
        Point::Affine { x, y } => Point::affine(ext.embed(x), ext.embed(y)),
    }
}

pub fn frobenius_point(ext: &ExtField, p: &Point) -> Point {
    match *p {
        Point::Infinity => Point::Infinity,
        Point::Affine { x, y } => Point::affine(ext.frobenius_q(x), ext.frobenius_q(y)),
    }
}

/// `R, R^q, ...` up to (excluding) the first repetition.
pub fn frobenius_orbit(ext: &ExtField, r: &Point) -> Vec<Point> {
    let mut orbit = vec![*r];
    let mut cur = frobenius_point(ext, r);
    while cur != *r {
        orbit.push(cur);
        cur = frobenius_point(ext, &cur);
    }
    orbit
}

/// `prod (x - x_i)` over GF(q^d), pulled back to GF(q).
fn orbit_polynomial(ext: &ExtField, orbit: &[Point]) -> Result<Vec<FieldElement>> {
    let big = ext.ext();
    let mut coeffs = vec![FieldElement::ONE];
    for p in orbit {
        let root = p.x().ok_or(Error::NotOnCurve)?;
        let mut next = vec![FieldElement::ZERO; coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] += big.mul(c, root);
        }
        coeffs = next;
    }
    coeffs
        .into_iter()
        .map(|c| {
            ext.restrict(c).ok_or_else(|| {
                Error::RiemannRoch("orbit polynomial has a coefficient outside GF(q)".into())
            })
        })
        .collect()
}

fn place_from_orbit(ext: &ExtField, d: u32, orbit: Vec<Point>) -> Result<PlaceD> {
    let dpoly = orbit_polynomial(ext, &orbit)?;
    Ok(PlaceD { d, orbit, dpoly })
}

/// True when `D` has no root in GF(q) and its roots form one Frobenius
/// orbit of size `deg D`; for degrees 2 and 3 root-freeness alone suffices.
pub fn dpoly_is_irreducible(place: &PlaceD, ext: &ExtField) -> bool {
    let base = ext.base();
    let eval = |x: FieldElement| {
        place
            .dpoly
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| base.mul(acc, x) + c)
    };
    let root_free = base.elements().all(|x| !eval(x).is_zero());
    let Some(x0) = place.orbit[0].x() else {
        return false;
    };
    let mut x_orbit = 1;
    let mut cur = ext.frobenius_q(x0);
    while cur != x0 {
        x_orbit += 1;
        cur = ext.frobenius_q(cur);
    }
    root_free && x_orbit == place.d as usize && place.dpoly.len() == place.d as usize + 1
}

/// Power sums `S_r = a1^r + a2^r` of the Frobenius eigenvalues
/// (`a1 + a2 = -t`, `a1 a2 = q`) for `r = 1..=r_max`, by the recurrence
/// `S_r = -t S_{r-1} - q S_{r-2}`.
pub fn frobenius_power_sums(q: u64, t: i64, r_max: usize) -> Vec<i128> {
    let (q, t) = (q as i128, t as i128);
    let mut sums = vec![2i128, -t];
    for r in 2..=r_max {
        sums.push(-t * sums[r - 1] - q * sums[r - 2]);
    }
    sums.truncate(r_max + 1);
    sums.remove(0);
    sums
}

fn factorial(k: u32) -> i128 {
    (1..=k as i128).product()
}

/// Closed (Waring) form of `S_r` as a direct sum over `i <= r/2`.
pub fn waring_power_sum(q: u64, t: i64, r: u32) -> i128 {
    assert!((1..=30).contains(&r));
    let (q, t) = (q as i128, t as i128);
    (0..=r / 2)
        .map(|i| {
            let sign = if (r - i).is_multiple_of(2) { 1 } else { -1 };
            let coeff = factorial(r - i - 1) * r as i128 / (factorial(r - 2 * i) * factorial(i));
            sign * coeff * t.pow(r - 2 * i) * q.pow(i)
        })
        .sum()
}

pub fn mobius(mut n: u64) -> i128 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Number of degree-d places: `(1/d) sum_{r | d} mu(d/r) (q^r + 1 - S_r)`.
pub fn count_places_formula(q: u64, t: i64, d: u32) -> Result<u64> {
    if d == 0 {
        return Err(Error::Unsupported("place degree must be positive".into()));
    }
    let sums = frobenius_power_sums(q, t, d as usize);
    let total: i128 = (1..=d)
        .filter(|r| d.is_multiple_of(*r))
        .map(|r| {
            mobius((d / r) as u64) * ((q as i128).pow(r) + 1 - sums[r as usize - 1])
        })
        .sum();
    if total % d as i128 != 0 || total < 0 {
        return Err(Error::NonIntegerPlaceCount { q, t, d });
    }
    Ok((total / d as i128) as u64)
}

/// Formula value, optionally with the enumeration count beside it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceCountReport {
    pub d: u32,
    pub q: u64,
    pub t: i64,
    pub b_d_formula: u64,
    pub b_d_enumerated: Option<u64>,
}

impl PlaceCountReport {
    pub fn consistent(&self) -> bool {
        self.b_d_enumerated.is_none_or(|e| e == self.b_d_formula)
    }
}

fn check_place_field(ext: &ExtField) -> Result<()> {
    if ext.ext().degree() > MAX_PLACE_FIELD_BITS {
        return Err(Error::Unsupported(format!(
            "q^d = 2^{} exceeds the place-search limit 2^{MAX_PLACE_FIELD_BITS}",
            ext.ext().degree()
        )));
    }
    Ok(())
}

/// Oracle: every Frobenius orbit of size exactly d in E(GF(q^d)), including
/// irregular ones, ordered by the x-sweep.
pub fn enumerate_places_deg_d(curve: &Curve, ext: &ExtField) -> Result<Vec<PlaceD>> {
    check_place_field(ext)?;
    let d = ext.rel_degree();
    let lifted = lift_coefficients(curve, ext);
    let law = GroupLaw::new(ext.ext(), lifted);
    let mut seen: HashSet<Point> = HashSet::new();
    let mut places = Vec::new();
    for x in ext.ext().elements() {
        for y in law.y_roots(x).to_vec() {
            let r = Point::affine(x, y);
            if seen.contains(&r) {
                continue;
            }
            let orbit = frobenius_orbit(ext, &r);
            seen.extend(orbit.iter().copied());
            if orbit.len() == d as usize {
                places.push(place_from_orbit(ext, d, orbit)?);
            }
        }
    }
    Ok(places)
}

/// First regular degree-d place in x-integer order; requires gcd(d, N) = 1.
pub fn find_place(curve: &Curve, ext: &ExtField) -> Result<PlaceD> {
    let d = ext.rel_degree();
    let g = gcd(d as u64, curve.order());
    if g != 1 {
        return Err(Error::NotCoprime {
            d,
            order: curve.order(),
            gcd: g,
        });
    }
    if d < 2 {
        return Err(Error::Unsupported("places of degree at least 2 are required".into()));
    }
    let lifted = lift_coefficients(curve, ext);
    let law = GroupLaw::new(ext.ext(), lifted);
    for x in ext.ext().elements() {
        for y in law.y_roots(x).to_vec() {
            let r = Point::affine(x, y);
            let orbit = frobenius_orbit(ext, &r);
            if orbit.len() != d as usize {
                continue;
            }
            let neg = law.neg(&r);
            if orbit.contains(&neg) {
                continue;
            }
            return place_from_orbit(ext, d, orbit);
        }
    }
    Err(Error::NoRegularPlace { d })
}

/// The place `tau^j(Q)`: every orbit point translated by `[j]P`.
pub fn translate_place(
    curve: &Curve,
    ext: &ExtField,
    place: &PlaceD,
    j: i64,
    generator: &Point,
) -> Result<PlaceD> {
    let shift = lift_point(ext, &curve.law().scalar_mul(j, generator));
    let lifted = lift_coefficients(curve, ext);
    let law = GroupLaw::new(ext.ext(), lifted);
    let orbit: Vec<Point> = place.orbit.iter().map(|p| law.add(p, &shift)).collect();
    if orbit.iter().any(|p| p.is_infinity()) {
        // a degree-d orbit never contains a rational point
        return Err(Error::NotOnCurve);
    }
    place_from_orbit(ext, place.d, orbit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{search_cyclic_curve, CurveSearchSpec};
    use crate::field::make_ext;

    fn setup(n: u32, t: i64, d: u32) -> (Curve, Point, ExtField) {
        let (c, g) = search_cyclic_curve(&CurveSearchSpec::new(n, t).unwrap()).unwrap();
        let ext = make_ext(c.field(), d).unwrap();
        (c, g, ext)
    }

    #[test]
    fn power_sum_examples() {
        let s = frobenius_power_sums(8, 4, 3);
        assert_eq!(s[0], -4);
        assert_eq!(s[1], 16 - 16);
        assert_eq!(s[2], 32);
        for (q, t) in [(8u64, 4i64), (64, 8), (64, -1), (128, -13), (4, 3)] {
            let rec = frobenius_power_sums(q, t, 6);
            for r in 1..=6u32 {
                assert_eq!(rec[r as usize - 1], waring_power_sum(q, t, r), "q={q} t={t} r={r}");
            }
            assert_eq!(rec[1], (t * t) as i128 - 2 * q as i128);
        }
    }

    #[test]
    fn mobius_values() {
        let expect = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (i, &m) in expect.iter().enumerate() {
            assert_eq!(mobius(i as u64 + 1), m);
        }
    }

    #[test]
    fn place_formula_examples() {
        assert_eq!(count_places_formula(8, 4, 2).unwrap(), 26);
        assert_eq!(count_places_formula(8, 4, 3).unwrap(), 156);
        assert_eq!(count_places_formula(8, 4, 1).unwrap(), 13);
        for q in [4u64, 8, 16, 64, 256] {
            for t in -(2 * crate::curve::isqrt(q) as i64)..=(2 * crate::curve::isqrt(q) as i64) {
                let (qi, ti) = (q as i128, t as i128);
                assert_eq!(
                    count_places_formula(q, t, 2).unwrap() as i128,
                    (qi * qi + qi - ti * ti - ti) / 2
                );
                assert_eq!(
                    count_places_formula(q, t, 3).unwrap() as i128,
                    (qi.pow(3) - qi + ti.pow(3) - 3 * qi * ti - ti) / 3
                );
            }
        }
    }

    #[test]
    fn enumeration_matches_formula_small() {
        let (c, _, ext) = setup(3, 4, 2);
        let places = enumerate_places_deg_d(&c, &ext).unwrap();
        assert_eq!(places.len(), 26);
        assert!(places.iter().all(|p| p.orbit().len() == 2));
        let ext3 = make_ext(c.field(), 3).unwrap();
        assert_eq!(enumerate_places_deg_d(&c, &ext3).unwrap().len(), 156);
    }

    #[test]
    fn orbits_partition_points() {
        let (c, _, ext) = setup(3, -3, 2);
        let law = GroupLaw::new(ext.ext(), lift_coefficients(&c, &ext));
        let all = law.points();
        let places = enumerate_places_deg_d(&c, &ext).unwrap();
        // points of degree 1 are the embedded rational points
        let in_places: usize = places.iter().map(|p| p.orbit().len()).sum();
        assert_eq!(all.len(), in_places + c.order() as usize);
    }

    #[test]
    fn find_place_regular_and_irreducible() {
        let (c, _, ext) = setup(3, 4, 2);
        let place = find_place(&c, &ext).unwrap();
        let law = GroupLaw::new(ext.ext(), lift_coefficients(&c, &ext));
        assert!(place.is_regular(&law));
        assert!(dpoly_is_irreducible(&place, &ext));
        let r = place.representative();
        let rphi = frobenius_point(&ext, &r);
        assert_ne!(rphi, law.neg(&r));
        assert_eq!(place.orbit()[1], rphi);
        assert_eq!(frobenius_point(&ext, &place.orbit()[1]), r);
        assert_eq!(place.dpoly().last(), Some(&FieldElement::ONE));
        for p in place.orbit() {
            // D(x(R_i)) = 0 in the extension
            let x = p.x().unwrap();
            let v = place
                .dpoly()
                .iter()
                .rev()
                .fold(FieldElement::ZERO, |acc, &cf| ext.ext().mul(acc, x) + ext.embed(cf));
            assert!(v.is_zero());
        }
    }

    #[test]
    fn find_place_requires_coprime() {
        // t = -1 at n = 6 gives N = 64
        let (c, _, ext) = setup(6, -1, 2);
        assert!(matches!(find_place(&c, &ext), Err(Error::NotCoprime { gcd: 2, .. })));
    }

    #[test]
    fn translates_distinct() {
        let (c, g, ext) = setup(3, 4, 2);
        let place = find_place(&c, &ext).unwrap();
        let n = c.order() as i64;
        assert_eq!(translate_place(&c, &ext, &place, 0, &g).unwrap(), place);
        assert_eq!(
            translate_place(&c, &ext, &place, n, &g).unwrap().point_set(),
            place.point_set()
        );
        let mut sets = HashSet::new();
        for j in 0..n {
            let tp = translate_place(&c, &ext, &place, j, &g).unwrap();
            assert_eq!(frobenius_orbit(&ext, &tp.representative()).len(), 2);
            sets.insert(tp.point_set());
        }
        assert_eq!(sets.len(), n as usize);
    }

    #[test]
    fn place_json_round_trip() {
        let (c, _, ext) = setup(4, 5, 3);
        let place = find_place(&c, &ext).unwrap();
        let j = place.to_json();
        let s = serde_json::to_string(&j).unwrap();
        let back: PlaceJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back.build(&c, &ext).unwrap(), place);
    }
}
