//! The Riemann-Roch space L(Q) of a regular degree-d place Q.
//!
//! Functions are kept in common-denominator form `N(x, y) / D(x)`, where
//! `D` is the x-minimal polynomial of Q. Since `div(D) = Q + Q' - 2d O`
//! with `Q'` the negated place, `f` lies in L(Q) exactly when `N = f D`
//! lies in L(2d O) and vanishes on `Q'`. L(2d O) has the monomial basis
//! `x^i y^j`, `j <= 1`, `2i + 3j <= 2d`, and vanishing on `Q'` is one
//! GF(q^d)-valued condition at a single point of `Q'` (its conjugates
//! follow because `N` has coefficients in GF(q)), i.e. d GF(q)-linear
//! equations. The solution space has dimension d and contains `D` itself.

use serde::{Deserialize, Serialize};

use crate::curve::{Curve, GroupLaw, Point};
use crate::error::{Error, Result};
use crate::field::{BinaryField, ExtField, FieldElement};
use crate::place::{lift_coefficients, PlaceD};

/// `x^x y^y` with pole order `2x + 3y` at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
}

impl Monomial {
    pub fn pole_order(&self) -> u32 {
        2 * self.x + 3 * self.y
    }
}

/// Basis of L(2d O) ordered by pole order: `1, x, y, x^2, xy, x^3, ...`.
pub fn monomials_l2do(d: u32) -> Vec<Monomial> {
    (0..=2 * d)
        .filter_map(|p| match p {
            1 => None,
            p if p % 2 == 0 => Some(Monomial { x: p / 2, y: 0 }),
            p => Some(Monomial { x: (p - 3) / 2, y: 1 }),
        })
        .collect()
}

/// `N(x, y) / D(x)` with `N` over [`monomials_l2do`] of `deg D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveFunction {
    numerator: Vec<FieldElement>,
    denominator: Vec<FieldElement>,
}

impl CurveFunction {
    pub fn new(numerator: Vec<FieldElement>, denominator: Vec<FieldElement>) -> Result<Self> {
        let d = denominator.len().saturating_sub(1);
        if d < 1 || numerator.len() != 2 * d || denominator.last() != Some(&FieldElement::ONE) {
            return Err(Error::RiemannRoch(
                "numerator must have 2d coefficients over a monic degree-d denominator".into(),
            ));
        }
        Ok(CurveFunction {
            numerator,
            denominator,
        })
    }

    pub fn degree(&self) -> u32 {
        (self.denominator.len() - 1) as u32
    }

    pub fn numerator(&self) -> &[FieldElement] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[FieldElement] {
        &self.denominator
    }

    /// The constant function 1 = D / D.
    pub fn one(denominator: &[FieldElement]) -> Self {
        let d = denominator.len() - 1;
        CurveFunction {
            numerator: denominator_as_numerator(denominator, d as u32),
            denominator: denominator.to_vec(),
        }
    }

    /// Value of `N` at an affine point (coordinates in `field`).
    fn numerator_at(&self, field: &BinaryField, x: FieldElement, y: FieldElement, lift: impl Fn(FieldElement) -> FieldElement) -> FieldElement {
        let monos = monomials_l2do(self.degree());
        let mut acc = FieldElement::ZERO;
        for (m, &c) in monos.iter().zip(&self.numerator) {
            if c.is_zero() {
                continue;
            }
            let mut v = field.pow(x, m.x as u64);
            if m.y == 1 {
                v = field.mul(v, y);
            }
            acc += field.mul(lift(c), v);
        }
        acc
    }

    /// True iff the numerator is `c * D` for some `c` in GF(q).
    pub fn is_constant(&self, field: &BinaryField) -> bool {
        let d = self.degree();
        let top = self.numerator[leading_index(d)];
        let scaled: Vec<FieldElement> = denominator_as_numerator(&self.denominator, d)
            .into_iter()
            .map(|c| field.mul(c, top))
            .collect();
        scaled == self.numerator
    }

    pub fn to_json(&self) -> FunctionJson {
        let terms = monomials_l2do(self.degree())
            .into_iter()
            .zip(&self.numerator)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| TermJson {
                x: m.x,
                y: m.y,
                c: c.to_hex(),
            })
            .collect();
        FunctionJson {
            terms,
            denominator: self.denominator.iter().map(|c| c.to_hex()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub x: u32,
    pub y: u32,
    pub c: String,
}

/// Serialized [`CurveFunction`]: nonzero numerator terms and `D` (constant first).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionJson {
    pub terms: Vec<TermJson>,
    pub denominator: Vec<String>,
}

impl FunctionJson {
    pub fn build(&self) -> Result<CurveFunction> {
        let denominator = self
            .denominator
            .iter()
            .map(|s| FieldElement::from_hex(s))
            .collect::<Result<Vec<_>>>()?;
        let d = denominator.len().saturating_sub(1) as u32;
        let monos = monomials_l2do(d);
        let mut numerator = vec![FieldElement::ZERO; monos.len()];
        for t in &self.terms {
            let idx = monos
                .iter()
                .position(|m| m.x == t.x && m.y == t.y)
                .ok_or_else(|| Error::Format(format!("monomial x^{} y^{} not in L(2dO)", t.x, t.y)))?;
            numerator[idx] = FieldElement::from_hex(&t.c)?;
        }
        CurveFunction::new(numerator, denominator)
    }
}

/// Position of `x^d` in [`monomials_l2do`]: the unique monomial of pole order 2d.
fn leading_index(d: u32) -> usize {
    (2 * d - 1) as usize
}

fn denominator_as_numerator(dpoly: &[FieldElement], d: u32) -> Vec<FieldElement> {
    let monos = monomials_l2do(d);
    monos
        .iter()
        .map(|m| {
            if m.y == 0 {
                dpoly.get(m.x as usize).copied().unwrap_or(FieldElement::ZERO)
            } else {
                FieldElement::ZERO
            }
        })
        .collect()
}

/// Reduced row echelon form over GF(q) with leftmost pivots; returns the
/// pivot columns. Zero rows are dropped.
pub(crate) fn rref(field: &BinaryField, rows: &mut Vec<Vec<FieldElement>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pr) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = field.inv(rows[rank][col]).expect("pivot is nonzero");
        for c in rows[rank].iter_mut() {
            *c = field.mul(*c, inv);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col];
            for (c, &p) in row.iter_mut().zip(&pivot_row) {
                *c += field.mul(factor, p);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    pivots
}

/// Basis of `{v : A v = 0}`, one vector per free column in increasing order.
pub(crate) fn nullspace(
    field: &BinaryField,
    mut rows: Vec<Vec<FieldElement>>,
    ncols: usize,
) -> Vec<Vec<FieldElement>> {
    let pivots = rref(field, &mut rows);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![FieldElement::ZERO; ncols];
            v[free] = FieldElement::ONE;
            for (row, &pc) in rows.iter().zip(&pivots) {
                // char 2: v[pc] = -row[free] = row[free]
                v[pc] = row[free];
            }
            v
        })
        .collect()
}

/// L(Q) = GF(q) + V, with `full_basis[0] = 1` and `V` the functions vanishing
/// at infinity (numerator without an `x^d` term).
#[derive(Clone, Debug)]
pub struct RRSpace {
    place: PlaceD,
    full_basis: Vec<CurveFunction>,
    v_basis: Vec<CurveFunction>,
}

impl RRSpace {
    pub fn place(&self) -> &PlaceD {
        &self.place
    }

    pub fn degree(&self) -> u32 {
        self.place.degree()
    }

    pub fn full_basis(&self) -> &[CurveFunction] {
        &self.full_basis
    }

    pub fn v_basis(&self) -> &[CurveFunction] {
        &self.v_basis
    }

    /// `sum c_k V_k` for coefficients over GF(q).
    pub fn v_combination(&self, field: &BinaryField, coeffs: &[FieldElement]) -> CurveFunction {
        assert_eq!(coeffs.len(), self.v_basis.len());
        let len = self.v_basis[0].numerator.len();
        let mut numerator = vec![FieldElement::ZERO; len];
        for (c, b) in coeffs.iter().zip(&self.v_basis) {
            for (acc, &bc) in numerator.iter_mut().zip(&b.numerator) {
                *acc += field.mul(*c, bc);
            }
        }
        CurveFunction {
            numerator,
            denominator: self.place.dpoly().to_vec(),
        }
    }

    /// Rebuilds a space from a recorded V basis, re-checking every invariant
    /// that [`rr_basis`] guarantees.
    pub fn from_parts(curve: &Curve, ext: &ExtField, place: PlaceD, v_basis: Vec<CurveFunction>) -> Result<Self> {
        let d = place.degree();
        if v_basis.len() != d as usize - 1 {
            return Err(Error::RiemannRoch(format!("V must have dimension {}", d - 1)));
        }
        let one = CurveFunction::one(place.dpoly());
        for z in &v_basis {
            if z.denominator != one.denominator {
                return Err(Error::RiemannRoch("V basis uses a different denominator".into()));
            }
            if !vanishes_on_negated_place(curve, ext, &place, z) {
                return Err(Error::RiemannRoch("V basis element is not in L(Q)".into()));
            }
        }
        let mut rows: Vec<Vec<FieldElement>> = std::iter::once(one.numerator.clone())
            .chain(v_basis.iter().map(|z| z.numerator.clone()))
            .collect();
        if rref(curve.field(), &mut rows).len() != d as usize {
            return Err(Error::RiemannRoch("recorded basis is linearly dependent".into()));
        }
        let mut full_basis = vec![one];
        full_basis.extend(v_basis.iter().cloned());
        Ok(RRSpace {
            place,
            full_basis,
            v_basis,
        })
    }
}

/// Numerator of `z` evaluated at every point of the negated place.
pub fn vanishes_on_negated_place(curve: &Curve, ext: &ExtField, place: &PlaceD, z: &CurveFunction) -> bool {
    let law = GroupLaw::new(ext.ext(), lift_coefficients(curve, ext));
    place.orbit().iter().all(|r| match law.neg(r) {
        Point::Affine { x, y } => z.numerator_at(ext.ext(), x, y, |c| ext.embed(c)).is_zero(),
        Point::Infinity => false,
    })
}

/// Basis of L(Q) for a regular place Q.
pub fn rr_basis(curve: &Curve, ext: &ExtField, place: &PlaceD) -> Result<RRSpace> {
    let d = place.degree();
    if d < 2 || ext.rel_degree() != d {
        return Err(Error::RiemannRoch("place degree must be at least 2 and match the extension".into()));
    }
    let big = ext.ext();
    let base = curve.field();
    let law = GroupLaw::new(big, lift_coefficients(curve, ext));
    if !place.is_regular(&law) {
        return Err(Error::RiemannRoch("the place is not regular".into()));
    }
    let Point::Affine { x, y } = law.neg(&place.representative()) else {
        return Err(Error::RiemannRoch("place contains the point at infinity".into()));
    };
    let monos = monomials_l2do(d);

    // rows[k][m] = k-th GF(q)-coordinate of monomial m at -R
    let values: Vec<Vec<FieldElement>> = monos
        .iter()
        .map(|m| {
            let mut v = big.pow(x, m.x as u64);
            if m.y == 1 {
                v = big.mul(v, y);
            }
            ext.coordinates(v)
        })
        .collect();
    let rows: Vec<Vec<FieldElement>> = (0..d as usize)
        .map(|k| values.iter().map(|v| v[k]).collect())
        .collect();

    let kernel = nullspace(base, rows.clone(), monos.len());
    if kernel.len() != d as usize {
        return Err(Error::RiemannRoch(format!(
            "solution space has dimension {} instead of {d}; the place is not regular",
            kernel.len()
        )));
    }

    let one = CurveFunction::one(place.dpoly());
    let d_in_kernel = rows.iter().all(|row| {
        row.iter()
            .zip(&one.numerator)
            .fold(FieldElement::ZERO, |acc, (&a, &b)| acc + base.mul(a, b))
            .is_zero()
    });
    if !d_in_kernel {
        return Err(Error::RiemannRoch("D(x) does not satisfy the vanishing conditions".into()));
    }

    // Clear the x^d column against D, then reduce what is left.
    let lead = leading_index(d);
    let mut reduced: Vec<Vec<FieldElement>> = kernel
        .into_iter()
        .map(|mut v| {
            let c = v[lead];
            for (a, &b) in v.iter_mut().zip(&one.numerator) {
                *a += base.mul(c, b);
            }
            v
        })
        .collect();
    rref(base, &mut reduced);
    if reduced.len() != d as usize - 1 {
        return Err(Error::RiemannRoch(format!(
            "complement of the constants has dimension {} instead of {}",
            reduced.len(),
            d - 1
        )));
    }
    let v_basis: Vec<CurveFunction> = reduced
        .into_iter()
        .map(|numerator| CurveFunction {
            numerator,
            denominator: place.dpoly().to_vec(),
        })
        .collect();
    let mut full_basis = vec![one];
    full_basis.extend(v_basis.iter().cloned());
    Ok(RRSpace {
        place: place.clone(),
        full_basis,
        v_basis,
    })
}

/// `z(P)` at a rational point. At infinity the value is the ratio of the
/// `x^d` coefficients of numerator and (monic) denominator.
pub fn eval_function(curve: &Curve, z: &CurveFunction, p: &Point) -> Result<FieldElement> {
    let f = curve.field();
    match *p {
        Point::Infinity => Ok(z.numerator[leading_index(z.degree())]),
        Point::Affine { x, y } => {
            let den = z
                .denominator
                .iter()
                .rev()
                .fold(FieldElement::ZERO, |acc, &c| f.mul(acc, x) + c);
            if den.is_zero() {
                return Err(Error::RiemannRoch(format!("D(x) vanishes at the rational x = {x:?}")));
            }
            let num = z.numerator_at(f, x, y, |c| c);
            f.div(num, den)
        }
    }
}

/// True iff `z1 + z2` is not constant, i.e. its pole divisor is all of Q.
pub fn check_sum_nonconstant(field: &BinaryField, z1: &CurveFunction, z2: &CurveFunction) -> bool {
    let numerator = z1
        .numerator
        .iter()
        .zip(&z2.numerator)
        .map(|(&a, &b)| a + b)
        .collect();
    let sum = CurveFunction {
        numerator,
        denominator: z1.denominator.clone(),
    };
    !sum.is_constant(field)
}
