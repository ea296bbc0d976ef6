//! Sequence families `s_{i,j} = Tr(z_i(P_j))` over the nonzero elements of V.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitSeq;
use crate::curve::{gcd, search_cyclic_curve, serre_constant, Curve, CurveJson, CurveSearchSpec, Point, PointJson};
use crate::error::{Error, Result};
use crate::field::{make_ext, BinaryField, ExtField, FieldElement, FieldJson};
use crate::place::{find_place, PlaceJson};
use crate::riemann_roch::{eval_function, rr_basis, CurveFunction, FunctionJson, RRSpace};

/// The `i`-th coefficient vector (`1 <= i < q^{d-1}`): base-q digits of `i`,
/// most significant first.
pub fn v_coefficients(q: u64, d: u32, i: u64) -> Vec<FieldElement> {
    let k = d as usize - 1;
    let mut digits = vec![FieldElement::ZERO; k];
    let mut rest = i;
    for slot in digits.iter_mut().rev() {
        *slot = FieldElement::from_bits((rest % q) as u32);
        rest /= q;
    }
    debug_assert_eq!(rest, 0);
    digits
}

/// Number of nonzero elements of V, `q^{d-1} - 1`.
/// Whether an all-zero row is impossible. A zero row means `Tr z = 0` at all
/// `N` points, i.e. the cover `y^2 + y = z` (genus `d + 1`) has `2N` points,
/// which needs `|q + 1 + 2t| <= (d + 1) floor(2 sqrt q)`.
pub fn zero_row_excluded(q: u64, t: i64, d: u32) -> bool {
    (q as i64 + 1 + 2 * t).unsigned_abs() > (d as u64 + 1) * serre_constant(q)
}

pub fn family_size(q: u64, d: u32) -> u64 {
    q.pow(d - 1) - 1
}

/// `z_1, ..., z_{q^{d-1}-1}` in the canonical order.
pub fn enumerate_v(space: &RRSpace, field: &BinaryField) -> Vec<CurveFunction> {
    let (q, d) = (field.order(), space.degree());
    (1..=family_size(q, d))
        .map(|i| space.v_combination(field, &v_coefficients(q, d, i)))
        .collect()
}

/// Everything needed to rebuild a family bit for bit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub field: FieldJson,
    pub extension: FieldJson,
    pub embed_image: String,
    pub curve: CurveJson,
    pub generator: PointJson,
    pub place: PlaceJson,
    pub v_basis: Vec<FunctionJson>,
}

/// A cyclic curve with generator, a degree-d place and its L(Q), plus the
/// ordered point list `P_j = [j]P`.
#[derive(Clone, Debug)]
pub struct Construction {
    curve: Curve,
    generator: Point,
    ext: ExtField,
    space: RRSpace,
    points: Vec<Point>,
}

impl Construction {
    /// Full search: curve with `2^n + 1 + t` points, first regular place, L(Q).
    pub fn build(n: u32, t: i64, d: u32) -> Result<Self> {
        let spec = CurveSearchSpec::new(n, t)?;
        let order = spec.target_order();
        let g = gcd(d as u64, order);
        if g != 1 {
            return Err(Error::NotCoprime { d, order, gcd: g });
        }
        let (curve, generator) = search_cyclic_curve(&spec)?;
        let ext = make_ext(curve.field(), d)?;
        let place = find_place(&curve, &ext)?;
        let space = rr_basis(&curve, &ext, &place)?;
        Self::assemble(curve, generator, ext, space)
    }

    fn assemble(curve: Curve, generator: Point, ext: ExtField, space: RRSpace) -> Result<Self> {
        let points = curve.ordered_points(&generator)?;
        Ok(Construction {
            curve,
            generator,
            ext,
            space,
            points,
        })
    }

    /// Rebuilds from recorded data without searching, re-validating each piece.
    pub fn from_provenance(p: &Provenance) -> Result<Self> {
        let curve = p.curve.build()?;
        if FieldJson::from(curve.field()) != p.field {
            return Err(Error::Format("field does not match the curve's field".into()));
        }
        let ext = make_ext(curve.field(), p.place.d)?;
        if FieldJson::from(ext.ext()) != p.extension || ext.embed_image().to_hex() != p.embed_image {
            return Err(Error::Format("extension field does not match".into()));
        }
        let generator = p.generator.decode()?;
        let place = p.place.build(&curve, &ext)?;
        let v_basis = p
            .v_basis
            .iter()
            .map(|f| f.build())
            .collect::<Result<Vec<_>>>()?;
        let space = RRSpace::from_parts(&curve, &ext, place, v_basis)?;
        Self::assemble(curve, generator, ext, space)
    }

    pub fn provenance(&self) -> Provenance {
        Provenance {
            field: FieldJson::from(self.curve.field()),
            extension: FieldJson::from(self.ext.ext()),
            embed_image: self.ext.embed_image().to_hex(),
            curve: self.curve.to_json(),
            generator: PointJson::from(&self.generator),
            place: self.space.place().to_json(),
            v_basis: self.space.v_basis().iter().map(|z| z.to_json()).collect(),
        }
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn generator(&self) -> &Point {
        &self.generator
    }

    pub fn ext(&self) -> &ExtField {
        &self.ext
    }

    pub fn space(&self) -> &RRSpace {
        &self.space
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn n(&self) -> u32 {
        self.curve.field().degree()
    }

    pub fn d(&self) -> u32 {
        self.space.degree()
    }

    pub fn family(&self) -> Result<SequenceFamily> {
        gen_family(self)
    }
}

/// Rows of a family plus the parameters and, if known, the provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceFamily {
    pub n: u32,
    pub t: i64,
    pub d: u32,
    pub rows: Vec<BitSeq>,
    pub provenance: Option<Provenance>,
}

impl SequenceFamily {
    /// N
    pub fn len(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    /// M
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn q(&self) -> u64 {
        1u64 << self.n
    }
}

/// `Tr(f)` along the point list, packed.
fn trace_row(field: &BinaryField, values: &[FieldElement]) -> BitSeq {
    let mut row = BitSeq::zeros(values.len());
    for (j, &v) in values.iter().enumerate() {
        if field.trace(v) {
            row.set(j, true);
        }
    }
    row
}

/// Computes the family. Since `Tr` is GF(2)-linear, the row for
/// `sum c_k V_k` is the XOR of the rows `Tr(x^b V_k)` over the set bits `b`
/// of each `c_k`; those `(d-1) n` rows are evaluated once.
pub fn gen_family(c: &Construction) -> Result<SequenceFamily> {
    let field = c.curve.field();
    let (n, d) = (field.degree(), c.d());
    let q = field.order();
    let basis_values: Vec<Vec<FieldElement>> = c
        .space
        .v_basis()
        .iter()
        .map(|z| {
            c.points
                .iter()
                .map(|p| eval_function(&c.curve, z, p))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let bit_rows: Vec<Vec<BitSeq>> = basis_values
        .iter()
        .map(|vals| {
            (0..n)
                .map(|b| {
                    let scale = FieldElement::from_bits(1 << b);
                    let scaled: Vec<FieldElement> = vals.iter().map(|&v| field.mul(scale, v)).collect();
                    trace_row(field, &scaled)
                })
                .collect()
        })
        .collect();
    let len = c.points.len();
    let rows: Vec<BitSeq> = (1..=family_size(q, d))
        .into_par_iter()
        .map(|i| {
            let mut row = BitSeq::zeros(len);
            for (k, ck) in v_coefficients(q, d, i).into_iter().enumerate() {
                for (b, r) in bit_rows[k].iter().enumerate() {
                    if ck.bits() >> b & 1 == 1 {
                        row.xor_assign(r);
                    }
                }
            }
            row
        })
        .collect();
    if let Some(pos) = rows.iter().position(|r| r.is_zero()).filter(|_| zero_row_excluded(q, c.curve.trace(), d)) {
        return Err(Error::RiemannRoch(format!("sequence {} is identically zero", pos + 1)));
    }
    Ok(SequenceFamily {
        n,
        t: c.curve.trace(),
        d,
        rows,
        provenance: Some(c.provenance()),
    })
}

/// Row `i` computed straight from the definition, one evaluation per point.
pub fn direct_row(c: &Construction, i: u64) -> Result<BitSeq> {
    let field = c.curve.field();
    let z = c
        .space
        .v_combination(field, &v_coefficients(field.order(), c.d(), i));
    let vals = c
        .points
        .iter()
        .map(|p| eval_function(&c.curve, &z, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(trace_row(field, &vals))
}

/// For each `(i, u)`: `s_{i, j+u} = Tr(z_i(P_j + [u]P))` for every `j`, with
/// the translated point computed by the group law rather than by index.
/// Rows are 1-based as in the enumeration.
pub fn shift_identity_check(family: &SequenceFamily, c: &Construction, cases: &[(u64, u64)]) -> Result<bool> {
    let law = c.curve.law();
    let field = c.curve.field();
    let len = c.points.len();
    if family.len() != len || family.size() as u64 != family_size(field.order(), c.d()) {
        return Err(Error::LengthMismatch(family.len(), len));
    }
    let mut shifts: Vec<u64> = cases.iter().map(|&(_, u)| u).collect();
    shifts.sort_unstable();
    shifts.dedup();
    for u in shifts {
        let offset = law.scalar_mul(u as i64, &c.generator);
        // V_k at every translated point
        let translated: Vec<Point> = c.points.iter().map(|p| law.add(p, &offset)).collect();
        let values: Vec<Vec<FieldElement>> = c
            .space
            .v_basis()
            .iter()
            .map(|z| {
                translated
                    .iter()
                    .map(|p| eval_function(&c.curve, z, p))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        for &(i, _) in cases.iter().filter(|&&(_, cu)| cu == u) {
            let coeffs = v_coefficients(field.order(), c.d(), i);
            let row = &family.rows[i as usize - 1];
            for j in 0..len {
                let v = coeffs
                    .iter()
                    .zip(&values)
                    .fold(FieldElement::ZERO, |acc, (&ck, vk)| acc + field.mul(ck, vk[j]));
                if field.trace(v) != row.get((j + u as usize) % len) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
