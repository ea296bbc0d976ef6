use proptest::prelude::*;

use ecseq::analysis::{autocorrelation, crosscorrelation, family_correlation, AnalysisMode};
use ecseq::curve::{search_cyclic_curve, CurveSearchSpec, Point};
use ecseq::field::{make_field, FieldElement};
use ecseq::sequence::{shift_identity_check, Construction};
use ecseq::BitSeq;

/// Schoolbook carry-less product reduced bit by bit.
fn slow_mul(a: u32, b: u32, modulus: u64, m: u32) -> u32 {
    let mut acc: u64 = 0;
    for i in 0..m {
        if b >> i & 1 == 1 {
            acc ^= (a as u64) << i;
        }
    }
    for k in (m..2 * m).rev() {
        if acc >> k & 1 == 1 {
            acc ^= modulus << (k - m);
        }
    }
    acc as u32
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_mul_matches_schoolbook(m in 2u32..=12, a in any::<u32>(), b in any::<u32>()) {
        let f = make_field(m).unwrap();
        let mask = (1u32 << m) - 1;
        let (a, b) = (a & mask, b & mask);
        let got = f.mul(FieldElement::from_bits(a), FieldElement::from_bits(b)).bits();
        prop_assert_eq!(got, slow_mul(a, b, f.modulus(), m));
    }

    #[test]
    fn field_inverse_and_trace(m in 2u32..=12, a in 1u32..) {
        let f = make_field(m).unwrap();
        let a = FieldElement::from_bits(a & ((1 << m) - 1));
        prop_assume!(!a.is_zero());
        let inv = f.inv(a).unwrap();
        prop_assert_eq!(f.mul(a, inv), FieldElement::ONE);
        // Tr(a) = Tr(a^2)
        prop_assert_eq!(f.trace(a), f.trace(f.square(a)));
        prop_assert_eq!(f.trace(a), f.trace_by_squaring(a));
    }

    #[test]
    fn cross_correlation_is_symmetric_under_delay(bits_a in prop::collection::vec(any::<bool>(), 1..80), seed in any::<u64>(), u in 0usize..200) {
        let n = bits_a.len();
        let bits_b: Vec<bool> = (0..n).map(|k| (seed >> (k % 64)) & 1 == 1).collect();
        let (a, b) = (BitSeq::from_bools(&bits_a), BitSeq::from_bools(&bits_b));
        let u = u % n;
        let back = (n - u) % n;
        prop_assert_eq!(crosscorrelation(&a, &b, u).unwrap(), crosscorrelation(&b, &a, back).unwrap());
        prop_assert_eq!(crosscorrelation(&a, &a, 0).unwrap(), n as i64);
        if u > 0 {
            prop_assert_eq!(autocorrelation(&a, u).unwrap(), autocorrelation(&a, back).unwrap());
        }
    }
}

#[test]
fn group_law_is_associative_on_small_curves() {
    for (n, t) in [(3u32, 4i64), (4, -3), (5, 0), (6, 8)] {
        let (curve, g) = search_cyclic_curve(&CurveSearchSpec::new(n, t).unwrap()).unwrap();
        let law = curve.law();
        let pts = curve.ordered_points(&g).unwrap();
        let step = (pts.len() / 7).max(1);
        for a in pts.iter().step_by(step) {
            for b in pts.iter().step_by(step) {
                for c in pts.iter().step_by(step) {
                    let left = law.add(&law.add(a, b), c);
                    let right = law.add(a, &law.add(b, c));
                    assert_eq!(left, right);
                    assert!(law.is_on_curve(&left));
                }
                assert_eq!(law.add(a, &law.neg(a)), Point::Infinity);
            }
        }
    }
}

#[test]
fn point_translation_is_index_shift() {
    let c = Construction::build(4, -1, 3).unwrap();
    let f = c.family().unwrap();
    let n = f.len() as u64;
    let cases: Vec<(u64, u64)> = (1..=f.size() as u64)
        .step_by(17)
        .flat_map(|i| (0..n).map(move |u| (i, u)))
        .collect();
    assert!(shift_identity_check(&f, &c, &cases).unwrap());
}

#[test]
fn sampled_never_exceeds_exhaustive() {
    let f = Construction::build(5, 8, 2).unwrap().family().unwrap();
    let full = family_correlation(&f.rows, 32, 8, 2, AnalysisMode::Exhaustive, None).unwrap();
    for seed in 0..4 {
        let s = family_correlation(&f.rows, 32, 8, 2, AnalysisMode::Sampled { probes: 2000, seed }, None).unwrap();
        assert!(s.lower_estimate);
        assert!(s.cor <= full.cor);
        // every autocorrelation is covered in sampled mode
        assert_eq!(s.max_auto, full.max_auto);
    }
}
