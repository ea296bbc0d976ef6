//! Cyclic linear complexity and the lower bound it is checked against.

use serde::Serialize;

use super::poly2::Poly2;
use crate::bits::BitSeq;
use crate::error::{Error, Result};

/// Smallest `l` with `sum_{i<=l} lambda_i s_{i+u} = 0` for all `u` (indices mod N),
/// `lambda_0 = lambda_l = 1`, and the connection polynomial achieving it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicComplexity {
    pub lc: usize,
    pub connection: Poly2,
}

/// `l = N - deg gcd(S(x), x^N + 1)`, with `lambda = reciprocal((x^N + 1) / gcd)`
/// checked against every cyclic shift before returning.
pub fn linear_complexity_cyclic(s: &BitSeq) -> Result<CyclicComplexity> {
    if s.is_zero() {
        return Err(Error::ZeroSequence);
    }
    let n = s.len();
    let modulus = Poly2::x_n_plus_one(n);
    let g = Poly2::from_bits(s).gcd(&modulus);
    let (h, r) = modulus.div_rem(&g);
    debug_assert!(r.is_zero());
    let lambda = h.reciprocal();
    let lc = lambda.degree().expect("nonzero quotient");
    debug_assert_eq!(lc, n - g.degree().unwrap());
    if !annihilates(&lambda, s) {
        return Err(Error::BoundViolation(
            "connection polynomial fails to annihilate the sequence".into(),
        ));
    }
    Ok(CyclicComplexity {
        lc,
        connection: lambda,
    })
}

/// `sum_i lambda_i s_{i+u} = 0` for every `u`.
pub fn annihilates(lambda: &Poly2, s: &BitSeq) -> bool {
    let mut acc = BitSeq::zeros(s.len());
    for i in lambda.support() {
        acc.xor_assign(&s.rotated(i));
    }
    acc.is_zero()
}

/// `a * sqrt(q) >= c`, exactly.
pub fn ge_sqrt(a: i128, q: u64, c: i128) -> bool {
    let q = q as i128;
    match (a >= 0, c <= 0) {
        (true, true) => true,
        (true, false) => a * a * q >= c * c,
        (false, _) if c >= 0 => false,
        // both negative: |a| sqrt(q) <= |c|
        (false, _) => a * a * q <= c * c,
    }
}

/// The bound `(q + 1 + 2t - 2(d+1) sqrt(q)) / (2d sqrt(q))` kept symbolic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LcBound {
    pub q: u64,
    pub t: i64,
    pub d: u32,
}

impl LcBound {
    fn parts(&self) -> (i128, i128, i128) {
        let c = self.q as i128 + 1 + 2 * self.t as i128;
        let a = 2 * (self.d as i128 + 1);
        let b = 2 * self.d as i128;
        (c, a, b)
    }

    /// `l >= bound`, i.e. `(2d l + 2(d+1)) sqrt(q) >= q + 1 + 2t`.
    pub fn admits(&self, l: i64) -> bool {
        let (c, a, b) = self.parts();
        ge_sqrt(b * l as i128 + a, self.q, c)
    }

    /// Smallest integer not below the bound.
    pub fn ceil(&self) -> i64 {
        let (c, _, _) = self.parts();
        let (mut lo, mut hi) = (-(c.abs() as i64) - 2, c.abs() as i64 + 2);
        // admits is monotone in l
        while lo + 1 < hi {
            let mid = lo + (hi - lo) / 2;
            if self.admits(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    pub fn approx(&self) -> f64 {
        let s = (self.q as f64).sqrt();
        let (c, a, b) = self.parts();
        (c as f64 - a as f64 * s) / (b as f64 * s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearComplexityReport {
    pub lc_per_sequence: Vec<usize>,
    pub lc_min: usize,
    pub lc_max: usize,
    pub bound: LcBound,
    pub bound_approx: f64,
    pub required_min: i64,
    pub satisfied: bool,
}

pub fn family_linear_complexity(rows: &[BitSeq], q: u64, t: i64, d: u32) -> Result<LinearComplexityReport> {
    use rayon::prelude::*;
    let lcs: Vec<usize> = rows
        .par_iter()
        .map(|r| linear_complexity_cyclic(r).map(|c| c.lc))
        .collect::<Result<_>>()?;
    let bound = LcBound { q, t, d };
    let lc_min = lcs.iter().copied().min().unwrap_or(0);
    let lc_max = lcs.iter().copied().max().unwrap_or(0);
    Ok(LinearComplexityReport {
        satisfied: lc_bound_check(lc_min, &bound),
        lc_per_sequence: lcs,
        lc_min,
        lc_max,
        bound_approx: bound.approx(),
        required_min: bound.ceil(),
        bound,
    })
}

pub fn lc_bound_check(lc_min: usize, bound: &LcBound) -> bool {
    bound.admits(lc_min as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Smallest l admitting a cyclic recurrence, by trying every lambda.
    fn brute_lc(bits: &[bool]) -> usize {
        let s = BitSeq::from_bools(bits);
        let n = bits.len();
        for l in 1..=n {
            let inner = l.saturating_sub(1);
            for mid in 0u64..(1 << inner) {
                let mut c = vec![false; l + 1];
                c[0] = true;
                c[l] = true;
                for k in 0..inner {
                    c[k + 1] = mid >> k & 1 == 1;
                }
                if annihilates(&Poly2::from_coeffs(&c), &s) {
                    return l;
                }
            }
        }
        unreachable!("x^N + 1 always annihilates")
    }

    #[test]
    fn trivial_cases() {
        let ones = BitSeq::from_bools(&[true; 13]);
        assert_eq!(linear_complexity_cyclic(&ones).unwrap().lc, 1);
        let mut single = BitSeq::zeros(13);
        single.set(0, true);
        assert_eq!(linear_complexity_cyclic(&single).unwrap().lc, 13);
        assert!(matches!(linear_complexity_cyclic(&BitSeq::zeros(5)), Err(Error::ZeroSequence)));
        // period 3 inside length 9, annihilated by x^2 + x + 1
        let p = BitSeq::from_bools(&[true, true, false, true, true, false, true, true, false]);
        assert_eq!(linear_complexity_cyclic(&p).unwrap().lc, 2);
    }

    #[test]
    fn exact_bound_examples() {
        let b = LcBound { q: 64, t: 8, d: 2 };
        // (64 + 1 + 16 - 48) / 32 = 33/32
        assert!(!b.admits(1));
        assert!(b.admits(2));
        assert_eq!(b.ceil(), 2);
        let neg = LcBound { q: 64, t: -1, d: 3 };
        assert!(neg.admits(0));
        assert!(neg.ceil() <= 0);
        // q = 8: bound (9 + 8 - 6 sqrt 8) / (4 sqrt 8) = 0.0026...
        let odd = LcBound { q: 8, t: 4, d: 2 };
        assert_eq!(odd.ceil(), 1);
        assert!(!odd.admits(0));
    }

    #[test]
    fn ge_sqrt_cases() {
        assert!(ge_sqrt(3, 2, 4)); // 4.24 >= 4
        assert!(!ge_sqrt(2, 2, 3)); // 2.83 < 3
        assert!(ge_sqrt(0, 5, 0));
        assert!(!ge_sqrt(-1, 2, 0));
        assert!(ge_sqrt(-1, 2, -2)); // -1.41 >= -2
        assert!(!ge_sqrt(-2, 2, -2)); // -2.83 < -2
        assert!(ge_sqrt(1, 4, -7));
    }

    proptest! {
        #[test]
        fn ceil_agrees_with_float(q_exp in 2u32..14, t in -200i64..200, d in 2u32..5) {
            let q = 1u64 << q_exp;
            let b = LcBound { q, t, d };
            let c = b.ceil();
            prop_assert!(b.admits(c));
            prop_assert!(!b.admits(c - 1));
            prop_assert!((c as f64 - b.approx()) < 1.0 + 1e-9);
            prop_assert!((c as f64 - b.approx()) > -1e-9);
        }

        #[test]
        fn gcd_complexity_matches_brute_force(bits in prop::collection::vec(any::<bool>(), 1..12)) {
            prop_assume!(bits.iter().any(|&b| b));
            let s = BitSeq::from_bools(&bits);
            prop_assert_eq!(linear_complexity_cyclic(&s).unwrap().lc, brute_lc(&bits));
        }
    }
}
