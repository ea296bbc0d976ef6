//! Dense polynomials over GF(2), coefficient `i` at bit `i`.

use crate::bits::BitSeq;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly2 {
    words: Vec<u64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { words: Vec::new() }
    }

    pub fn one() -> Self {
        Poly2::monomial(0)
    }

    pub fn monomial(k: usize) -> Self {
        let mut p = Poly2 {
            words: vec![0; k / 64 + 1],
        };
        p.words[k / 64] = 1 << (k % 64);
        p
    }

    /// `x^n + 1`
    pub fn x_n_plus_one(n: usize) -> Self {
        let mut p = Poly2::monomial(n);
        p.words[0] ^= 1;
        p.trim();
        p
    }

    /// `S(x) = sum s_j x^j`
    pub fn from_bits(s: &BitSeq) -> Self {
        let mut p = Poly2 {
            words: s.words().to_vec(),
        };
        p.trim();
        p
    }

    pub fn from_coeffs(c: &[bool]) -> Self {
        Poly2::from_bits(&BitSeq::from_bools(c))
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        let top = *self.words.last()?;
        Some(64 * (self.words.len() - 1) + 63 - top.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    /// `self ^= other * x^k`
    fn add_shifted(&mut self, other: &Poly2, k: usize) {
        let (q, r) = (k / 64, k % 64);
        let need = other.words.len() + q + 1;
        if self.words.len() < need {
            self.words.resize(need, 0);
        }
        for (i, &w) in other.words.iter().enumerate() {
            self.words[i + q] ^= w << r;
            if r != 0 {
                self.words[i + q + 1] ^= w >> (64 - r);
            }
        }
        self.trim();
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly2) -> (Poly2, Poly2) {
        let db = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = Poly2::zero();
        while let Some(dr) = rem.degree() {
            if dr < db {
                break;
            }
            quot.add_shifted(&Poly2::one(), dr - db);
            rem.add_shifted(divisor, dr - db);
        }
        (quot, rem)
    }

    pub fn gcd(&self, other: &Poly2) -> Poly2 {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        if let Some(d) = self.degree() {
            for i in 0..=d {
                if self.coeff(i) {
                    out.add_shifted(other, i);
                }
            }
        }
        out
    }

    /// `x^deg p(1/x)`
    pub fn reciprocal(&self) -> Poly2 {
        let Some(d) = self.degree() else {
            return Poly2::zero();
        };
        let c: Vec<bool> = (0..=d).rev().map(|i| self.coeff(i)).collect();
        Poly2::from_coeffs(&c)
    }

    pub fn support(&self) -> Vec<usize> {
        match self.degree() {
            Some(d) => (0..=d).filter(|&i| self.coeff(i)).collect(),
            None => Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly() -> impl Strategy<Value = Poly2> {
        prop::collection::vec(any::<bool>(), 0..200).prop_map(|c| Poly2::from_coeffs(&c))
    }

    #[test]
    fn small_identities() {
        // x^3 + 1 = (x + 1)(x^2 + x + 1)
        let f = Poly2::x_n_plus_one(3);
        let g = Poly2::from_coeffs(&[true, true]);
        let (q, r) = f.div_rem(&g);
        assert!(r.is_zero());
        assert_eq!(q, Poly2::from_coeffs(&[true, true, true]));
        assert_eq!(Poly2::from_coeffs(&[false, true, true]).reciprocal(), Poly2::from_coeffs(&[true, true]));
        assert_eq!(Poly2::monomial(130).degree(), Some(130));
    }

    proptest! {
        #[test]
        fn division_identity(a in poly(), b in poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b);
            let mut back = q.mul(&b);
            back.add_shifted(&r, 0);
            prop_assert_eq!(back, a);
            prop_assert!(r.degree().is_none_or(|dr| dr < b.degree().unwrap()));
        }

        #[test]
        fn gcd_divides_both(a in poly(), b in poly()) {
            prop_assume!(!a.is_zero() || !b.is_zero());
            let g = a.gcd(&b);
            prop_assert!(a.div_rem(&g).1.is_zero());
            prop_assert!(b.div_rem(&g).1.is_zero());
        }
    }
}
