//! Dense univariate polynomials, just enough for squarefreeness tests.

use super::scalar::Scalar;

/// Polynomial `coeffs[0] + coeffs[1] x + ...` with exact coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Poly {
        assert!(!coeffs.is_empty(), "empty coefficient list");
        while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn derivative(&self) -> Poly {
        if self.degree() == 0 {
            return Poly::new(vec![Scalar::zero(self.coeffs[0].tag())]);
        }
        let tag = self.coeffs[0].tag();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.mul(&Scalar::from_integer(k as i64, tag)))
            .collect();
        Poly::new(coeffs)
    }

    fn make_monic(&self) -> Poly {
        let lead = self.coeffs.last().unwrap();
        if lead.is_zero() || lead.is_one() {
            return self.clone();
        }
        let inv = lead.inv();
        Poly::new(self.coeffs.iter().map(|c| c.mul(&inv)).collect())
    }

    fn rem(&self, divisor: &Poly) -> Poly {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let tag = self.coeffs[0].tag();
        let mut r = self.coeffs.clone();
        let d = divisor.degree();
        let lead_inv = divisor.coeffs[d].inv();
        while r.len() > d {
            let k = r.len() - 1;
            if !r[k].is_zero() {
                let factor = r[k].mul(&lead_inv);
                for i in 0..=d {
                    let idx = k - d + i;
                    r[idx] = r[idx].sub(&factor.mul(&divisor.coeffs[i]));
                }
            }
            r.pop();
        }
        if r.is_empty() {
            r.push(Scalar::zero(tag));
        }
        Poly::new(r)
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }
}
