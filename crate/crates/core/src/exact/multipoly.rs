//! Sparse multivariate polynomials for cutting out varieties and taking
//! Jacobians at sampled points.

use std::collections::BTreeMap;

use super::scalar::{FieldTag, Scalar};

/// Multivariate polynomial as a map from exponent vectors to coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Scalar>,
    tag: FieldTag,
}

impl MultiPoly {
    pub fn new(nvars: usize, terms: Vec<(Vec<u32>, Scalar)>, tag: FieldTag) -> MultiPoly {
        let mut map: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
        for (exp, coeff) in terms {
            assert_eq!(exp.len(), nvars, "exponent arity mismatch");
            assert!(coeff.tag() == tag, "field mismatch");
            let entry = map.entry(exp).or_insert_with(|| Scalar::zero(tag));
            *entry = entry.add(&coeff);
        }
        map.retain(|_, c| !c.is_zero());
        MultiPoly { nvars, terms: map, tag }
    }

    /// The single variable `x_i`.
    pub fn var(nvars: usize, i: usize, tag: FieldTag) -> MultiPoly {
        let mut exp = vec![0u32; nvars];
        exp[i] = 1;
        MultiPoly::new(nvars, vec![(exp, Scalar::one(tag))], tag)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars, "point arity mismatch");
        let mut acc = Scalar::zero(self.tag);
        for (exp, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (x, &e) in point.iter().zip(exp.iter()) {
                for _ in 0..e {
                    term = term.mul(x);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    pub fn partial(&self, i: usize) -> MultiPoly {
        let mut terms = Vec::new();
        for (exp, coeff) in &self.terms {
            if exp[i] == 0 {
                continue;
            }
            let mut e = exp.clone();
            e[i] -= 1;
            let c = coeff.mul(&Scalar::from_integer(exp[i] as i64, self.tag));
            terms.push((e, c));
        }
        MultiPoly::new(self.nvars, terms, self.tag)
    }
}
