//! Graded sl2 representation calculus.
//!
//! A graded module carries matrices for the standard basis e, h, f together
//! with a parity splitting V = V0 + V1 in which h is even and e, f are odd.
//! The irreducible graded module with highest weight `lambda` and
//! highest-weight-vector parity sign `w` is written `(lambda, w)`; its dual
//! is `(lambda, w * (-1)^lambda)`.
//!
//! Two routes compute the defect: the definitional trace
//! `Tr(h on the even part of ker e) - dim V1`, and the closed form
//! `(lambda*w + w*(1+(-1)^lambda)/2 - 1) / 2` summed over summands. The
//! suites check them against each other exactly.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::exact::{FieldTag, Matrix, Scalar, Subspace};

const Q: FieldTag = FieldTag::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Sl2Error {
    #[error("invalid graded module: {0}")]
    InvalidModule(String),
    #[error("non-integral defect total {0}")]
    NonIntegralTotal(String),
}

/// Highest-weight-vector parity sign, +1 for even, -1 for odd.
pub type Sign = i8;

fn check_sign(w: Sign) {
    assert!(w == 1 || w == -1, "parity sign must be +1 or -1");
}

/// A graded sl2 module: matrices for e, h, f over Q plus the parity split.
#[derive(Clone, Debug)]
pub struct GradedSl2Module {
    e: Matrix,
    h: Matrix,
    f: Matrix,
    even: Subspace,
    odd: Subspace,
}

impl GradedSl2Module {
    pub fn new(
        e: Matrix,
        h: Matrix,
        f: Matrix,
        even: Subspace,
        odd: Subspace,
    ) -> Result<GradedSl2Module, Sl2Error> {
        let m = GradedSl2Module { e, h, f, even, odd };
        m.validate()?;
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.e.rows()
    }

    pub fn e(&self) -> &Matrix {
        &self.e
    }

    pub fn h(&self) -> &Matrix {
        &self.h
    }

    pub fn f(&self) -> &Matrix {
        &self.f
    }

    pub fn even(&self) -> &Subspace {
        &self.even
    }

    pub fn odd(&self) -> &Subspace {
        &self.odd
    }

    fn validate(&self) -> Result<(), Sl2Error> {
        let err = |msg: String| Err(Sl2Error::InvalidModule(msg));
        let d = self.e.rows();
        for (name, m) in [("e", &self.e), ("h", &self.h), ("f", &self.f)] {
            if !m.is_square() || m.rows() != d {
                return err(format!("action matrix {name} has wrong shape"));
            }
            if m.tag() != Q {
                return err(format!("action matrix {name} is not rational"));
            }
        }
        let two = Scalar::from_integer(2, Q);
        if self.h.bracket(&self.e) != self.e.scale(&two) {
            return err("bracket [h,e] = 2e fails".into());
        }
        if self.h.bracket(&self.f) != self.f.scale(&two).neg() {
            return err("bracket [h,f] = -2f fails".into());
        }
        if self.e.bracket(&self.f) != self.h {
            return err("bracket [e,f] = h fails".into());
        }
        if self.even.ambient_dim() != d || self.odd.ambient_dim() != d {
            return err("parity parts live in the wrong ambient space".into());
        }
        if self.even.dim() + self.odd.dim() != d || self.even.intersect(&self.odd).dim() != 0 {
            return err("parity parts do not split the space".into());
        }
        let maps_into = |m: &Matrix, from: &Subspace, to: &Subspace| -> bool {
            (0..from.dim()).all(|j| to.contains(&m.mul_vec(&from.basis_column(j))))
        };
        for (name, m) in [("e", &self.e), ("f", &self.f)] {
            if !maps_into(m, &self.even, &self.odd) || !maps_into(m, &self.odd, &self.even) {
                return err(format!("{name} is not odd for the grading"));
            }
        }
        if !maps_into(&self.h, &self.even, &self.even) || !maps_into(&self.h, &self.odd, &self.odd) {
            return err("h does not preserve the grading".into());
        }
        Ok(())
    }

    /// The (lambda+1)-dimensional irreducible graded module in its weight
    /// basis, with highest-weight-vector parity fixed by `w` and parities
    /// alternating down the string (forced by f being odd).
    pub fn irreducible(lambda: u32, w: Sign) -> GradedSl2Module {
        check_sign(w);
        let d = (lambda + 1) as usize;
        let lam = lambda as i64;
        let mut e = Matrix::zero(d, d, Q);
        let mut f = Matrix::zero(d, d, Q);
        let mut h = Matrix::zero(d, d, Q);
        for k in 0..d as i64 {
            h.set(k as usize, k as usize, Scalar::from_integer(lam - 2 * k, Q));
            if k >= 1 {
                // e v_k = k (lambda + 1 - k) v_{k-1}
                e.set((k - 1) as usize, k as usize, Scalar::from_integer(k * (lam + 1 - k), Q));
            }
            if (k as usize) + 1 < d {
                f.set((k + 1) as usize, k as usize, Scalar::one(Q));
            }
        }
        let hw_parity = if w == 1 { 0usize } else { 1 };
        let mut even_cols = Vec::new();
        let mut odd_cols = Vec::new();
        for k in 0..d {
            let mut v = vec![Scalar::zero(Q); d];
            v[k] = Scalar::one(Q);
            if (hw_parity + k) % 2 == 0 {
                even_cols.push(v);
            } else {
                odd_cols.push(v);
            }
        }
        GradedSl2Module {
            e,
            h,
            f,
            even: Subspace::from_column_vectors(d, &even_cols, Q),
            odd: Subspace::from_column_vectors(d, &odd_cols, Q),
        }
    }

    pub fn direct_sum(&self, other: &GradedSl2Module) -> GradedSl2Module {
        let d1 = self.dim();
        let d = d1 + other.dim();
        let block = |a: &Matrix, b: &Matrix| {
            Matrix::from_fn(d, d, Q, |i, j| match (i < d1, j < d1) {
                (true, true) => a.at(i, j).clone(),
                (false, false) => b.at(i - d1, j - d1).clone(),
                _ => Scalar::zero(Q),
            })
        };
        let part = |a: &Subspace, b: &Subspace| a.embed(d, 0).sum(&b.embed(d, d1));
        GradedSl2Module {
            e: block(&self.e, &other.e),
            h: block(&self.h, &other.h),
            f: block(&self.f, &other.f),
            even: part(&self.even, &other.even),
            odd: part(&self.odd, &other.odd),
        }
    }

    /// The dual module: x acts on V* by -x^T in the dual basis, and the even
    /// part of V* is the annihilator of the odd part of V.
    pub fn dual(&self) -> GradedSl2Module {
        let ann = |s: &Subspace| -> Subspace { s.basis().transpose().kernel() };
        GradedSl2Module {
            e: self.e.transpose().neg(),
            h: self.h.transpose().neg(),
            f: self.f.transpose().neg(),
            even: ann(&self.odd),
            odd: ann(&self.even),
        }
    }

    /// Splits ker e by h-eigenvalue and parity. Fails when h is not
    /// diagonalizable over Q with nonnegative integer eigenvalues on ker e,
    /// which signals an invariant violation upstream.
    pub fn decompose(&self) -> Result<GradedDecomposition, Sl2Error> {
        let d = self.dim();
        let hw = self.e.kernel();
        let mut summands: BTreeMap<(u32, Sign), usize> = BTreeMap::new();
        let mut seen = 0usize;
        let mut total = 0usize;
        for lambda in 0..=d as i64 {
            let shifted = self.h.sub(&Matrix::identity(d, Q).scale(&Scalar::from_integer(lambda, Q)));
            let eig = shifted.kernel().intersect(&hw);
            if eig.dim() == 0 {
                continue;
            }
            let even_mult = eig.intersect(&self.even).dim();
            let odd_mult = eig.intersect(&self.odd).dim();
            if even_mult + odd_mult != eig.dim() {
                return Err(Sl2Error::InvalidModule(
                    "highest-weight space is not parity-graded".into(),
                ));
            }
            if even_mult > 0 {
                summands.insert((lambda as u32, 1), even_mult);
            }
            if odd_mult > 0 {
                summands.insert((lambda as u32, -1), odd_mult);
            }
            seen += eig.dim();
            total += (even_mult + odd_mult) * (lambda as usize + 1);
        }
        if seen != hw.dim() || total != d {
            return Err(Sl2Error::InvalidModule(
                "h is not diagonalizable with integer eigenvalues on ker e".into(),
            ));
        }
        Ok(GradedDecomposition { summands })
    }

    /// Trace of h on the even part of ker e, minus dim V1.
    pub fn defect_definitional(&self) -> i64 {
        let kernel_even = self.e.kernel().intersect(&self.even);
        let k = kernel_even.dim();
        let mut trace = Scalar::zero(Q);
        for j in 0..k {
            // Coefficient of the j-th basis vector in h * (that vector).
            let image = self.h.mul_vec(&kernel_even.basis_column(j));
            let (coords, _) = kernel_even
                .basis()
                .solve_affine(&image)
                .expect("h preserves the even highest-weight space");
            trace = trace.add(&coords[j]);
        }
        let t = trace.to_i64().expect("trace of h on a weight space is an integer");
        t - self.odd.dim() as i64
    }
}

/// Multiset of irreducible graded summands `(lambda, w)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedDecomposition {
    summands: BTreeMap<(u32, Sign), usize>,
}

impl GradedDecomposition {
    pub fn new(summands: &[(u32, Sign)]) -> GradedDecomposition {
        let mut map = BTreeMap::new();
        for &(lambda, w) in summands {
            check_sign(w);
            *map.entry((lambda, w)).or_insert(0) += 1;
        }
        GradedDecomposition { summands: map }
    }

    pub fn summands(&self) -> impl Iterator<Item = (u32, Sign, usize)> + '_ {
        self.summands.iter().map(|(&(l, w), &m)| (l, w, m))
    }

    pub fn total_dim(&self) -> usize {
        self.summands().map(|(l, _, m)| m * (l as usize + 1)).sum()
    }

    /// dim V1, from parity alternation down each weight string: an even
    /// highest-weight vector contributes floor((lambda+1)/2) odd vectors,
    /// an odd one ceil((lambda+1)/2).
    pub fn odd_dim(&self) -> usize {
        self.summands()
            .map(|(l, w, m)| {
                let d = l as usize + 1;
                m * if w == 1 { d / 2 } else { d.div_ceil(2) }
            })
            .sum()
    }

    /// `(lambda, w) -> (lambda, w * (-1)^lambda)`, multiplicities preserved.
    pub fn dual(&self) -> GradedDecomposition {
        let mut map: BTreeMap<(u32, Sign), usize> = BTreeMap::new();
        for (l, w, m) in self.summands() {
            let w2 = if l % 2 == 0 { w } else { -w };
            *map.entry((l, w2)).or_insert(0) += m;
        }
        GradedDecomposition { summands: map }
    }

    /// Sum of the closed-form defects of the summands, as an exact rational;
    /// flags a non-integral total instead of rounding.
    pub fn defect_closed_form(&self) -> Result<i64, Sl2Error> {
        let mut acc = Scalar::zero(Q);
        for (l, w, m) in self.summands() {
            let lam = l as i64;
            let w = w as i64;
            let even_bonus = if l % 2 == 0 { w } else { 0 };
            let per = Scalar::rational(lam * w + even_bonus - 1, 2);
            acc = acc.add(&per.mul(&Scalar::from_integer(m as i64, Q)));
        }
        acc.to_i64()
            .ok_or_else(|| Sl2Error::NonIntegralTotal(acc.to_string()))
    }

    /// `delta = sum of (lambda + 2) over summands with w*(-1)^lambda = -1,
    /// minus dim V1`.
    pub fn delta(&self) -> i64 {
        let mut acc: i64 = 0;
        for (l, w, m) in self.summands() {
            let sign = if l % 2 == 0 { w } else { -w };
            if sign == -1 {
                acc += (l as i64 + 2) * m as i64;
            }
        }
        acc - self.odd_dim() as i64
    }

    /// `delta(V) + delta(V*) + def(V) + def(V*) = 0`, exactly.
    pub fn verify_delta_identity(&self) -> bool {
        let dual = self.dual();
        match (self.defect_closed_form(), dual.defect_closed_form()) {
            (Ok(d1), Ok(d2)) => self.delta() + dual.delta() + d1 + d2 == 0,
            _ => false,
        }
    }

    /// The direct sum of irreducible models realizing this decomposition.
    pub fn realize(&self) -> GradedSl2Module {
        let mut parts = Vec::new();
        for (l, w, m) in self.summands() {
            for _ in 0..m {
                parts.push(GradedSl2Module::irreducible(l, w));
            }
        }
        assert!(!parts.is_empty(), "cannot realize the empty decomposition");
        let mut acc = parts[0].clone();
        for p in &parts[1..] {
            acc = acc.direct_sum(p);
        }
        acc
    }
}

impl fmt::Display for GradedDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (l, w, m)) in self.summands().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            let sign = if w == 1 { "+1" } else { "-1" };
            if m == 1 {
                write!(f, "({l},{sign})")?;
            } else {
                write!(f, "({l},{sign})x{m}")?;
            }
        }
        write!(f, "}}")
    }
}

/// Seeded random decomposition with `1..=max_summands` summands of highest
/// weight `<= max_lambda`.
pub fn random_decomposition(
    rng: &mut impl Rng,
    max_lambda: u32,
    max_summands: usize,
) -> GradedDecomposition {
    let count = rng.gen_range(1..=max_summands);
    let summands: Vec<(u32, Sign)> = (0..count)
        .map(|_| {
            let lambda = rng.gen_range(0..=max_lambda);
            let w: Sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            (lambda, w)
        })
        .collect();
    GradedDecomposition::new(&summands)
}

/// Seeded random direct sum of irreducible models with total dimension at
/// most `max_dim`.
pub fn random_module(rng: &mut impl Rng, max_lambda: u32, max_dim: usize) -> GradedSl2Module {
    let mut summands = Vec::new();
    let mut dim = 0usize;
    loop {
        let lambda = rng.gen_range(0..=max_lambda);
        if dim + lambda as usize + 1 > max_dim {
            break;
        }
        let w: Sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        summands.push((lambda, w));
        dim += lambda as usize + 1;
        if summands.len() >= 8 || rng.gen_bool(0.25) {
            break;
        }
    }
    if summands.is_empty() {
        summands.push((0, 1));
    }
    GradedDecomposition::new(&summands).realize()
}
