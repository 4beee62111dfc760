//! Linear subspaces in canonical form.
//!
//! A subspace is stored by a basis in reduced column echelon form, so two
//! equal subspaces have literally identical representations and `==` is
//! subspace equality.

use super::matrix::Matrix;
use super::scalar::{FieldTag, Scalar};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient: usize,
    /// `ambient x dim` matrix whose columns are the canonical basis.
    basis: Matrix,
    tag: FieldTag,
}

impl Subspace {
    /// Builds the span of the given columns and canonicalizes.
    pub fn from_columns(cols: &Matrix) -> Subspace {
        let ambient = cols.rows();
        let tag = cols.tag();
        // Reduced column echelon form = transposed RREF of the transpose.
        let mut t = cols.transpose();
        let pivots = t.rref();
        let dim = pivots.len();
        let basis = Matrix::from_fn(ambient, dim, tag, |i, j| t.at(j, i).clone());
        Subspace { ambient, basis, tag }
    }

    pub fn from_column_vectors(ambient: usize, cols: &[Vec<Scalar>], tag: FieldTag) -> Subspace {
        let m = Matrix::from_fn(ambient, cols.len(), tag, |i, j| cols[j][i].clone());
        Subspace::from_columns(&m)
    }

    pub fn zero(ambient: usize, tag: FieldTag) -> Subspace {
        Subspace::from_columns(&Matrix::zero(ambient, 0, tag))
    }

    pub fn full(ambient: usize, tag: FieldTag) -> Subspace {
        Subspace::from_columns(&Matrix::identity(ambient, tag))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn tag(&self) -> FieldTag {
        self.tag
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_column(&self, j: usize) -> Vec<Scalar> {
        (0..self.ambient).map(|i| self.basis.at(i, j).clone()).collect()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient, "ambient dimension mismatch");
        if v.iter().all(Scalar::is_zero) {
            return true;
        }
        self.basis.solve_affine(v).is_some()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        (0..self.dim()).all(|j| other.contains(&self.basis_column(j)))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        let m = Matrix::from_fn(self.ambient, self.dim() + other.dim(), self.tag, |i, j| {
            if j < self.dim() {
                self.basis.at(i, j).clone()
            } else {
                other.basis.at(i, j - self.dim()).clone()
            }
        });
        Subspace::from_columns(&m)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        // Kernel vectors (x, y) of [A B] satisfy Ax = -By; the intersection
        // is spanned by the Ax.
        let da = self.dim();
        let joint = Matrix::from_fn(self.ambient, da + other.dim(), self.tag, |i, j| {
            if j < da {
                self.basis.at(i, j).clone()
            } else {
                other.basis.at(i, j - da).clone()
            }
        });
        let ker = joint.kernel();
        let mut cols = Vec::new();
        for k in 0..ker.dim() {
            let rel = ker.basis_column(k);
            let x: Vec<Scalar> = rel[..da].to_vec();
            cols.push(self.basis.mul_vec(&x));
        }
        Subspace::from_column_vectors(self.ambient, &cols, self.tag)
    }

    /// Cartesian-product embedding: `self` in coordinates `[offset, offset+ambient)`
    /// of a larger space. Used to assemble product subspaces.
    pub fn embed(&self, total: usize, offset: usize) -> Subspace {
        assert!(offset + self.ambient <= total);
        let m = Matrix::from_fn(total, self.dim(), self.tag, |i, j| {
            if i >= offset && i < offset + self.ambient {
                self.basis.at(i - offset, j).clone()
            } else {
                Scalar::zero(self.tag)
            }
        });
        Subspace::from_columns(&m)
    }

    /// Product of subspaces of possibly different ambient spaces, in order.
    pub fn product(parts: &[&Subspace], tag: FieldTag) -> Subspace {
        let total: usize = parts.iter().map(|s| s.ambient).sum();
        let mut acc = Subspace::zero(total, tag);
        let mut offset = 0;
        for part in parts {
            acc = acc.sum(&part.embed(total, offset));
            offset += part.ambient;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldTag {
        FieldTag::Rational
    }

    #[test]
    fn canonical_form_makes_equality_representation_equality() {
        let a = Matrix::from_i64(&[&[1, 2], &[1, 0], &[0, 1]], q());
        let b = Matrix::from_i64(&[&[3, 2], &[1, 2], &[1, -1]], q());
        // Same span, different generating sets.
        let sa = Subspace::from_columns(&a);
        let sb = Subspace::from_columns(&b);
        assert_eq!(sa.dim(), 2);
        assert!(sa.is_subspace_of(&sb) == sb.is_subspace_of(&sa));
        if sa.is_subspace_of(&sb) && sb.is_subspace_of(&sa) {
            assert_eq!(sa, sb);
        }
    }

    #[test]
    fn sum_and_intersection() {
        let e1 = Subspace::from_column_vectors(
            3,
            &[vec![Scalar::one(q()), Scalar::zero(q()), Scalar::zero(q())]],
            q(),
        );
        let plane = Subspace::from_columns(&Matrix::from_i64(&[&[1, 0], &[0, 1], &[0, 0]], q()));
        assert!(e1.is_subspace_of(&plane));
        assert_eq!(e1.sum(&plane), plane);
        assert_eq!(e1.intersect(&plane), e1);
        let e3 = Subspace::from_column_vectors(
            3,
            &[vec![Scalar::zero(q()), Scalar::zero(q()), Scalar::one(q())]],
            q(),
        );
        assert_eq!(e3.intersect(&plane).dim(), 0);
        assert_eq!(e3.sum(&plane), Subspace::full(3, q()));
    }

    #[test]
    fn kernel_basis_is_killed_exactly() {
        let m = Matrix::from_i64(&[&[1, 2, 3], &[4, 5, 6]], q());
        let k = m.kernel();
        for j in 0..k.dim() {
            let v = k.basis_column(j);
            assert!(m.mul_vec(&v).iter().all(Scalar::is_zero));
        }
        assert_eq!(k.dim(), 3 - m.rank());
    }

    #[test]
    fn product_embedding() {
        let line = Subspace::from_column_vectors(2, &[vec![Scalar::one(q()), Scalar::zero(q())]], q());
        let prod = Subspace::product(&[&line, &line], q());
        assert_eq!(prod.ambient_dim(), 4);
        assert_eq!(prod.dim(), 2);
        assert!(prod.contains(&[
            Scalar::one(q()),
            Scalar::zero(q()),
            Scalar::from_integer(5, q()),
            Scalar::zero(q())
        ]));
    }
}
