//! Symplectic vector spaces with a distinguished Lagrangian, coisotropy and
//! weak coisotropy tests for linear subspaces, and sampled-point tangent
//! tests for polynomial varieties.
//!
//! Weak coisotropy of a subspace `Z` is relative to the fixed Lagrangian
//! `L`: writing `p : V -> V/L`, the condition is `p(Z^perp) <= p(Z)`. The
//! equivalent formulation `p(Z)^perp <= Z /\ L` (with `L` identified with
//! `(V/L)^*` through the symplectic form) is implemented separately so the
//! two routes can be checked against each other.

use rand::Rng;

use crate::exact::{FieldTag, Matrix, MultiPoly, Scalar, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymplecticError {
    #[error("invalid symplectic space: {0}")]
    InvalidSpace(String),
    #[error("ambient dimension mismatch: space has {space}, subspace has {subspace}")]
    Dimension { space: usize, subspace: usize },
    #[error("point is a singular point of the sampled variety (Jacobian rank {got}, expected {expected})")]
    SingularPoint { got: usize, expected: usize },
    #[error("invalid variety sample: {0}")]
    InvalidSample(String),
}

/// Even-dimensional space with a nondegenerate antisymmetric form and a
/// fixed Lagrangian subspace.
#[derive(Clone, Debug)]
pub struct SymplecticSpace {
    dim: usize,
    omega: Matrix,
    lagrangian: Subspace,
}

impl SymplecticSpace {
    pub fn new(omega: Matrix, lagrangian: Subspace) -> Result<SymplecticSpace, SymplecticError> {
        let dim = omega.rows();
        let err = |msg: &str| Err(SymplecticError::InvalidSpace(msg.to_string()));
        if !omega.is_square() {
            return err("form matrix is not square");
        }
        if !dim.is_multiple_of(2) {
            return err("dimension is odd");
        }
        if omega.transpose() != omega.neg() {
            return err("form is not antisymmetric");
        }
        if omega.rank() != dim {
            return err("form is degenerate");
        }
        if lagrangian.ambient_dim() != dim {
            return err("Lagrangian lives in the wrong ambient space");
        }
        if lagrangian.dim() != dim / 2 {
            return err("Lagrangian does not have half dimension");
        }
        let b = lagrangian.basis();
        if !b.transpose().mul(&omega).mul(b).is_zero() {
            return err("form does not vanish on the Lagrangian");
        }
        Ok(SymplecticSpace { dim, omega, lagrangian })
    }

    /// The standard structure on F^(2m): omega(e_i, e_(m+i)) = 1 and the
    /// Lagrangian spanned by the last m coordinates.
    pub fn standard(m: usize, tag: FieldTag) -> SymplecticSpace {
        let dim = 2 * m;
        let omega = Matrix::from_fn(dim, dim, tag, |i, j| {
            if j == i + m {
                Scalar::one(tag)
            } else if i == j + m {
                Scalar::from_integer(-1, tag)
            } else {
                Scalar::zero(tag)
            }
        });
        let cols: Vec<Vec<Scalar>> = (m..dim)
            .map(|i| {
                let mut v = vec![Scalar::zero(tag); dim];
                v[i] = Scalar::one(tag);
                v
            })
            .collect();
        let lagrangian = Subspace::from_column_vectors(dim, &cols, tag);
        SymplecticSpace::new(omega, lagrangian).expect("standard structure is valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tag(&self) -> FieldTag {
        self.omega.tag()
    }

    pub fn omega(&self) -> &Matrix {
        &self.omega
    }

    pub fn lagrangian(&self) -> &Subspace {
        &self.lagrangian
    }

    fn check_ambient(&self, z: &Subspace) -> Result<(), SymplecticError> {
        if z.ambient_dim() != self.dim {
            return Err(SymplecticError::Dimension { space: self.dim, subspace: z.ambient_dim() });
        }
        Ok(())
    }

    /// Orthogonal complement `{v : omega(v, z) = 0 for all z in Z}`.
    pub fn complement(&self, z: &Subspace) -> Result<Subspace, SymplecticError> {
        self.check_ambient(z)?;
        let rows = self.omega.mul(z.basis()).transpose();
        Ok(rows.kernel())
    }

    /// `Z^perp <= Z`.
    pub fn is_coisotropic(&self, z: &Subspace) -> Result<bool, SymplecticError> {
        Ok(self.complement(z)?.is_subspace_of(z))
    }

    /// `p(Z^perp) <= p(Z)` for the projection along the Lagrangian,
    /// computed as `Z^perp <= Z + L`.
    pub fn is_weakly_coisotropic(&self, z: &Subspace) -> Result<bool, SymplecticError> {
        let perp = self.complement(z)?;
        Ok(perp.is_subspace_of(&z.sum(&self.lagrangian)))
    }

    /// The second form of the weak-coisotropy condition:
    /// `p(Z)^perp <= Z /\ L`, where `p(Z)^perp` inside `L` is `L /\ Z^perp`.
    pub fn is_weakly_coisotropic_alt(&self, z: &Subspace) -> Result<bool, SymplecticError> {
        let perp = self.complement(z)?;
        let lhs = self.lagrangian.intersect(&perp);
        Ok(lhs.is_subspace_of(&z.intersect(&self.lagrangian)))
    }

    /// Keeps exactly the weakly coisotropic pieces, preserving order.
    pub fn filter_weakly_coisotropic<'a>(
        &self,
        pieces: &'a [Subspace],
    ) -> Result<Vec<&'a Subspace>, SymplecticError> {
        let mut out = Vec::new();
        for piece in pieces {
            if self.is_weakly_coisotropic(piece)? {
                out.push(piece);
            }
        }
        Ok(out)
    }
}

/// A subvariety cut by exact polynomials, known only through sampled points.
///
/// The sample certifies smoothness at a point by full Jacobian rank; the
/// library never claims anything about genericity of the stored points.
#[derive(Clone, Debug)]
pub struct PolyVarietySample {
    ambient: usize,
    polynomials: Vec<MultiPoly>,
    points: Vec<Vec<Scalar>>,
    expected_codim: usize,
}

impl PolyVarietySample {
    pub fn new(
        ambient: usize,
        polynomials: Vec<MultiPoly>,
        points: Vec<Vec<Scalar>>,
        expected_codim: usize,
    ) -> Result<PolyVarietySample, SymplecticError> {
        for p in &polynomials {
            if p.nvars() != ambient {
                return Err(SymplecticError::InvalidSample(format!(
                    "polynomial in {} variables in ambient dimension {ambient}",
                    p.nvars()
                )));
            }
        }
        for (k, point) in points.iter().enumerate() {
            if point.len() != ambient {
                return Err(SymplecticError::InvalidSample(format!(
                    "point {k} has arity {}",
                    point.len()
                )));
            }
            for (i, p) in polynomials.iter().enumerate() {
                if !p.eval(point).is_zero() {
                    return Err(SymplecticError::InvalidSample(format!(
                        "point {k} does not satisfy polynomial {i}"
                    )));
                }
            }
        }
        Ok(PolyVarietySample { ambient, polynomials, points, expected_codim })
    }

    pub fn points(&self) -> &[Vec<Scalar>] {
        &self.points
    }

    /// Kernel of the Jacobian at the point. The point must be a certified
    /// smooth point: Jacobian rank equal to the expected codimension.
    pub fn tangent_space(&self, point: &[Scalar], tag: FieldTag) -> Result<Subspace, SymplecticError> {
        assert_eq!(point.len(), self.ambient, "point arity mismatch");
        let rows = self.polynomials.len();
        let jac = Matrix::from_fn(rows, self.ambient, tag, |i, j| {
            self.polynomials[i].partial(j).eval(point)
        });
        let rank = jac.rank();
        if rank != self.expected_codim {
            return Err(SymplecticError::SingularPoint { got: rank, expected: self.expected_codim });
        }
        Ok(jac.kernel())
    }
}

/// Weak coisotropy of the tangent space at a sampled smooth point.
pub fn is_weakly_coisotropic_at(
    space: &SymplecticSpace,
    sample: &PolyVarietySample,
    point: &[Scalar],
) -> Result<bool, SymplecticError> {
    let tangent = sample.tangent_space(point, space.tag())?;
    space.is_weakly_coisotropic(&tangent)
}

/// Seeded random subspace: a small-integer matrix with a random number of
/// columns, canonicalized. Used by the property suites.
pub fn random_subspace(rng: &mut impl Rng, ambient: usize, tag: FieldTag) -> Subspace {
    let dim = rng.gen_range(0..=ambient);
    let cols: Vec<Vec<Scalar>> = (0..dim)
        .map(|_| {
            (0..ambient)
                .map(|_| Scalar::from_integer(rng.gen_range(-4..=4), tag))
                .collect()
        })
        .collect();
    Subspace::from_column_vectors(ambient, &cols, tag)
}
