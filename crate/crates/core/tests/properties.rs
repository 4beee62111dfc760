//! Property tests for the structural invariants: field axioms, subspace
//! lattice arithmetic, symplectic complements, graded duality.

use proptest::prelude::*;

use lieverify::exact::{FieldTag, Matrix, Scalar, Subspace};
use lieverify::sl2::GradedDecomposition;
use lieverify::symplectic::SymplecticSpace;

const Q: FieldTag = FieldTag::Rational;

fn rational() -> impl Strategy<Value = Scalar> {
    (-40i64..=40, 1i64..=12).prop_map(|(p, q)| Scalar::rational(p, q))
}

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(-3i64..=3, rows * cols).prop_map(move |v| {
        Matrix::from_fn(rows, cols, Q, |i, j| Scalar::from_integer(v[i * cols + j], Q))
    })
}

fn decomposition() -> impl Strategy<Value = GradedDecomposition> {
    proptest::collection::vec((0u32..=8, prop_oneof![Just(1i8), Just(-1i8)]), 1..=6)
        .prop_map(|summands| GradedDecomposition::new(&summands))
}

proptest! {
    #[test]
    fn field_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.sub(&a), Scalar::zero(Q));
        if !a.is_zero() {
            prop_assert_eq!(a.mul(&a.inv()), Scalar::one(Q));
        }
    }

    #[test]
    fn scalar_display_parse_round_trip(a in rational()) {
        prop_assert_eq!(Scalar::parse(&a.to_string(), Q).unwrap(), a);
    }

    #[test]
    fn kernel_vectors_are_killed(m in small_matrix(3, 5)) {
        let k = m.kernel();
        prop_assert_eq!(k.dim(), 5 - m.rank());
        for j in 0..k.dim() {
            let v = k.basis_column(j);
            prop_assert!(m.mul_vec(&v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn subspace_dimension_formula(a in small_matrix(4, 2), b in small_matrix(4, 3)) {
        let sa = Subspace::from_columns(&a);
        let sb = Subspace::from_columns(&b);
        let sum = sa.sum(&sb);
        let meet = sa.intersect(&sb);
        prop_assert_eq!(sa.dim() + sb.dim(), sum.dim() + meet.dim());
        prop_assert!(meet.is_subspace_of(&sa) && meet.is_subspace_of(&sb));
        prop_assert!(sa.is_subspace_of(&sum) && sb.is_subspace_of(&sum));
    }

    #[test]
    fn solve_affine_solutions_are_exact(m in small_matrix(3, 4), b in proptest::collection::vec(-3i64..=3, 3)) {
        let rhs: Vec<Scalar> = b.iter().map(|&x| Scalar::from_integer(x, Q)).collect();
        if let Some((x, hom)) = m.solve_affine(&rhs) {
            prop_assert_eq!(m.mul_vec(&x), rhs);
            for j in 0..hom.dim() {
                prop_assert!(m.mul_vec(&hom.basis_column(j)).iter().all(Scalar::is_zero));
            }
        }
    }

    #[test]
    fn symplectic_complement_involution(cols in small_matrix(6, 3)) {
        let space = SymplecticSpace::standard(3, Q);
        let z = Subspace::from_columns(&cols);
        let perp = space.complement(&z).unwrap();
        prop_assert_eq!(z.dim() + perp.dim(), 6);
        prop_assert_eq!(space.complement(&perp).unwrap(), z);
    }

    #[test]
    fn weak_coisotropy_definitions_agree(cols in small_matrix(6, 4)) {
        let space = SymplecticSpace::standard(3, Q);
        let z = Subspace::from_columns(&cols);
        prop_assert_eq!(
            space.is_weakly_coisotropic(&z).unwrap(),
            space.is_weakly_coisotropic_alt(&z).unwrap()
        );
    }

    #[test]
    fn graded_dual_is_an_involution(d in decomposition()) {
        prop_assert_eq!(d.dual().dual(), d.clone());
        prop_assert_eq!(d.dual().total_dim(), d.total_dim());
    }

    #[test]
    fn delta_identity_holds(d in decomposition()) {
        prop_assert!(d.verify_delta_identity());
    }

    #[test]
    fn closed_form_defect_matches_realized_module(d in decomposition()) {
        // Cap the dimension to keep the realized module small.
        prop_assume!(d.total_dim() <= 24);
        let module = d.realize();
        prop_assert_eq!(d.defect_closed_form().unwrap(), module.defect_definitional());
    }
}
