//! Cross-module consistency: the quadric slice of the fiber variety against
//! the sampled-point symplectic tests, the full-space lattice sweep, and the
//! margin/delta/defect identities on catalog pairs.

use lieverify::exact::{FieldTag, Matrix, MultiPoly, Scalar, Subspace};
use lieverify::keylemma::{self, KeyLemmaInstance, RaTester};
use lieverify::sympair::{self, Family};
use lieverify::symplectic::{is_weakly_coisotropic_at, PolyVarietySample, SymplecticSpace};

const Q: FieldTag = FieldTag::Rational;

fn qi(x: i64) -> Scalar {
    Scalar::from_integer(x, Q)
}

/// The internal symplectic structure of the diagonal lattice piece for
/// n = 2: base (a, b), fiber (c, d), pairing B((a,b),(a',b')) = ab' + a'b.
fn l11_internal_structure() -> SymplecticSpace {
    let g = Matrix::from_i64(&[&[0, 1], &[1, 0]], Q);
    let omega = Matrix::from_fn(4, 4, Q, |i, j| {
        if i < 2 && j >= 2 {
            g.at(i, j - 2).neg()
        } else if i >= 2 && j < 2 {
            g.at(i - 2, j).clone()
        } else {
            Scalar::zero(Q)
        }
    });
    let fiber = Subspace::from_column_vectors(
        4,
        &[vec![qi(0), qi(0), qi(1), qi(0)], vec![qi(0), qi(0), qi(0), qi(1)]],
        Q,
    );
    SymplecticSpace::new(omega, fiber).unwrap()
}

#[test]
fn quadric_slice_matches_sampled_tangent_tests() {
    // Inside the diagonal lattice piece for n = 2, membership of
    // (a e1, b eps2, c e1, d eps2) in the fiber variety is exactly the
    // quadric ad - bc = 0.
    let inst = KeyLemmaInstance::new(2, Q).unwrap();
    let tester = RaTester::new(&inst);
    let on_quadric = |a: i64, b: i64, c: i64, d: i64| {
        let v1 = vec![qi(a), qi(0)];
        let phi1 = vec![qi(0), qi(b)];
        let v2 = vec![qi(c), qi(0)];
        let phi2 = vec![qi(0), qi(d)];
        tester.decide(&v1, &phi1, &v2, &phi2).is_member()
    };
    for (a, b, c, d) in [(1, 1, 1, 1), (1, 2, 2, 4), (2, 3, 4, 6), (1, 0, 3, 0)] {
        assert_eq!(a * d - b * c, 0, "test points lie on the quadric");
        assert!(on_quadric(a, b, c, d));
    }
    assert!(!on_quadric(1, 1, 2, 3));

    // The same quadric as a sampled polynomial variety in the internal
    // coordinates (a, b, c, d) of the lattice piece: the membership test at
    // a smooth point reduces to the linear test on the tangent plane.
    let space = l11_internal_structure();
    let poly = MultiPoly::new(
        4,
        vec![(vec![1, 0, 0, 1], Scalar::one(Q)), (vec![0, 1, 1, 0], qi(-1))],
        Q,
    );
    let points: Vec<Vec<Scalar>> = [(1i64, 1, 1, 1), (1, 2, 2, 4), (2, 3, 4, 6)]
        .iter()
        .map(|&(a, b, c, d)| vec![qi(a), qi(b), qi(c), qi(d)])
        .collect();
    let sample = PolyVarietySample::new(4, vec![poly], points.clone(), 1).unwrap();
    for point in &points {
        let tangent = sample.tangent_space(point, Q).unwrap();
        assert_eq!(
            is_weakly_coisotropic_at(&space, &sample, point).unwrap(),
            space.is_weakly_coisotropic(&tangent).unwrap()
        );
    }
}

#[test]
fn fiber_variety_members_stay_inside_the_lattice_n3() {
    // Sweep all of (V x V*)^2 over F_3 for n = 3 and check that every member
    // of the fiber variety lies in a lattice piece with 1 <= i, j <= 2.
    let n = 3usize;
    let p = 3u64;
    let tag = FieldTag::Prime(p);
    let inst = KeyLemmaInstance::new(n, tag).unwrap();
    let tester = RaTester::new(&inst);
    let mut pieces = Vec::new();
    for i in 1..n {
        for j in 1..n {
            pieces.push(keylemma::lattice_lij(&inst, i, j).unwrap());
        }
    }
    let total = p.pow(4 * n as u32);
    let mut members = 0u64;
    for code in 0..total {
        let pt: Vec<Scalar> = (0..4 * n as u32)
            .map(|k| Scalar::from_integer(((code / p.pow(k)) % p) as i64, tag))
            .collect();
        if tester.decide(&pt[..n], &pt[n..2 * n], &pt[2 * n..3 * n], &pt[3 * n..]).is_member() {
            members += 1;
            assert!(
                pieces.iter().any(|piece| piece.contains(&pt)),
                "member escapes the lattice: {pt:?}"
            );
        }
    }
    assert!(members > 0);
}

#[test]
fn margin_delta_defect_identities_across_catalog() {
    // margin = delta of the adjoint decomposition = -defect, and the
    // decomposition is self-dual, for every nonzero representative.
    let families = [
        Family::DiagSl { n: 2 },
        Family::DiagSl { n: 3 },
        Family::SlSo { m: 2 },
        Family::SlSo { m: 3 },
    ];
    for family in families {
        let pair = sympair::catalog(family).unwrap();
        for (label, x) in sympair::nilpotent_representatives(&pair).unwrap() {
            if x.is_zero() {
                continue;
            }
            let d = pair.adjoint_decomposition(&x).unwrap();
            let margin = pair.sakellaridis_margin(&x).unwrap();
            let defect = pair.defect_of_nilpotent(&x).unwrap();
            assert_eq!(margin, d.delta(), "{} {label}", pair.name());
            assert_eq!(d.dual(), d, "{} {label}", pair.name());
            assert!(d.verify_delta_identity(), "{} {label}", pair.name());
            assert_eq!(margin, -defect, "{} {label}", pair.name());
            assert_eq!(d.defect_closed_form().unwrap(), defect, "{} {label}", pair.name());
        }
    }
}

#[test]
fn keylemma_membership_agrees_between_q_and_fp_on_lattice_points() {
    // Rational points of the diagonal piece decide membership the same way
    // as their reductions mod 5 (entries kept in 0..5 so reduction is exact).
    let q_inst = KeyLemmaInstance::new(2, Q).unwrap();
    let f_inst = KeyLemmaInstance::new(2, FieldTag::Prime(5)).unwrap();
    let q_tester = RaTester::new(&q_inst);
    let f_tester = RaTester::new(&f_inst);
    let fp = FieldTag::Prime(5);
    for code in 0..5u64.pow(4) {
        let digits: Vec<i64> = (0..4).map(|k| ((code / 5u64.pow(k)) % 5) as i64).collect();
        let (a, b, c, d) = (digits[0], digits[1], digits[2], digits[3]);
        let rational = q_tester
            .decide(
                &[qi(a), qi(0)],
                &[qi(0), qi(b)],
                &[qi(c), qi(0)],
                &[qi(0), qi(d)],
            )
            .is_member();
        let modular = f_tester
            .decide(
                &[Scalar::from_integer(a, fp), Scalar::from_integer(0, fp)],
                &[Scalar::from_integer(0, fp), Scalar::from_integer(b, fp)],
                &[Scalar::from_integer(c, fp), Scalar::from_integer(0, fp)],
                &[Scalar::from_integer(0, fp), Scalar::from_integer(d, fp)],
            )
            .is_member();
        // Membership over Q implies membership mod p; the converse can fail
        // (5 | ad - bc without ad = bc), so only one direction is asserted,
        // plus exact agreement with the quadric on both sides.
        assert_eq!(rational, a * d - b * c == 0);
        assert_eq!(modular, (a * d - b * c).rem_euclid(5) == 0);
        if rational {
            assert!(modular);
        }
    }
}
