//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Every check is exact (zero tolerance); the runtime bounds are asserted
//! with generous margins over the measured times.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lieverify::exact::{FieldTag, Scalar};
use lieverify::keylemma::{self, KeyLemmaInstance};
use lieverify::sl2::{self, GradedDecomposition, GradedSl2Module};
use lieverify::sympair::{self, Family};
use lieverify::symplectic::{random_subspace, SymplecticSpace};

const Q: FieldTag = FieldTag::Rational;

fn conclude(criterion: &str, ok: bool, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    let verdict = if ok && elapsed <= budget { "PASS" } else { "FAIL" };
    println!(
        "acceptance {criterion}: {verdict} ({:.2?} of {:.0?} budget)",
        elapsed, budget
    );
    assert!(ok, "acceptance {criterion} failed");
    assert!(
        elapsed <= budget,
        "acceptance {criterion} exceeded its runtime budget: {elapsed:.2?} > {budget:.2?}"
    );
}

#[test]
fn criterion_1_defect_oracle_equivalence() {
    let start = Instant::now();
    let mut ok = true;
    for lambda in 0..=8 {
        for w in [1i8, -1] {
            let module = GradedSl2Module::irreducible(lambda, w);
            let closed = GradedDecomposition::new(&[(lambda, w)]).defect_closed_form().unwrap();
            ok &= closed == module.defect_definitional();
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let module = sl2::random_module(&mut rng, 8, 40);
        let closed = module.decompose().unwrap().defect_closed_form().unwrap();
        ok &= closed == module.defect_definitional();
    }
    conclude("1 defect-oracle-equivalence", ok, start, Duration::from_secs(10));
}

#[test]
fn criterion_2_duality() {
    let start = Instant::now();
    let mut ok = true;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let d = sl2::random_decomposition(&mut rng, 8, 6);
        ok &= d.dual().dual() == d;
    }
    for lambda in 0..=8 {
        for w in [1i8, -1] {
            let module = GradedSl2Module::irreducible(lambda, w);
            ok &= module.dual().decompose().unwrap() == module.decompose().unwrap().dual();
        }
    }
    conclude("2 duality", ok, start, Duration::from_secs(10));
}

#[test]
fn criterion_3_delta_identity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut ok = true;
    for _ in 0..100 {
        ok &= sl2::random_decomposition(&mut rng, 8, 6).verify_delta_identity();
    }
    conclude("3 delta-identity", ok, start, Duration::from_secs(5));
}

#[test]
fn criterion_4_distinguished_equals_regular() {
    let start = Instant::now();
    let mut ok = true;
    for n in [2usize, 3, 4] {
        let pair = sympair::catalog(Family::DiagSl { n }).unwrap();
        let regular = sympair::partition_label(&[n]);
        for (label, x) in sympair::nilpotent_representatives(&pair).unwrap() {
            let expected = label == regular;
            if pair.is_distinguished(&x).unwrap() != expected {
                println!("  mismatch at diag-sl{n} partition {label}");
                ok = false;
            }
        }
    }
    conclude("4 distinguished-equals-regular", ok, start, Duration::from_secs(30));
}

#[test]
fn criterion_5_nice_pair_sweep() {
    let start = Instant::now();
    let mut ok = true;
    let mut families: Vec<Family> = vec![Family::DiagSl { n: 2 }, Family::DiagSl { n: 3 }];
    families.extend((2..=4).map(|m| Family::SlSo { m }));
    for family in families {
        let pair = sympair::catalog(family).unwrap();
        let reps = sympair::nilpotent_representatives(&pair).unwrap();
        for (label, x) in reps {
            if !pair.is_distinguished(&x).unwrap() {
                continue;
            }
            let defect = pair.defect_of_nilpotent(&x).unwrap();
            let margin = pair.sakellaridis_margin(&x).unwrap();
            if defect >= 0 || margin <= 0 {
                println!(
                    "  {} partition {label}: defect {defect}, margin {margin}",
                    pair.name()
                );
                ok = false;
            }
        }
    }
    conclude("5 nice-pair-sweep", ok, start, Duration::from_secs(120));
}

#[test]
fn criterion_6_symplectic_properties() {
    let start = Instant::now();
    let space = SymplecticSpace::standard(4, Q);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut ok = true;
    let mut coisotropic_seen = 0usize;
    for t in 0..500 {
        let base = random_subspace(&mut rng, 8, Q);
        let z = if t % 3 == 2 { base.sum(&space.complement(&base).unwrap()) } else { base };
        let coisotropic = space.is_coisotropic(&z).unwrap();
        let weakly = space.is_weakly_coisotropic(&z).unwrap();
        if coisotropic {
            coisotropic_seen += 1;
            ok &= weakly;
        }
        if weakly {
            ok &= z.dim() >= 4;
        }
        ok &= weakly == space.is_weakly_coisotropic_alt(&z).unwrap();
    }
    ok &= coisotropic_seen > 0;
    conclude("6 symplectic-properties", ok, start, Duration::from_secs(30));
}

#[test]
fn criterion_7_keylemma_exhaustive() {
    let start = Instant::now();
    let mut ok = true;
    for n in [2usize, 3] {
        let mut counts_per_i: BTreeMap<usize, BTreeMap<u64, u64>> = BTreeMap::new();
        for p in [3u64, 5, 7] {
            let inst = KeyLemmaInstance::new(n, FieldTag::Prime(p)).unwrap();
            for i in 1..n {
                let members = keylemma::lii_members(&inst, i).unwrap();
                for pt in &members {
                    if !keylemma::f_value(&inst, i, pt).unwrap().is_zero() {
                        println!("  f nonzero at n={n}, p={p}, i={i}");
                        ok = false;
                    }
                }
                counts_per_i.entry(i).or_default().insert(p, members.len() as u64);
            }
        }
        for (i, counts) in &counts_per_i {
            match keylemma::estimate_dimension(counts) {
                Ok(estimate) => {
                    if (estimate as usize) >= 2 * n {
                        println!("  dimension estimate {estimate} >= {} at n={n}, i={i}", 2 * n);
                        ok = false;
                    }
                }
                Err(e) => {
                    println!("  dimension estimate failed at n={n}, i={i}: {e}");
                    ok = false;
                }
            }
        }
        let rational = KeyLemmaInstance::new(n, Q).unwrap();
        if !keylemma::verify_lii_filter(&rational).unwrap() {
            println!("  lattice filter survivors differ from the diagonal at n={n}");
            ok = false;
        }
        if n == 2 {
            // Independent oracle, computed before the enumeration machinery:
            // the rank-one locus {ad = bc} in F_5^4, counted by brute force.
            let mut oracle = 0u64;
            for a in 0..5i64 {
                for b in 0..5i64 {
                    for c in 0..5i64 {
                        for d in 0..5i64 {
                            if (a * d - b * c).rem_euclid(5) == 0 {
                                oracle += 1;
                            }
                        }
                    }
                }
            }
            let count = counts_per_i[&1][&5];
            if count != oracle {
                println!("  n=2 count over F_5: enumerated {count}, oracle {oracle}");
                ok = false;
            }
        }
    }
    conclude("7 keylemma-exhaustive", ok, start, Duration::from_secs(600));
}

#[test]
fn criterion_8_upper_triangular_claim() {
    let start = Instant::now();
    let mut ok = true;
    for n in 1..=4usize {
        let inst = KeyLemmaInstance::new(n, Q).unwrap();
        ok &= keylemma::verify_upper_triangular_all(&inst).unwrap();
    }
    // Spot-check a non-unit admissible matrix and the zero matrix.
    let inst = KeyLemmaInstance::new(3, Q).unwrap();
    let m = lieverify::exact::Matrix::from_fn(3, 3, Q, |i, j| {
        if i == 0 && j >= 1 {
            Scalar::from_integer(3 * j as i64 + 1, Q)
        } else {
            Scalar::zero(Q)
        }
    });
    ok &= keylemma::verify_upper_triangular_claim(&inst, &m).unwrap();
    conclude("8 upper-triangular-claim", ok, start, Duration::from_secs(10));
}
