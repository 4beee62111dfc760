//! The verification suites behind the CLI: each runs a deterministic batch
//! of checks and fills a `SuiteReport`. Identical inputs (including seeds)
//! produce identical reports.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exact::{FieldTag, Scalar};
use crate::keylemma::{self, KeyError, KeyLemmaInstance, RaTester, TripleXPoint};
use crate::report::SuiteReport;
use crate::sl2::{self, GradedSl2Module};
use crate::sympair::{self, Family, PairError, SymmetricPair};
use crate::symplectic::{random_subspace, SymplecticSpace};

const Q: FieldTag = FieldTag::Rational;

/// Graded sl2 calculus: defect oracles, duality, the delta identity.
pub fn run_sl2_suite(max_lambda: u32, trials: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("sl2", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut bad = Vec::new();
    for lambda in 0..=max_lambda {
        for w in [1i8, -1] {
            let module = GradedSl2Module::irreducible(lambda, w);
            let closed =
                sl2::GradedDecomposition::new(&[(lambda, w)]).defect_closed_form().unwrap();
            if closed != module.defect_definitional() {
                bad.push(format!("({lambda},{w})"));
            }
        }
    }
    report.record("irreducible-defect-oracle", bad.is_empty(), bad.join(", "));

    let mut witness = String::new();
    let mut ok = true;
    for _ in 0..trials {
        let module = sl2::random_module(&mut rng, max_lambda, 40);
        let decomposition = match module.decompose() {
            Ok(d) => d,
            Err(e) => {
                ok = false;
                witness = e.to_string();
                break;
            }
        };
        let closed = match decomposition.defect_closed_form() {
            Ok(v) => v,
            Err(e) => {
                ok = false;
                witness = e.to_string();
                break;
            }
        };
        if closed != module.defect_definitional() {
            ok = false;
            witness = format!(
                "{decomposition}: closed {closed}, definitional {}",
                module.defect_definitional()
            );
            break;
        }
    }
    report.record("random-sum-defect-oracle", ok, witness);

    let mut witness = String::new();
    let mut ok = true;
    for _ in 0..trials.div_ceil(2) {
        let a = sl2::random_module(&mut rng, max_lambda, 20);
        let b = sl2::random_module(&mut rng, max_lambda, 20);
        let sum = a.direct_sum(&b).defect_definitional();
        let parts = a.defect_definitional() + b.defect_definitional();
        if sum != parts {
            ok = false;
            witness = format!("direct sum defect {sum} vs parts {parts}");
            break;
        }
    }
    report.record("defect-additivity", ok, witness);

    let mut witness = String::new();
    let mut ok = true;
    for _ in 0..trials {
        let d = sl2::random_decomposition(&mut rng, max_lambda, 6);
        if d.dual().dual() != d {
            ok = false;
            witness = format!("{d}");
            break;
        }
    }
    report.record("dual-involution", ok, witness);

    let mut witness = String::new();
    let mut ok = true;
    'outer: for lambda in 0..=max_lambda {
        for w in [1i8, -1] {
            let module = GradedSl2Module::irreducible(lambda, w);
            let lhs = module.dual().decompose().unwrap();
            let rhs = module.decompose().unwrap().dual();
            if lhs != rhs {
                ok = false;
                witness = format!("({lambda},{w}): {lhs} vs {rhs}");
                break 'outer;
            }
        }
    }
    if ok {
        for _ in 0..20 {
            let module = sl2::random_module(&mut rng, max_lambda, 24);
            let lhs = module.dual().decompose().unwrap();
            let rhs = module.decompose().unwrap().dual();
            if lhs != rhs {
                ok = false;
                witness = format!("{lhs} vs {rhs}");
                break;
            }
        }
    }
    report.record("dual-model-consistency", ok, witness);

    let mut witness = String::new();
    let mut ok = true;
    for _ in 0..trials {
        let d = sl2::random_decomposition(&mut rng, max_lambda.min(8), 6);
        if !d.verify_delta_identity() {
            ok = false;
            witness = format!("{d}");
            break;
        }
    }
    report.record("delta-identity", ok, witness);

    let mut bad = Vec::new();
    for lambda in 0..=max_lambda {
        for w in [1i8, -1] {
            let d = GradedSl2Module::irreducible(lambda, w).decompose().unwrap();
            if d != sl2::GradedDecomposition::new(&[(lambda, w)]) {
                bad.push(format!("({lambda},{w})"));
            }
        }
    }
    report.record("decompose-build-roundtrip", bad.is_empty(), bad.join(", "));

    report
}

/// Linear symplectic properties on seeded random subspaces.
pub fn run_symplectic_suite(dim: usize, trials: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("symplectic", seed);
    assert!(dim >= 2 && dim.is_multiple_of(2), "symplectic dimension must be even and positive");
    let m = dim / 2;
    let space = SymplecticSpace::standard(m, Q);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut subspaces = Vec::with_capacity(trials);
    for t in 0..trials {
        let base = random_subspace(&mut rng, dim, Q);
        // Every third subspace is coisotropic by construction (Z + Z^perp),
        // so the implication checks are not vacuous.
        if t % 3 == 2 {
            let perp = space.complement(&base).unwrap();
            subspaces.push(base.sum(&perp));
        } else {
            subspaces.push(base);
        }
    }

    let mut double_ok = true;
    let mut dim_ok = true;
    let mut imply_ok = true;
    let mut bound_ok = true;
    let mut agree_ok = true;
    let mut witness: [String; 5] = std::array::from_fn(|_| String::new());
    let mut coisotropic_seen = 0usize;
    let mut weakly_seen = 0usize;
    for z in &subspaces {
        let perp = space.complement(z).unwrap();
        if &space.complement(&perp).unwrap() != z && double_ok {
            double_ok = false;
            witness[0] = format!("Z = {}", z.basis());
        }
        if z.dim() + perp.dim() != dim && dim_ok {
            dim_ok = false;
            witness[1] = format!("Z = {}", z.basis());
        }
        let coisotropic = space.is_coisotropic(z).unwrap();
        let weakly = space.is_weakly_coisotropic(z).unwrap();
        if coisotropic {
            coisotropic_seen += 1;
            if !weakly && imply_ok {
                imply_ok = false;
                witness[2] = format!("Z = {}", z.basis());
            }
        }
        if weakly {
            weakly_seen += 1;
            if z.dim() < m && bound_ok {
                bound_ok = false;
                witness[3] = format!("Z = {} (dim {})", z.basis(), z.dim());
            }
        }
        if weakly != space.is_weakly_coisotropic_alt(z).unwrap() && agree_ok {
            agree_ok = false;
            witness[4] = format!("Z = {}", z.basis());
        }
    }
    report.record("double-complement", double_ok, witness[0].clone());
    report.record("complement-dimension", dim_ok, witness[1].clone());
    report.record("coisotropic-implies-weakly", imply_ok, witness[2].clone());
    report.record("weak-dimension-bound", bound_ok, witness[3].clone());
    report.record("weak-definitions-agree", agree_ok, witness[4].clone());
    let sample_note = format!("coisotropic {coisotropic_seen}, weakly {weakly_seen}");
    if coisotropic_seen > 0 && weakly_seen > 0 {
        report.pass_with("non-vacuous-sample", sample_note);
    } else {
        report.fail("non-vacuous-sample", sample_note);
    }
    report.record(
        "lagrangian-weakly-coisotropic",
        space.is_weakly_coisotropic(space.lagrangian()).unwrap(),
        String::new(),
    );
    report
}

fn rep_witness(rows: &[sympair::RepVerdict]) -> String {
    rows.iter()
        .map(|r| {
            let mut s = format!(
                "{}: {}",
                r.label,
                if r.distinguished { "distinguished" } else { "not-distinguished" }
            );
            if let Some(d) = r.defect {
                s.push_str(&format!(" defect={d}"));
            }
            if let Some(m) = r.margin {
                s.push_str(&format!(" margin={m}"));
            }
            s
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Structural checks plus the distinguished/defect sweep for one pair.
pub fn run_pair_suite(pair: &SymmetricPair) -> SuiteReport {
    let mut report = SuiteReport::new(format!("pair:{}", pair.name()), 0);
    report.pass_with(
        "pair-invariants",
        format!(
            "dim g = {}, dim h = {}, dim gsigma = {}",
            pair.dim(),
            pair.h_dim(),
            pair.gsigma_dim()
        ),
    );

    let reps = match sympair::nilpotent_representatives(pair) {
        Ok(reps) => reps,
        Err(PairError::UnsupportedFamily(f)) => {
            report.skip(
                "representatives",
                format!("no representative table for {f}; structural checks only"),
            );
            return report;
        }
        Err(e) => {
            report.fail("representatives", e.to_string());
            return report;
        }
    };
    report.pass_with("representatives", format!("{} partition representatives", reps.len()));

    match pair.check_negative_distinguished_defect(&reps) {
        Ok((rows, pass)) => {
            // The verdict rows are the content of this suite; carry them as
            // the witness on pass as well so reports are self-contained.
            let witness = rep_witness(&rows);
            let put = |report: &mut SuiteReport, name: &str, ok: bool| {
                if ok {
                    report.pass_with(name, witness.clone());
                } else {
                    report.fail(name, witness.clone());
                }
            };
            put(&mut report, "distinguished-defects-negative", pass);
            let margins_ok = rows
                .iter()
                .filter(|r| r.distinguished)
                .all(|r| r.margin.is_some_and(|m| m > 0));
            put(&mut report, "sakellaridis-margin-positive", margins_ok);
            if let Some(Family::DiagSl { n }) = pair.family() {
                let regular = sympair::partition_label(&[n]);
                let exact = rows.iter().all(|r| r.distinguished == (r.label == regular));
                put(&mut report, "distinguished-equals-regular", exact);
            }
        }
        Err(e) => report.fail("distinguished-defects-negative", e.to_string()),
    }

    // Adjoint modules are self-dual through the trace form; check the
    // decomposition-level consequences on each nonzero representative.
    let mut ok = true;
    let mut witness = String::new();
    for (label, x) in reps.iter().filter(|(_, x)| !x.is_zero()) {
        match (pair.adjoint_decomposition(x), pair.sakellaridis_margin(x), pair.defect_of_nilpotent(x)) {
            (Ok(d), Ok(margin), Ok(defect)) => {
                let self_dual = d.dual() == d;
                let identity = d.verify_delta_identity();
                let margin_delta = margin == d.delta();
                let margin_defect = margin == -defect;
                if !(self_dual && identity && margin_delta && margin_defect) {
                    ok = false;
                    witness = format!("{label}: {d} margin={margin} defect={defect}");
                    break;
                }
            }
            _ => {
                ok = false;
                witness = format!("{label}: adjoint computation failed");
                break;
            }
        }
    }
    report.record("adjoint-self-duality", ok, witness);
    report
}

/// Pair suite for a catalog family given by CLI name and size.
pub fn run_pair_family_suite(family: &str, size: usize) -> Result<SuiteReport, PairError> {
    let fam = Family::parse(family, size)?;
    let pair = sympair::catalog(fam)?;
    Ok(run_pair_suite(&pair))
}

/// Pair suite for a user-supplied JSON pair.
pub fn run_pair_json_suite(text: &str) -> Result<SuiteReport, PairError> {
    let pair = sympair::pair_from_json(text)?;
    Ok(run_pair_suite(&pair))
}

/// Enumeration, dimension estimation, lattice filter and the
/// upper-triangular claim for one block size over the given primes.
pub fn run_keylemma_suite(n: usize, primes: &[u64]) -> Result<SuiteReport, KeyError> {
    let mut report = SuiteReport::new(format!("keylemma:n{n}"), 0);
    let mut primes = primes.to_vec();
    primes.sort_unstable();
    primes.dedup();

    for i in 1..n {
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        for &p in &primes {
            let inst = KeyLemmaInstance::new(n, FieldTag::Prime(p))?;
            let members = keylemma::lii_members(&inst, i)?;
            let mut violations = Vec::new();
            for pt in &members {
                let value = keylemma::f_value(&inst, i, pt)?;
                if !value.is_zero() {
                    violations.push(format!(
                        "f = {value} at ({})",
                        pt.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
                    ));
                }
            }
            counts.insert(p, members.len() as u64);
            report.record(
                format!("f-vanishes-i{i}-p{p}"),
                violations.is_empty(),
                violations.join("; "),
            );
        }
        let count_text = counts
            .iter()
            .map(|(p, c)| format!("p={p}:{c}"))
            .collect::<Vec<_>>()
            .join(", ");
        if counts.len() >= 3 {
            match keylemma::estimate_dimension(&counts) {
                Ok(estimate) if (estimate as usize) < 2 * n => report.pass_with(
                    format!("dimension-estimate-i{i}"),
                    format!("counts {count_text}; estimate {estimate} < {}", 2 * n),
                ),
                Ok(estimate) => report.fail(
                    format!("dimension-estimate-i{i}"),
                    format!("counts {count_text}; estimate {estimate} not below {}", 2 * n),
                ),
                Err(e) => report.fail(format!("dimension-estimate-i{i}"), e.to_string()),
            }
        } else {
            report.skip(
                format!("dimension-estimate-i{i}"),
                format!("need at least 3 primes, got {} ({count_text})", counts.len()),
            );
        }
        if n == 2 && counts.contains_key(&5) {
            // Independent oracle: brute-force count of the rank-one locus
            // {ad = bc} over F_5^4.
            let mut oracle = 0u64;
            for code in 0..5u64.pow(4) {
                let digits: Vec<i64> =
                    (0..4).map(|k| ((code / 5u64.pow(k)) % 5) as i64).collect();
                if (digits[0] * digits[3] - digits[1] * digits[2]).rem_euclid(5) == 0 {
                    oracle += 1;
                }
            }
            let got = counts[&5];
            report.record(
                "count-oracle-p5",
                got == oracle,
                format!("enumerated {got}, oracle {oracle}"),
            );
        }
    }

    let rational = KeyLemmaInstance::new(n, Q)?;
    report.record(
        "lii-filter-survivors",
        keylemma::verify_lii_filter(&rational)?,
        "survivors differ from the diagonal pieces".to_string(),
    );
    report.record(
        "upper-triangular-claim",
        keylemma::verify_upper_triangular_all(&rational)?,
        "a solution of [A,B] = M is not upper triangular".to_string(),
    );

    report.record(
        "s-invariant-agreement",
        s_invariant_agreement(n)?,
        "membership in S disagrees with invariant vanishing".to_string(),
    );

    if n == 2 {
        if let Some(&p) = primes.first() {
            let (ok, detail) = ra_inside_lattice(n, p)?;
            report.record(format!("ra-inside-lattice-p{p}"), ok, detail);
        }
    }
    Ok(report)
}

/// Membership in S coincides with vanishing of the invariant list
/// phi(A^i v), tr(A^k): exhaustively over F_3 for n = 2, on seeded random
/// rational points for n = 3 (power-sum vanishing needs p > n, so small
/// prime fields are not probed there).
fn s_invariant_agreement(n: usize) -> Result<bool, KeyError> {
    use rand::Rng;
    match n {
        2 => {
            let fp = FieldTag::Prime(3);
            for code in 0..3u64.pow(7) {
                let digit = |k: u32| ((code / 3u64.pow(k)) % 3) as i64;
                let mat = traceless2(digit(0), digit(1), digit(2), fp);
                let v = vec![Scalar::from_integer(digit(3), fp), Scalar::from_integer(digit(4), fp)];
                let phi =
                    vec![Scalar::from_integer(digit(5), fp), Scalar::from_integer(digit(6), fp)];
                let pt = TripleXPoint::new(mat, v, phi)?;
                let vanish = keylemma::s_invariants(&pt).iter().all(Scalar::is_zero);
                if keylemma::in_s(&pt) != vanish {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        3 => {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..1500 {
                let mut entries: Vec<i64> = (0..8).map(|_| rng.gen_range(-2..=2)).collect();
                // Force some nilpotent-looking samples so both branches of
                // the equivalence are exercised.
                if rng.gen_bool(0.3) {
                    entries = vec![0, entries[1], entries[2], 0, 0, entries[5], 0, 0];
                }
                let a = crate::exact::Matrix::from_fn(3, 3, Q, |i, j| {
                    let idx = 3 * i + j;
                    if idx < 8 {
                        Scalar::from_integer(entries[idx], Q)
                    } else {
                        // Trace-zero completion.
                        Scalar::from_integer(-(entries[0] + entries[4]), Q)
                    }
                });
                let v: Vec<Scalar> =
                    (0..3).map(|_| Scalar::from_integer(rng.gen_range(-2..=2), Q)).collect();
                let phi: Vec<Scalar> =
                    (0..3).map(|_| Scalar::from_integer(rng.gen_range(-2..=2), Q)).collect();
                let pt = TripleXPoint::new(a, v, phi)?;
                let vanish = keylemma::s_invariants(&pt).iter().all(Scalar::is_zero);
                if keylemma::in_s(&pt) != vanish {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => Ok(true),
    }
}

fn traceless2(a: i64, b: i64, c: i64, tag: FieldTag) -> crate::exact::Matrix {
    crate::exact::Matrix::from_fn(2, 2, tag, |i, j| match (i, j) {
        (0, 0) => Scalar::from_integer(a, tag),
        (0, 1) => Scalar::from_integer(b, tag),
        (1, 0) => Scalar::from_integer(c, tag),
        _ => Scalar::from_integer(-a, tag),
    })
}

/// Sweeps all of (V x V*)^2 over F_p and checks that every member of the
/// fiber variety lies in one of the lattice pieces with 1 <= i, j <= n-1.
fn ra_inside_lattice(n: usize, p: u64) -> Result<(bool, String), KeyError> {
    let inst = KeyLemmaInstance::new(n, FieldTag::Prime(p))?;
    let tester = RaTester::new(&inst);
    let tag = inst.tag();
    let mut pieces = Vec::new();
    for i in 1..n {
        for j in 1..n {
            pieces.push(keylemma::lattice_lij(&inst, i, j)?);
        }
    }
    let total = p.pow(4 * n as u32);
    let mut members = 0u64;
    for code in 0..total {
        let coord = |k: u32| {
            let c = (code / p.pow(k)) % p;
            Scalar::from_integer(c as i64, tag)
        };
        let pt: Vec<Scalar> = (0..4 * n as u32).map(coord).collect();
        let m = tester.decide(&pt[..n], &pt[n..2 * n], &pt[2 * n..3 * n], &pt[3 * n..]);
        if m.is_member() {
            members += 1;
            if !pieces.iter().any(|piece| piece.contains(&pt)) {
                return Ok((
                    false,
                    format!(
                        "member outside the lattice: ({})",
                        pt.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
                    ),
                ));
            }
        }
    }
    Ok((true, format!("{members} members over F_{p} all inside the lattice")))
}

/// Runs every suite in a fixed order with a single seed.
pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    let mut reports = Vec::new();
    reports.push(run_sl2_suite(8, 100, seed));
    reports.push(run_symplectic_suite(8, 500, seed));
    for n in [2usize, 3, 4] {
        let pair = sympair::catalog(Family::DiagSl { n }).expect("catalog pair");
        reports.push(run_pair_suite(&pair));
    }
    for m in [2usize, 3, 4] {
        let pair = sympair::catalog(Family::SlSo { m }).expect("catalog pair");
        reports.push(run_pair_suite(&pair));
    }
    for n in [2usize, 3] {
        reports.push(run_keylemma_suite(n, &[3, 5, 7]).expect("keylemma suite"));
    }
    reports
}
