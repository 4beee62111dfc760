//! The incidence geometry over a fixed nilpotent Jordan block on
//! X = sl(V) x V x V*: membership tests for the invariant-cut sets S, S',
//! their doubled versions, the fiber variety R_A with its kernel-product
//! lattice L_ij, the coordinate polynomial f, finite-field point counting
//! with dimension estimation, and the upper-triangular commutator claim.
//!
//! Membership in R_A quantifies existentially over a second matrix; over a
//! prime field the affine solution coset is enumerated exhaustively, which
//! makes the finite-field backend the decision procedure of record. Over Q
//! the same question is answered by a diagonal refutation plus a small-integer
//! grid search and may come back undecided.

use std::collections::BTreeMap;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::exact::{ExactError, FieldTag, Matrix, PreparedSolver, Scalar, Subspace};
use crate::symplectic::{SymplecticError, SymplecticSpace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KeyError {
    #[error("unsupported instance: {0}")]
    Unsupported(String),
    #[error("membership over Q is undecided (no witness found, no refutation applies)")]
    Undecided,
    #[error("dimension estimate inconclusive: {0}")]
    Inconclusive(String),
    #[error("no matrix B solves [A, B] = M")]
    InconsistentSystem,
    #[error("matrix is not of the block shape (zero outside a top-right i x (n-i) block)")]
    BadShape,
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
}

/// X = sl(V) x V x V* for V of dimension n over Q or F_p, together with the
/// full nilpotent Jordan block A.
#[derive(Clone, Debug)]
pub struct KeyLemmaInstance {
    n: usize,
    tag: FieldTag,
    a: Matrix,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl KeyLemmaInstance {
    pub fn new(n: usize, tag: FieldTag) -> Result<KeyLemmaInstance, KeyError> {
        if n == 0 {
            return Err(KeyError::Unsupported("n must be positive".into()));
        }
        if let FieldTag::Prime(p) = tag {
            if !is_prime(p) {
                return Err(KeyError::Unsupported(format!("{p} is not prime")));
            }
            if p == 2 {
                return Err(KeyError::Unsupported("p = 2 is not supported".into()));
            }
        }
        let mut a = Matrix::zero(n, n, tag);
        for i in 0..n - 1 {
            a.set(i, i + 1, Scalar::one(tag));
        }
        Ok(KeyLemmaInstance { n, tag, a })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tag(&self) -> FieldTag {
        self.tag
    }

    /// The full Jordan block.
    pub fn a(&self) -> &Matrix {
        &self.a
    }
}

/// A point (A, v, phi) of X; the matrix must be traceless.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleXPoint {
    pub a: Matrix,
    pub v: Vec<Scalar>,
    pub phi: Vec<Scalar>,
}

impl TripleXPoint {
    pub fn new(a: Matrix, v: Vec<Scalar>, phi: Vec<Scalar>) -> Result<TripleXPoint, KeyError> {
        if !a.is_square() || a.rows() != v.len() || v.len() != phi.len() {
            return Err(KeyError::Unsupported("point components have mismatched sizes".into()));
        }
        if !a.trace().is_zero() {
            return Err(KeyError::Unsupported("matrix component must be traceless".into()));
        }
        Ok(TripleXPoint { a, v, phi })
    }
}

fn pairing(phi: &[Scalar], v: &[Scalar], tag: FieldTag) -> Scalar {
    let mut acc = Scalar::zero(tag);
    for (p, x) in phi.iter().zip(v.iter()) {
        if !p.is_zero() && !x.is_zero() {
            acc = acc.add(&p.mul(x));
        }
    }
    acc
}

/// S: A^n = 0 and phi(A^i v) = 0 for all 0 <= i <= n.
pub fn in_s(pt: &TripleXPoint) -> bool {
    let n = pt.v.len();
    let tag = pt.a.tag();
    if !pt.a.pow(n).is_zero() {
        return false;
    }
    let mut w = pt.v.clone();
    for _ in 0..=n {
        if !pairing(&pt.phi, &w, tag).is_zero() {
            return false;
        }
        w = pt.a.mul_vec(&w);
    }
    true
}

/// S': S plus A^(n-1) v = 0 and (A^*)^(n-1) phi = 0.
pub fn in_s_prime(pt: &TripleXPoint) -> bool {
    if !in_s(pt) {
        return false;
    }
    let n = pt.v.len();
    let power = pt.a.pow(n - 1);
    if !power.mul_vec(&pt.v).iter().all(Scalar::is_zero) {
        return false;
    }
    // (A^*)^(n-1) phi = phi composed with A^(n-1).
    power.transpose().mul_vec(&pt.phi).iter().all(Scalar::is_zero)
}

/// The doubled condition: all four cross memberships (A_i, v_j, phi_j) in S
/// together with [A_1, A_2] + v_1 (x) phi_2 - v_2 (x) phi_1 = 0.
pub fn in_s_check(p1: &TripleXPoint, p2: &TripleXPoint) -> bool {
    cross_membership(p1, p2, in_s) && commutator_identity(p1, p2)
}

/// The primed doubled condition: cross memberships in S' plus the identity.
pub fn in_s_check_prime(p1: &TripleXPoint, p2: &TripleXPoint) -> bool {
    cross_membership(p1, p2, in_s_prime) && commutator_identity(p1, p2)
}

fn cross_membership(p1: &TripleXPoint, p2: &TripleXPoint, test: fn(&TripleXPoint) -> bool) -> bool {
    for a in [&p1.a, &p2.a] {
        for (v, phi) in [(&p1.v, &p1.phi), (&p2.v, &p2.phi)] {
            let pt = TripleXPoint { a: a.clone(), v: v.clone(), phi: phi.clone() };
            if !test(&pt) {
                return false;
            }
        }
    }
    true
}

fn commutator_identity(p1: &TripleXPoint, p2: &TripleXPoint) -> bool {
    let tag = p1.a.tag();
    let lhs = p1
        .a
        .bracket(&p2.a)
        .add(&Matrix::outer(&p1.v, &p2.phi, tag))
        .sub(&Matrix::outer(&p2.v, &p1.phi, tag));
    lhs.is_zero()
}

/// Outcome of the R_A membership search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RaMembership {
    /// A witness matrix A_2 completing the point into the doubled variety.
    Member(Matrix),
    NotMember,
    /// Only possible over Q.
    Undecided,
}

impl RaMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, RaMembership::Member(_))
    }
}

/// Solver-backed membership tester for the fiber variety R_A.
///
/// R_A consists of the (v1, phi1, v2, phi2) for which some traceless A_2
/// completes ((A, v1, phi1), (A_2, v2, phi2)) into the primed doubled
/// variety. The linear part [A, A_2] = v2 (x) phi1 - v1 (x) phi2 together
/// with tr A_2 = 0 is factored once; membership enumerates the solution
/// coset (exhaustively over F_p).
pub struct RaTester {
    inst: KeyLemmaInstance,
    solver: PreparedSolver,
    kernel: Vec<Matrix>,
}

impl RaTester {
    pub fn new(inst: &KeyLemmaInstance) -> RaTester {
        let n = inst.n;
        let tag = inst.tag;
        let nn = n * n;
        // Columns indexed by the entries of A_2; rows are the n^2 entries of
        // [A, A_2] followed by the trace.
        let coeff = Matrix::from_fn(nn + 1, nn, tag, |r, c| {
            let (i, j) = (c / n, c % n);
            if r < nn {
                let unit = Matrix::from_fn(n, n, tag, |a, b| {
                    if (a, b) == (i, j) {
                        Scalar::one(tag)
                    } else {
                        Scalar::zero(tag)
                    }
                });
                inst.a.bracket(&unit).vectorize()[r].clone()
            } else if i == j {
                Scalar::one(tag)
            } else {
                Scalar::zero(tag)
            }
        });
        let solver = PreparedSolver::new(&coeff);
        let kernel = solver
            .kernel_basis()
            .iter()
            .map(|k| Matrix::from_vectorized(n, n, k.clone(), tag))
            .collect();
        RaTester { inst: inst.clone(), solver, kernel }
    }

    fn conditions_hold(&self, a2: &Matrix, v: &[Scalar], phi: &[Scalar]) -> bool {
        let pt = TripleXPoint { a: a2.clone(), v: v.to_vec(), phi: phi.to_vec() };
        in_s_prime(&pt)
    }

    /// Decides membership of (v1, phi1, v2, phi2) in R_A.
    pub fn decide(
        &self,
        v1: &[Scalar],
        phi1: &[Scalar],
        v2: &[Scalar],
        phi2: &[Scalar],
    ) -> RaMembership {
        let n = self.inst.n;
        let tag = self.inst.tag;
        // The fixed-block conditions do not involve A_2.
        let fixed1 = TripleXPoint { a: self.inst.a.clone(), v: v1.to_vec(), phi: phi1.to_vec() };
        let fixed2 = TripleXPoint { a: self.inst.a.clone(), v: v2.to_vec(), phi: phi2.to_vec() };
        if !in_s_prime(&fixed1) || !in_s_prime(&fixed2) {
            return RaMembership::NotMember;
        }
        let rhs_mat = Matrix::outer(v2, phi1, tag).sub(&Matrix::outer(v1, phi2, tag));
        let mut rhs = rhs_mat.vectorize();
        rhs.push(Scalar::zero(tag));
        let Some(particular) = self.solver.solve(&rhs) else {
            return RaMembership::NotMember;
        };
        let particular = Matrix::from_vectorized(n, n, particular, tag);
        match tag {
            FieldTag::Prime(p) => {
                // Exhaustive scan of the affine coset.
                let k = self.kernel.len();
                let total = p.pow(k as u32);
                for mut idx in 0..total {
                    let mut cand = particular.clone();
                    for kern in &self.kernel {
                        let c = idx % p;
                        idx /= p;
                        if c != 0 {
                            cand = cand.add(&kern.scale(&Scalar::from_integer(c as i64, tag)));
                        }
                    }
                    if cand.pow(n).is_zero()
                        && self.conditions_hold(&cand, v1, phi1)
                        && self.conditions_hold(&cand, v2, phi2)
                    {
                        return RaMembership::Member(cand);
                    }
                }
                RaMembership::NotMember
            }
            FieldTag::Rational => self.decide_rational(&particular, v1, phi1, v2, phi2),
        }
    }

    /// Over Q the coset is infinite. When every homogeneous solution is
    /// strictly upper triangular and the particular solution is upper
    /// triangular, all solutions share one diagonal: a nonzero diagonal
    /// refutes membership outright, a zero one makes every candidate
    /// nilpotent and leaves a small-integer grid search over the kernel.
    fn decide_rational(
        &self,
        particular: &Matrix,
        v1: &[Scalar],
        phi1: &[Scalar],
        v2: &[Scalar],
        phi2: &[Scalar],
    ) -> RaMembership {
        let n = self.inst.n;
        let strictly_upper = |m: &Matrix| (0..n).all(|i| (0..=i).all(|j| m.at(i, j).is_zero()));
        let upper = |m: &Matrix| (0..n).all(|i| (0..i).all(|j| m.at(i, j).is_zero()));
        let shortcut = self.kernel.iter().all(strictly_upper) && upper(particular);
        if shortcut {
            let diag_zero = (0..n).all(|i| particular.at(i, i).is_zero());
            if !diag_zero {
                return RaMembership::NotMember;
            }
        }
        // Grid search over kernel coefficients in {-2,...,2}, zero first.
        let k = self.kernel.len();
        let width = 5u64;
        let total = width.pow(k as u32);
        let mut order: Vec<u64> = (0..total).collect();
        order.sort_by_key(|&idx| {
            let mut idx = idx;
            let mut weight = 0u64;
            for _ in 0..k {
                let c = (idx % width) as i64 - 2;
                idx /= width;
                weight += c.unsigned_abs();
            }
            weight
        });
        for mut idx in order {
            let mut cand = particular.clone();
            for kern in &self.kernel {
                let c = (idx % width) as i64 - 2;
                idx /= width;
                if c != 0 {
                    cand = cand.add(&kern.scale(&Scalar::from_integer(c, FieldTag::Rational)));
                }
            }
            if cand.pow(n).is_zero()
                && self.conditions_hold(&cand, v1, phi1)
                && self.conditions_hold(&cand, v2, phi2)
            {
                return RaMembership::Member(cand);
            }
        }
        RaMembership::Undecided
    }
}

/// Membership of (v1, phi1, v2, phi2) in R_A; see `RaTester`.
pub fn in_ra(
    inst: &KeyLemmaInstance,
    v1: &[Scalar],
    phi1: &[Scalar],
    v2: &[Scalar],
    phi2: &[Scalar],
) -> RaMembership {
    RaTester::new(inst).decide(v1, phi1, v2, phi2)
}

// ---------------------------------------------------------------------------
// The kernel-product lattice
// ---------------------------------------------------------------------------

/// L_ij = Ker A^i x Ker (A^*)^(n-i) x Ker A^j x Ker (A^*)^(n-j) inside
/// (V x V*) x (V x V*); dimension 2n for every (i, j).
pub fn lattice_lij(inst: &KeyLemmaInstance, i: usize, j: usize) -> Result<Subspace, KeyError> {
    let n = inst.n;
    if i > n || j > n {
        return Err(KeyError::Unsupported(format!("lattice index ({i}, {j}) out of range")));
    }
    let ker_a = |k: usize| inst.a.pow(k).kernel();
    let ker_dual = |k: usize| inst.a.transpose().pow(k).kernel();
    Ok(Subspace::product(
        &[&ker_a(i), &ker_dual(n - i), &ker_a(j), &ker_dual(n - j)],
        inst.tag,
    ))
}

/// f(v1, phi1, v2, phi2) = (v1)_i (phi2)_(i+1) - (v2)_i (phi1)_(i+1) in
/// 1-based coordinates, on a full 4n-coordinate point.
pub fn f_value(inst: &KeyLemmaInstance, i: usize, point: &[Scalar]) -> Result<Scalar, KeyError> {
    let n = inst.n;
    if i == 0 || i >= n {
        return Err(KeyError::Unsupported(format!("f is defined for 1 <= i <= n-1, got {i}")));
    }
    if point.len() != 4 * n {
        return Err(KeyError::Unsupported("point must have 4n coordinates".into()));
    }
    let v1_i = &point[i - 1];
    let phi2_i1 = &point[3 * n + i];
    let v2_i = &point[2 * n + i - 1];
    let phi1_i1 = &point[n + i];
    Ok(v1_i.mul(phi2_i1).sub(&v2_i.mul(phi1_i1)))
}

// ---------------------------------------------------------------------------
// Finite-field enumeration of R_A inside L_ii
// ---------------------------------------------------------------------------

/// Enumeration context for the points of L_ii over F_p. Coordinates run over
/// the 2n free slots (i for v1, n-i for phi1, i for v2, n-i for phi2); the
/// linear index varies the first slot fastest.
struct LiiGrid {
    n: usize,
    i: usize,
    p: u64,
}

impl LiiGrid {
    fn total(&self) -> u64 {
        self.p.pow(2 * self.n as u32)
    }

    /// The full 4n-coordinate point for a linear index.
    fn point(&self, mut idx: u64, tag: FieldTag) -> Vec<Scalar> {
        let (n, i, p) = (self.n, self.i, self.p);
        let mut coords = vec![Scalar::zero(tag); 4 * n];
        // v1 in Ker A^i: first i coordinates free.
        let mut slot = |len: usize, offset: usize, start: usize, coords: &mut Vec<Scalar>| {
            for t in 0..len {
                let c = idx % p;
                idx /= p;
                if c != 0 {
                    coords[offset + start + t] = Scalar::from_integer(c as i64, tag);
                }
            }
        };
        slot(i, 0, 0, &mut coords); // v1
        slot(n - i, n, i, &mut coords); // phi1 supported past index i
        slot(i, 2 * n, 0, &mut coords); // v2
        slot(n - i, 3 * n, i, &mut coords); // phi2
        coords
    }
}

fn check_enumerable(inst: &KeyLemmaInstance, i: usize) -> Result<u64, KeyError> {
    let FieldTag::Prime(p) = inst.tag else {
        return Err(KeyError::Unsupported("enumeration needs a prime field".into()));
    };
    if inst.n > 3 || p > 7 {
        return Err(KeyError::Unsupported(format!(
            "enumeration supports n <= 3 and p <= 7, got n = {}, p = {p}",
            inst.n
        )));
    }
    if i == 0 || i >= inst.n {
        return Err(KeyError::Unsupported(format!("1 <= i <= n-1 required, got {i}")));
    }
    Ok(p)
}

/// The members of R_A inside L_ii over F_p, as full 4n-coordinate points in
/// deterministic (linear-index) order. Sequential version.
pub fn lii_members_seq(inst: &KeyLemmaInstance, i: usize) -> Result<Vec<Vec<Scalar>>, KeyError> {
    let p = check_enumerable(inst, i)?;
    let grid = LiiGrid { n: inst.n, i, p };
    let tester = RaTester::new(inst);
    let tag = inst.tag;
    let n = inst.n;
    let mut out = Vec::new();
    for idx in 0..grid.total() {
        let pt = grid.point(idx, tag);
        if tester.decide(&pt[..n], &pt[n..2 * n], &pt[2 * n..3 * n], &pt[3 * n..]).is_member() {
            out.push(pt);
        }
    }
    Ok(out)
}

/// Parallel version of `lii_members_seq`; identical output order.
#[cfg(feature = "parallel")]
pub fn lii_members_par(inst: &KeyLemmaInstance, i: usize) -> Result<Vec<Vec<Scalar>>, KeyError> {
    let p = check_enumerable(inst, i)?;
    let grid = LiiGrid { n: inst.n, i, p };
    let tester = RaTester::new(inst);
    let tag = inst.tag;
    let n = inst.n;
    let out: Vec<Vec<Scalar>> = (0..grid.total())
        .into_par_iter()
        .filter_map(|idx| {
            let pt = grid.point(idx, tag);
            tester
                .decide(&pt[..n], &pt[n..2 * n], &pt[2 * n..3 * n], &pt[3 * n..])
                .is_member()
                .then_some(pt)
        })
        .collect();
    Ok(out)
}

/// Members of R_A inside L_ii over F_p, in deterministic order.
pub fn lii_members(inst: &KeyLemmaInstance, i: usize) -> Result<Vec<Vec<Scalar>>, KeyError> {
    #[cfg(feature = "parallel")]
    {
        lii_members_par(inst, i)
    }
    #[cfg(not(feature = "parallel"))]
    {
        lii_members_seq(inst, i)
    }
}

/// True iff f vanishes on every enumerated member of R_A inside L_ii.
pub fn verify_f_vanishes(inst: &KeyLemmaInstance, i: usize) -> Result<bool, KeyError> {
    let members = lii_members(inst, i)?;
    for m in &members {
        if !f_value(inst, i, m)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Point-count slope estimate: round(log count / log p) must agree across
/// all supplied primes (at least three). Disagreement is surfaced, never
/// averaged.
pub fn estimate_dimension(counts: &BTreeMap<u64, u64>) -> Result<u32, KeyError> {
    if counts.len() < 3 {
        return Err(KeyError::Inconclusive(format!(
            "need counts for at least 3 primes, got {}",
            counts.len()
        )));
    }
    let mut estimate: Option<i64> = None;
    for (&p, &count) in counts {
        if count == 0 {
            return Err(KeyError::Inconclusive(format!("zero count for p = {p}")));
        }
        let slope = ((count as f64).ln() / (p as f64).ln()).round() as i64;
        match estimate {
            None => estimate = Some(slope),
            Some(prev) if prev != slope => {
                return Err(KeyError::Inconclusive(format!(
                    "slope {prev} vs {slope} at p = {p}"
                )));
            }
            _ => {}
        }
    }
    Ok(estimate.unwrap() as u32)
}

// ---------------------------------------------------------------------------
// The symplectic structure on (V x V*) x (V x V*)
// ---------------------------------------------------------------------------

/// The cotangent-style symplectic structure: base z = (v1, phi1), fiber
/// y = (v2, phi2), omega((z,y),(z',y')) = B(y,z') - B(y',z) for the standard
/// pairing B on V x V*, with the fiber as the fixed Lagrangian.
pub fn symplectic_structure(inst: &KeyLemmaInstance) -> SymplecticSpace {
    let n = inst.n;
    let tag = inst.tag;
    let dim = 4 * n;
    // B on V x V*: B((v,phi),(v',phi')) = phi'(v) + phi(v').
    let g = Matrix::from_fn(2 * n, 2 * n, tag, |i, j| {
        if i + n == j || j + n == i {
            Scalar::one(tag)
        } else {
            Scalar::zero(tag)
        }
    });
    let omega = Matrix::from_fn(dim, dim, tag, |i, j| {
        if i < 2 * n && j >= 2 * n {
            g.at(i, j - 2 * n).neg()
        } else if i >= 2 * n && j < 2 * n {
            g.at(i - 2 * n, j).clone()
        } else {
            Scalar::zero(tag)
        }
    });
    let fiber_cols: Vec<Vec<Scalar>> = (2 * n..dim)
        .map(|k| {
            let mut v = vec![Scalar::zero(tag); dim];
            v[k] = Scalar::one(tag);
            v
        })
        .collect();
    let lagrangian = Subspace::from_column_vectors(dim, &fiber_cols, tag);
    SymplecticSpace::new(omega, lagrangian).expect("cotangent structure is symplectic")
}

/// Filters the lattice pieces of Q_A x Q_A (indices 1..n-1 in both slots)
/// through the weak-coisotropy test and checks that the survivors are
/// exactly the diagonal pieces L_ii.
pub fn verify_lii_filter(inst: &KeyLemmaInstance) -> Result<bool, KeyError> {
    let n = inst.n;
    let space = symplectic_structure(inst);
    let mut pieces = Vec::new();
    let mut labels = Vec::new();
    for i in 1..n {
        for j in 1..n {
            pieces.push(lattice_lij(inst, i, j)?);
            labels.push((i, j));
        }
    }
    let survivors = space.filter_weakly_coisotropic(&pieces)?;
    let survivor_labels: Vec<(usize, usize)> = labels
        .iter()
        .zip(pieces.iter())
        .filter(|(_, piece)| survivors.iter().any(|s| std::ptr::eq(*s, *piece)))
        .map(|(l, _)| *l)
        .collect();
    let expected: Vec<(usize, usize)> = (1..n).map(|i| (i, i)).collect();
    Ok(survivor_labels == expected)
}

// ---------------------------------------------------------------------------
// The upper-triangular commutator claim
// ---------------------------------------------------------------------------

/// Checks that M vanishes outside a top-right i x (n-i) block for some
/// 1 <= i <= n-1 (the zero matrix qualifies).
fn admissible_shape(n: usize, m: &Matrix) -> bool {
    let mut max_row = None;
    let mut min_col = None;
    for r in 0..n {
        for c in 0..n {
            if !m.at(r, c).is_zero() {
                max_row = Some(max_row.map_or(r, |x: usize| x.max(r)));
                min_col = Some(min_col.map_or(c, |x: usize| x.min(c)));
            }
        }
    }
    match (max_row, min_col) {
        (None, None) => n >= 2,
        (Some(r), Some(c)) => {
            // Need i with r < i <= c and 1 <= i <= n-1.
            let lo = r + 1;
            let hi = c.min(n - 1);
            lo <= hi
        }
        _ => unreachable!(),
    }
}

/// Solves [A, B] = M and reports whether every solution is upper triangular
/// (one particular solution is, and the homogeneous solutions, the
/// polynomials in A, are). M must have the admissible block shape.
pub fn verify_upper_triangular_claim(
    inst: &KeyLemmaInstance,
    m: &Matrix,
) -> Result<bool, KeyError> {
    let n = inst.n;
    if !m.is_square() || m.rows() != n {
        return Err(KeyError::Unsupported("matrix size mismatch".into()));
    }
    if !admissible_shape(n, m) {
        return Err(KeyError::BadShape);
    }
    let tag = inst.tag;
    let nn = n * n;
    let coeff = Matrix::from_fn(nn, nn, tag, |r, c| {
        let (i, j) = (c / n, c % n);
        let unit = Matrix::from_fn(n, n, tag, |a, b| {
            if (a, b) == (i, j) {
                Scalar::one(tag)
            } else {
                Scalar::zero(tag)
            }
        });
        inst.a.bracket(&unit).vectorize()[r].clone()
    });
    let Some((particular, homogeneous)) = coeff.solve_affine(&m.vectorize()) else {
        return Err(KeyError::InconsistentSystem);
    };
    let upper = |mat: &Matrix| (0..n).all(|i| (0..i).all(|j| mat.at(i, j).is_zero()));
    if !upper(&Matrix::from_vectorized(n, n, particular, tag)) {
        return Ok(false);
    }
    for k in 0..homogeneous.dim() {
        let z = Matrix::from_vectorized(n, n, homogeneous.basis_column(k), tag);
        if !upper(&z) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The claim for every admissible block shape at once: by linearity it
/// suffices to check the homogeneous solutions and one unit matrix per
/// admissible position.
pub fn verify_upper_triangular_all(inst: &KeyLemmaInstance) -> Result<bool, KeyError> {
    let n = inst.n;
    if n < 2 {
        return Ok(true);
    }
    let tag = inst.tag;
    if !verify_upper_triangular_claim(inst, &Matrix::zero(n, n, tag))? {
        return Ok(false);
    }
    for i in 1..n {
        for r in 0..i {
            for c in i..n {
                let mut m = Matrix::zero(n, n, tag);
                m.set(r, c, Scalar::one(tag));
                if !verify_upper_triangular_claim(inst, &m)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The invariant list whose vanishing cuts out S: phi(A^i v) for
/// 0 <= i <= n-1 together with tr(A^k) for 2 <= k <= n.
pub fn s_invariants(pt: &TripleXPoint) -> Vec<Scalar> {
    let n = pt.v.len();
    let tag = pt.a.tag();
    let mut out = Vec::new();
    let mut w = pt.v.clone();
    for _ in 0..n {
        out.push(pairing(&pt.phi, &w, tag));
        w = pt.a.mul_vec(&w);
    }
    for k in 2..=n {
        out.push(pt.a.pow(k).trace());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldTag = FieldTag::Rational;

    fn qi(x: i64) -> Scalar {
        Scalar::from_integer(x, Q)
    }

    fn vec_i64(xs: &[i64], tag: FieldTag) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::from_integer(x, tag)).collect()
    }

    fn point(a: &[&[i64]], v: &[i64], phi: &[i64]) -> TripleXPoint {
        TripleXPoint::new(Matrix::from_i64(a, Q), vec_i64(v, Q), vec_i64(phi, Q)).unwrap()
    }

    #[test]
    fn s_membership_examples() {
        assert!(in_s(&point(&[&[0, 0], &[0, 0]], &[0, 0], &[0, 0])));
        assert!(in_s(&point(&[&[0, 1], &[0, 0]], &[1, 0], &[0, 1])));
        assert!(!in_s(&point(&[&[0, 1], &[0, 0]], &[0, 1], &[1, 0])));
        // Non-nilpotent matrix component.
        assert!(!in_s(&point(&[&[1, 0], &[0, -1]], &[0, 0], &[0, 0])));
    }

    #[test]
    fn s_prime_membership_examples() {
        assert!(in_s_prime(&point(&[&[0, 0], &[0, 0]], &[0, 0], &[0, 0])));
        assert!(in_s_prime(&point(&[&[0, 1], &[0, 0]], &[1, 0], &[0, 1])));
        assert!(!in_s_prime(&point(&[&[0, 1], &[0, 0]], &[0, 1], &[0, 1])));
    }

    #[test]
    fn s_check_examples() {
        let zero = point(&[&[0, 0], &[0, 0]], &[0, 0], &[0, 0]);
        assert!(in_s_check(&zero, &zero));
        let p1 = point(&[&[0, 1], &[0, 0]], &[1, 0], &[0, 1]);
        let p2 = point(&[&[0, 3], &[0, 0]], &[1, 0], &[0, 1]);
        assert!(in_s_check(&p1, &p2));
        let p3 = point(&[&[0, 0], &[0, 0]], &[1, 0], &[1, 0]);
        assert!(!in_s_check(&p1, &p3));
    }

    #[test]
    fn ra_membership_on_the_rank_one_slice_over_q() {
        let inst = KeyLemmaInstance::new(2, Q).unwrap();
        let tester = RaTester::new(&inst);
        let quadric = |a: i64, b: i64, c: i64, d: i64| {
            tester.decide(&vec_i64(&[a, 0], Q), &vec_i64(&[0, b], Q), &vec_i64(&[c, 0], Q), &vec_i64(&[0, d], Q))
        };
        assert!(quadric(0, 0, 0, 0).is_member());
        assert!(quadric(1, 2, 1, 2).is_member());
        assert_eq!(quadric(2, 3, 1, 0), RaMembership::NotMember);
        assert_eq!(quadric(1, 1, 0, 1), RaMembership::NotMember);
        assert!(quadric(2, 3, 4, 6).is_member());
    }

    #[test]
    fn ra_membership_matches_quadric_exhaustively_over_f3() {
        let inst = KeyLemmaInstance::new(2, FieldTag::Prime(3)).unwrap();
        let tester = RaTester::new(&inst);
        let fp = FieldTag::Prime(3);
        for a in 0..3i64 {
            for b in 0..3i64 {
                for c in 0..3i64 {
                    for d in 0..3i64 {
                        let got = tester
                            .decide(
                                &vec_i64(&[a, 0], fp),
                                &vec_i64(&[0, b], fp),
                                &vec_i64(&[c, 0], fp),
                                &vec_i64(&[0, d], fp),
                            )
                            .is_member();
                        let expected = (a * d - b * c).rem_euclid(3) == 0;
                        assert_eq!(got, expected, "at ({a},{b},{c},{d})");
                    }
                }
            }
        }
    }

    #[test]
    fn lattice_examples() {
        let inst = KeyLemmaInstance::new(2, Q).unwrap();
        for i in 0..=2 {
            for j in 0..=2 {
                assert_eq!(lattice_lij(&inst, i, j).unwrap().dim(), 4);
            }
        }
        let l11 = lattice_lij(&inst, 1, 1).unwrap();
        assert!(l11.contains(&vec_i64(&[1, 0, 0, 1, 2, 0, 0, 5], Q)));
        assert!(!l11.contains(&vec_i64(&[0, 1, 0, 0, 0, 0, 0, 0], Q)));
        // L_00 = 0 x V* x 0 x V*.
        let l00 = lattice_lij(&inst, 0, 0).unwrap();
        assert!(l00.contains(&vec_i64(&[0, 0, 1, 1, 0, 0, 1, 1], Q)));
        assert!(!l00.contains(&vec_i64(&[1, 0, 0, 0, 0, 0, 0, 0], Q)));
    }

    #[test]
    fn f_value_examples() {
        let inst = KeyLemmaInstance::new(2, Q).unwrap();
        // (a e1, b eps2, c e1, d eps2) -> ad - cb.
        let pt = vec_i64(&[3, 0, 0, 5, 7, 0, 0, 11], Q);
        assert_eq!(f_value(&inst, 1, &pt).unwrap(), qi(3 * 11 - 7 * 5));
        assert!(f_value(&inst, 1, &vec![qi(0); 8]).unwrap().is_zero());

        let inst = KeyLemmaInstance::new(3, Q).unwrap();
        let mut pt = vec![qi(0); 12];
        pt[0] = qi(1); // v1 = e1
        pt[10] = qi(1); // phi2 = eps2
        assert_eq!(f_value(&inst, 1, &pt).unwrap(), qi(1));
    }

    #[test]
    fn member_count_matches_rank_one_oracle_for_n2_p3() {
        let inst = KeyLemmaInstance::new(2, FieldTag::Prime(3)).unwrap();
        let members = lii_members(&inst, 1).unwrap();
        // Independent oracle: brute-force count of {ad = bc} over F_3^4.
        let mut oracle = 0u64;
        for a in 0..3i64 {
            for b in 0..3i64 {
                for c in 0..3i64 {
                    for d in 0..3i64 {
                        if (a * d - b * c).rem_euclid(3) == 0 {
                            oracle += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(members.len() as u64, oracle);
        assert_eq!(oracle, 27 + 9 - 3);
        assert!(verify_f_vanishes(&inst, 1).unwrap());
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_and_sequential_enumeration_agree() {
        let inst = KeyLemmaInstance::new(2, FieldTag::Prime(5)).unwrap();
        assert_eq!(lii_members_seq(&inst, 1).unwrap(), lii_members_par(&inst, 1).unwrap());
    }

    #[test]
    fn dimension_estimates() {
        let counts: BTreeMap<u64, u64> = [(3, 27), (5, 125), (7, 343)].into();
        assert_eq!(estimate_dimension(&counts).unwrap(), 3);
        let counts: BTreeMap<u64, u64> = [(3, 33), (5, 145), (7, 385)].into();
        assert_eq!(estimate_dimension(&counts).unwrap(), 3);
        let constant: BTreeMap<u64, u64> = [(3, 1), (5, 1), (7, 1)].into();
        assert_eq!(estimate_dimension(&constant).unwrap(), 0);
        let few: BTreeMap<u64, u64> = [(3, 27), (5, 125)].into();
        assert!(matches!(estimate_dimension(&few), Err(KeyError::Inconclusive(_))));
        let off: BTreeMap<u64, u64> = [(3, 81), (5, 125), (7, 343)].into();
        assert!(matches!(estimate_dimension(&off), Err(KeyError::Inconclusive(_))));
    }

    #[test]
    fn lii_filter_survivors() {
        for (n, expected) in [(1usize, true), (2, true), (3, true)] {
            let inst = KeyLemmaInstance::new(n, Q).unwrap();
            assert_eq!(verify_lii_filter(&inst).unwrap(), expected, "n = {n}");
        }
        // Direct checks behind the filter for n = 3.
        let inst = KeyLemmaInstance::new(3, Q).unwrap();
        let space = symplectic_structure(&inst);
        let l11 = lattice_lij(&inst, 1, 1).unwrap();
        let l12 = lattice_lij(&inst, 1, 2).unwrap();
        let l22 = lattice_lij(&inst, 2, 2).unwrap();
        assert!(space.is_weakly_coisotropic(&l11).unwrap());
        assert!(space.is_weakly_coisotropic(&l22).unwrap());
        assert!(!space.is_weakly_coisotropic(&l12).unwrap());
    }

    #[test]
    fn upper_triangular_claim() {
        let inst = KeyLemmaInstance::new(2, Q).unwrap();
        let m = Matrix::from_i64(&[&[0, 5], &[0, 0]], Q);
        assert!(verify_upper_triangular_claim(&inst, &m).unwrap());
        assert!(verify_upper_triangular_claim(&inst, &Matrix::zero(2, 2, Q)).unwrap());
        let bad = Matrix::from_i64(&[&[0, 0], &[1, 0]], Q);
        assert!(matches!(verify_upper_triangular_claim(&inst, &bad), Err(KeyError::BadShape)));

        for n in 2..=4 {
            let inst = KeyLemmaInstance::new(n, Q).unwrap();
            assert!(verify_upper_triangular_all(&inst).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn s_matches_invariant_vanishing_exhaustively_for_n2_f3() {
        let fp = FieldTag::Prime(3);
        for code in 0..3u64.pow(7) {
            let mut c = code;
            let mut next = || {
                let v = (c % 3) as i64;
                c /= 3;
                v
            };
            let (a, b, cc) = (next(), next(), next());
            let v = vec_i64(&[next(), next()], fp);
            let phi = vec_i64(&[next(), next()], fp);
            let mat = Matrix::from_fn(2, 2, fp, |i, j| match (i, j) {
                (0, 0) => Scalar::from_integer(a, fp),
                (0, 1) => Scalar::from_integer(b, fp),
                (1, 0) => Scalar::from_integer(cc, fp),
                _ => Scalar::from_integer(-a, fp),
            });
            let pt = TripleXPoint::new(mat, v, phi).unwrap();
            let invariants_vanish = s_invariants(&pt).iter().all(Scalar::is_zero);
            assert_eq!(in_s(&pt), invariants_vanish);
        }
    }

    #[test]
    fn instance_validation() {
        assert!(KeyLemmaInstance::new(0, Q).is_err());
        assert!(KeyLemmaInstance::new(2, FieldTag::Prime(4)).is_err());
        assert!(KeyLemmaInstance::new(2, FieldTag::Prime(2)).is_err());
        let inst = KeyLemmaInstance::new(3, FieldTag::Prime(5)).unwrap();
        assert!(inst.a().pow(3).is_zero());
        assert!(!inst.a().pow(2).is_zero());
    }
}
