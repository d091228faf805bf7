//! The intertwiner category of tensor powers of a finite matrix group's
//! defining representation `π`, with its symmetry and conjugates, and the
//! membership tests that compare the normalizer `NG` with the group
//! recovered from the intertwiners.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::unitary::{kron_power, nullspace, random_matrix, range_basis, vstack, CMatrix, FiniteMatrixGroup, Tolerance};

/// Largest `d^{r+s}` for which dense intertwiner spaces are computed.
pub const SIZE_CAP: usize = 4096;
/// Largest `d^{r+s}` for which flips are built as index permutations.
pub const PERMUTATION_CAP: usize = 1 << 22;
pub const DEFAULT_RMAX: usize = 3;
/// Averaging is used while `|G|·d^{r+s}` stays at or below this.
pub const AVERAGING_THRESHOLD: usize = 1 << 20;

const SAMPLE_SEED: u64 = 0x7a11;

fn power(d: usize, k: usize, cap: usize) -> Result<usize> {
    match u32::try_from(k).ok().and_then(|k| d.checked_pow(k)) {
        Some(n) if n <= cap => Ok(n),
        Some(n) => Err(Error::SizeCapExceeded { size: n, cap }),
        None => Err(Error::SizeCapExceeded { size: usize::MAX, cap }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntertwinerMethod {
    /// Range of the group-averaging projector.
    Averaging,
    /// Joint kernel of the generator constraints.
    Nullspace,
    /// Averaging below [`AVERAGING_THRESHOLD`], nullspace above.
    Auto,
}

/// Orthonormal basis of `(π^r, π^s)`: maps `t` of size `d^s × d^r` with
/// `u^{⊗s}·t = t·u^{⊗r}` for all `u ∈ G`.
#[derive(Clone, Debug)]
pub struct IntertwinerSpace {
    pub r: usize,
    pub s: usize,
    pub d: usize,
    pub basis: Vec<CMatrix>,
}

impl IntertwinerSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Distance from `t` to this space in Frobenius norm.
    pub fn distance_to(&self, t: &CMatrix) -> f64 {
        let mut rest = t.clone();
        for b in &self.basis {
            rest = &rest - &b.scale(b.hs_inner(t));
        }
        rest.norm()
    }
}

/// `(1/|G|) Σ_g g^{⊗s}·t·(g^{⊗r})†`, the projection onto `(π^r, π^s)`.
pub fn average(group: &FiniteMatrixGroup, r: usize, s: usize, t: &CMatrix) -> CMatrix {
    let mut acc = CMatrix::zeros(t.rows(), t.cols());
    for g in group.elements() {
        acc = &acc + &(&(&kron_power(g, s) * t) * &kron_power(g, r).adjoint());
    }
    acc.scale(crate::unitary::c(1.0 / group.order() as f64, 0.0))
}

/// `dim (π^r, π^s) = (1/|G|) Σ_g tr(g)^s·conj(tr(g))^r`, the trace of [`average`].
pub fn character_dimension(group: &FiniteMatrixGroup, r: usize, s: usize) -> f64 {
    let total: crate::unitary::C64 = group
        .elements()
        .iter()
        .map(|g| {
            let x = g.trace();
            x.powu(s as u32) * x.conj().powu(r as u32)
        })
        .sum();
    total.re / group.order() as f64
}

pub fn intertwiner_basis(group: &FiniteMatrixGroup, r: usize, s: usize, tol: Tolerance) -> Result<IntertwinerSpace> {
    intertwiner_basis_with(group, r, s, IntertwinerMethod::Auto, tol)
}

pub fn intertwiner_basis_with(
    group: &FiniteMatrixGroup,
    r: usize,
    s: usize,
    method: IntertwinerMethod,
    tol: Tolerance,
) -> Result<IntertwinerSpace> {
    let d = group.dim();
    let n = power(d, r + s, SIZE_CAP)?;
    let use_averaging = match method {
        IntertwinerMethod::Averaging => true,
        IntertwinerMethod::Nullspace => false,
        IntertwinerMethod::Auto => group.order().saturating_mul(n) <= AVERAGING_THRESHOLD,
    };
    if use_averaging {
        if let Some(basis) = averaged_basis(group, r, s, tol) {
            return Ok(IntertwinerSpace { r, s, d, basis });
        }
    }
    Ok(IntertwinerSpace { r, s, d, basis: constrained_basis(group, r, s, tol)? })
}

/// Range of the averaging projector, sampled at `k + 2` random inputs where
/// `k` is its trace. `None` when the sampled rank disagrees with `k`.
fn averaged_basis(group: &FiniteMatrixGroup, r: usize, s: usize, tol: Tolerance) -> Option<Vec<CMatrix>> {
    let d = group.dim();
    let k_real = character_dimension(group, r, s);
    let k = k_real.round();
    if (k_real - k).abs() > 1e-6 || k < 0.0 {
        return None;
    }
    let k = k as usize;
    let (rows, cols) = (d.pow(s as u32), d.pow(r as u32));
    if k == 0 {
        return Some(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let samples: Vec<CMatrix> = (0..k + 2).map(|_| average(group, r, s, &random_matrix(rows, cols, &mut rng)).vectorize()).collect();
    let basis = range_basis(&samples, tol.scaled(1e3));
    if basis.len() != k {
        return None;
    }
    basis.iter().map(|v| CMatrix::unvectorize(v, rows, cols).ok()).collect()
}

fn constrained_basis(group: &FiniteMatrixGroup, r: usize, s: usize, tol: Tolerance) -> Result<Vec<CMatrix>> {
    let d = group.dim();
    let (rows, cols) = (d.pow(s as u32), d.pow(r as u32));
    // vec(U_s·t − t·U_r) = (I ⊗ U_s − U_rᵀ ⊗ I) vec t, column-major
    let blocks: Vec<CMatrix> = group
        .generating_set()
        .iter()
        .map(|g| {
            let us = kron_power(g, s);
            let ur = kron_power(g, r);
            &CMatrix::identity(cols).kron(&us) - &ur.transpose().kron(&CMatrix::identity(rows))
        })
        .collect();
    let system = vstack(&blocks)?;
    nullspace(&system, tol).iter().map(|v| CMatrix::unvectorize(v, rows, cols)).collect()
}

/// All spaces `(π^r, π^s)` with `r, s ≤ rmax` that fit under [`SIZE_CAP`].
#[derive(Clone, Debug)]
pub struct IntertwinerCategory {
    pub rmax: usize,
    pub spaces: Vec<IntertwinerSpace>,
    /// `(r, s)` pairs left out by the size cap.
    pub skipped: Vec<(usize, usize)>,
}

impl IntertwinerCategory {
    pub fn new(group: &FiniteMatrixGroup, rmax: usize, tol: Tolerance) -> Result<Self> {
        let mut spaces = Vec::new();
        let mut skipped = Vec::new();
        for r in 0..=rmax {
            for s in 0..=rmax {
                match intertwiner_basis(group, r, s, tol) {
                    Ok(space) => spaces.push(space),
                    Err(Error::SizeCapExceeded { .. }) => skipped.push((r, s)),
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(IntertwinerCategory { rmax, spaces, skipped })
    }

    pub fn get(&self, r: usize, s: usize) -> Option<&IntertwinerSpace> {
        self.spaces.iter().find(|sp| sp.r == r && sp.s == s)
    }
}

/// The flip `ε(π^r, π^s): x ⊗ y ↦ y ⊗ x`, stored as an index permutation
/// (`e_j ↦ e_{perm[j]}`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryOperator {
    pub d: usize,
    pub r: usize,
    pub s: usize,
    perm: Vec<usize>,
}

impl SymmetryOperator {
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// Dense permutation matrix, subject to [`SIZE_CAP`].
    pub fn matrix(&self) -> Result<CMatrix> {
        if self.perm.len() > SIZE_CAP {
            return Err(Error::SizeCapExceeded { size: self.perm.len(), cap: SIZE_CAP });
        }
        Ok(crate::unitary::permutation_matrix(&self.perm))
    }

    /// The same operator composed with one transposition of moved indices;
    /// unchanged if the flip is the identity.
    pub fn corrupted(&self) -> SymmetryOperator {
        let mut perm = self.perm.clone();
        if let Some(i) = (0..perm.len()).find(|&i| perm[i] != i) {
            let j = perm[i];
            perm.swap(i, j);
        }
        SymmetryOperator { perm, ..self.clone() }
    }
}

pub fn flip_symmetry(d: usize, r: usize, s: usize) -> Result<SymmetryOperator> {
    power(d, r + s, PERMUTATION_CAP)?;
    let (dr, ds) = (d.pow(r as u32), d.pow(s as u32));
    let mut perm = vec![0; dr * ds];
    for ix in 0..dr {
        for iy in 0..ds {
            perm[ix * ds + iy] = iy * dr + ix;
        }
    }
    Ok(SymmetryOperator { d, r, s, perm })
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&j| p[j]).collect()
}

fn kron_perm(p: &[usize], q: &[usize]) -> Vec<usize> {
    let n = q.len();
    let mut out = Vec::with_capacity(p.len() * n);
    for &pi in p {
        for &qj in q {
            out.push(pi * n + qj);
        }
    }
    out
}

fn identity_perm(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// `P·m` for the permutation matrix of `p`.
fn permute_rows(p: &[usize], m: &CMatrix) -> CMatrix {
    let mut inv = vec![0; p.len()];
    for (j, &pj) in p.iter().enumerate() {
        inv[pj] = j;
    }
    CMatrix::from_fn(m.rows(), m.cols(), |i, k| m.get(inv[i], k))
}

/// `m·P` for the permutation matrix of `p`: column `j` of the result is column `p(j)` of `m`.
fn permute_cols(m: &CMatrix, p: &[usize]) -> CMatrix {
    CMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, p[j]))
}

#[derive(Clone, Debug, Default)]
pub struct SymmetryReport {
    /// Failed exact identities, one line each.
    pub failures: Vec<String>,
    pub identities_checked: usize,
    pub naturality_checks: usize,
    pub naturality_max_residual: f64,
}

impl SymmetryReport {
    pub fn passed(&self, tol: Tolerance) -> bool {
        self.failures.is_empty() && self.naturality_max_residual <= tol.eps()
    }
}

/// Largest `d^{r+s+r'+s'}` used for naturality checks.
const NATURALITY_CAP: usize = 1 << 16;

/// Checks the flip identities for all `r, s, t ≤ rmax` and naturality
/// against random maps, or against random intertwiners of `group`.
pub fn check_symmetry_axioms(
    d: usize,
    rmax: usize,
    group: Option<&FiniteMatrixGroup>,
    tol: Tolerance,
    seed: u64,
) -> Result<SymmetryReport> {
    check_symmetry_axioms_with(d, rmax, group, tol, seed, flip_symmetry)
}

/// [`check_symmetry_axioms`] with a caller-supplied flip, for negative controls.
pub fn check_symmetry_axioms_with(
    d: usize,
    rmax: usize,
    group: Option<&FiniteMatrixGroup>,
    tol: Tolerance,
    seed: u64,
    flip: impl Fn(usize, usize, usize) -> Result<SymmetryOperator>,
) -> Result<SymmetryReport> {
    if let Some(g) = group {
        if g.dim() != d {
            return Err(Error::DimensionMismatch(format!("group acts in dimension {}, not {d}", g.dim())));
        }
    }
    let mut report = SymmetryReport::default();
    let fail = |report: &mut SymmetryReport, ok: bool, what: String| {
        report.identities_checked += 1;
        if !ok {
            report.failures.push(what);
        }
    };
    for r in 0..=rmax {
        let n = power(d, r, PERMUTATION_CAP)?;
        fail(&mut report, flip(d, 0, r)?.perm == identity_perm(n), format!("eps(0,{r}) is not the identity"));
        fail(&mut report, flip(d, r, 0)?.perm == identity_perm(n), format!("eps({r},0) is not the identity"));
        for s in 0..=rmax {
            let rs = flip(d, r, s)?;
            let sr = flip(d, s, r)?;
            let n = power(d, r + s, PERMUTATION_CAP)?;
            fail(&mut report, compose(&rs.perm, &sr.perm) == identity_perm(n), format!("eps({r},{s})·eps({s},{r}) is not the identity"));
            for t in 0..=rmax {
                let lhs = flip(d, r + s, t)?;
                let left = kron_perm(&flip(d, r, t)?.perm, &identity_perm(d.pow(s as u32)));
                let right = kron_perm(&identity_perm(d.pow(r as u32)), &flip(d, s, t)?.perm);
                fail(
                    &mut report,
                    lhs.perm == compose(&left, &right),
                    format!("eps({r}+{s},{t}) differs from (eps({r},{t})⊗1)(1⊗eps({s},{t}))"),
                );
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let category = match group {
        Some(g) => Some(IntertwinerCategory::new(g, rmax, tol)?),
        None => None,
    };
    let sample = |rng: &mut ChaCha8Rng, from: usize, to: usize| -> Option<CMatrix> {
        let (rows, cols) = (d.pow(to as u32), d.pow(from as u32));
        match &category {
            None => Some(random_matrix(rows, cols, rng)),
            Some(cat) => {
                let space = cat.get(from, to)?;
                if space.basis.is_empty() {
                    return None;
                }
                let coeffs = random_matrix(space.basis.len(), 1, rng);
                let mut t = CMatrix::zeros(rows, cols);
                for (k, b) in space.basis.iter().enumerate() {
                    t = &t + &b.scale(coeffs.get(k, 0));
                }
                Some(t)
            }
        }
    };
    for r in 0..=rmax {
        for r2 in 0..=rmax {
            for s in 0..=rmax {
                for s2 in 0..=rmax {
                    if power(d, r + s + r2 + s2, NATURALITY_CAP).is_err() {
                        continue;
                    }
                    let (Some(t), Some(t2)) = (sample(&mut rng, r, r2), sample(&mut rng, s, s2)) else {
                        continue;
                    };
                    // eps(r', s')·(t ⊗ t') = (t' ⊗ t)·eps(r, s)
                    let lhs = permute_rows(&flip(d, r2, s2)?.perm, &t.kron(&t2));
                    let rhs = permute_cols(&t2.kron(&t), &flip(d, r, s)?.perm);
                    let scale = t.max_norm().max(1.0) * t2.max_norm().max(1.0);
                    report.naturality_max_residual = report.naturality_max_residual.max(lhs.distance(&rhs) / scale);
                    report.naturality_checks += 1;
                }
            }
        }
    }
    Ok(report)
}

/// `R = Σ_i e_i ⊗ e_i` and the residuals of the conjugate equations.
#[derive(Clone, Debug)]
pub struct ConjugateReport {
    pub r: CMatrix,
    /// `‖(R†⊗1)(1⊗R) − 1‖` for the pair `(π̄, π)`.
    pub first_equation: f64,
    /// The same contraction for the pair `(π, π̄)`.
    pub second_equation: f64,
    /// `max_g ‖(ḡ⊗g)·R − R‖` over the group's generators, zero without a group.
    pub invariance: f64,
}

pub fn conjugate_solution(d: usize, group: Option<&FiniteMatrixGroup>) -> Result<ConjugateReport> {
    if d == 0 {
        return Err(Error::DimensionMismatch("dimension 0".into()));
    }
    if let Some(g) = group {
        if g.dim() != d {
            return Err(Error::DimensionMismatch(format!("group acts in dimension {}, not {d}", g.dim())));
        }
    }
    let r = CMatrix::from_fn(d * d, 1, |k, _| if k % (d + 1) == 0 { crate::unitary::c(1.0, 0.0) } else { crate::unitary::c(0.0, 0.0) });
    let id = CMatrix::identity(d);
    let contraction = &r.adjoint().kron(&id) * &id.kron(&r);
    let first_equation = contraction.distance(&id);
    // R̄ coincides with R for the standard conjugate, so the second
    // equation is the same contraction with the factors exchanged
    let rbar = r.clone();
    let second_equation = (&rbar.adjoint().kron(&id) * &id.kron(&rbar)).distance(&id);
    let mut invariance: f64 = 0.0;
    if let Some(g) = group {
        for u in g.generating_set() {
            invariance = invariance.max((&u.conjugate().kron(u) * &r).distance(&r));
            invariance = invariance.max((&u.kron(&u.conjugate()) * &rbar).distance(&rbar));
        }
    }
    Ok(ConjugateReport { r, first_equation, second_equation, invariance })
}

/// Whether `û(t) = u^{⊗s}·t·(u^{⊗r})†` keeps `(π^r, π^s)` inside itself.
#[derive(Clone, Debug)]
pub struct SpaceEvidence {
    pub r: usize,
    pub s: usize,
    pub dim: usize,
    pub preserved: bool,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct NormalizerReport {
    /// The exact test `u·g·u† ∈ G` on generators.
    pub member: bool,
    pub rmax: usize,
    pub evidence: Vec<SpaceEvidence>,
}

impl NormalizerReport {
    pub fn all_preserved(&self) -> bool {
        self.evidence.iter().all(|e| e.preserved)
    }
}

fn check_operand(group: &FiniteMatrixGroup, u: &CMatrix, tol: Tolerance) -> Result<()> {
    if u.rows() != group.dim() || u.cols() != group.dim() {
        return Err(Error::DimensionMismatch(format!("group acts in dimension {}, matrix is {}x{}", group.dim(), u.rows(), u.cols())));
    }
    crate::unitary::require_unitary(u, tol, "operand")
}

pub fn normalizer_membership(group: &FiniteMatrixGroup, u: &CMatrix, rmax: usize, tol: Tolerance) -> Result<NormalizerReport> {
    let category = IntertwinerCategory::new(group, rmax, tol)?;
    normalizer_membership_in(group, &category, u, tol)
}

/// [`normalizer_membership`] against a precomputed category.
pub fn normalizer_membership_in(
    group: &FiniteMatrixGroup,
    category: &IntertwinerCategory,
    u: &CMatrix,
    tol: Tolerance,
) -> Result<NormalizerReport> {
    check_operand(group, u, tol)?;
    let member = group.is_normalized_by(u, tol)?;
    let powers: Vec<CMatrix> = (0..=category.rmax).map(|k| kron_power(u, k)).collect();
    let mut evidence = Vec::new();
    for space in &category.spaces {
        let ur = powers[space.r].adjoint();
        let mut residual: f64 = 0.0;
        for t in &space.basis {
            residual = residual.max(space.distance_to(&(&(&powers[space.s] * t) * &ur)));
        }
        evidence.push(SpaceEvidence { r: space.r, s: space.s, dim: space.dim(), preserved: residual <= 10.0 * tol.eps(), residual });
    }
    Ok(NormalizerReport { member, rmax: category.rmax, evidence })
}

#[derive(Clone, Debug)]
pub struct DualMembership {
    pub member: bool,
    pub rmax: usize,
    /// First `(r, s)` whose intertwiners do not commute with `u`, with the residual.
    pub failure: Option<(usize, usize, f64)>,
}

/// Does `u^{⊗s}·t = t·u^{⊗r}` hold for every intertwiner with `r, s ≤ rmax`?
pub fn tannaka_dual_membership(group: &FiniteMatrixGroup, u: &CMatrix, rmax: usize, tol: Tolerance) -> Result<DualMembership> {
    let category = IntertwinerCategory::new(group, rmax, tol)?;
    tannaka_dual_membership_in(group, &category, u, tol)
}

/// [`tannaka_dual_membership`] against a precomputed category.
pub fn tannaka_dual_membership_in(
    group: &FiniteMatrixGroup,
    category: &IntertwinerCategory,
    u: &CMatrix,
    tol: Tolerance,
) -> Result<DualMembership> {
    check_operand(group, u, tol)?;
    let powers: Vec<CMatrix> = (0..=category.rmax).map(|k| kron_power(u, k)).collect();
    for space in &category.spaces {
        for t in &space.basis {
            let residual = (&powers[space.s] * t).distance(&(t * &powers[space.r]));
            if residual > 10.0 * tol.eps() {
                return Ok(DualMembership { member: false, rmax: category.rmax, failure: Some((space.r, space.s, residual)) });
            }
        }
    }
    Ok(DualMembership { member: true, rmax: category.rmax, failure: None })
}

/// `{u ∈ ambient : u commutes with every intertwiner of G up to rmax}`.
pub fn dual_recover_in_ambient(
    group: &FiniteMatrixGroup,
    ambient: &FiniteMatrixGroup,
    rmax: usize,
    tol: Tolerance,
) -> Result<FiniteMatrixGroup> {
    if !group.is_subgroup_of(ambient, tol) {
        return Err(Error::NotSubgroup(format!(
            "group of order {} is not contained in the ambient group of order {}",
            group.order(),
            ambient.order()
        )));
    }
    let category = IntertwinerCategory::new(group, rmax, tol)?;
    let mut members = Vec::new();
    for u in ambient.elements() {
        if tannaka_dual_membership_in(group, &category, u, tol)?.member {
            members.push(u.clone());
        }
    }
    FiniteMatrixGroup::from_elements(group.dim(), members, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unitary::{c, group_closure, paulis, permutation_matrix, phase};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn s3() -> FiniteMatrixGroup {
        group_closure(3, &[permutation_matrix(&[1, 0, 2]), permutation_matrix(&[1, 2, 0])], 6, tol()).unwrap()
    }

    fn pm() -> FiniteMatrixGroup {
        group_closure(2, &[CMatrix::identity(2).scale(c(-1.0, 0.0))], 2, tol()).unwrap()
    }

    fn diag_z2() -> FiniteMatrixGroup {
        group_closure(2, &[paulis::z()], 2, tol()).unwrap()
    }

    #[test]
    fn trivial_group_intertwiners() {
        let g = FiniteMatrixGroup::trivial(2);
        assert_eq!(intertwiner_basis(&g, 1, 1, tol()).unwrap().dim(), 4);
    }

    #[test]
    fn parity_for_plus_minus_identity() {
        assert_eq!(intertwiner_basis(&pm(), 1, 2, tol()).unwrap().dim(), 0);
        assert_eq!(intertwiner_basis(&pm(), 1, 3, tol()).unwrap().dim(), 16);
    }

    #[test]
    fn s3_dimensions_by_both_methods() {
        let g = s3();
        for (r, s, expected) in [(0, 1, 1), (0, 2, 2), (1, 1, 2), (2, 2, 14), (1, 2, 5)] {
            let a = intertwiner_basis_with(&g, r, s, IntertwinerMethod::Averaging, tol()).unwrap();
            let n = intertwiner_basis_with(&g, r, s, IntertwinerMethod::Nullspace, tol()).unwrap();
            assert_eq!(a.dim(), expected, "averaging ({r},{s})");
            assert_eq!(n.dim(), expected, "nullspace ({r},{s})");
            for t in &n.basis {
                assert!(a.distance_to(t) < 1e-8);
            }
        }
    }

    #[test]
    fn basis_is_orthonormal_and_invariant() {
        let g = s3();
        let sp = intertwiner_basis(&g, 1, 2, tol()).unwrap();
        for (i, a) in sp.basis.iter().enumerate() {
            for (j, b) in sp.basis.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((a.hs_inner(b) - c(expected, 0.0)).norm() < 1e-9);
            }
            for u in g.generating_set() {
                assert!((&kron_power(u, 2) * a).distance(&(a * u)) < 1e-9);
            }
        }
    }

    #[test]
    fn averaging_is_idempotent() {
        let g = s3();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = random_matrix(9, 3, &mut rng);
        let p = average(&g, 1, 2, &t);
        assert!(average(&g, 1, 2, &p).distance(&p) <= 10.0 * tol().eps());
    }

    #[test]
    fn size_cap() {
        let g = FiniteMatrixGroup::trivial(2);
        assert!(matches!(intertwiner_basis(&g, 7, 6, tol()), Err(Error::SizeCapExceeded { .. })));
    }

    #[test]
    fn flip_examples() {
        assert_eq!(flip_symmetry(2, 0, 2).unwrap().matrix().unwrap(), CMatrix::identity(4));
        assert_eq!(flip_symmetry(3, 2, 0).unwrap().matrix().unwrap(), CMatrix::identity(9));
        let swap = flip_symmetry(2, 1, 1).unwrap().matrix().unwrap();
        let expected = permutation_matrix(&[0, 2, 1, 3]);
        assert_eq!(swap, expected);
        let a = flip_symmetry(2, 1, 2).unwrap().matrix().unwrap();
        let b = flip_symmetry(2, 2, 1).unwrap().matrix().unwrap();
        assert_eq!(&a * &b, CMatrix::identity(8));
        // x ⊗ y ↦ y ⊗ x on product vectors
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (x, y) = (random_matrix(2, 1, &mut rng), random_matrix(4, 1, &mut rng));
        assert!((&a * &x.kron(&y)).approx_eq(&y.kron(&x), tol()));
    }

    #[test]
    fn symmetry_axioms_hold() {
        let report = check_symmetry_axioms(2, 3, None, tol(), 1).unwrap();
        assert!(report.passed(Tolerance::new(1e-10).unwrap()), "{report:?}");
        assert!(report.naturality_checks > 0);
        let report = check_symmetry_axioms(3, 2, Some(&s3()), tol(), 1).unwrap();
        assert!(report.passed(Tolerance::new(1e-10).unwrap()), "{report:?}");
    }

    #[test]
    fn corrupted_flip_is_flagged() {
        let bad = |d, r, s| {
            let f = flip_symmetry(d, r, s)?;
            Ok(if (r, s) == (1, 1) { f.corrupted() } else { f })
        };
        let report = check_symmetry_axioms_with(2, 2, None, tol(), 1, bad).unwrap();
        assert!(!report.failures.is_empty());
        assert!(!report.passed(tol()));
    }

    #[test]
    fn conjugate_examples() {
        let one = conjugate_solution(1, None).unwrap();
        assert_eq!(one.r, CMatrix::identity(1));
        assert!(one.first_equation < 1e-12 && one.second_equation < 1e-12);
        let two = conjugate_solution(2, Some(&pm())).unwrap();
        assert!(two.first_equation < 1e-12 && two.invariance < 1e-12);
        let three = conjugate_solution(3, Some(&s3())).unwrap();
        assert!(three.first_equation < 1e-12 && three.second_equation < 1e-12 && three.invariance < 1e-12);
        assert!(conjugate_solution(3, Some(&pm())).is_err());
    }

    #[test]
    fn normalizer_examples() {
        let g = diag_z2();
        assert!(normalizer_membership(&g, &paulis::z(), 2, tol()).unwrap().member);
        assert!(!normalizer_membership(&g, &paulis::x(), 2, tol()).unwrap().member);
        let d = CMatrix::diag(&[phase(0.3), phase(-1.2)]);
        let report = normalizer_membership(&g, &d, 2, tol()).unwrap();
        assert!(report.member && report.all_preserved());
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = crate::unitary::random_unitary(2, &mut rng);
        let report = normalizer_membership(&pm(), &u, 3, tol()).unwrap();
        assert!(report.member && report.all_preserved());
        assert!(normalizer_membership(&pm(), &CMatrix::identity(3), 1, tol()).is_err());
    }

    #[test]
    fn dual_membership_examples() {
        let g = pm();
        assert!(tannaka_dual_membership(&g, &CMatrix::identity(2).scale(c(-1.0, 0.0)), 3, tol()).unwrap().member);
        let i = tannaka_dual_membership(&g, &CMatrix::identity(2).scale(c(0.0, 1.0)), 3, tol()).unwrap();
        assert!(!i.member);
        assert!(tannaka_dual_membership(&g, &CMatrix::identity(2).scale(c(0.0, 1.0)), 1, tol()).unwrap().member);
        assert!(!tannaka_dual_membership(&g, &paulis::z(), 1, tol()).unwrap().member);
    }

    #[test]
    fn dual_recovery() {
        let g = pm();
        assert_eq!(dual_recover_in_ambient(&g, &g, 3, tol()).unwrap().order(), 2);
        let pauli = group_closure(2, &[paulis::x(), paulis::y(), paulis::z()], 16, tol()).unwrap();
        let rec = dual_recover_in_ambient(&g, &pauli, 3, tol()).unwrap();
        assert_eq!(rec.order(), 2);
        assert!(rec.is_subgroup_of(&g, tol()) && g.is_subgroup_of(&rec, tol()));
        assert!(matches!(dual_recover_in_ambient(&pauli, &g, 1, tol()), Err(Error::NotSubgroup(_))));
    }
}
