//! Hilbert net bundles in cocycle form: a unitary `z(b)` for every
//! 1-simplex with `z(∂0c)·z(∂2c) = z(∂1c)` on every 2-simplex.
//!
//! Holonomy, reconstruction from holonomy, equivalence, intertwiners,
//! the first Chern class and quotient holonomies all live here.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poset::{Nerve, Path, PathFrame, Pi1Presentation, Simplex1, Simplex2};
use crate::presentation::{Letter, Presentation};
use crate::unitary::{self, c, nullspace, random_matrix, require_unitary, vstack, CMatrix, FiniteMatrixGroup, Tolerance, C64};

/// Unitary cocycle over `Σ1`, indexed like [`Nerve::simplices1`].
#[derive(Clone, Debug)]
pub struct Cocycle {
    dim: usize,
    values: Vec<CMatrix>,
}

impl Cocycle {
    /// The constant net: identity on every 1-simplex.
    pub fn constant(nerve: &Nerve, dim: usize) -> Self {
        Cocycle { dim, values: vec![CMatrix::identity(dim); nerve.simplices1().len()] }
    }

    /// Sparse assignment; simplices not listed get the identity.
    pub fn from_assignments(nerve: &Nerve, dim: usize, assignments: &[(Simplex1, CMatrix)], tol: Tolerance) -> Result<Self> {
        let mut cocycle = Cocycle::constant(nerve, dim);
        for (b, u) in assignments {
            let i = nerve.index_of(b).ok_or_else(|| Error::DimensionMismatch(format!("{b:?} is not a 1-simplex of the poset")))?;
            check_square(u, dim, "cocycle value")?;
            require_unitary(u, tol, &format!("cocycle value on {}", b.display(nerve.poset())))?;
            cocycle.values[i] = u.clone();
        }
        Ok(cocycle)
    }

    /// Values for every 1-simplex, in `Σ1` order.
    pub fn from_values(nerve: &Nerve, dim: usize, values: Vec<CMatrix>, tol: Tolerance) -> Result<Self> {
        if values.len() != nerve.simplices1().len() {
            return Err(Error::DimensionMismatch(format!("{} values for {} 1-simplices", values.len(), nerve.simplices1().len())));
        }
        for (i, u) in values.iter().enumerate() {
            check_square(u, dim, "cocycle value")?;
            require_unitary(u, tol, &format!("cocycle value {i}"))?;
        }
        Ok(Cocycle { dim, values })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[CMatrix] {
        &self.values
    }

    pub fn value(&self, nerve: &Nerve, b: &Simplex1) -> Option<&CMatrix> {
        nerve.index_of(b).map(|i| &self.values[i])
    }

    pub(crate) fn set_value(&mut self, i: usize, u: CMatrix) {
        self.values[i] = u;
    }
}

fn check_square(u: &CMatrix, dim: usize, what: &str) -> Result<()> {
    if u.rows() != dim || u.cols() != dim {
        return Err(Error::DimensionMismatch(format!("{what} is {}x{}, expected {dim}x{dim}", u.rows(), u.cols())));
    }
    Ok(())
}

/// A 2-simplex on which the cocycle law fails.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub index: usize,
    pub simplex: Simplex2,
    pub residual: f64,
}

#[derive(Clone, Debug, Default)]
pub struct CocycleReport {
    pub violations: Vec<Violation>,
    pub max_residual: f64,
}

impl CocycleReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `z(∂0c)·z(∂2c) = z(∂1c)` on every 2-simplex.
pub fn validate_cocycle(nerve: &Nerve, cocycle: &Cocycle, tol: Tolerance) -> Result<CocycleReport> {
    if cocycle.values.len() != nerve.simplices1().len() {
        return Err(Error::DimensionMismatch("cocycle does not match the poset".into()));
    }
    for (i, u) in cocycle.values.iter().enumerate() {
        check_square(u, cocycle.dim, "cocycle value")?;
        require_unitary(u, tol, &format!("cocycle value {i}"))?;
    }
    let mut report = CocycleReport::default();
    for (index, c) in nerve.simplices2().iter().enumerate() {
        let [f0, f1, f2] = c.faces.map(|f| &cocycle.values[nerve.index_of(&f).expect("faces are 1-simplices")]);
        let residual = (f0 * f2).distance(f1);
        report.max_residual = report.max_residual.max(residual);
        if residual > tol.eps() {
            report.violations.push(Violation { index, simplex: *c, residual });
        }
    }
    Ok(report)
}

/// `Z(b_n)···Z(b_1)` along a path; backward steps contribute adjoints.
pub fn transport(nerve: &Nerve, cocycle: &Cocycle, path: &Path) -> Result<CMatrix> {
    let mut out = CMatrix::identity(cocycle.dim);
    for s in path.steps() {
        let i =
            nerve.index_of(&s.simplex).ok_or_else(|| Error::NotComposable(format!("{:?} is not a 1-simplex of the poset", s.simplex)))?;
        let z = &cocycle.values[i];
        out = if s.forward { z * &out } else { &z.adjoint() * &out };
    }
    Ok(out)
}

/// Evaluates a word, leftmost letter leftmost factor.
pub fn evaluate_word(images: &[CMatrix], dim: usize, word: &[Letter]) -> Result<CMatrix> {
    let mut out = CMatrix::identity(dim);
    for l in word {
        let u = images.get(l.gen).ok_or(Error::UnknownGenerator(l.gen))?;
        out = if l.inverse { &out * &u.adjoint() } else { &out * u };
    }
    Ok(out)
}

/// A unitary representation of a finitely presented group.
#[derive(Clone, Debug)]
pub struct HolonomyRep {
    presentation: Presentation,
    images: Vec<CMatrix>,
    dim: usize,
}

impl HolonomyRep {
    /// Checks shapes, unitarity and that every relator maps to the identity.
    pub fn new(presentation: Presentation, images: Vec<CMatrix>, dim: usize, tol: Tolerance) -> Result<Self> {
        let rep = HolonomyRep::unchecked(presentation, images, dim, tol)?;
        for (k, r) in rep.relation_residuals().iter().enumerate() {
            if *r > tol.eps() {
                return Err(Error::InvalidRepresentation(format!("relator {k} has residual {r:.3e}")));
            }
        }
        Ok(rep)
    }

    fn unchecked(presentation: Presentation, images: Vec<CMatrix>, dim: usize, tol: Tolerance) -> Result<Self> {
        if images.len() != presentation.generator_count() {
            return Err(Error::DimensionMismatch(format!("{} images for {} generators", images.len(), presentation.generator_count())));
        }
        for (k, u) in images.iter().enumerate() {
            check_square(u, dim, "holonomy image")?;
            require_unitary(u, tol, &format!("image of generator {k}"))?;
        }
        Ok(HolonomyRep { presentation, images, dim })
    }

    /// The trivial representation in dimension `dim`.
    pub fn trivial(presentation: Presentation, dim: usize) -> Self {
        let images = vec![CMatrix::identity(dim); presentation.generator_count()];
        HolonomyRep { presentation, images, dim }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn images(&self) -> &[CMatrix] {
        &self.images
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn evaluate(&self, word: &[Letter]) -> Result<CMatrix> {
        evaluate_word(&self.images, self.dim, word)
    }

    /// Max-norm distance from the identity of every relator.
    pub fn relation_residuals(&self) -> Vec<f64> {
        let id = CMatrix::identity(self.dim);
        self.presentation.relators().iter().map(|r| self.evaluate(r).map_or(f64::INFINITY, |m| m.distance(&id))).collect()
    }

    /// Block-diagonal direct sum over the same presentation.
    pub fn direct_sum(&self, other: &HolonomyRep) -> Result<HolonomyRep> {
        same_presentation(self, other)?;
        let d = self.dim + other.dim;
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| {
                CMatrix::from_fn(d, d, |i, j| match (i < self.dim, j < self.dim) {
                    (true, true) => a.get(i, j),
                    (false, false) => b.get(i - self.dim, j - self.dim),
                    _ => c(0.0, 0.0),
                })
            })
            .collect();
        Ok(HolonomyRep { presentation: self.presentation.clone(), images, dim: d })
    }

    /// `g·χ(p)·g†` for every generator.
    pub fn conjugated(&self, g: &CMatrix) -> HolonomyRep {
        let gd = g.adjoint();
        let images = self.images.iter().map(|u| &(g * u) * &gd).collect();
        HolonomyRep { presentation: self.presentation.clone(), images, dim: self.dim }
    }
}

fn same_presentation(a: &HolonomyRep, b: &HolonomyRep) -> Result<()> {
    if a.presentation.generator_count() != b.presentation.generator_count() {
        return Err(Error::DimensionMismatch(format!(
            "representations of different presentations ({} vs {} generators)",
            a.presentation.generator_count(),
            b.presentation.generator_count()
        )));
    }
    Ok(())
}

/// Holonomy of a valid cocycle, with the relator residuals of the result.
///
/// The image of each reduced generator is the transport around
/// [`PathFrame::loop_through`] its 1-simplex.
pub fn holonomy(
    nerve: &Nerve,
    cocycle: &Cocycle,
    frame: &PathFrame,
    pres: &Pi1Presentation,
    tol: Tolerance,
) -> Result<(HolonomyRep, Vec<f64>)> {
    check_frame(frame, pres)?;
    let report = validate_cocycle(nerve, cocycle, tol)?;
    if !report.is_valid() {
        return Err(Error::InvalidCocycle(report.violations.len()));
    }
    let mut images = Vec::with_capacity(pres.generator_count());
    for k in 0..pres.generator_count() {
        let lp = nerve.loop_of_generator(pres, frame, k)?;
        images.push(transport(nerve, cocycle, &lp)?);
    }
    let rep = HolonomyRep::unchecked(pres.presentation().clone(), images, cocycle.dim, tol.scaled(10.0))?;
    let residuals = rep.relation_residuals();
    Ok((rep, residuals))
}

fn check_frame(frame: &PathFrame, pres: &Pi1Presentation) -> Result<()> {
    if frame.base() != pres.base() {
        return Err(Error::DimensionMismatch(format!(
            "path frame is based at element {} but the presentation at {}",
            frame.base(),
            pres.base()
        )));
    }
    Ok(())
}

/// Net bundle with holonomy `chi`: `z(b) = χ(γ_{a∂0b} * b * γ_{a∂1b}⁻¹)`,
/// the loop word being read off the presentation's elimination log.
pub fn reconstruct(nerve: &Nerve, chi: &HolonomyRep, frame: &PathFrame, pres: &Pi1Presentation) -> Result<Cocycle> {
    check_frame(frame, pres)?;
    if chi.presentation.generator_count() != pres.generator_count() {
        return Err(Error::DimensionMismatch(format!(
            "representation has {} generators, presentation has {}",
            chi.presentation.generator_count(),
            pres.generator_count()
        )));
    }
    let mut cocycle = Cocycle::constant(nerve, chi.dim);
    for (i, b) in nerve.simplices1().iter().enumerate() {
        let word = nerve.word_of_path(pres, &frame.loop_through(*b))?;
        cocycle.set_value(i, chi.evaluate(&word)?);
    }
    Ok(cocycle)
}

/// Why two representations cannot be equivalent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InequivalenceCertificate {
    /// Single generator with different eigenvalue multisets.
    Spectrum,
    /// The space of intertwiners is zero.
    NoIntertwiner,
}

#[derive(Clone, Debug)]
pub enum Equivalence {
    /// Unitary `g` with `g·χ(p)·g† = χ'(p)` for all generators.
    Equivalent(CMatrix),
    Inequivalent(InequivalenceCertificate),
    /// Intertwiners exist but no invertible one was found by sampling.
    Undecided,
}

impl Equivalence {
    pub fn witness(&self) -> Option<&CMatrix> {
        match self {
            Equivalence::Equivalent(g) => Some(g),
            _ => None,
        }
    }
}

pub const WITNESS_SAMPLES: usize = 32;
pub const WITNESS_MAX_CONDITION: f64 = 1e6;
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Basis of `{t : t·a_k = b_k·t ∀k}` for `a_k` of size `n` and `b_k` of size `m`.
pub fn intertwiners(a: &[CMatrix], b: &[CMatrix], n: usize, m: usize, tol: Tolerance) -> Result<Vec<CMatrix>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch("different numbers of generators".into()));
    }
    if a.is_empty() {
        return Ok((0..n * m).map(|k| CMatrix::from_fn(m, n, |i, j| if j * m + i == k { c(1.0, 0.0) } else { c(0.0, 0.0) })).collect());
    }
    // vec(t·a) = (aᵀ ⊗ I_m) vec t and vec(b·t) = (I_n ⊗ b) vec t, column-major.
    let blocks: Vec<CMatrix> =
        a.iter().zip(b).map(|(ak, bk)| &ak.transpose().kron(&CMatrix::identity(m)) - &CMatrix::identity(n).kron(bk)).collect();
    let system = vstack(&blocks)?;
    nullspace(&system, tol).iter().map(|v| CMatrix::unvectorize(v, m, n)).collect()
}

fn spectra_match(a: &CMatrix, b: &CMatrix, tol: Tolerance) -> Result<bool> {
    let ea = a.eigenvalues()?;
    let mut eb = b.eigenvalues()?;
    // eigenvalues of unitaries are well conditioned; allow a looser match than eps
    let slack = tol.eps().max(1e-12).sqrt();
    for x in ea {
        let Some(k) = (0..eb.len()).min_by(|&i, &j| (eb[i] - x).norm().total_cmp(&(eb[j] - x).norm())) else {
            return Ok(false);
        };
        if (eb[k] - x).norm() > slack {
            return Ok(false);
        }
        eb.swap_remove(k);
    }
    Ok(true)
}

fn verifies(g: &CMatrix, chi: &HolonomyRep, chi2: &HolonomyRep, tol: Tolerance) -> bool {
    let gd = g.adjoint();
    chi.images.iter().zip(&chi2.images).all(|(u, v)| (&(g * u) * &gd).distance(v) <= 10.0 * tol.eps())
}

/// Searches for a unitary `g` with `g·χ(p)·g† = χ'(p)`.
///
/// Returned witnesses always verify within `10·eps`. Negative answers are
/// certified by spectra (one generator) or by an empty intertwiner space;
/// otherwise up to [`WITNESS_SAMPLES`] random intertwiners are tried and
/// the result may be [`Equivalence::Undecided`].
pub fn equivalent(chi: &HolonomyRep, chi2: &HolonomyRep, tol: Tolerance, seed: u64) -> Result<Equivalence> {
    same_presentation(chi, chi2)?;
    if chi.dim != chi2.dim {
        return Err(Error::DimensionMismatch(format!("dimensions {} and {}", chi.dim, chi2.dim)));
    }
    let d = chi.dim;
    if chi.images.len() == 1 && !spectra_match(&chi.images[0], &chi2.images[0], tol)? {
        return Ok(Equivalence::Inequivalent(InequivalenceCertificate::Spectrum));
    }
    let identity = CMatrix::identity(d);
    if verifies(&identity, chi, chi2, tol) {
        return Ok(Equivalence::Equivalent(identity));
    }
    let basis = intertwiners(&chi.images, &chi2.images, d, d, tol)?;
    if basis.is_empty() {
        return Ok(Equivalence::Inequivalent(InequivalenceCertificate::NoIntertwiner));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..WITNESS_SAMPLES {
        let coeffs = random_matrix(basis.len(), 1, &mut rng);
        let mut t = CMatrix::zeros(d, d);
        for (k, b) in basis.iter().enumerate() {
            t = &t + &b.scale(coeffs.get(k, 0));
        }
        let (w, cond) = t.polar_unitary()?;
        if cond < WITNESS_MAX_CONDITION && verifies(&w, chi, chi2, tol) {
            return Ok(Equivalence::Equivalent(w));
        }
    }
    Ok(Equivalence::Undecided)
}

/// First Chern class: `det χ(g)` per generator.
pub fn chern_c1(chi: &HolonomyRep) -> Vec<C64> {
    chi.images.iter().map(|u| u.determinant().expect("images are square")).collect()
}

/// Dimension of the joint fixed space `∩_g ker(χ(g) − I)`.
pub fn sections_dim(chi: &HolonomyRep, tol: Tolerance) -> usize {
    if chi.images.is_empty() {
        return chi.dim;
    }
    let id = CMatrix::identity(chi.dim);
    let blocks: Vec<CMatrix> = chi.images.iter().map(|u| u - &id).collect();
    nullspace(&vstack(&blocks).expect("blocks share a width"), tol).len()
}

/// Dimension of `{t : t·χ(g) = χ'(g)·t ∀g}`.
pub fn morphism_dim(chi: &HolonomyRep, chi2: &HolonomyRep, tol: Tolerance) -> Result<usize> {
    same_presentation(chi, chi2)?;
    Ok(intertwiners(&chi.images, &chi2.images, chi.dim, chi2.dim, tol)?.len())
}

/// The group `G` dividing a quotient holonomy.
#[derive(Clone, Debug)]
pub enum Fiber {
    /// An explicitly enumerated finite group.
    Finite(FiniteMatrixGroup),
    /// `SU(d)`; cosets are labelled by the determinant.
    SpecialUnitary { dim: usize },
    /// The scalar unitaries `T·I`; the quotient is `PU(d)`.
    Scalars { dim: usize },
}

impl Fiber {
    pub fn dim(&self) -> usize {
        match self {
            Fiber::Finite(g) => g.dim(),
            Fiber::SpecialUnitary { dim } | Fiber::Scalars { dim } => *dim,
        }
    }

    pub fn contains(&self, u: &CMatrix, tol: Tolerance) -> Result<bool> {
        check_square(u, self.dim(), "matrix")?;
        match self {
            Fiber::Finite(g) => g.contains(u, tol),
            Fiber::SpecialUnitary { .. } => Ok(unitary::is_unitary(u, tol)? && (u.determinant()? - c(1.0, 0.0)).norm() <= tol.eps()),
            Fiber::Scalars { .. } => Ok(unitary::is_unitary(u, tol)? && u.is_scalar(tol)),
        }
    }

    /// Does the unitary `u` normalize the fiber? Always true for `SU(d)` and scalars.
    pub fn is_normalized_by(&self, u: &CMatrix, tol: Tolerance) -> Result<bool> {
        check_square(u, self.dim(), "matrix")?;
        match self {
            Fiber::Finite(g) => g.is_normalized_by(u, tol),
            Fiber::SpecialUnitary { .. } | Fiber::Scalars { .. } => unitary::is_unitary(u, tol),
        }
    }

    pub fn same_coset(&self, u: &CMatrix, v: &CMatrix, tol: Tolerance) -> Result<bool> {
        self.contains(&(u * &v.adjoint()), tol)
    }

    pub fn describe(&self) -> String {
        match self {
            Fiber::Finite(g) => format!("finite group of order {} in U({})", g.order(), g.dim()),
            Fiber::SpecialUnitary { dim } => format!("SU({dim})"),
            Fiber::Scalars { dim } => format!("scalars T in U({dim})"),
        }
    }
}

/// A representation into `QG = NG/G`, carried by representatives in `NG`.
#[derive(Clone, Debug)]
pub struct QuotientHolonomyRep {
    presentation: Presentation,
    images: Vec<CMatrix>,
    fiber: Fiber,
}

impl QuotientHolonomyRep {
    /// Checks that every representative normalizes the fiber and that every
    /// relator evaluates into the fiber.
    pub fn new(presentation: Presentation, images: Vec<CMatrix>, fiber: Fiber, tol: Tolerance) -> Result<Self> {
        let dim = fiber.dim();
        if images.len() != presentation.generator_count() {
            return Err(Error::DimensionMismatch(format!("{} images for {} generators", images.len(), presentation.generator_count())));
        }
        for (k, u) in images.iter().enumerate() {
            check_square(u, dim, "quotient representative")?;
            require_unitary(u, tol, &format!("representative of generator {k}"))?;
            if !fiber.is_normalized_by(u, tol)? {
                return Err(Error::NotInNormalizer(format!("representative of generator {k}")));
            }
        }
        let q = QuotientHolonomyRep { presentation, images, fiber };
        for (k, r) in q.presentation.relators().iter().enumerate() {
            let value = evaluate_word(&q.images, dim, r)?;
            if !q.fiber.contains(&value, tol.scaled(10.0))? {
                return Err(Error::InvalidQuotient(format!("relator {k} does not evaluate into the fiber")));
            }
        }
        Ok(q)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn images(&self) -> &[CMatrix] {
        &self.images
    }

    pub fn fiber(&self) -> &Fiber {
        &self.fiber
    }

    pub fn dim(&self) -> usize {
        self.fiber.dim()
    }

    /// Coset label for `SU(d)` fibers: the determinant of each representative.
    pub fn determinant_labels(&self) -> Option<Vec<C64>> {
        match self.fiber {
            Fiber::SpecialUnitary { .. } => Some(self.images.iter().map(|u| u.determinant().expect("square")).collect()),
            _ => None,
        }
    }

    /// Relator values; each lies in the fiber.
    pub fn relator_values(&self) -> Result<Vec<CMatrix>> {
        self.presentation.relators().iter().map(|r| evaluate_word(&self.images, self.dim(), r)).collect()
    }
}

/// `q ∘ χ` for a representation with values in the normalizer of `fiber`.
pub fn quotient_holonomy(chi: &HolonomyRep, fiber: Fiber, tol: Tolerance) -> Result<QuotientHolonomyRep> {
    if fiber.dim() != chi.dim {
        return Err(Error::DimensionMismatch(format!("fiber acts in dimension {}, holonomy in {}", fiber.dim(), chi.dim)));
    }
    QuotientHolonomyRep::new(chi.presentation.clone(), chi.images.clone(), fiber, tol)
}

/// True iff `u·g·u† ∈ G` for every generator `g` of `G` and every value `u`.
pub fn gauge_reduction_check(values: &[CMatrix], group: &FiniteMatrixGroup, tol: Tolerance) -> Result<bool> {
    for u in values {
        if !group.is_normalized_by(u, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{Poset, Step};
    use crate::unitary::{group_closure, paulis, phase, random_unitary};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn circle() -> Nerve {
        Nerve::new(Poset::close_order(&["a", "b", "c", "d"], &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]).unwrap())
    }

    fn z_rep(u: CMatrix) -> HolonomyRep {
        let d = u.rows();
        HolonomyRep::new(Presentation::free(1), vec![u], d, tol()).unwrap()
    }

    fn diag2(a: C64, b: C64) -> CMatrix {
        CMatrix::diag(&[a, b])
    }

    #[test]
    fn constant_cocycle_is_valid() {
        let n = circle();
        let z = Cocycle::constant(&n, 2);
        assert!(validate_cocycle(&n, &z, tol()).unwrap().is_valid());
        let frame = n.path_frame(0);
        let pres = n.pi1_presentation(&frame);
        let (chi, res) = holonomy(&n, &z, &frame, &pres, tol()).unwrap();
        assert!(chi.images().iter().all(|u| u.approx_eq(&CMatrix::identity(2), tol())));
        assert!(res.is_empty());
    }

    #[test]
    fn corrupted_triangle_is_reported() {
        let n = circle();
        let p = n.poset();
        let (a, c_) = (p.element("a").unwrap(), p.element("c").unwrap());
        // (c,a;c) only enters triangles that also involve other values; corrupt it
        let b = Simplex1 { d0: c_, d1: a, support: c_ };
        let z = Cocycle::from_assignments(&n, 1, &[(b, CMatrix::scalar(phase(0.3)))], tol()).unwrap();
        let report = validate_cocycle(&n, &z, tol()).unwrap();
        assert!(!report.is_valid());
        assert!(report.violations.iter().all(|v| v.simplex.faces.contains(&b)));
        assert!(matches!(holonomy(&n, &z, &n.path_frame(0), &n.pi1_presentation(&n.path_frame(0)), tol()), Err(Error::InvalidCocycle(_))));
    }

    #[test]
    fn rejects_bad_assignments() {
        let n = circle();
        let b = n.simplices1()[0];
        let bad = CMatrix::diag(&[c(2.0, 0.0)]);
        assert!(matches!(Cocycle::from_assignments(&n, 1, &[(b, bad)], tol()), Err(Error::NotUnitary(_))));
        assert!(matches!(Cocycle::from_assignments(&n, 2, &[(b, CMatrix::identity(3))], tol()), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn transport_basics() {
        let n = circle();
        let frame = n.path_frame(0);
        let pres = n.pi1_presentation(&frame);
        let u = diag2(c(0.0, 1.0), c(0.0, -1.0));
        let z = reconstruct(&n, &z_rep(u.clone()), &frame, &pres).unwrap();
        assert!(transport(&n, &z, &Path::empty(0)).unwrap().approx_eq(&CMatrix::identity(2), tol()));
        let lp = n.loop_of_generator(&pres, &frame, 0).unwrap();
        let t = transport(&n, &z, &lp).unwrap();
        assert!(t.approx_eq(&u, tol()));
        assert!(transport(&n, &z, &lp.reverse()).unwrap().approx_eq(&t.adjoint(), tol()));
        let b = pres.generators()[0];
        assert!(transport(&n, &z, &Path::single(Step::forward(b))).unwrap().approx_eq(z.value(&n, &b).unwrap(), tol()));
    }

    #[test]
    fn reconstruct_round_trip_on_circle() {
        let n = circle();
        let frame = n.path_frame(0);
        let pres = n.pi1_presentation(&frame);
        let u = diag2(c(0.0, 1.0), c(0.0, -1.0));
        let z = reconstruct(&n, &z_rep(u.clone()), &frame, &pres).unwrap();
        assert!(validate_cocycle(&n, &z, tol()).unwrap().is_valid());
        let (chi, _) = holonomy(&n, &z, &frame, &pres, tol()).unwrap();
        assert_eq!(chi.images()[0], u);
        for b in frame.tree_simplices() {
            assert_eq!(z.value(&n, &b).unwrap(), &CMatrix::identity(2));
        }
        let trivial = reconstruct(&n, &HolonomyRep::trivial(Presentation::free(1), 2), &frame, &pres).unwrap();
        assert!(trivial.values().iter().all(|v| v == &CMatrix::identity(2)));
    }

    #[test]
    fn equivalence_examples() {
        let u = diag2(c(0.0, 1.0), c(0.0, -1.0));
        let v = diag2(c(0.0, -1.0), c(0.0, 1.0));
        let same = equivalent(&z_rep(u.clone()), &z_rep(u.clone()), tol(), DEFAULT_SEED).unwrap();
        assert_eq!(same.witness(), Some(&CMatrix::identity(2)));

        let swapped = equivalent(&z_rep(u.clone()), &z_rep(v.clone()), tol(), DEFAULT_SEED).unwrap();
        let g = swapped.witness().expect("equivalent");
        assert!((&(g * &u) * &g.adjoint()).approx_eq(&v, tol().scaled(10.0)));
        assert!(g.get(0, 0).norm() < 1e-9 && g.get(1, 1).norm() < 1e-9);

        let none = equivalent(&z_rep(CMatrix::identity(2)), &z_rep(u), tol(), DEFAULT_SEED).unwrap();
        assert!(matches!(none, Equivalence::Inequivalent(InequivalenceCertificate::Spectrum)));
    }

    #[test]
    fn equivalence_of_random_conjugates() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pres = Presentation::free(2);
        let chi = HolonomyRep::new(pres, vec![random_unitary(3, &mut rng), random_unitary(3, &mut rng)], 3, tol()).unwrap();
        let g = random_unitary(3, &mut rng);
        let chi2 = chi.conjugated(&g);
        let w = equivalent(&chi, &chi2, tol(), DEFAULT_SEED).unwrap();
        let w = w.witness().expect("conjugate representations are equivalent");
        assert!(verifies(w, &chi, &chi2, tol()));
        assert_eq!(chern_c1(&chi).len(), 2);
        for (x, y) in chern_c1(&chi).iter().zip(chern_c1(&chi2)) {
            assert!((x - y).norm() < 1e-10);
        }

        let other =
            HolonomyRep::new(Presentation::free(2), vec![random_unitary(3, &mut rng), random_unitary(3, &mut rng)], 3, tol()).unwrap();
        assert!(matches!(
            equivalent(&chi, &other, tol(), DEFAULT_SEED).unwrap(),
            Equivalence::Inequivalent(InequivalenceCertificate::NoIntertwiner)
        ));
        assert!(equivalent(&chi, &z_rep(CMatrix::identity(3)), tol(), 0).is_err());
    }

    #[test]
    fn chern_examples() {
        let chi = z_rep(diag2(phase(0.4), phase(1.1)));
        assert!((chern_c1(&chi)[0] - phase(1.5)).norm() < 1e-12);
        let a = z_rep(CMatrix::identity(2));
        let b = z_rep(diag2(c(0.0, 1.0), c(0.0, -1.0)));
        assert!((chern_c1(&a)[0] - chern_c1(&b)[0]).norm() < 1e-12);
        assert_eq!(morphism_dim(&a, &b, tol()).unwrap(), 0);
        let sum = a.direct_sum(&b).unwrap();
        assert!((chern_c1(&sum)[0] - chern_c1(&a)[0] * chern_c1(&b)[0]).norm() < 1e-12);
    }

    #[test]
    fn sections_and_morphisms() {
        let pres = Presentation::free(1);
        assert_eq!(sections_dim(&HolonomyRep::trivial(pres.clone(), 3), tol()), 3);
        assert_eq!(sections_dim(&z_rep(CMatrix::scalar(c(-1.0, 0.0))), tol()), 0);
        assert_eq!(sections_dim(&z_rep(diag2(c(1.0, 0.0), c(-1.0, 0.0))), tol()), 1);

        let trivial = HolonomyRep::trivial(pres, 2);
        assert_eq!(morphism_dim(&trivial, &trivial, tol()).unwrap(), 4);
        let u = z_rep(diag2(c(0.0, 1.0), c(0.0, -1.0)));
        assert_eq!(morphism_dim(&u, &u, tol()).unwrap(), 2);
        assert_eq!(morphism_dim(&trivial, &u, tol()).unwrap(), 0);
        let two = HolonomyRep::trivial(Presentation::free(2), 2);
        assert!(morphism_dim(&trivial, &two, tol()).is_err());
    }

    #[test]
    fn quotient_examples() {
        let chi = z_rep(diag2(phase(std::f64::consts::FRAC_PI_3), c(1.0, 0.0)));
        let q = quotient_holonomy(&chi, Fiber::SpecialUnitary { dim: 2 }, tol()).unwrap();
        let labels = q.determinant_labels().unwrap();
        assert!((labels[0] - phase(std::f64::consts::FRAC_PI_3)).norm() < 1e-12);

        let pm = group_closure(2, &[CMatrix::identity(2).scale(c(-1.0, 0.0))], 4, tol()).unwrap();
        let q = quotient_holonomy(&z_rep(paulis::x()), Fiber::Finite(pm.clone()), tol()).unwrap();
        assert!(q.fiber().same_coset(&q.images()[0], &paulis::x().scale(c(-1.0, 0.0)), tol()).unwrap());

        // fiber equal to the image group: every relator value lies in it
        let klein = Presentation::new(
            2,
            vec![
                crate::presentation::word_from_signed(&[1, 1]).unwrap(),
                crate::presentation::word_from_signed(&[2, 2]).unwrap(),
                crate::presentation::word_from_signed(&[1, 2, -1, -2]).unwrap(),
            ],
        )
        .unwrap();
        let image = group_closure(2, &[paulis::x(), paulis::z()], 16, tol()).unwrap();
        let q = QuotientHolonomyRep::new(klein.clone(), vec![paulis::x(), paulis::z()], Fiber::Finite(image), tol()).unwrap();
        assert!(q.relator_values().unwrap().iter().all(|v| q.fiber().contains(v, tol()).unwrap()));

        // X does not normalize the diagonal Z/2
        let diag = group_closure(2, &[paulis::z()], 4, tol()).unwrap();
        assert!(matches!(quotient_holonomy(&z_rep(paulis::x()), Fiber::Finite(diag), tol()), Err(Error::NotInNormalizer(_))));
        // X and Z commute modulo ±I
        let q = QuotientHolonomyRep::new(klein, vec![paulis::x(), paulis::z()], Fiber::Finite(pm), tol());
        assert!(q.is_ok());
    }

    #[test]
    fn gauge_reduction_examples() {
        let trivial = FiniteMatrixGroup::trivial(2);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert!(gauge_reduction_check(&[random_unitary(2, &mut rng)], &trivial, tol()).unwrap());
        let diag = group_closure(2, &[paulis::z()], 4, tol()).unwrap();
        assert!(!gauge_reduction_check(&[paulis::x()], &diag, tol()).unwrap());
        assert!(gauge_reduction_check(&[diag2(phase(0.2), phase(-1.3))], &diag, tol()).unwrap());
        assert!(!gauge_reduction_check(&[paulis::hadamard()], &diag, tol()).unwrap());
        assert!(gauge_reduction_check(&[CMatrix::identity(3)], &diag, tol()).is_err());
    }

    #[test]
    fn invalid_representation_rejected() {
        let z2 = Presentation::new(1, vec![crate::presentation::word_from_signed(&[1, 1]).unwrap()]).unwrap();
        assert!(HolonomyRep::new(z2.clone(), vec![paulis::x()], 2, tol()).is_ok());
        assert!(matches!(HolonomyRep::new(z2, vec![diag2(c(0.0, 1.0), c(1.0, 0.0))], 2, tol()), Err(Error::InvalidRepresentation(_))));
    }
}
