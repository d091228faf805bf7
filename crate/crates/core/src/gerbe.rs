//! Group gerbes over a poset: cochains `u: Σ1 → NG` whose coboundary
//! `du(c) = u(∂0c)·u(∂2c)·u(∂1c)†` lies in `G`, and their flattening into
//! strict cocycles `z(b) = v(∂0b)·g(b)·u(b)·v(∂1b)†`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lifting::{lift_search, LiftProblem};
use crate::netbundle::{evaluate_word, reconstruct, transport, validate_cocycle, Cocycle, Fiber, HolonomyRep, QuotientHolonomyRep};
use crate::poset::{Nerve, PathFrame, Pi1Presentation, Simplex1, Simplex2};
use crate::unitary::{c, random_unitary, require_unitary, CMatrix, Tolerance};

/// A cochain over `Σ1` with values normalizing a fiber group.
#[derive(Clone, Debug)]
pub struct GerbeCochain {
    values: Vec<CMatrix>,
    fiber: Fiber,
}

impl GerbeCochain {
    /// Values for every 1-simplex, in `Σ1` order. Only shapes and unitarity
    /// are checked here; [`validate_gerbe`] checks the gerbe conditions.
    pub fn new(nerve: &Nerve, values: Vec<CMatrix>, fiber: Fiber, tol: Tolerance) -> Result<Self> {
        if values.len() != nerve.simplices1().len() {
            return Err(Error::DimensionMismatch(format!("{} values for {} 1-simplices", values.len(), nerve.simplices1().len())));
        }
        let d = fiber.dim();
        for (i, u) in values.iter().enumerate() {
            if u.rows() != d || u.cols() != d {
                return Err(Error::DimensionMismatch(format!("value {i} is {}x{}, expected {d}x{d}", u.rows(), u.cols())));
            }
            require_unitary(u, tol, &format!("cochain value {i}"))?;
        }
        Ok(GerbeCochain { values, fiber })
    }

    /// Sparse assignment; simplices not listed get the identity.
    pub fn from_assignments(nerve: &Nerve, assignments: &[(Simplex1, CMatrix)], fiber: Fiber, tol: Tolerance) -> Result<Self> {
        let mut values = vec![CMatrix::identity(fiber.dim()); nerve.simplices1().len()];
        for (b, u) in assignments {
            let i = nerve.index_of(b).ok_or_else(|| Error::DimensionMismatch(format!("{b:?} is not a 1-simplex of the poset")))?;
            values[i] = u.clone();
        }
        GerbeCochain::new(nerve, values, fiber, tol)
    }

    pub fn values(&self) -> &[CMatrix] {
        &self.values
    }

    pub fn fiber(&self) -> &Fiber {
        &self.fiber
    }

    pub fn dim(&self) -> usize {
        self.fiber.dim()
    }

    /// `u'(b) = h(b)·u(b)` for fiber elements `h(b)`: another representative
    /// of the same quotient data.
    pub fn regauge(&self, factors: &[CMatrix], tol: Tolerance) -> Result<GerbeCochain> {
        if factors.len() != self.values.len() {
            return Err(Error::DimensionMismatch(format!("{} factors for {} values", factors.len(), self.values.len())));
        }
        for (i, h) in factors.iter().enumerate() {
            if !self.fiber.contains(h, tol)? {
                return Err(Error::InvalidQuotient(format!("factor {i} is not in the fiber")));
            }
        }
        let values = factors.iter().zip(&self.values).map(|(h, u)| h * u).collect();
        Ok(GerbeCochain { values, fiber: self.fiber.clone() })
    }

    /// The coboundary `du(c)`.
    pub fn coboundary(&self, nerve: &Nerve, c: &Simplex2) -> CMatrix {
        let [f0, f1, f2] = c.faces.map(|f| &self.values[nerve.index_of(&f).expect("faces are 1-simplices")]);
        &(f0 * f2) * &f1.adjoint()
    }

    fn as_cocycle(&self, nerve: &Nerve, tol: Tolerance) -> Result<Cocycle> {
        Cocycle::from_values(nerve, self.dim(), self.values.clone(), tol)
    }
}

/// Matrices on which the crossed-module identity is evaluated.
fn fiber_test_elements(fiber: &Fiber) -> Vec<CMatrix> {
    match fiber {
        Fiber::Finite(g) => g.generating_set().to_vec(),
        Fiber::SpecialUnitary { dim } => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5u64);
            (0..3)
                .map(|_| {
                    let u = random_unitary(*dim, &mut rng);
                    let det = u.determinant().expect("square");
                    u.scale(c(1.0, 0.0) / det.powf(1.0 / *dim as f64))
                })
                .collect()
        }
        Fiber::Scalars { dim } => vec![CMatrix::identity(*dim).scale(crate::unitary::phase(0.7))],
    }
}

#[derive(Clone, Debug, Default)]
pub struct GerbeReport {
    /// `Σ1` indices whose value does not normalize the fiber.
    pub normalizer_failures: Vec<usize>,
    /// `Σ2` indices whose coboundary leaves the fiber.
    pub coboundary_failures: Vec<usize>,
    /// Number of 2-simplices with `du(c) ≠ 1`.
    pub nontrivial_coboundaries: usize,
    /// Max over 2-simplices and test elements of
    /// `‖ad du(c) ∘ ad u(∂1c) − ad u(∂0c) ∘ ad u(∂2c)‖`.
    pub crossed_module_residual: f64,
}

impl GerbeReport {
    pub fn is_valid(&self, tol: Tolerance) -> bool {
        self.normalizer_failures.is_empty() && self.coboundary_failures.is_empty() && self.crossed_module_residual <= tol.eps()
    }
}

pub fn validate_gerbe(nerve: &Nerve, cochain: &GerbeCochain, tol: Tolerance) -> Result<GerbeReport> {
    if cochain.values.len() != nerve.simplices1().len() {
        return Err(Error::DimensionMismatch("cochain does not match the poset".into()));
    }
    let mut report = GerbeReport::default();
    for (i, u) in cochain.values.iter().enumerate() {
        if !cochain.fiber.is_normalized_by(u, tol)? {
            report.normalizer_failures.push(i);
        }
    }
    let tests = fiber_test_elements(&cochain.fiber);
    let id = CMatrix::identity(cochain.dim());
    let ad = |u: &CMatrix, g: &CMatrix| &(u * g) * &u.adjoint();
    for (k, s) in nerve.simplices2().iter().enumerate() {
        let delta = cochain.coboundary(nerve, s);
        if !cochain.fiber.contains(&delta, tol)? {
            report.coboundary_failures.push(k);
        }
        if !delta.approx_eq(&id, tol) {
            report.nontrivial_coboundaries += 1;
        }
        let [u0, u1, u2] = s.faces.map(|f| &cochain.values[nerve.index_of(&f).expect("faces are 1-simplices")]);
        for g in &tests {
            let lhs = ad(&delta, &ad(u1, g));
            let rhs = ad(u0, &ad(u2, g));
            report.crossed_module_residual = report.crossed_module_residual.max(lhs.distance(&rhs));
        }
    }
    Ok(report)
}

/// `u(b) := χ(γ_{a∂0b} * b * γ_{a∂1b}⁻¹)` evaluated on the representatives of `q`.
pub fn gerbe_from_section(nerve: &Nerve, q: &QuotientHolonomyRep, frame: &PathFrame, pres: &Pi1Presentation) -> Result<GerbeCochain> {
    if q.presentation().generator_count() != pres.generator_count() {
        return Err(Error::DimensionMismatch(format!(
            "quotient data has {} generators, presentation has {}",
            q.presentation().generator_count(),
            pres.generator_count()
        )));
    }
    let mut values = Vec::with_capacity(nerve.simplices1().len());
    for b in nerve.simplices1() {
        let word = nerve.word_of_path(pres, &frame.loop_through(*b))?;
        values.push(evaluate_word(q.images(), q.dim(), &word)?);
    }
    Ok(GerbeCochain { values, fiber: q.fiber().clone() })
}

/// The quotient holonomy carried by a gerbe: images of the generator loops
/// under the `u`-transport.
pub fn quotient_holonomy_of(
    nerve: &Nerve,
    cochain: &GerbeCochain,
    frame: &PathFrame,
    pres: &Pi1Presentation,
    tol: Tolerance,
) -> Result<QuotientHolonomyRep> {
    let as_cocycle = cochain.as_cocycle(nerve, tol)?;
    let images = (0..pres.generator_count())
        .map(|k| transport(nerve, &as_cocycle, &nerve.loop_of_generator(pres, frame, k)?))
        .collect::<Result<Vec<_>>>()?;
    QuotientHolonomyRep::new(pres.presentation().clone(), images, cochain.fiber.clone(), tol.scaled(10.0))
}

/// The lifting problem equivalent to flattening `cochain`.
pub fn lift_problem_of(
    nerve: &Nerve,
    cochain: &GerbeCochain,
    frame: &PathFrame,
    pres: &Pi1Presentation,
    phases: usize,
    tol: Tolerance,
) -> Result<LiftProblem> {
    LiftProblem::from_quotient(&quotient_holonomy_of(nerve, cochain, frame, pres, tol)?, phases, tol)
}

/// `v` on elements and `g` on 1-simplices making
/// `z(b) = v(∂0b)·g(b)·u(b)·v(∂1b)†` a strict cocycle.
#[derive(Clone, Debug)]
pub struct FlatteningPair {
    pub v: Vec<CMatrix>,
    pub g: Vec<CMatrix>,
    pub z: Cocycle,
}

/// Applies a pair to a cochain.
pub fn flattened(nerve: &Nerve, cochain: &GerbeCochain, v: &[CMatrix], g: &[CMatrix], tol: Tolerance) -> Result<Cocycle> {
    let values = nerve
        .simplices1()
        .iter()
        .zip(cochain.values.iter().zip(g))
        .map(|(b, (u, gb))| &(&(&v[b.d0] * gb) * u) * &v[b.d1].adjoint())
        .collect();
    Cocycle::from_values(nerve, cochain.dim(), values, tol.scaled(10.0))
}

/// Searches for a flattening pair.
///
/// The quotient holonomy of `u` is lifted with [`lift_search`] (scalar fibers
/// discretized to `phases`-th roots of unity, at most `budget` candidates);
/// the lift is turned into a cocycle `z`, and `v(o)` is the `u`-transport
/// along the route of `o`. Only verified pairs are returned; `None` means no
/// lift exists in the search space.
pub fn flatten(
    nerve: &Nerve,
    cochain: &GerbeCochain,
    frame: &PathFrame,
    pres: &Pi1Presentation,
    phases: usize,
    budget: u128,
    tol: Tolerance,
) -> Result<Option<FlatteningPair>> {
    let d = cochain.dim();
    let n = nerve.poset().len();
    let report = validate_gerbe(nerve, cochain, tol)?;
    if !report.normalizer_failures.is_empty() || !report.coboundary_failures.is_empty() {
        return Err(Error::InvalidQuotient(format!(
            "not a gerbe: {} values outside the normalizer, {} coboundaries outside the fiber",
            report.normalizer_failures.len(),
            report.coboundary_failures.len()
        )));
    }
    if report.nontrivial_coboundaries == 0 {
        let z = cochain.as_cocycle(nerve, tol)?;
        return Ok(Some(FlatteningPair { v: vec![CMatrix::identity(d); n], g: vec![CMatrix::identity(d); nerve.simplices1().len()], z }));
    }

    let problem = lift_problem_of(nerve, cochain, frame, pres, phases, tol)?;
    let lift = lift_search(&problem, budget, tol)?;
    let Some(images) = lift.images else {
        return Ok(None);
    };
    let chi = HolonomyRep::new(pres.presentation().clone(), images, d, tol.scaled(10.0))?;
    let z = reconstruct(nerve, &chi, frame, pres)?;

    let as_cocycle = cochain.as_cocycle(nerve, tol)?;
    let v: Vec<CMatrix> = (0..n).map(|o| transport(nerve, &as_cocycle, frame.route(o))).collect::<Result<_>>()?;
    let mut g = Vec::with_capacity(nerve.simplices1().len());
    for (b, (u, zb)) in nerve.simplices1().iter().zip(cochain.values.iter().zip(z.values())) {
        // z(b) = h·v(∂0b)·u(b)·v(∂1b)† with h ∈ G, and g(b) = v(∂0b)†·h·v(∂0b)
        let w = &(&v[b.d0] * u) * &v[b.d1].adjoint();
        let h = zb * &w.adjoint();
        g.push(&(&v[b.d0].adjoint() * &h) * &v[b.d0]);
    }
    let check = tol.scaled(100.0);
    for gb in &g {
        if !cochain.fiber.contains(gb, check)? {
            return Ok(None);
        }
    }
    let z = flattened(nerve, cochain, &v, &g, tol)?;
    if !validate_cocycle(nerve, &z, check)?.is_valid() {
        return Ok(None);
    }
    Ok(Some(FlatteningPair { v, g, z }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netbundle::quotient_holonomy;
    use crate::poset::Poset;
    use crate::presentation::Presentation;
    use crate::unitary::{group_closure, paulis, phase};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn circle() -> Nerve {
        Nerve::new(Poset::close_order(&["a", "b", "c", "d"], &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]).unwrap())
    }

    fn pm() -> crate::unitary::FiniteMatrixGroup {
        group_closure(2, &[CMatrix::identity(2).scale(c(-1.0, 0.0))], 2, tol()).unwrap()
    }

    #[test]
    fn strict_cocycle_is_a_trivial_gerbe() {
        let n = circle();
        let frame = n.path_frame(0);
        let pres = n.pi1_presentation(&frame);
        let chi = HolonomyRep::new(Presentation::free(1), vec![paulis::hadamard()], 2, tol()).unwrap();
        let q = quotient_holonomy(&chi, Fiber::Finite(pm()), tol()).unwrap();
        let u = gerbe_from_section(&n, &q, &frame, &pres).unwrap();
        let report = validate_gerbe(&n, &u, tol()).unwrap();
        assert!(report.is_valid(tol()));
        assert_eq!(report.nontrivial_coboundaries, 0);
        let pair = flatten(&n, &u, &frame, &pres, 8, 1_000_000, tol()).unwrap().unwrap();
        assert!(pair.v.iter().all(|m| m == &CMatrix::identity(2)));
        assert!(pair.g.iter().all(|m| m == &CMatrix::identity(2)));
    }

    #[test]
    fn su2_coboundaries_have_unit_determinant() {
        let n = circle();
        let frame = n.path_frame(0);
        let pres = n.pi1_presentation(&frame);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let w = random_unitary(2, &mut rng);
        let w = w.scale(c(1.0, 0.0) / w.determinant().unwrap().sqrt());
        let value = &CMatrix::diag(&[phase(0.9), c(1.0, 0.0)]) * &w;
        let chi = HolonomyRep::new(Presentation::free(1), vec![value], 2, tol()).unwrap();
        let q = quotient_holonomy(&chi, Fiber::SpecialUnitary { dim: 2 }, tol()).unwrap();
        let section = gerbe_from_section(&n, &q, &frame, &pres).unwrap();
        for b in frame.tree_simplices() {
            assert_eq!(section.values()[n.index_of(&b).unwrap()], CMatrix::identity(2));
        }
        // per-edge SU(2) representatives make the coboundaries nontrivial
        let factors: Vec<CMatrix> = (0..n.simplices1().len())
            .map(|_| {
                let h = random_unitary(2, &mut rng);
                h.scale(c(1.0, 0.0) / h.determinant().unwrap().sqrt())
            })
            .collect();
        let u = section.regauge(&factors, tol()).unwrap();
        let report = validate_gerbe(&n, &u, tol()).unwrap();
        assert!(report.is_valid(tol()), "{report:?}");
        assert!(report.nontrivial_coboundaries > 0);
        for s in n.simplices2() {
            assert!((u.coboundary(&n, s).determinant().unwrap() - c(1.0, 0.0)).norm() < 1e-9);
        }
        let pair = flatten(&n, &u, &frame, &pres, 8, 1_000_000, tol()).unwrap().expect("free groups always lift");
        assert!(validate_cocycle(&n, &pair.z, tol().scaled(100.0)).unwrap().is_valid());
    }

    #[test]
    fn value_outside_normalizer_is_flagged() {
        let n = circle();
        let diag = group_closure(2, &[paulis::z()], 2, tol()).unwrap();
        let b = n.simplices1()[3];
        let u = GerbeCochain::from_assignments(&n, &[(b, paulis::hadamard())], Fiber::Finite(diag), tol()).unwrap();
        let report = validate_gerbe(&n, &u, tol()).unwrap();
        assert_eq!(report.normalizer_failures, vec![3]);
        assert!(!report.is_valid(tol()));
        let frame = n.path_frame(0);
        assert!(flatten(&n, &u, &frame, &n.pi1_presentation(&frame), 8, 1000, tol()).is_err());
    }

    #[test]
    fn regauged_section_flattens_back() {
        let n = circle();
        let frame = n.path_frame(0);
        let pres = n.pi1_presentation(&frame);
        let chi = HolonomyRep::new(Presentation::free(1), vec![paulis::x()], 2, tol()).unwrap();
        let q = quotient_holonomy(&chi, Fiber::Finite(pm()), tol()).unwrap();
        let u = gerbe_from_section(&n, &q, &frame, &pres).unwrap();
        let signs: Vec<CMatrix> = (0..n.simplices1().len())
            .map(|i| if i % 3 == 1 { CMatrix::identity(2).scale(c(-1.0, 0.0)) } else { CMatrix::identity(2) })
            .collect();
        let u2 = u.regauge(&signs, tol()).unwrap();
        let report = validate_gerbe(&n, &u2, tol()).unwrap();
        assert!(report.is_valid(tol()));
        assert!(report.nontrivial_coboundaries > 0);
        let pair = flatten(&n, &u2, &frame, &pres, 8, 1_000_000, tol()).unwrap().unwrap();
        assert!(validate_cocycle(&n, &pair.z, tol()).unwrap().is_valid());
        assert!(pair.g.iter().all(|g| pm().contains(g, tol()).unwrap()));
        // the flattened holonomy has the original coset
        let (hol, _) = crate::netbundle::holonomy(&n, &pair.z, &frame, &pres, tol()).unwrap();
        assert!(pm().same_coset(&hol.images()[0], &paulis::x(), tol()).unwrap());
    }

    #[test]
    fn base_change_conjugates_the_cochain() {
        let n = circle();
        let (fa, fb) = (n.path_frame(0), n.path_frame(2));
        let (pa, pb) = (n.pi1_presentation(&fa), n.pi1_presentation(&fb));
        let chi = HolonomyRep::new(Presentation::free(1), vec![paulis::hadamard()], 2, tol()).unwrap();
        let z = reconstruct(&n, &chi, &fa, &pa).unwrap();
        let mut gerbes = Vec::new();
        for (frame, pres) in [(&fa, &pa), (&fb, &pb)] {
            let (hol, _) = crate::netbundle::holonomy(&n, &z, frame, pres, tol()).unwrap();
            let q = quotient_holonomy(&hol, Fiber::Finite(pm()), tol()).unwrap();
            gerbes.push(gerbe_from_section(&n, &q, frame, pres).unwrap());
        }
        // u_b(b) = w(∂0b)·u_a(b)·w(∂1b)† with w(o) = T_b(route o)·T_a(route o)†
        let w: Vec<CMatrix> = (0..n.poset().len())
            .map(|o| &transport(&n, &z, fb.route(o)).unwrap() * &transport(&n, &z, fa.route(o)).unwrap().adjoint())
            .collect();
        for (i, b) in n.simplices1().iter().enumerate() {
            let expected = &(&w[b.d0] * &gerbes[0].values()[i]) * &w[b.d1].adjoint();
            assert!(gerbes[1].values()[i].approx_eq(&expected, tol().scaled(10.0)));
        }
    }
}
