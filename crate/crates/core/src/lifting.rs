//! Lifting a quotient holonomy `χ: π1 → NG/G` to `χ̃: π1 → NG`.
//!
//! Determinant cosets of `SU(d)` lift through the section
//! `z ↦ diag(z, 1, …, 1)`. Finite fibers, and scalar fibers discretized to
//! `n`-th roots of unity, are searched by backtracking over
//! `representative · g`; when no candidate satisfies every relator, the
//! distinct relator values are reported per relator.

use crate::error::{Error, Result};
use crate::netbundle::{evaluate_word, Fiber, QuotientHolonomyRep};
use crate::presentation::{Presentation, Word};
use crate::unitary::{c, phase, require_unitary, CMatrix, FiniteMatrixGroup, Tolerance, C64};

/// Default cap on the number of candidate assignments `|fiber|^#generators`.
pub const DEFAULT_SEARCH_CAP: u128 = 1_000_000;

/// The kernel of the quotient map, as far as lifting is concerned.
#[derive(Clone, Debug)]
pub enum LiftFiber {
    Finite(FiniteMatrixGroup),
    /// `G = SU(d)`; a coset is its determinant, given either as a `1×1`
    /// matrix or as any `d×d` representative.
    DetSection {
        dim: usize,
    },
    /// `G = T·I` sampled at the `n`-th roots of unity.
    ScalarPhases {
        dim: usize,
        n: usize,
    },
}

impl LiftFiber {
    pub fn dim(&self) -> usize {
        match self {
            LiftFiber::Finite(g) => g.dim(),
            LiftFiber::DetSection { dim } | LiftFiber::ScalarPhases { dim, .. } => *dim,
        }
    }

    /// Candidate fiber elements in canonical order, identity first.
    fn candidates(&self) -> Vec<CMatrix> {
        match self {
            LiftFiber::Finite(g) => {
                let id = CMatrix::identity(g.dim());
                let mut out: Vec<CMatrix> = g.elements().to_vec();
                if let Some(k) = out.iter().position(|e| e.approx_eq(&id, Tolerance::default())) {
                    let e = out.remove(k);
                    out.insert(0, e);
                }
                out
            }
            LiftFiber::ScalarPhases { dim, n } => {
                (0..*n).map(|k| CMatrix::identity(*dim).scale(phase(2.0 * std::f64::consts::PI * k as f64 / *n as f64))).collect()
            }
            LiftFiber::DetSection { .. } => Vec::new(),
        }
    }

    fn contains(&self, u: &CMatrix, tol: Tolerance) -> Result<bool> {
        match self {
            LiftFiber::Finite(g) => g.contains(u, tol),
            LiftFiber::ScalarPhases { .. } => Ok(u.is_scalar(tol)),
            LiftFiber::DetSection { .. } => Ok((u.determinant()? - c(1.0, 0.0)).norm() <= tol.eps()),
        }
    }
}

/// A quotient representation together with the fiber to lift through.
#[derive(Clone, Debug)]
pub struct LiftProblem {
    presentation: Presentation,
    images: Vec<CMatrix>,
    fiber: LiftFiber,
}

impl LiftProblem {
    /// Checks that every relator, evaluated on representatives, lands in the fiber.
    pub fn new(presentation: Presentation, images: Vec<CMatrix>, fiber: LiftFiber, tol: Tolerance) -> Result<Self> {
        if images.len() != presentation.generator_count() {
            return Err(Error::DimensionMismatch(format!("{} images for {} generators", images.len(), presentation.generator_count())));
        }
        let dim = fiber.dim();
        if let LiftFiber::ScalarPhases { n: 0, .. } = fiber {
            return Err(Error::UnsupportedFiber("scalar phases need n >= 1".into()));
        }
        for (k, u) in images.iter().enumerate() {
            let label_only = matches!(fiber, LiftFiber::DetSection { .. }) && u.rows() == 1 && u.cols() == 1;
            if !label_only && (u.rows() != dim || u.cols() != dim) {
                return Err(Error::DimensionMismatch(format!("image of generator {k} is {}x{}, expected {dim}x{dim}", u.rows(), u.cols())));
            }
            require_unitary(u, tol, &format!("image of generator {k}"))?;
            if let LiftFiber::Finite(g) = &fiber {
                if !g.is_normalized_by(u, tol)? {
                    return Err(Error::NotInNormalizer(format!("image of generator {k}")));
                }
            }
        }
        let problem = LiftProblem { presentation, images, fiber };
        if let LiftFiber::DetSection { .. } = problem.fiber {
            let labels: Vec<CMatrix> = problem.det_labels()?.into_iter().map(CMatrix::scalar).collect();
            for (k, r) in problem.presentation.relators().iter().enumerate() {
                let v = evaluate_word(&labels, 1, r)?;
                if (v.get(0, 0) - c(1.0, 0.0)).norm() > tol.scaled(10.0).eps() {
                    return Err(Error::InvalidQuotient(format!("relator {k} has determinant label {}", v.get(0, 0))));
                }
            }
        } else {
            for (k, r) in problem.presentation.relators().iter().enumerate() {
                let v = evaluate_word(&problem.images, dim, r)?;
                if !problem.fiber.contains(&v, tol.scaled(10.0))? {
                    return Err(Error::InvalidQuotient(format!("relator {k} does not evaluate into the fiber")));
                }
            }
        }
        Ok(problem)
    }

    /// The lifting problem carried by a quotient holonomy. Scalar fibers are
    /// discretized to `phases`-th roots of unity.
    pub fn from_quotient(q: &QuotientHolonomyRep, phases: usize, tol: Tolerance) -> Result<Self> {
        let fiber = match q.fiber() {
            Fiber::Finite(g) => LiftFiber::Finite(g.clone()),
            Fiber::SpecialUnitary { dim } => LiftFiber::DetSection { dim: *dim },
            Fiber::Scalars { dim } => LiftFiber::ScalarPhases { dim: *dim, n: phases },
        };
        LiftProblem::new(q.presentation().clone(), q.images().to_vec(), fiber, tol)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn images(&self) -> &[CMatrix] {
        &self.images
    }

    pub fn fiber(&self) -> &LiftFiber {
        &self.fiber
    }

    pub fn dim(&self) -> usize {
        self.fiber.dim()
    }

    /// Determinant labels of the quotient images (only for det-section fibers).
    pub fn det_labels(&self) -> Result<Vec<C64>> {
        self.images.iter().map(|u| if u.rows() == 1 { Ok(u.get(0, 0)) } else { u.determinant() }).collect()
    }

    fn search_space(&self) -> u128 {
        let f = self.fiber.candidates().len() as u128;
        let mut size: u128 = 1;
        for _ in 0..self.images.len() {
            size = size.saturating_mul(f);
        }
        size
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftStatus {
    Lifted,
    NoLiftInSearchSpace,
}

/// The distinct values one relator takes over all candidate lifts.
#[derive(Clone, Debug)]
pub struct RelatorDefects {
    pub relator: usize,
    pub word: Word,
    pub values: Vec<CMatrix>,
    /// Does some candidate make this relator the identity?
    pub satisfiable: bool,
}

#[derive(Clone, Debug)]
pub struct LiftResult {
    pub status: LiftStatus,
    pub images: Option<Vec<CMatrix>>,
    pub defects: Vec<RelatorDefects>,
}

impl LiftResult {
    pub fn is_lifted(&self) -> bool {
        self.status == LiftStatus::Lifted
    }

    fn lifted(images: Vec<CMatrix>) -> Self {
        LiftResult { status: LiftStatus::Lifted, images: Some(images), defects: Vec::new() }
    }
}

/// Lift through `z ↦ diag(z, 1, …, 1)`; always succeeds.
pub fn lift_via_det_section(problem: &LiftProblem) -> Result<LiftResult> {
    let LiftFiber::DetSection { dim } = problem.fiber else {
        return Err(Error::UnsupportedFiber("the determinant section needs an SU(d) fiber".into()));
    };
    if dim == 0 {
        return Err(Error::UnsupportedFiber("dimension 0".into()));
    }
    let images = problem
        .det_labels()?
        .into_iter()
        .map(|z| {
            let mut entries = vec![c(1.0, 0.0); dim];
            entries[0] = z;
            CMatrix::diag(&entries)
        })
        .collect();
    Ok(LiftResult::lifted(images))
}

/// Evaluates every relator on candidate images.
pub fn relator_defect(problem: &LiftProblem, candidates: &[CMatrix]) -> Result<Vec<CMatrix>> {
    if candidates.len() != problem.images.len() {
        return Err(Error::DimensionMismatch(format!("{} candidates for {} generators", candidates.len(), problem.images.len())));
    }
    let dim = problem.dim();
    for u in candidates {
        if u.rows() != dim || u.cols() != dim {
            return Err(Error::DimensionMismatch(format!("candidate is {}x{}, expected {dim}x{dim}", u.rows(), u.cols())));
        }
    }
    problem.presentation.relators().iter().map(|r| evaluate_word(candidates, dim, r)).collect()
}

/// Backtracking search for a lift with images `representative · g`.
///
/// Fails with [`Error::SearchSpaceTooLarge`] when `|fiber|^#generators`
/// exceeds `cap`. Det-section fibers are lifted by the section instead.
pub fn lift_search(problem: &LiftProblem, cap: u128, tol: Tolerance) -> Result<LiftResult> {
    if let LiftFiber::DetSection { .. } = problem.fiber {
        return lift_via_det_section(problem);
    }
    let size = problem.search_space();
    if size > cap {
        return Err(Error::SearchSpaceTooLarge { size, cap });
    }
    let fiber = problem.fiber.candidates();
    let dim = problem.dim();
    let ngen = problem.images.len();
    let options: Vec<Vec<CMatrix>> = problem.images.iter().map(|u| fiber.iter().map(|g| u * g).collect()).collect();

    // each relator is checked as soon as its last generator is assigned
    let mut due: Vec<Vec<usize>> = vec![Vec::new(); ngen];
    let relators = problem.presentation.relators();
    let mut always_checked = Vec::new();
    for (k, r) in relators.iter().enumerate() {
        match r.iter().map(|l| l.gen).max() {
            Some(g) => due[g].push(k),
            None => always_checked.push(k),
        }
    }
    let id = CMatrix::identity(dim);
    let satisfied =
        |k: usize, chosen: &[CMatrix]| -> bool { evaluate_word(chosen, dim, &relators[k]).is_ok_and(|v| v.distance(&id) <= tol.eps()) };

    let mut choice = vec![0usize; ngen];
    let mut chosen: Vec<CMatrix> = Vec::with_capacity(ngen);
    let mut depth = 0usize;
    let found = 'search: loop {
        if depth == ngen {
            break 'search true;
        }
        let mut advanced = false;
        while choice[depth] < fiber.len() {
            chosen.truncate(depth);
            chosen.push(options[depth][choice[depth]].clone());
            choice[depth] += 1;
            if due[depth].iter().all(|&k| satisfied(k, &chosen)) {
                advanced = true;
                break;
            }
        }
        if advanced {
            depth += 1;
            if depth < ngen {
                choice[depth] = 0;
            }
        } else {
            if depth == 0 {
                break 'search false;
            }
            depth -= 1;
        }
    };
    if ngen == 0 {
        if always_checked.iter().all(|&k| satisfied(k, &[])) {
            return Ok(LiftResult::lifted(Vec::new()));
        }
    } else if found {
        chosen.truncate(ngen);
        return Ok(LiftResult::lifted(chosen));
    }

    let defects = (0..relators.len()).map(|k| relator_defect_set(problem, &options, k, tol)).collect::<Result<_>>()?;
    Ok(LiftResult { status: LiftStatus::NoLiftInSearchSpace, images: None, defects })
}

/// Distinct values of relator `k` over all choices of its own generators.
fn relator_defect_set(problem: &LiftProblem, options: &[Vec<CMatrix>], k: usize, tol: Tolerance) -> Result<RelatorDefects> {
    let word = problem.presentation.relators()[k].clone();
    let dim = problem.dim();
    let mut gens: Vec<usize> = word.iter().map(|l| l.gen).collect();
    gens.sort_unstable();
    gens.dedup();
    let id = CMatrix::identity(dim);
    let mut images: Vec<CMatrix> = problem.images.clone();
    let mut values: Vec<CMatrix> = Vec::new();
    let mut counter = vec![0usize; gens.len()];
    loop {
        for (slot, &g) in gens.iter().enumerate() {
            images[g] = options[g][counter[slot]].clone();
        }
        let v = evaluate_word(&images, dim, &word)?;
        if !values.iter().any(|w| w.approx_eq(&v, tol)) {
            values.push(v);
        }
        // odometer over the relator's generators
        let mut slot = 0;
        loop {
            if slot == gens.len() {
                let satisfiable = values.iter().any(|v| v.approx_eq(&id, tol));
                return Ok(RelatorDefects { relator: k, word, values, satisfiable });
            }
            counter[slot] += 1;
            if counter[slot] < options[gens[slot]].len() {
                break;
            }
            counter[slot] = 0;
            slot += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netbundle::gauge_reduction_check;
    use crate::presentation::word_from_signed;
    use crate::unitary::{group_closure, paulis};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn klein() -> Presentation {
        Presentation::new(
            2,
            vec![word_from_signed(&[1, 1]).unwrap(), word_from_signed(&[2, 2]).unwrap(), word_from_signed(&[1, 2, -1, -2]).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn det_section_examples() {
        let p =
            LiftProblem::new(Presentation::free(1), vec![CMatrix::scalar(c(1.0, 0.0))], LiftFiber::DetSection { dim: 2 }, tol()).unwrap();
        let r = lift_via_det_section(&p).unwrap();
        assert_eq!(r.images.unwrap()[0], CMatrix::identity(2));

        let z = phase(std::f64::consts::FRAC_PI_3);
        let p = LiftProblem::new(Presentation::free(1), vec![CMatrix::scalar(z)], LiftFiber::DetSection { dim: 2 }, tol()).unwrap();
        let lifted = lift_via_det_section(&p).unwrap().images.unwrap();
        assert_eq!(lifted[0], CMatrix::diag(&[z, c(1.0, 0.0)]));
        assert!((lifted[0].determinant().unwrap() - z).norm() < 1e-12);

        // full-size representatives are labelled by their determinant
        let rep = CMatrix::diag(&[phase(0.5), phase(0.25)]);
        let p = LiftProblem::new(Presentation::free(1), vec![rep], LiftFiber::DetSection { dim: 2 }, tol()).unwrap();
        let lifted = lift_search(&p, DEFAULT_SEARCH_CAP, tol()).unwrap().images.unwrap();
        assert!((lifted[0].determinant().unwrap() - phase(0.75)).norm() < 1e-12);
    }

    #[test]
    fn det_labels_must_respect_relators() {
        let z2 = Presentation::new(1, vec![word_from_signed(&[1, 1]).unwrap()]).unwrap();
        assert!(LiftProblem::new(z2.clone(), vec![CMatrix::scalar(c(-1.0, 0.0))], LiftFiber::DetSection { dim: 2 }, tol()).is_ok());
        assert!(matches!(
            LiftProblem::new(z2, vec![CMatrix::scalar(c(0.0, 1.0))], LiftFiber::DetSection { dim: 2 }, tol()),
            Err(Error::InvalidQuotient(_))
        ));
    }

    #[test]
    fn free_group_lifts_with_raw_representatives() {
        let pm = group_closure(2, &[CMatrix::identity(2).scale(c(-1.0, 0.0))], 4, tol()).unwrap();
        let p = LiftProblem::new(Presentation::free(2), vec![paulis::x(), paulis::hadamard()], LiftFiber::Finite(pm), tol()).unwrap();
        let r = lift_search(&p, DEFAULT_SEARCH_CAP, tol()).unwrap();
        assert_eq!(r.images.unwrap(), vec![paulis::x(), paulis::hadamard()]);
    }

    #[test]
    fn pauli_obstruction() {
        let p = LiftProblem::new(klein(), vec![paulis::x(), paulis::z()], LiftFiber::ScalarPhases { dim: 2, n: 8 }, tol()).unwrap();
        let r = lift_search(&p, DEFAULT_SEARCH_CAP, tol()).unwrap();
        assert_eq!(r.status, LiftStatus::NoLiftInSearchSpace);
        assert!(r.images.is_none());
        let commutator = &r.defects[2];
        assert!(!commutator.satisfiable);
        assert_eq!(commutator.values.len(), 1);
        assert!(commutator.values[0].approx_eq(&CMatrix::identity(2).scale(c(-1.0, 0.0)), Tolerance::new(1e-10).unwrap()));
        assert!(r.defects[0].satisfiable && r.defects[1].satisfiable);
    }

    #[test]
    fn trivial_quotient_lifts() {
        let p = LiftProblem::new(klein(), vec![CMatrix::identity(2); 2], LiftFiber::ScalarPhases { dim: 2, n: 8 }, tol()).unwrap();
        let r = lift_search(&p, DEFAULT_SEARCH_CAP, tol()).unwrap();
        assert_eq!(r.images.unwrap(), vec![CMatrix::identity(2); 2]);
    }

    #[test]
    fn search_corrects_representatives() {
        // Z/2 with representative iX in U(2)/{±1, ±i}: (iX)² = -I, needs a phase fix
        let z4 = group_closure(2, &[CMatrix::identity(2).scale(c(0.0, 1.0))], 8, tol()).unwrap();
        let z2 = Presentation::new(1, vec![word_from_signed(&[1, 1]).unwrap()]).unwrap();
        let rep = paulis::x().scale(c(0.0, 1.0));
        let p = LiftProblem::new(z2, vec![rep.clone()], LiftFiber::Finite(z4.clone()), tol()).unwrap();
        let r = lift_search(&p, DEFAULT_SEARCH_CAP, tol()).unwrap();
        let lifted = r.images.unwrap();
        assert!(relator_defect(&p, &lifted).unwrap()[0].approx_eq(&CMatrix::identity(2), tol()));
        assert!(z4.same_coset(&lifted[0], &rep, tol()).unwrap());
        assert!(gauge_reduction_check(&lifted, &z4, tol()).unwrap());
    }

    #[test]
    fn relator_defect_examples() {
        let p = LiftProblem::new(klein(), vec![paulis::x(), paulis::z()], LiftFiber::ScalarPhases { dim: 2, n: 8 }, tol()).unwrap();
        let d = relator_defect(&p, &[paulis::x(), paulis::z()]).unwrap();
        assert!(d[2].approx_eq(&CMatrix::identity(2).scale(c(-1.0, 0.0)), tol()));
        let shifted = relator_defect(&p, &[paulis::x().scale(phase(0.7)), paulis::z().scale(phase(-2.1))]).unwrap();
        assert!(shifted[2].approx_eq(&d[2], tol()));
        assert!(relator_defect(&p, &[paulis::x()]).is_err());

        let trivial = LiftProblem::new(klein(), vec![CMatrix::identity(2); 2], LiftFiber::ScalarPhases { dim: 2, n: 2 }, tol()).unwrap();
        assert!(relator_defect(&trivial, &vec![CMatrix::identity(2); 2]).unwrap().iter().all(|m| m == &CMatrix::identity(2)));
    }

    #[test]
    fn rejects_invalid_problems() {
        let diag = group_closure(2, &[paulis::z()], 4, tol()).unwrap();
        assert!(matches!(
            LiftProblem::new(Presentation::free(1), vec![paulis::hadamard()], LiftFiber::Finite(diag), tol()),
            Err(Error::NotInNormalizer(_))
        ));
        // X and Z do not commute up to {±I} elements of the trivial group
        assert!(matches!(
            LiftProblem::new(klein(), vec![paulis::x(), paulis::z()], LiftFiber::Finite(FiniteMatrixGroup::trivial(2)), tol()),
            Err(Error::InvalidQuotient(_))
        ));
    }

    #[test]
    fn cap_is_enforced() {
        let p = LiftProblem::new(Presentation::free(3), vec![CMatrix::identity(2); 3], LiftFiber::ScalarPhases { dim: 2, n: 8 }, tol())
            .unwrap();
        assert_eq!(lift_search(&p, 100, tol()).unwrap_err(), Error::SearchSpaceTooLarge { size: 512, cap: 100 });
    }
}
