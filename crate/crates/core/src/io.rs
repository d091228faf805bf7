//! Input documents and matrix literals.
//!
//! Every input is a JSON object with a `kind` tag: `poset`, `cocycle`,
//! `holonomy`, `group`, `lift-problem` or `gerbe`. Matrices are row-major
//! arrays of rows, each entry an `[re, im]` pair. Wherever a poset or a
//! group is expected, the name of a corpus entry may be given instead.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::corpus;
use crate::error::{Error, Result};
use crate::gerbe::GerbeCochain;
use crate::lifting::{LiftFiber, LiftProblem};
use crate::netbundle::{Cocycle, Fiber, HolonomyRep};
use crate::poset::{Element, Nerve, Poset, Simplex1};
use crate::presentation::{word_from_signed, word_to_signed, Presentation};
use crate::unitary::{c, group_closure, CMatrix, FiniteMatrixGroup, Tolerance};

/// Row-major rows of `[re, im]` pairs.
pub type MatrixLiteral = Vec<Vec<[f64; 2]>>;

pub fn matrix_from_literal(m: &MatrixLiteral) -> Result<CMatrix> {
    let rows: Vec<Vec<_>> = m.iter().map(|r| r.iter().map(|[re, im]| c(*re, *im)).collect()).collect();
    CMatrix::from_rows(&rows).map_err(|e| Error::Parse(format!("bad matrix: {e}")))
}

pub fn matrix_to_literal(m: &CMatrix) -> MatrixLiteral {
    m.to_rows().iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect()
}

pub fn matrix_to_json(m: &CMatrix) -> Value {
    serde_json::to_value(matrix_to_literal(m)).expect("floats serialize")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetDoc {
    pub elements: Vec<String>,
    #[serde(default)]
    pub covers: Vec<[String; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PosetRef {
    Named(String),
    Inline(PosetDoc),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub dim: usize,
    pub generators: Vec<MatrixLiteral>,
    #[serde(default = "default_bound")]
    pub bound: usize,
}

fn default_bound() -> usize {
    4096
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Named(String),
    Inline(GroupDoc),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub d0: String,
    pub d1: String,
    pub support: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeValue {
    pub edge: EdgeDoc,
    pub matrix: MatrixLiteral,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDoc {
    pub generators: usize,
    #[serde(default)]
    pub relators: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorImage {
    pub generator: usize,
    pub matrix: MatrixLiteral,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FiberDoc {
    Finite { group: GroupRef },
    SpecialUnitary { dim: usize },
    Scalars { dim: usize },
    DetSection { dim: usize },
    ScalarPhases { dim: usize, n: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Document {
    Poset(PosetDoc),
    Cocycle {
        poset: PosetRef,
        dim: usize,
        #[serde(default)]
        assignments: Vec<EdgeValue>,
    },
    /// A representation of the poset's `π1` (when `poset` is given) or of
    /// an explicit presentation; unlisted generators map to the identity.
    Holonomy {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        poset: Option<PosetRef>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        presentation: Option<PresentationDoc>,
        dim: usize,
        images: Vec<GeneratorImage>,
    },
    Group(GroupDoc),
    LiftProblem {
        presentation: PresentationDoc,
        images: Vec<MatrixLiteral>,
        fiber: FiberDoc,
    },
    Gerbe {
        poset: PosetRef,
        fiber: FiberDoc,
        #[serde(default)]
        assignments: Vec<EdgeValue>,
    },
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Poset(_) => "poset",
            Document::Cocycle { .. } => "cocycle",
            Document::Holonomy { .. } => "holonomy",
            Document::Group(_) => "group",
            Document::LiftProblem { .. } => "lift-problem",
            Document::Gerbe { .. } => "gerbe",
        }
    }
}

pub fn parse_document(text: &str) -> Result<Document> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn resolve_poset(r: &PosetRef) -> Result<Poset> {
    match r {
        PosetRef::Named(name) => corpus::poset(name).ok_or_else(|| Error::Parse(format!("unknown corpus poset `{name}`"))),
        PosetRef::Inline(doc) => poset_from_doc(doc),
    }
}

pub fn poset_from_doc(doc: &PosetDoc) -> Result<Poset> {
    let covers: Vec<(String, String)> = doc.covers.iter().map(|[a, b]| (a.clone(), b.clone())).collect();
    Poset::close_order(&doc.elements, &covers)
}

pub fn resolve_group(r: &GroupRef, tol: Tolerance) -> Result<FiniteMatrixGroup> {
    match r {
        GroupRef::Named(name) => corpus::group(name).ok_or_else(|| Error::Parse(format!("unknown corpus group `{name}`"))),
        GroupRef::Inline(doc) => group_from_doc(doc, tol),
    }
}

pub fn group_from_doc(doc: &GroupDoc, tol: Tolerance) -> Result<FiniteMatrixGroup> {
    let gens = doc.generators.iter().map(matrix_from_literal).collect::<Result<Vec<_>>>()?;
    group_closure(doc.dim, &gens, doc.bound, tol)
}

pub fn presentation_from_doc(doc: &PresentationDoc) -> Result<Presentation> {
    let relators = doc.relators.iter().map(|r| word_from_signed(r).map_err(|e| Error::Parse(e.to_string()))).collect::<Result<Vec<_>>>()?;
    Presentation::new(doc.generators, relators)
}

pub fn presentation_to_doc(p: &Presentation) -> PresentationDoc {
    PresentationDoc { generators: p.generator_count(), relators: p.relators().iter().map(|r| word_to_signed(r)).collect() }
}

pub fn edge_from_doc(poset: &Poset, e: &EdgeDoc) -> Result<Simplex1> {
    let b = Simplex1 { d0: poset.element(&e.d0)?, d1: poset.element(&e.d1)?, support: poset.element(&e.support)? };
    if !b.is_valid_in(poset) {
        return Err(Error::Parse(format!("({}, {}; {}) is not a 1-simplex", e.d0, e.d1, e.support)));
    }
    Ok(b)
}

pub fn edge_to_doc(poset: &Poset, b: &Simplex1) -> EdgeDoc {
    EdgeDoc { d0: poset.name(b.d0).into(), d1: poset.name(b.d1).into(), support: poset.name(b.support).into() }
}

fn assignments(poset: &Poset, values: &[EdgeValue]) -> Result<Vec<(Simplex1, CMatrix)>> {
    values.iter().map(|v| Ok((edge_from_doc(poset, &v.edge)?, matrix_from_literal(&v.matrix)?))).collect()
}

/// A cocycle document with the nerve it lives on.
pub fn cocycle_from_doc(poset: &PosetRef, dim: usize, values: &[EdgeValue], tol: Tolerance) -> Result<(Nerve, Cocycle)> {
    let nerve = Nerve::new(resolve_poset(poset)?);
    let cocycle = Cocycle::from_assignments(&nerve, dim, &assignments(nerve.poset(), values)?, tol)?;
    Ok((nerve, cocycle))
}

/// Every nontrivial value of a cocycle, as a document.
pub fn cocycle_to_doc(nerve: &Nerve, cocycle: &Cocycle, poset: PosetRef) -> Document {
    let id = CMatrix::identity(cocycle.dim());
    let assignments = nerve
        .simplices1()
        .iter()
        .zip(cocycle.values())
        .filter(|(_, u)| !u.approx_eq(&id, Tolerance::new(0.0).expect("zero is a tolerance")))
        .map(|(b, u)| EdgeValue { edge: edge_to_doc(nerve.poset(), b), matrix: matrix_to_literal(u) })
        .collect();
    Document::Cocycle { poset, dim: cocycle.dim(), assignments }
}

pub fn poset_to_doc(poset: &Poset) -> PosetDoc {
    let covers =
        poset.relation().into_iter().filter(|(a, b)| a != b).map(|(a, b)| [poset.name(a).to_string(), poset.name(b).to_string()]).collect();
    PosetDoc { elements: poset.names().to_vec(), covers }
}

/// A holonomy with the poset context it was given in, if any.
pub struct HolonomyInput {
    pub rep: HolonomyRep,
    pub context: Option<(Nerve, Element)>,
}

pub fn holonomy_from_doc(
    poset: Option<&PosetRef>,
    base: Option<&str>,
    presentation: Option<&PresentationDoc>,
    dim: usize,
    images: &[GeneratorImage],
    tol: Tolerance,
) -> Result<HolonomyInput> {
    let (pres, context) = match (poset, presentation) {
        (Some(_), Some(_)) => return Err(Error::Parse("give either a poset or a presentation, not both".into())),
        (Some(p), None) => {
            let nerve = Nerve::new(resolve_poset(p)?);
            let base = match base {
                Some(name) => nerve.poset().element(name)?,
                None => 0,
            };
            let pres = nerve.pi1_presentation(&nerve.path_frame(base)).presentation().clone();
            (pres, Some((nerve, base)))
        }
        (None, Some(doc)) => (presentation_from_doc(doc)?, None),
        (None, None) => {
            let n = images.iter().map(|g| g.generator + 1).max().unwrap_or(0);
            (Presentation::free(n), None)
        }
    };
    let mut mats = vec![CMatrix::identity(dim); pres.generator_count()];
    for img in images {
        let slot = mats.get_mut(img.generator).ok_or(Error::UnknownGenerator(img.generator))?;
        *slot = matrix_from_literal(&img.matrix)?;
    }
    Ok(HolonomyInput { rep: HolonomyRep::new(pres, mats, dim, tol)?, context })
}

pub fn holonomy_to_doc(rep: &HolonomyRep, poset: Option<PosetRef>, base: Option<String>) -> Document {
    let images = rep.images().iter().enumerate().map(|(generator, m)| GeneratorImage { generator, matrix: matrix_to_literal(m) }).collect();
    let presentation = if poset.is_some() { None } else { Some(presentation_to_doc(rep.presentation())) };
    Document::Holonomy { poset, base, presentation, dim: rep.dim(), images }
}

pub fn fiber_from_doc(doc: &FiberDoc, tol: Tolerance) -> Result<Fiber> {
    Ok(match doc {
        FiberDoc::Finite { group } => Fiber::Finite(resolve_group(group, tol)?),
        FiberDoc::SpecialUnitary { dim } | FiberDoc::DetSection { dim } => Fiber::SpecialUnitary { dim: *dim },
        FiberDoc::Scalars { dim } | FiberDoc::ScalarPhases { dim, .. } => Fiber::Scalars { dim: *dim },
    })
}

pub fn lift_fiber_from_doc(doc: &FiberDoc, tol: Tolerance) -> Result<LiftFiber> {
    Ok(match doc {
        FiberDoc::Finite { group } => LiftFiber::Finite(resolve_group(group, tol)?),
        FiberDoc::SpecialUnitary { dim } | FiberDoc::DetSection { dim } => LiftFiber::DetSection { dim: *dim },
        FiberDoc::ScalarPhases { dim, n } => LiftFiber::ScalarPhases { dim: *dim, n: *n },
        FiberDoc::Scalars { .. } => {
            return Err(Error::Parse("lift problems need `scalar-phases` with an explicit n for scalar fibers".into()))
        }
    })
}

pub fn lift_problem_from_doc(
    presentation: &PresentationDoc,
    images: &[MatrixLiteral],
    fiber: &FiberDoc,
    tol: Tolerance,
) -> Result<LiftProblem> {
    let images = images.iter().map(matrix_from_literal).collect::<Result<Vec<_>>>()?;
    LiftProblem::new(presentation_from_doc(presentation)?, images, lift_fiber_from_doc(fiber, tol)?, tol)
}

pub fn gerbe_from_doc(poset: &PosetRef, fiber: &FiberDoc, values: &[EdgeValue], tol: Tolerance) -> Result<(Nerve, GerbeCochain)> {
    let nerve = Nerve::new(resolve_poset(poset)?);
    let pairs = assignments(nerve.poset(), values)?;
    let cochain = GerbeCochain::from_assignments(&nerve, &pairs, fiber_from_doc(fiber, tol)?, tol)?;
    Ok((nerve, cochain))
}

/// A matrix given inline as JSON, or one of `id2`, `x`, `y`, `z`, `h`.
pub fn parse_matrix_arg(text: &str) -> Result<CMatrix> {
    use crate::unitary::paulis;
    match text {
        "id2" => Ok(CMatrix::identity(2)),
        "x" => Ok(paulis::x()),
        "y" => Ok(paulis::y()),
        "z" => Ok(paulis::z()),
        "h" => Ok(paulis::hadamard()),
        _ => {
            let lit: MatrixLiteral = serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad matrix literal: {e}")))?;
            matrix_from_literal(&lit)
        }
    }
}
