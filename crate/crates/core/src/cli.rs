//! The `posetnet` command line: argument parsing, input loading and reports.
//!
//! Exit codes: `0` when the command ran and its verdict is positive, `1`
//! for a negative verdict or a library error, `2` for usage and parse errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::corpus;
use crate::error::{Error, Result};
use crate::gerbe::{flatten, validate_gerbe, GerbeCochain};
use crate::io::{self, Document, FiberDoc, GroupDoc, GroupRef, PosetRef};
use crate::lifting::{lift_search, LiftProblem, LiftStatus};
use crate::netbundle::{
    chern_c1, equivalent, gauge_reduction_check, holonomy, morphism_dim, quotient_holonomy, reconstruct, sections_dim, validate_cocycle,
    Cocycle, Equivalence, Fiber, HolonomyRep, InequivalenceCertificate, DEFAULT_SEED,
};
use crate::poset::{Nerve, Simplex1};
use crate::presentation::{word_to_signed, DisplayWord};
use crate::tannaka::{
    check_symmetry_axioms, conjugate_solution, dual_recover_in_ambient, intertwiner_basis_with, normalizer_membership,
    tannaka_dual_membership, IntertwinerMethod, DEFAULT_RMAX,
};
use crate::unitary::{c, CMatrix, FiniteMatrixGroup, Tolerance, C64};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Auto,
    Averaging,
    Nullspace,
}

#[derive(Debug, Parser)]
#[command(name = "posetnet", version, about = "Fundamental groups, net bundles, lifting and intertwiner categories over finite posets")]
pub struct Cli {
    /// Seed for randomized steps.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Numerical tolerance.
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    /// Largest tensor power used by intertwiner-based tests.
    #[arg(long, global = true, default_value_t = DEFAULT_RMAX)]
    pub rmax: usize,
    /// Cap on the number of candidates in lift searches.
    #[arg(long, global = true, default_value_t = crate::lifting::DEFAULT_SEARCH_CAP)]
    pub budget: u128,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

/// Inputs are file paths or names of built-in examples (`posetnet list`).
#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the built-in inputs.
    List,
    /// Print an input (a built-in or a file) as a JSON document.
    Show { input: String },
    /// Count (and with --list, print) the 1- and 2-simplices of a poset.
    Simplices {
        poset: String,
        #[arg(long)]
        list: bool,
    },
    /// Reduced presentation of the fundamental group.
    Pi1 {
        poset: String,
        #[arg(long)]
        base: Option<String>,
    },
    /// Check the cocycle law on every 2-simplex.
    CheckCocycle { cocycle: String },
    /// Holonomy representation of a cocycle.
    Holonomy {
        cocycle: String,
        #[arg(long)]
        base: Option<String>,
    },
    /// Cocycle with a given holonomy; the holonomy input must name a poset.
    Reconstruct { holonomy: String },
    /// Search for a unitary conjugating one representation into another.
    Equivalent { first: String, second: String },
    /// First Chern class: the determinant of each generator image.
    Chern { holonomy: String },
    /// Dimension of the space of sections (joint fixed vectors).
    Sections { holonomy: String },
    /// Dimension of the space of intertwiners between two representations.
    Morphisms { first: String, second: String },
    /// Reinterpret a holonomy modulo a fiber group (`su`, `scalars` or a group).
    Quotient {
        holonomy: String,
        #[arg(long)]
        fiber: String,
    },
    /// Does every value normalize the group?
    GaugeCheck {
        input: String,
        #[arg(long)]
        group: String,
    },
    /// Lift a quotient representation through its fiber.
    Lift { problem: String },
    /// Basis of the intertwiner space between tensor powers.
    Intertwiners {
        group: String,
        #[arg(short = 'r', default_value_t = 1)]
        r: usize,
        #[arg(short = 's', default_value_t = 1)]
        s: usize,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Check the flip identities and naturality.
    SymmetryCheck {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        group: Option<String>,
    },
    /// Canonical solution of the conjugate equations.
    Conjugates {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        group: Option<String>,
    },
    /// Normalizer test with intertwiner-preservation evidence.
    Normalizer {
        group: String,
        #[arg(long)]
        matrix: String,
    },
    /// Does the matrix commute with every intertwiner up to rmax?
    DualMembership {
        group: String,
        #[arg(long)]
        matrix: String,
    },
    /// The elements of an ambient group that pass the dual-membership test.
    DualRecover {
        group: String,
        #[arg(long)]
        ambient: String,
    },
    /// Check the gerbe conditions of a cochain.
    GerbeValidate { gerbe: String },
    /// Search for a pair turning a gerbe into a strict cocycle.
    GerbeFlatten {
        gerbe: String,
        #[arg(long)]
        base: Option<String>,
        /// Roots of unity used for scalar fibers.
        #[arg(long, default_value_t = 8)]
        phases: usize,
    },
}

/// Text and JSON forms of a result, with its verdict.
pub struct Report {
    pub positive: bool,
    pub text: String,
    pub json: Value,
}

impl Report {
    fn new(positive: bool, text: String, json: Value) -> Self {
        Report { positive, text, json }
    }
}

/// Exit code and standard output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return Outcome { code, stdout: e.to_string() };
        }
    };
    let format = cli.format;
    match execute(&cli) {
        Ok(report) => {
            let stdout = match format {
                Format::Text => report.text,
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&report.json).expect("json")),
            };
            Outcome { code: if report.positive { EXIT_OK } else { EXIT_NEGATIVE }, stdout }
        }
        Err(e) => {
            let code = match e {
                Error::Usage(_) | Error::Parse(_) => EXIT_USAGE,
                _ => EXIT_NEGATIVE,
            };
            let stdout = match format {
                Format::Text => format!("error[{}]: {e}\n", e.code()),
                Format::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&json!({"error": {"code": e.code(), "message": e.to_string()}})).expect("json")
                ),
            };
            Outcome { code, stdout }
        }
    }
}

fn tolerance(cli: &Cli) -> Result<Tolerance> {
    match cli.eps {
        Some(eps) => Tolerance::new(eps).map_err(|_| Error::Usage(format!("invalid --eps {eps}"))),
        None => Ok(Tolerance::default()),
    }
}

pub const BUILTIN_COCYCLES: [&str; 3] = ["constant", "pseudocircle-diag", "corrupted"];
pub const BUILTIN_HOLONOMIES: [&str; 4] = ["z-identity2", "z-diag", "z-diag-swapped", "circle-diag"];
pub const BUILTIN_LIFT_PROBLEMS: [&str; 3] = ["klein-pauli", "klein-trivial", "circle-det"];
pub const BUILTIN_GERBES: [&str; 2] = ["torus-pauli", "pseudocircle-signs"];

fn group_doc(g: &FiniteMatrixGroup) -> GroupDoc {
    GroupDoc { dim: g.dim(), generators: g.generating_set().iter().map(io::matrix_to_literal).collect(), bound: g.order() }
}

fn diag_i() -> CMatrix {
    CMatrix::diag(&[c(0.0, 1.0), c(0.0, -1.0)])
}

fn z_holonomy(m: CMatrix) -> Document {
    let rep =
        HolonomyRep::new(crate::presentation::Presentation::free(1), vec![m.clone()], m.rows(), Tolerance::default()).expect("unitary");
    io::holonomy_to_doc(&rep, None, None)
}

fn gerbe_doc(nerve: &Nerve, cochain: &GerbeCochain, poset: &str, fiber: FiberDoc) -> Document {
    let id = CMatrix::identity(cochain.dim());
    let assignments = nerve
        .simplices1()
        .iter()
        .zip(cochain.values())
        .filter(|(_, u)| **u != id)
        .map(|(b, u)| io::EdgeValue { edge: io::edge_to_doc(nerve.poset(), b), matrix: io::matrix_to_literal(u) })
        .collect();
    Document::Gerbe { poset: PosetRef::Named(poset.into()), fiber, assignments }
}

/// The built-in input with this name, if any.
pub fn builtin(name: &str) -> Option<Document> {
    if let Some(p) = corpus::poset(name) {
        return Some(Document::Poset(io::poset_to_doc(&p)));
    }
    if let Some(g) = corpus::group(name) {
        return Some(Document::Group(group_doc(&g)));
    }
    let tol = Tolerance::default();
    let circle = || Nerve::new(corpus::pseudocircle());
    Some(match name {
        "constant" => Document::Cocycle { poset: PosetRef::Named("pseudocircle".into()), dim: 2, assignments: Vec::new() },
        "pseudocircle-diag" => {
            let n = circle();
            let z = corpus::circle_cocycle(&n, &diag_i()).expect("circle");
            io::cocycle_to_doc(&n, &z, PosetRef::Named("pseudocircle".into()))
        }
        "corrupted" => {
            let n = circle();
            let p = n.poset();
            let b = Simplex1 { d0: p.element("c").ok()?, d1: p.element("a").ok()?, support: p.element("c").ok()? };
            let z = Cocycle::from_assignments(&n, 1, &[(b, CMatrix::scalar(crate::unitary::phase(0.3)))], tol).ok()?;
            io::cocycle_to_doc(&n, &z, PosetRef::Named("pseudocircle".into()))
        }
        "z-identity2" => z_holonomy(CMatrix::identity(2)),
        "z-diag" => z_holonomy(diag_i()),
        "z-diag-swapped" => z_holonomy(CMatrix::diag(&[c(0.0, -1.0), c(0.0, 1.0)])),
        "circle-diag" => Document::Holonomy {
            poset: Some(PosetRef::Named("pseudocircle".into())),
            base: Some("a".into()),
            presentation: None,
            dim: 2,
            images: vec![io::GeneratorImage { generator: 0, matrix: io::matrix_to_literal(&diag_i()) }],
        },
        "klein-pauli" | "klein-trivial" => {
            use crate::unitary::paulis;
            let images = if name == "klein-pauli" { vec![paulis::x(), paulis::z()] } else { vec![CMatrix::identity(2); 2] };
            Document::LiftProblem {
                presentation: io::presentation_to_doc(&corpus::klein_four()),
                images: images.iter().map(io::matrix_to_literal).collect(),
                fiber: FiberDoc::ScalarPhases { dim: 2, n: 8 },
            }
        }
        "circle-det" => Document::LiftProblem {
            presentation: io::PresentationDoc { generators: 1, relators: Vec::new() },
            images: vec![io::matrix_to_literal(&CMatrix::scalar(crate::unitary::phase(std::f64::consts::FRAC_PI_3)))],
            fiber: FiberDoc::DetSection { dim: 2 },
        },
        "torus-pauli" => {
            let (n, u) = corpus::torus_pauli_gerbe();
            gerbe_doc(&n, &u, "torus", FiberDoc::Finite { group: GroupRef::Named("pm2".into()) })
        }
        "pseudocircle-signs" => {
            let n = circle();
            let z = corpus::circle_cocycle(&n, &crate::unitary::paulis::x()).expect("circle");
            let values = z.values().iter().enumerate().map(|(i, u)| if i % 3 == 1 { u.scale(c(-1.0, 0.0)) } else { u.clone() }).collect();
            let u = GerbeCochain::new(&n, values, Fiber::Finite(corpus::plus_minus(2)), tol).ok()?;
            gerbe_doc(&n, &u, "pseudocircle", FiberDoc::Finite { group: GroupRef::Named("pm2".into()) })
        }
        _ => return None,
    })
}

/// Reads a file, or falls back to a built-in input of that name.
pub fn load(arg: &str) -> Result<Document> {
    if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("{arg}: {e}")))?;
        return io::parse_document(&text);
    }
    builtin(arg).ok_or_else(|| Error::Parse(format!("`{arg}` is neither a readable file nor a built-in input")))
}

fn wrong_kind(arg: &str, doc: &Document, expected: &str) -> Error {
    Error::Parse(format!("`{arg}` is a {} document, expected {expected}", doc.kind()))
}

fn load_nerve(arg: &str) -> Result<Nerve> {
    match load(arg)? {
        Document::Poset(p) => Ok(Nerve::new(io::poset_from_doc(&p)?)),
        other => Err(wrong_kind(arg, &other, "a poset")),
    }
}

fn load_group(arg: &str, tol: Tolerance) -> Result<FiniteMatrixGroup> {
    match load(arg)? {
        Document::Group(g) => io::group_from_doc(&g, tol),
        other => Err(wrong_kind(arg, &other, "a group")),
    }
}

fn load_cocycle(arg: &str, tol: Tolerance) -> Result<(Nerve, Cocycle)> {
    match load(arg)? {
        Document::Cocycle { poset, dim, assignments } => io::cocycle_from_doc(&poset, dim, &assignments, tol),
        other => Err(wrong_kind(arg, &other, "a cocycle")),
    }
}

fn load_holonomy(arg: &str, tol: Tolerance) -> Result<(io::HolonomyInput, Option<PosetRef>, Option<String>)> {
    match load(arg)? {
        Document::Holonomy { poset, base, presentation, dim, images } => {
            let input = io::holonomy_from_doc(poset.as_ref(), base.as_deref(), presentation.as_ref(), dim, &images, tol)?;
            Ok((input, poset, base))
        }
        other => Err(wrong_kind(arg, &other, "a holonomy")),
    }
}

fn load_lift(arg: &str, tol: Tolerance) -> Result<LiftProblem> {
    match load(arg)? {
        Document::LiftProblem { presentation, images, fiber } => io::lift_problem_from_doc(&presentation, &images, &fiber, tol),
        other => Err(wrong_kind(arg, &other, "a lift problem")),
    }
}

fn load_gerbe(arg: &str, tol: Tolerance) -> Result<(Nerve, GerbeCochain)> {
    match load(arg)? {
        Document::Gerbe { poset, fiber, assignments } => io::gerbe_from_doc(&poset, &fiber, &assignments, tol),
        other => Err(wrong_kind(arg, &other, "a gerbe")),
    }
}

fn base_of(nerve: &Nerve, base: Option<&str>) -> Result<usize> {
    base.map_or(Ok(0), |b| nerve.poset().element(b))
}

fn fmt_real(x: f64) -> String {
    let x = if x.abs() < 5e-13 { 0.0 } else { x };
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

pub fn fmt_complex(z: C64) -> String {
    let (re, im) = (fmt_real(z.re), fmt_real(z.im));
    match (re.as_str(), im.as_str()) {
        (_, "0") => re,
        ("0", _) => format!("{im}i"),
        _ if im.starts_with('-') => format!("{re}{im}i"),
        _ => format!("{re}+{im}i"),
    }
}

pub fn fmt_matrix(m: &CMatrix) -> String {
    let rows: Vec<String> = m.to_rows().iter().map(|r| r.iter().map(|z| fmt_complex(*z)).collect::<Vec<_>>().join(", ")).collect();
    format!("[{}]", rows.join("; "))
}

fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn execute(cli: &Cli) -> Result<Report> {
    let tol = tolerance(cli)?;
    match &cli.command {
        Command::List => {
            let mut text = String::new();
            let sections: [(&str, Vec<&str>); 6] = [
                ("posets", corpus::POSET_NAMES.to_vec()),
                ("groups", corpus::GROUP_NAMES.to_vec()),
                ("cocycles", BUILTIN_COCYCLES.to_vec()),
                ("holonomies", BUILTIN_HOLONOMIES.to_vec()),
                ("lift problems", BUILTIN_LIFT_PROBLEMS.to_vec()),
                ("gerbes", BUILTIN_GERBES.to_vec()),
            ];
            let mut map = serde_json::Map::new();
            for (title, names) in sections {
                writeln!(text, "{title}: {}", names.join(", ")).unwrap();
                map.insert(title.replace(' ', "-"), json!(names));
            }
            Ok(Report::new(true, text, Value::Object(map)))
        }
        Command::Show { input } => {
            let doc = load(input)?;
            let text = format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"));
            Ok(Report::new(true, text, serde_json::to_value(&doc).expect("json")))
        }
        Command::Simplices { poset, list } => {
            let nerve = load_nerve(poset)?;
            let p = nerve.poset();
            let mut text =
                format!("elements: {}\nsimplices1: {}\nsimplices2: {}\n", p.len(), nerve.simplices1().len(), nerve.simplices2().len());
            let mut out = json!({
                "elements": p.names(),
                "simplices1": nerve.simplices1().len(),
                "simplices2": nerve.simplices2().len(),
            });
            if *list {
                let edge = |b: &Simplex1| json!([p.name(b.d0), p.name(b.d1), p.name(b.support)]);
                for b in nerve.simplices1() {
                    writeln!(text, "  {}", b.display(p)).unwrap();
                }
                for s in nerve.simplices2() {
                    let [f0, f1, f2] = s.faces;
                    writeln!(text, "  [{}, {}, {}; {}]", f0.display(p), f1.display(p), f2.display(p), p.name(s.support)).unwrap();
                }
                out["list1"] = nerve.simplices1().iter().map(edge).collect();
                out["list2"] = nerve
                    .simplices2()
                    .iter()
                    .map(|s| json!({"faces": s.faces.iter().map(edge).collect::<Vec<_>>(), "support": p.name(s.support)}))
                    .collect();
            }
            Ok(Report::new(true, text, out))
        }
        Command::Pi1 { poset, base } => {
            let nerve = load_nerve(poset)?;
            let base = base_of(&nerve, base.as_deref())?;
            let pres = nerve.pi1_presentation(&nerve.path_frame(base));
            let p = nerve.poset();
            let mut text = format!(
                "base: {}\ngenerators: {}, relations: {}\nabelian rank: {}\n",
                p.name(base),
                pres.generator_count(),
                pres.relators().len(),
                pres.presentation().abelian_rank()
            );
            for (k, b) in pres.generators().iter().enumerate() {
                writeln!(text, "  g{k} = {}", b.display(p)).unwrap();
            }
            for r in pres.relators() {
                writeln!(text, "  relator {}", DisplayWord(r)).unwrap();
            }
            let out = json!({
                "base": p.name(base),
                "generators": pres.generator_count(),
                "relations": pres.relators().len(),
                "abelian_rank": pres.presentation().abelian_rank(),
                "generator_simplices": pres.generators().iter().map(|b| json!([p.name(b.d0), p.name(b.d1), p.name(b.support)])).collect::<Vec<_>>(),
                "relators": pres.relators().iter().map(|r| word_to_signed(r)).collect::<Vec<_>>(),
            });
            Ok(Report::new(true, text, out))
        }
        Command::CheckCocycle { cocycle } => {
            let (nerve, z) = load_cocycle(cocycle, tol)?;
            let report = validate_cocycle(&nerve, &z, tol)?;
            let p = nerve.poset();
            let mut text = format!(
                "valid: {}\nviolations: {}\nmax residual: {:.3e}\n",
                yes(report.is_valid()),
                report.violations.len(),
                report.max_residual
            );
            for v in &report.violations {
                let [f0, f1, f2] = v.simplex.faces;
                writeln!(
                    text,
                    "  [{}, {}, {}; {}] residual {:.3e}",
                    f0.display(p),
                    f1.display(p),
                    f2.display(p),
                    p.name(v.simplex.support),
                    v.residual
                )
                .unwrap();
            }
            let out = json!({
                "valid": report.is_valid(),
                "max_residual": report.max_residual,
                "violations": report.violations.iter().map(|v| json!({"index": v.index, "residual": v.residual})).collect::<Vec<_>>(),
            });
            Ok(Report::new(report.is_valid(), text, out))
        }
        Command::Holonomy { cocycle, base } => {
            let (nerve, z) = load_cocycle(cocycle, tol)?;
            let base = base_of(&nerve, base.as_deref())?;
            let frame = nerve.path_frame(base);
            let pres = nerve.pi1_presentation(&frame);
            let (chi, residuals) = holonomy(&nerve, &z, &frame, &pres, tol)?;
            let mut text = format!("base: {}\ngenerators: {}\n", nerve.poset().name(base), chi.images().len());
            for (k, m) in chi.images().iter().enumerate() {
                writeln!(text, "  g{k} -> {}", fmt_matrix(m)).unwrap();
            }
            let max = residuals.iter().copied().fold(0.0, f64::max);
            writeln!(text, "max relation residual: {max:.3e}").unwrap();
            let doc = io::holonomy_to_doc(&chi, None, None);
            let out = json!({"holonomy": doc, "relation_residuals": residuals});
            Ok(Report::new(true, text, out))
        }
        Command::Reconstruct { holonomy: arg } => {
            let (input, poset, _) = load_holonomy(arg, tol)?;
            let (nerve, base) =
                input.context.ok_or_else(|| Error::Usage("reconstruct needs a holonomy document that names a poset".into()))?;
            let frame = nerve.path_frame(base);
            let pres = nerve.pi1_presentation(&frame);
            let z = reconstruct(&nerve, &input.rep, &frame, &pres)?;
            let report = validate_cocycle(&nerve, &z, tol.scaled(10.0))?;
            let doc = io::cocycle_to_doc(&nerve, &z, poset.expect("context implies a poset"));
            let text = format!(
                "valid: {}\nnontrivial values: {}\n{}\n",
                yes(report.is_valid()),
                match &doc {
                    Document::Cocycle { assignments, .. } => assignments.len(),
                    _ => 0,
                },
                serde_json::to_string(&doc).expect("json")
            );
            Ok(Report::new(report.is_valid(), text, serde_json::to_value(&doc).expect("json")))
        }
        Command::Equivalent { first, second } => {
            let (a, _, _) = load_holonomy(first, tol)?;
            let (b, _, _) = load_holonomy(second, tol)?;
            let verdict = equivalent(&a.rep, &b.rep, tol, cli.seed)?;
            let (positive, text, out) = match &verdict {
                Equivalence::Equivalent(g) => (
                    true,
                    format!("verdict: equivalent\nwitness: {}\n", fmt_matrix(g)),
                    json!({"verdict": "equivalent", "witness": io::matrix_to_json(g)}),
                ),
                Equivalence::Inequivalent(cert) => {
                    let why = match cert {
                        InequivalenceCertificate::Spectrum => "spectrum",
                        InequivalenceCertificate::NoIntertwiner => "no-intertwiner",
                    };
                    (false, format!("verdict: inequivalent\ncertificate: {why}\n"), json!({"verdict": "inequivalent", "certificate": why}))
                }
                Equivalence::Undecided => (false, "verdict: undecided\n".to_string(), json!({"verdict": "undecided"})),
            };
            Ok(Report::new(positive, text, out))
        }
        Command::Chern { holonomy: arg } => {
            let (input, _, _) = load_holonomy(arg, tol)?;
            let c1 = chern_c1(&input.rep);
            let mut text = String::new();
            for (k, z) in c1.iter().enumerate() {
                writeln!(text, "c1(g{k}) = {}", fmt_complex(*z)).unwrap();
            }
            Ok(Report::new(true, text, json!({"c1": c1.iter().map(|z| complex_json(*z)).collect::<Vec<_>>()})))
        }
        Command::Sections { holonomy: arg } => {
            let (input, _, _) = load_holonomy(arg, tol)?;
            let n = sections_dim(&input.rep, tol);
            Ok(Report::new(true, format!("sections: {n}\n"), json!({"sections": n})))
        }
        Command::Morphisms { first, second } => {
            let (a, _, _) = load_holonomy(first, tol)?;
            let (b, _, _) = load_holonomy(second, tol)?;
            let n = morphism_dim(&a.rep, &b.rep, tol)?;
            Ok(Report::new(true, format!("morphisms: {n}\n"), json!({"morphisms": n})))
        }
        Command::Quotient { holonomy: arg, fiber } => {
            let (input, _, _) = load_holonomy(arg, tol)?;
            let d = input.rep.dim();
            let fiber = match fiber.as_str() {
                "su" => Fiber::SpecialUnitary { dim: d },
                "scalars" => Fiber::Scalars { dim: d },
                other => Fiber::Finite(load_group(other, tol)?),
            };
            let q = quotient_holonomy(&input.rep, fiber, tol)?;
            let mut text = format!("fiber: {}\n", q.fiber().describe());
            for (k, m) in q.images().iter().enumerate() {
                writeln!(text, "  g{k} -> coset of {}", fmt_matrix(m)).unwrap();
            }
            let mut out = json!({
                "fiber": q.fiber().describe(),
                "representatives": q.images().iter().map(io::matrix_to_json).collect::<Vec<_>>(),
            });
            if let Some(labels) = q.determinant_labels() {
                for (k, z) in labels.iter().enumerate() {
                    writeln!(text, "  det label g{k} = {}", fmt_complex(*z)).unwrap();
                }
                out["determinant_labels"] = labels.iter().map(|z| complex_json(*z)).collect();
            }
            Ok(Report::new(true, text, out))
        }
        Command::GaugeCheck { input, group } => {
            let g = load_group(group, tol)?;
            let values: Vec<CMatrix> = match load(input)? {
                Document::Cocycle { poset, dim, assignments } => io::cocycle_from_doc(&poset, dim, &assignments, tol)?.1.values().to_vec(),
                Document::Holonomy { .. } => load_holonomy(input, tol)?.0.rep.images().to_vec(),
                other => return Err(wrong_kind(input, &other, "a cocycle or a holonomy")),
            };
            let ok = gauge_reduction_check(&values, &g, tol)?;
            Ok(Report::new(ok, format!("reduces: {}\n", yes(ok)), json!({"reduces": ok})))
        }
        Command::Lift { problem } => {
            let p = load_lift(problem, tol)?;
            let result = lift_search(&p, cli.budget, tol)?;
            let status = match result.status {
                LiftStatus::Lifted => "lifted",
                LiftStatus::NoLiftInSearchSpace => "no-lift-in-search-space",
            };
            let mut text = format!("status: {status}\n");
            let mut out = json!({"status": status});
            if let Some(images) = &result.images {
                for (k, m) in images.iter().enumerate() {
                    writeln!(text, "  g{k} -> {}", fmt_matrix(m)).unwrap();
                }
                out["images"] = images.iter().map(io::matrix_to_json).collect();
            }
            for d in &result.defects {
                writeln!(
                    text,
                    "  relator {}: {} distinct value(s), satisfiable: {}",
                    DisplayWord(&d.word),
                    d.values.len(),
                    yes(d.satisfiable)
                )
                .unwrap();
                for v in &d.values {
                    writeln!(text, "    {}", fmt_matrix(v)).unwrap();
                }
            }
            out["defects"] = result
                .defects
                .iter()
                .map(|d| {
                    json!({
                        "relator": word_to_signed(&d.word),
                        "satisfiable": d.satisfiable,
                        "values": d.values.iter().map(io::matrix_to_json).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(Report::new(result.is_lifted(), text, out))
        }
        Command::Intertwiners { group, r, s, method } => {
            let g = load_group(group, tol)?;
            let method = match method {
                Method::Auto => IntertwinerMethod::Auto,
                Method::Averaging => IntertwinerMethod::Averaging,
                Method::Nullspace => IntertwinerMethod::Nullspace,
            };
            let space = intertwiner_basis_with(&g, *r, *s, method, tol)?;
            let text = format!("dim = {}\n", space.dim());
            let out = json!({
                "r": r, "s": s, "dim": space.dim(),
                "basis": space.basis.iter().map(io::matrix_to_json).collect::<Vec<_>>(),
            });
            Ok(Report::new(true, text, out))
        }
        Command::SymmetryCheck { dim, group } => {
            let g = group.as_deref().map(|name| load_group(name, tol)).transpose()?;
            let report = check_symmetry_axioms(*dim, cli.rmax, g.as_ref(), tol, cli.seed)?;
            let ok = report.passed(tol);
            let mut text = format!(
                "passed: {}\nidentities checked: {}\nnaturality checks: {}\nnaturality max residual: {:.3e}\n",
                yes(ok),
                report.identities_checked,
                report.naturality_checks,
                report.naturality_max_residual
            );
            for f in &report.failures {
                writeln!(text, "  {f}").unwrap();
            }
            let out = json!({
                "passed": ok,
                "rmax": cli.rmax,
                "identities_checked": report.identities_checked,
                "failures": report.failures,
                "naturality_checks": report.naturality_checks,
                "naturality_max_residual": report.naturality_max_residual,
            });
            Ok(Report::new(ok, text, out))
        }
        Command::Conjugates { dim, group } => {
            let g = group.as_deref().map(|name| load_group(name, tol)).transpose()?;
            let report = conjugate_solution(*dim, g.as_ref())?;
            let ok = report.first_equation <= tol.eps() && report.second_equation <= tol.eps() && report.invariance <= tol.eps();
            let text = format!(
                "R = {}\nfirst equation residual: {:.3e}\nsecond equation residual: {:.3e}\ninvariance residual: {:.3e}\n",
                fmt_matrix(&report.r),
                report.first_equation,
                report.second_equation,
                report.invariance
            );
            let out = json!({
                "R": io::matrix_to_json(&report.r),
                "first_equation": report.first_equation,
                "second_equation": report.second_equation,
                "invariance": report.invariance,
            });
            Ok(Report::new(ok, text, out))
        }
        Command::Normalizer { group, matrix } => {
            let g = load_group(group, tol)?;
            let u = io::parse_matrix_arg(matrix)?;
            let report = normalizer_membership(&g, &u, cli.rmax, tol)?;
            let mut text =
                format!("member: {}\nrmax: {}\nintertwiners preserved: {}\n", yes(report.member), report.rmax, yes(report.all_preserved()));
            for e in &report.evidence {
                writeln!(text, "  ({}, {}): dim {}, preserved {}", e.r, e.s, e.dim, yes(e.preserved)).unwrap();
            }
            let out = json!({
                "member": report.member,
                "rmax": report.rmax,
                "evidence": report.evidence.iter().map(|e| json!({"r": e.r, "s": e.s, "dim": e.dim, "preserved": e.preserved, "residual": e.residual})).collect::<Vec<_>>(),
            });
            Ok(Report::new(report.member, text, out))
        }
        Command::DualMembership { group, matrix } => {
            let g = load_group(group, tol)?;
            let u = io::parse_matrix_arg(matrix)?;
            let m = tannaka_dual_membership(&g, &u, cli.rmax, tol)?;
            let mut text = format!("member: {}\nrmax: {}\n", yes(m.member), m.rmax);
            if let Some((r, s, res)) = m.failure {
                writeln!(text, "fails on ({r}, {s}) with residual {res:.3e}").unwrap();
            }
            let out = json!({"member": m.member, "rmax": m.rmax, "failure": m.failure.map(|(r, s, res)| json!({"r": r, "s": s, "residual": res}))});
            Ok(Report::new(m.member, text, out))
        }
        Command::DualRecover { group, ambient } => {
            let g = load_group(group, tol)?;
            let amb = load_group(ambient, tol)?;
            let rec = dual_recover_in_ambient(&g, &amb, cli.rmax, tol)?;
            let exact = rec.is_subgroup_of(&g, tol) && g.is_subgroup_of(&rec, tol);
            let mut text = format!("order: {}\nrmax: {}\nequals the group: {}\n", rec.order(), cli.rmax, yes(exact));
            for e in rec.elements() {
                writeln!(text, "  {}", fmt_matrix(e)).unwrap();
            }
            let out = json!({
                "order": rec.order(),
                "rmax": cli.rmax,
                "equals_group": exact,
                "elements": rec.elements().iter().map(io::matrix_to_json).collect::<Vec<_>>(),
            });
            Ok(Report::new(true, text, out))
        }
        Command::GerbeValidate { gerbe } => {
            let (nerve, u) = load_gerbe(gerbe, tol)?;
            let report = validate_gerbe(&nerve, &u, tol)?;
            let ok = report.is_valid(tol);
            let text = format!(
                "valid: {}\nvalues outside the normalizer: {}\ncoboundaries outside the fiber: {}\nnontrivial coboundaries: {}\ncrossed-module residual: {:.3e}\n",
                yes(ok),
                report.normalizer_failures.len(),
                report.coboundary_failures.len(),
                report.nontrivial_coboundaries,
                report.crossed_module_residual
            );
            let out = json!({
                "valid": ok,
                "normalizer_failures": report.normalizer_failures,
                "coboundary_failures": report.coboundary_failures,
                "nontrivial_coboundaries": report.nontrivial_coboundaries,
                "crossed_module_residual": report.crossed_module_residual,
            });
            Ok(Report::new(ok, text, out))
        }
        Command::GerbeFlatten { gerbe, base, phases } => {
            let (nerve, u) = load_gerbe(gerbe, tol)?;
            let base = base_of(&nerve, base.as_deref())?;
            let frame = nerve.path_frame(base);
            let pres = nerve.pi1_presentation(&frame);
            let result = flatten(&nerve, &u, &frame, &pres, *phases, cli.budget, tol)?;
            match result {
                Some(pair) => {
                    let p = nerve.poset();
                    let mut text = "flattened: yes\n".to_string();
                    for (o, v) in pair.v.iter().enumerate() {
                        writeln!(text, "  v({}) = {}", p.name(o), fmt_matrix(v)).unwrap();
                    }
                    let id = CMatrix::identity(u.dim());
                    let nontrivial = pair.g.iter().filter(|g| !g.approx_eq(&id, tol)).count();
                    writeln!(text, "nontrivial g values: {nontrivial}").unwrap();
                    let out = json!({
                        "flattened": true,
                        "v": pair.v.iter().map(io::matrix_to_json).collect::<Vec<_>>(),
                        "g": pair.g.iter().map(io::matrix_to_json).collect::<Vec<_>>(),
                    });
                    Ok(Report::new(true, text, out))
                }
                None => Ok(Report::new(false, "flattened: no\n".into(), json!({"flattened": false}))),
            }
        }
    }
}
