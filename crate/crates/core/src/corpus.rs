//! Small named posets, groups and data used by the tests, the examples and
//! the command line.

use crate::error::{Error, Result};
use crate::gerbe::GerbeCochain;
use crate::netbundle::{reconstruct, Cocycle, Fiber, HolonomyRep};
use crate::poset::{Element, Nerve, Poset, Simplex1};
use crate::presentation::{word_from_signed, Presentation};
use crate::unitary::{c, group_closure, paulis, permutation_matrix, CMatrix, FiniteMatrixGroup, Tolerance};

pub fn singleton() -> Poset {
    Poset::close_order::<&str>(&["a"], &[]).expect("valid poset")
}

/// `a ≤ b`.
pub fn chain() -> Poset {
    Poset::close_order(&["a", "b"], &[("a", "b")]).expect("valid poset")
}

/// `a ≤ b, c ≤ d`; has a maximum, hence simply connected.
pub fn diamond() -> Poset {
    Poset::close_order(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]).expect("valid poset")
}

/// `{a, b} < {c, d}`, the four-point model of the circle.
pub fn pseudocircle() -> Poset {
    Poset::close_order(&["a", "b", "c", "d"], &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]).expect("valid poset")
}

/// A crown on six points: another circle model.
pub fn hexagon() -> Poset {
    Poset::close_order(&["a", "b", "c", "d", "e", "f"], &[("a", "d"), ("b", "d"), ("b", "e"), ("c", "e"), ("c", "f"), ("a", "f")])
        .expect("valid poset")
}

/// The complete bipartite order `{a, b} < {c, d, e}`: a wedge of two circles.
pub fn k23() -> Poset {
    Poset::close_order(&["a", "b", "c", "d", "e"], &[("a", "c"), ("a", "d"), ("a", "e"), ("b", "c"), ("b", "d"), ("b", "e")])
        .expect("valid poset")
}

/// `{a, b} < {c, d} < {e, f}`, the six-point model of the 2-sphere.
pub fn sphere() -> Poset {
    Poset::close_order(
        &["a", "b", "c", "d", "e", "f"],
        &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "e"), ("c", "f"), ("d", "e"), ("d", "f")],
    )
    .expect("valid poset")
}

/// Product order on `a × b`, elements named `x.y`, with the coordinates of
/// every element.
pub fn product(a: &Poset, b: &Poset) -> (Poset, Vec<(Element, Element)>) {
    let name = |i: Element, j: Element| format!("{}.{}", a.name(i), b.name(j));
    let mut names = Vec::new();
    let mut covers = Vec::new();
    for i in 0..a.len() {
        for j in 0..b.len() {
            names.push(name(i, j));
            for k in 0..a.len() {
                for l in 0..b.len() {
                    if (i, j) != (k, l) && a.leq(i, k) && b.leq(j, l) {
                        covers.push((name(i, j), name(k, l)));
                    }
                }
            }
        }
    }
    let poset = Poset::close_order(&names, &covers).expect("products of posets are posets");
    let coords = (0..poset.len())
        .map(|e| {
            let (x, y) = poset.name(e).split_once('.').expect("product names contain a dot");
            (a.element(x).expect("left factor"), b.element(y).expect("right factor"))
        })
        .collect();
    (poset, coords)
}

/// The product of two pseudocircles: a torus model with `π1 ≅ Z²`.
pub fn torus() -> Poset {
    product(&pseudocircle(), &pseudocircle()).0
}

pub const POSET_NAMES: [&str; 8] = ["singleton", "chain", "diamond", "pseudocircle", "hexagon", "k23", "sphere", "torus"];

pub fn poset(name: &str) -> Option<Poset> {
    Some(match name {
        "singleton" => singleton(),
        "chain" => chain(),
        "diamond" => diamond(),
        "pseudocircle" => pseudocircle(),
        "hexagon" => hexagon(),
        "k23" => k23(),
        "sphere" => sphere(),
        "torus" => torus(),
        _ => return None,
    })
}

fn tol() -> Tolerance {
    Tolerance::default()
}

/// `S3` acting on `C³` by permutation matrices.
pub fn s3() -> FiniteMatrixGroup {
    group_closure(3, &[permutation_matrix(&[1, 0, 2]), permutation_matrix(&[1, 2, 0])], 6, tol()).expect("order 6")
}

/// `{±I_d}`.
pub fn plus_minus(d: usize) -> FiniteMatrixGroup {
    group_closure(d, &[CMatrix::identity(d).scale(c(-1.0, 0.0))], 2, tol()).expect("order 2")
}

/// `{I, diag(1, −1)}`.
pub fn diagonal_z2() -> FiniteMatrixGroup {
    group_closure(2, &[paulis::z()], 2, tol()).expect("order 2")
}

/// The Pauli group `⟨X, Y, Z⟩` of order 16.
pub fn pauli() -> FiniteMatrixGroup {
    group_closure(2, &[paulis::x(), paulis::y(), paulis::z()], 16, tol()).expect("order 16")
}

/// `⟨X, Z⟩`, dihedral of order 8.
pub fn dihedral8() -> FiniteMatrixGroup {
    group_closure(2, &[paulis::x(), paulis::z()], 8, tol()).expect("order 8")
}

pub const GROUP_NAMES: [&str; 6] = ["trivial2", "pm2", "diag-z2", "s3", "pauli", "dihedral8"];

pub fn group(name: &str) -> Option<FiniteMatrixGroup> {
    Some(match name {
        "trivial2" => FiniteMatrixGroup::trivial(2),
        "pm2" => plus_minus(2),
        "diag-z2" => diagonal_z2(),
        "s3" => s3(),
        "pauli" => pauli(),
        "dihedral8" => dihedral8(),
        _ => return None,
    })
}

/// `⟨x, y | x², y², xyx⁻¹y⁻¹⟩`.
pub fn klein_four() -> Presentation {
    Presentation::new(
        2,
        vec![
            word_from_signed(&[1, 1]).expect("nonzero"),
            word_from_signed(&[2, 2]).expect("nonzero"),
            word_from_signed(&[1, 2, -1, -2]).expect("nonzero"),
        ],
    )
    .expect("valid presentation")
}

/// Cocycle on a circle-like poset with holonomy `u` around its generator.
pub fn circle_cocycle(nerve: &Nerve, u: &CMatrix) -> Result<Cocycle> {
    let frame = nerve.path_frame(0);
    let pres = nerve.pi1_presentation(&frame);
    if pres.generator_count() != 1 || !pres.relators().is_empty() {
        return Err(Error::Usage("circle_cocycle needs a poset with π1 free of rank 1".into()));
    }
    let chi = HolonomyRep::new(pres.presentation().clone(), vec![u.clone()], u.rows(), tol())?;
    reconstruct(nerve, &chi, &frame, &pres)
}

/// `(b₁, b₂)` components of a 1-simplex of a product.
pub fn project(b: &Simplex1, coords: &[(Element, Element)]) -> (Simplex1, Simplex1) {
    let (x0, y0) = coords[b.d0];
    let (x1, y1) = coords[b.d1];
    let (xs, ys) = coords[b.support];
    (Simplex1 { d0: x0, d1: x1, support: xs }, Simplex1 { d0: y0, d1: y1, support: ys })
}

/// The torus cochain `u(b) = ξ₁(b₁)·ξ₂(b₂)` over `fiber`, where `ξ₁`, `ξ₂`
/// are circle cocycles with holonomy `a` and `b`. It is a gerbe whenever
/// `a` and `b` commute modulo the fiber.
pub fn torus_product_gerbe(a: &CMatrix, b: &CMatrix, fiber: Fiber) -> Result<(Nerve, GerbeCochain)> {
    let circle = Nerve::new(pseudocircle());
    let (torus, coords) = product(circle.poset(), circle.poset());
    let torus = Nerve::new(torus);
    let xi1 = circle_cocycle(&circle, a)?;
    let xi2 = circle_cocycle(&circle, b)?;
    let values = torus
        .simplices1()
        .iter()
        .map(|s| {
            let (s1, s2) = project(s, &coords);
            xi1.value(&circle, &s1).expect("projection is a 1-simplex") * xi2.value(&circle, &s2).expect("projection is a 1-simplex")
        })
        .collect();
    let cochain = GerbeCochain::new(&torus, values, fiber, tol())?;
    Ok((torus, cochain))
}

/// The torus gerbe with holonomies `X` and `Z` over `{±I}`. Its
/// coboundaries are `±I` and its quotient holonomy has no lift: `X` and `Z`
/// anticommute.
pub fn torus_pauli_gerbe() -> (Nerve, GerbeCochain) {
    torus_product_gerbe(&paulis::x(), &paulis::z(), Fiber::Finite(plus_minus(2))).expect("Pauli matrices are unitary")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gerbe::validate_gerbe;

    #[test]
    fn corpus_fundamental_groups() {
        for (name, gens, rank) in [
            ("singleton", 0, 0),
            ("chain", 0, 0),
            ("diamond", 0, 0),
            ("pseudocircle", 1, 1),
            ("hexagon", 1, 1),
            ("k23", 2, 2),
            ("sphere", 0, 0),
        ] {
            let n = Nerve::new(poset(name).unwrap());
            let pres = n.pi1_presentation(&n.path_frame(0));
            assert_eq!(pres.generator_count(), gens, "{name}");
            assert_eq!(pres.presentation().abelian_rank(), rank, "{name}");
        }
        let t = Nerve::new(torus());
        assert_eq!(t.pi1_presentation(&t.path_frame(0)).presentation().abelian_rank(), 2);
    }

    #[test]
    fn group_orders() {
        for (name, order) in [("trivial2", 1), ("pm2", 2), ("diag-z2", 2), ("s3", 6), ("pauli", 16), ("dihedral8", 8)] {
            assert_eq!(group(name).unwrap().order(), order, "{name}");
        }
        assert!(diagonal_z2().is_subgroup_of(&dihedral8(), tol()));
    }

    #[test]
    fn torus_gerbe_is_valid_and_nontrivial() {
        let (n, u) = torus_pauli_gerbe();
        let report = validate_gerbe(&n, &u, tol()).unwrap();
        assert!(report.is_valid(tol()));
        assert!(report.nontrivial_coboundaries > 0);
    }
}
