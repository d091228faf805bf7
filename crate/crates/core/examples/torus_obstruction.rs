//! Builds the Pauli gerbe on the torus model, shows that its quotient
//! holonomy has no lift, and contrasts it with a commuting pair that does
//! flatten.

use posetnet::corpus;
use posetnet::gerbe::{flatten, lift_problem_of, validate_gerbe};
use posetnet::lifting::{lift_search, DEFAULT_SEARCH_CAP};
use posetnet::netbundle::Fiber;
use posetnet::unitary::{paulis, Tolerance};

fn main() -> posetnet::Result<()> {
    let tol = Tolerance::default();
    for (label, a, b) in [("X, Z", paulis::x(), paulis::z()), ("X, X", paulis::x(), paulis::x())] {
        let (torus, u) = corpus::torus_product_gerbe(&a, &b, Fiber::Finite(corpus::plus_minus(2)))?;
        let frame = torus.path_frame(0);
        let pres = torus.pi1_presentation(&frame);
        let report = validate_gerbe(&torus, &u, tol)?;
        let lift = lift_search(&lift_problem_of(&torus, &u, &frame, &pres, 8, tol)?, DEFAULT_SEARCH_CAP, tol)?;
        let pair = flatten(&torus, &u, &frame, &pres, 8, DEFAULT_SEARCH_CAP, tol)?;
        println!(
            "holonomies {label}: gerbe valid {}, nontrivial coboundaries {}, lifts {}, flattens {}",
            report.is_valid(tol),
            report.nontrivial_coboundaries,
            lift.is_lifted(),
            pair.is_some()
        );
    }
    Ok(())
}
