//! Built-in sample contexts.

use crate::context::FormalContext;
use crate::cxt::parse_cxt;

/// The planets context shipped as `fixtures/planets.cxt`.
pub const PLANETS_CXT: &str = include_str!("../../../fixtures/planets.cxt");

/// Nine planets described by size, distance from the sun and having a moon.
pub fn planets() -> FormalContext {
    parse_cxt(PLANETS_CXT.as_bytes()).expect("bundled fixture parses")
}

/// The contranominal scale of size `n`: object `i` has every attribute but `i`.
/// Its concept lattice is the Boolean lattice on `n` atoms.
pub fn contranominal(n: usize) -> FormalContext {
    let objects = (0..n).map(|i| format!("g{i}")).collect();
    let attributes = (0..n).map(|i| format!("m{i}")).collect();
    let rows: Vec<Vec<bool>> = (0..n).map(|g| (0..n).map(|m| g != m).collect()).collect();
    FormalContext::from_rows(objects, attributes, &rows).expect("generated names are valid")
}

/// The ordinal scale of size `n` (`g ≤ m`); its concept lattice is a chain.
pub fn ordinal(n: usize) -> FormalContext {
    let objects = (0..n).map(|i| format!("g{i}")).collect();
    let attributes = (0..n).map(|i| format!("m{i}")).collect();
    let rows: Vec<Vec<bool>> = (0..n).map(|g| (0..n).map(|m| g <= m).collect()).collect();
    FormalContext::from_rows(objects, attributes, &rows).expect("generated names are valid")
}

/// The nominal scale of size `n`: object `i` has only attribute `i`.
pub fn nominal(n: usize) -> FormalContext {
    let objects = (0..n).map(|i| format!("g{i}")).collect();
    let attributes = (0..n).map(|i| format!("m{i}")).collect();
    let rows: Vec<Vec<bool>> = (0..n).map(|g| (0..n).map(|m| g == m).collect()).collect();
    FormalContext::from_rows(objects, attributes, &rows).expect("generated names are valid")
}
