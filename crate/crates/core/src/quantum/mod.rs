//! Position-dependent-mass Schrödinger operator: closed-form eigenpairs,
//! finite-difference spectrum, ladder characteristics and the von Roos
//! ordering check.

mod grid;
mod ladder;
mod state;
mod vonroos;

pub use grid::{
    build_hamiltonian, default_x_range, eigenvector, lowest_eigenvalues, DiscreteHamiltonian,
    GridFunction, DEFAULT_GRID, MAX_LEVELS, MIN_GRID,
};
pub use ladder::{
    annihilation_operator, apply_characteristic, characteristic, creation_operator,
    ladder_generate, max_superposition_residual, pde_generator, soundness_residual, MAX_LADDER,
    PDE_TOLERANCE, ZERO_TOLERANCE,
};
pub use state::{
    closed_form_eigenfunction, closed_form_eigenvalue, level_gap, normalize, overlap, pde_residual,
    state_exponent, superposition_residual, ComplexQuasi, Component, StationaryState,
    Superposition,
};
pub use vonroos::{vonroos_potential, vonroos_residual, COMPLIANT};
