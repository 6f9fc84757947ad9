//! Discrete exterior calculus on Clifford-valued grids.

mod grid;
mod ops;
mod potential;
mod residuals;

pub use grid::{GridShape, MetricField, OneFormField, ResidualField, SurfaceGrid, TwoFormField};
pub use ops::{
    differential, differential_with_order, exterior_derivative, flat_star, gauss_map,
    gauss_map_with_order, hodge_star, induced_metric, metric_of_form, wedge, StencilOrder,
};
pub use potential::{
    closedness_reference, closedness_residual, integrate_potential, reconstruction_error,
    PotentialReport,
};
pub use residuals::{
    conformality_residual, harmonicity_residual, holomorphic_residual, hopf_field,
    isothermic_dual_residual, mean_curvature, mean_curvature_identity_residual, phi_fields,
    sphere_parity, HolomorphicSide,
};

#[cfg(test)]
mod tests;
