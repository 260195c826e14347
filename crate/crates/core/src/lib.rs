//! Bundle Laplacians on discrete tori and the analysis around their
//! determinants: CRSF expansions, Bessel heat kernels, theta functions,
//! Epstein–Hurwitz and lattice zeta functions, and large-torus asymptotics.

pub mod asymptotics;
pub mod bundle_graph;
pub mod cli;
pub mod crsf;
pub mod error;
pub mod heat_theta;
pub mod spec_file;
pub mod special;
pub mod zeta;

pub use asymptotics::{
    divisibility_check, h_dn, h_dn_integral, log_det, log_det_report, log_det_star,
    product_formula_check, rescaled_theta_gap, thm11_residuals, thm13_residuals, ResidualSeries,
    TorusFamily,
};
pub use bundle_graph::{
    build_torus, holonomies, laplacian, torus_eigenvalues, Edge, HermitianOperator,
    LineBundleGraph, TorusBundleSpec, UnitWeight,
};
pub use crsf::{enumerate_crsfs, kenyon_check, kenyon_sum, Crsf, CrsfCycle, KenyonCheck};
pub use error::{Error, Result};
pub use heat_theta::{
    besselgen_sides, heat_kernel, theta_continuous, theta_discrete, ContinuousTorusSpec, ThetaForm,
};
pub use spec_file::{load_spec, parse_spec, SpecDocument};
pub use zeta::{
    c_d, kronecker_deriv0, zeta_eh, zeta_eh_deriv0, zeta_gn, zeta_zd, zeta_zd_deriv0,
    ZetaEvaluation, ZetaMethod,
};
