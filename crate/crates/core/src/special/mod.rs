//! Numeric substrate: scaled Bessel functions, gamma and Hurwitz zeta,
//! adaptive quadrature.

mod bessel;
mod gamma;
mod quadrature;

pub use bessel::{bessel_i_complex, bessel_i_scaled};
pub use gamma::{
    gamma, hurwitz_zeta, hurwitz_zeta_deriv_s0, ln_gamma, rgamma, sin_pi, EULER_GAMMA, HALF_LN_2PI,
};
pub use quadrature::{integrate, integrate_semi_infinite, Quadrature, QuadratureSpec, Tail};
