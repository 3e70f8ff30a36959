//! Closed-form machinery around the round sphere `ω`: the ε-expansion of
//! the mean curvature, the explicit corrector, the linearized operator and
//! its kernel, and the fourth-moment computation behind `∇Scal = 0`.

mod corrector;
mod linearized;
mod moments;
mod omega;

pub use corrector::{corrector, corrector_at, f_of_r, f_of_s, jet_conformality, sphere_jets, CorrectorAnsatz};
pub use linearized::*;
pub use moments::{moment_fourth, moment_fourth_quadrature, scal_gradient_from_moments, MomentReport};
pub use omega::{chart_sign, grad_omega_sq, omega_at, omega_chart, ric_base, s_term, t_term, Coefficients, Expansion};
