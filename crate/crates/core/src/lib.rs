//! Symmetric quadratic dynamical systems in n complex variables:
//! classification, exact reduction to a single order-n ODE plus differential
//! polynomials, the scaling-group action, first integrals, and a numeric
//! round-trip pipeline that reconstructs coordinate trajectories from the
//! reduced equation by polynomial root tracking.

pub mod error;
pub mod group_action;
pub mod integrals;
pub mod linalg;
pub mod mpoly;
pub mod numerics;
pub mod reduction;
pub mod scalar;
pub mod symfun;
pub mod systems;
pub mod verify;

pub use error::{Error, Result};
pub use group_action::{b_compose, b_inverse, normal_form, sigma_pushforward, transform_ode, transform_system, BMatrix, NormalFormCase};
pub use integrals::{check_polynomial_integral, lv_rational_integral, quadratic_integral_basis, QuadraticForm, RationalIntegral};
pub use mpoly::{Monomial, MultiPoly, VarSet};
pub use numerics::{
    algebraic_integrate, integrate_direct, integrate_reduced, residual_check, track_roots,
    ClosedFormCase, IntegrationReport, IntegrationStatus, ToleranceConfig, Trajectory,
};
pub use reduction::{
    apply_l_sigma, chazy_c, initial_jets, reduce_almost_generic, reduce_generic, rescale_ode,
    sigma_system, AlmostGenericReduction, ReducedODE, ReductionData, SigmaSystem,
};
pub use scalar::{rat, Coeff, Complex64, Rational, Scalar};
pub use symfun::{
    discriminant_from_sigma, discriminant_log_derivative_check,
    discriminant_log_derivative_check_batch, discriminant_xi, elementary_xi,
    express_in_sigma, monic_coeffs, newton_in_sigma, power_sum_xi, symmetrize, vieta_image,
};
pub use systems::{
    classify, darboux_halphen, detect_symmetry, gen_dh, kp2_tensor, lax_system, lv_tensor,
    n1_system, quasi_symmetric_check, Classification, Kind, QuadraticTensor, SymmetricSystem,
};
