//! Divisor statistics of hyperelliptic function fields over finite fields:
//! zeta functions, exact summatory tables for k-free divisors and the
//! totient, explicit formulas for their error terms, limiting
//! distributions, and symplectic random-matrix comparisons.

pub mod curve;
pub mod error;
pub mod explicit;
pub mod family;
pub mod field;
pub mod limit;
pub mod rmt;
pub mod series;
pub mod zeta;

pub use curve::{count_points, field_of_size, HyperellipticCurve, PointCounter, PointCounts};
pub use error::{Error, Result};
pub use explicit::{
    bound_kfree, bound_residue_class, bound_totient, build_model, global_normalizations, main_term, model_for,
    normalized_error, oscillatory_sum, residual_constant, ErrorTermModel, MainTermConstants, NormalizedErrorSample,
};
pub use family::{enumerate_family, family_sweep, Family, FamilyReport, SweepOptions};
pub use field::{construct_field, field_arith, quadratic_character, FieldElement, FieldOp, FieldSpec};
pub use limit::{
    bessel_j0, density_kfree, density_totient, empirical_distribution, fourier_transform, kolmogorov_distance,
    sign_densities, EmpiricalDistribution, TorusDensityEstimate,
};
pub use rmt::{frobenius_angles, haar_probability_phi, phi, phi_star, sample_haar_angles, weyl_density, AngleSpectrum};
pub use rug::{Integer, Rational};
pub use series::{oracle_kfree, oracle_totient, summatory_kfree, summatory_totient, Kind, SummatoryTable};
pub use zeta::{class_number, inverse_zeros, l_polynomial, zeta_at_q_power, zeta_eval, InverseZeroSet, LPolynomial};
