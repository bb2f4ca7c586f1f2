//! Main-term constants, predicted main terms, error terms and second moments.

pub mod characters;
pub mod lvalues;
pub mod mainterm;
pub mod moment;
pub mod residue;

use std::fmt;

pub use characters::{field_characters, nonprincipal_primitive_characters, DirichletCharacter};
pub use lvalues::{
    dedekind_zeta_direct, dedekind_zeta_value, dirichlet_l_one, l_one, l_value, riemann_zeta, ComplexEstimate,
    DEFAULT_ZETA_TERMS,
};
pub use mainterm::{
    leading_coeff_tau, leading_coeff_tau_euler, main_term_sigma, main_term_sigma_pair, predicted_main_term,
    sigma_pair_euler_factor, LeadingCoefficient, MainTerm, DEFAULT_U_TERMS,
};
pub use moment::{
    empirical_exponent, error_term, geometric_grid, moment_curve, second_moment, AsymptoticReport, MomentRow, ReportRow,
};
pub use residue::{residue_dedekind, residue_fallback, DEFAULT_FALLBACK_TERMS};

/// How a constant was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Character sums or class-number style closed forms.
    ClosedForm,
    /// Direct numerical summation over ideal counts.
    Fallback,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::ClosedForm => "closed-form",
            Provenance::Fallback => "fallback",
        })
    }
}

/// A real value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub provenance: Provenance,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, error: 0.0, provenance: Provenance::ClosedForm }
    }

    /// Product with first-order error propagation.
    pub fn mul(self, other: Estimate) -> Estimate {
        Estimate {
            value: self.value * other.value,
            error: self.error * other.value.abs() + other.error * self.value.abs() + self.error * other.error,
            provenance: self.provenance.worst(other.provenance),
        }
    }

    pub fn scale(self, factor: f64) -> Estimate {
        Estimate { value: self.value * factor, error: self.error * factor.abs(), provenance: self.provenance }
    }

    pub fn powi(self, k: u32) -> Estimate {
        (0..k).fold(Estimate::exact(1.0), |acc, _| acc.mul(self))
    }
}

impl Provenance {
    fn worst(self, other: Provenance) -> Provenance {
        if self == Provenance::Fallback || other == Provenance::Fallback {
            Provenance::Fallback
        } else {
            Provenance::ClosedForm
        }
    }
}

impl fmt::Display for Estimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.12} +/- {:.1e} ({})", self.value, self.error, self.provenance)
    }
}

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}
