//! Predicted main terms `coefficient * x^power * (log x)^log_power`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::lvalues::{dedekind_zeta_value, riemann_zeta};
use super::residue::residue_dedekind;
use super::{Estimate, Provenance};
use crate::arith::{ArithFn, FnFactor, FunctionDescriptor};
use crate::error::{Error, Result};
use crate::numfield::{compositum, compositum_all, NumberField};
use crate::primes::primes_up_to;
use crate::series::EulerComparison;

/// Default truncation for `U(1)`.
pub const DEFAULT_U_TERMS: usize = 4096;

/// `M(x) = coefficient * x^x_power * (log x)^log_power`.
#[derive(Debug, Clone, PartialEq)]
pub struct MainTerm {
    pub coefficient: Estimate,
    pub x_power: f64,
    pub log_power: u32,
    /// Only the leading term of a longer main-term polynomial.
    pub leading_only: bool,
    pub label: String,
}

impl MainTerm {
    pub fn new(coefficient: Estimate, x_power: f64, log_power: u32, label: impl Into<String>) -> Self {
        MainTerm { coefficient, x_power, log_power, leading_only: false, label: label.into() }
    }

    /// `M = 0`.
    pub fn zero() -> Self {
        MainTerm::new(Estimate::exact(0.0), 1.0, 0, "0")
    }

    /// `M(x) = x`.
    pub fn identity() -> Self {
        MainTerm::new(Estimate::exact(1.0), 1.0, 0, "x")
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 || self.coefficient.value == 0.0 {
            return 0.0;
        }
        let mut v = self.coefficient.value * x.powf(self.x_power);
        if self.log_power > 0 {
            v *= x.ln().powi(self.log_power as i32);
        }
        v
    }

    /// Relative uncertainty of `M(x)` inherited from the coefficient.
    pub fn relative_error(&self) -> f64 {
        if self.coefficient.value == 0.0 {
            0.0
        } else {
            self.coefficient.error / self.coefficient.value.abs()
        }
    }
}

/// `sum_{n <= x} sigma_a^K(n) ~ c_K zeta(1 + a) / (1 + a) * x^(1 + a)`.
pub fn main_term_sigma(k: &NumberField, a: u32) -> Result<MainTerm> {
    if a == 0 {
        return Err(Error::invalid("sigma main term needs a >= 1"));
    }
    let s = 1.0 + a as f64;
    let c = residue_dedekind(k)?.mul(riemann_zeta(s)?).scale(1.0 / s);
    Ok(MainTerm::new(c, s, 0, format!("sigma:{a}@{}", k.name())))
}

/// `sum_{n <= x} sigma_a^{K1}(n) sigma_b^{K2}(n) ~
/// zeta(1+a+b) zeta_{K1}(1+b) zeta_{K2}(1+a) c_{K1K2} x^(1+a+b) / (1+a+b)`.
pub fn main_term_sigma_pair(k1: &NumberField, k2: &NumberField, a: u32, b: u32) -> Result<MainTerm> {
    if a == 0 || b == 0 {
        return Err(Error::invalid("sigma pair main term needs a, b >= 1"));
    }
    let comp = compositum(k1, k2)?;
    let s = 1.0 + (a + b) as f64;
    let c = riemann_zeta(s)?
        .mul(dedekind_zeta_value(k1, 1.0 + b as f64)?)
        .mul(dedekind_zeta_value(k2, 1.0 + a as f64)?)
        .mul(residue_dedekind(&comp)?)
        .scale(1.0 / s);
    Ok(MainTerm::new(c, s, 0, format!("sigma:{a}@{} * sigma:{b}@{}", k1.name(), k2.name())))
}

/// `prod_{P | p} (1 - N(P)^(-s))`, the inverse local factor of `zeta_K` at `p`.
fn inverse_local_zeta(k: &NumberField, p: u64, s: f64) -> Result<f64> {
    let st = k.splitting_type(p)?;
    Ok(st.classes().iter().map(|c| (1.0 - (p as f64).powf(-(c.f as f64) * s)).powi(c.count as i32)).product())
}

/// Number of prime-power terms so that `p^(-j)` times polynomial growth is negligible.
fn local_terms(p: u64) -> u32 {
    (80.0 / (p as f64).log2()).ceil() as u32 + 8
}

/// `sum_j f(p^j) p^(-j s)` from exact prime-power values.
fn local_series(desc: &FunctionDescriptor, p: u64, s: f64, weight: u32) -> Result<f64> {
    let terms = local_terms(p);
    let vals = desc.prime_power_values(p, terms)?;
    let pb = BigInt::from(p);
    let mut sum = 0.0;
    for (j, v) in vals.iter().enumerate() {
        // v / p^(j weight) stays O(poly(j)) before the p^(-j (s - weight)) decay
        let scaled = BigRational::new(v.clone(), pb.pow(j as u32 * weight)).to_f64().unwrap_or(f64::NAN);
        sum += scaled * (p as f64).powf(-(j as f64) * (s - weight as f64));
    }
    Ok(sum)
}

/// Product of local factors over `p <= bound` with a tail estimate: the
/// summed `|log factor|` over the last dyadic range `(bound/2, bound]`.
fn euler_product(bound: u64, mut local: impl FnMut(u64) -> Result<f64>) -> Result<(f64, f64)> {
    let mut log_sum = super::CompensatedSum::default();
    let mut last_block = 0.0;
    for p in primes_up_to(bound) {
        let f = local(p)?;
        if !(f > 0.0) {
            return Err(Error::invalid(format!("local factor at {p} is {f}")));
        }
        log_sum.add(f.ln());
        if 2 * p > bound {
            last_block += f.ln().abs();
        }
    }
    let value = log_sum.value().exp();
    Ok((value, value * last_block))
}

/// The Euler product `H(1 + a + b)` in
/// `sum sigma_a^{K1}(n) sigma_b^{K2}(n) n^(-s) = zeta(s) zeta_{K1}(s-a) zeta_{K2}(s-b) zeta_{K1K2}(s-a-b) H(s)`,
/// over primes up to `bound`. The residue at `s = 1 + a + b` carries this factor;
/// for `K1 = K2 = Q` it is `1 / zeta(2 + a + b)`.
pub fn sigma_pair_euler_factor(k1: &NumberField, k2: &NumberField, a: u32, b: u32, bound: u64) -> Result<Estimate> {
    let comp = if k1.degree() == 1 || k2.degree() == 1 {
        if k1.degree() == 1 {
            k2.clone()
        } else {
            k1.clone()
        }
    } else {
        compositum(k1, k2)?
    };
    let desc = FunctionDescriptor::new(vec![
        FnFactor::new(ArithFn::Sigma(a), k1.clone()),
        FnFactor::new(ArithFn::Sigma(b), k2.clone()),
    ]);
    let s = 1.0 + (a + b) as f64;
    let (value, error) = euler_product(bound, |p| {
        let f = local_series(&desc, p, s, a + b)?;
        Ok(f * (1.0 - (p as f64).powf(-s))
            * inverse_local_zeta(&comp, p, 1.0)?
            * inverse_local_zeta(k1, p, 1.0 + b as f64)?
            * inverse_local_zeta(k2, p, 1.0 + a as f64)?)
    })?;
    Ok(Estimate { value, error, provenance: Provenance::Fallback })
}

/// Leading coefficient `c^m U(1) / (m - 1)!` of the main term `x P_m(log x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeadingCoefficient {
    pub m: u128,
    /// Residue of the compositum zeta function.
    pub residue: Estimate,
    /// `sum_{n <= N} u_n / n`.
    pub u_one: f64,
    /// Estimated (not certified) truncation error of `u_one`.
    pub truncation: f64,
    pub terms: usize,
    pub value: Estimate,
    pub label: String,
}

impl LeadingCoefficient {
    pub fn main_term(&self) -> MainTerm {
        let log_power = u32::try_from(self.m - 1).unwrap_or(u32::MAX);
        MainTerm {
            coefficient: self.value,
            x_power: 1.0,
            log_power,
            leading_only: self.m > 1,
            label: self.label.clone(),
        }
    }
}

/// Leading coefficient for a descriptor with an Euler comparison exponent.
pub fn leading_coeff_tau(desc: &FunctionDescriptor, terms: usize) -> Result<LeadingCoefficient> {
    let m =
        desc.euler_exponent().ok_or_else(|| Error::invalid(format!("{desc} has no single-zeta Euler comparison")))?;
    if m == 0 {
        return Err(Error::invalid("Euler exponent is zero"));
    }
    let fields = desc.fields();
    let residue = if fields.is_empty() { Estimate::exact(1.0) } else { residue_dedekind(&compositum_all(&fields)?)? };

    let u = EulerComparison::build(desc, terms)?.u()?;
    let mut blocks: Vec<f64> = Vec::new();
    let mut total = 0.0;
    let mut block_start = 1usize;
    let mut block = 0.0;
    for n in 1..=terms {
        if n == 2 * block_start {
            blocks.push(block);
            block = 0.0;
            block_start = n;
        }
        let term = u.coeff(n).to_f64().unwrap_or(f64::NAN) / n as f64;
        total += term;
        block += term;
    }
    if block_start * 2 - 1 == terms {
        blocks.push(block);
    }
    let truncation = dyadic_tail(&blocks);

    let value = assemble_leading(m, residue, total, truncation);
    Ok(LeadingCoefficient { m, residue, u_one: total, truncation, terms, value, label: desc.to_string() })
}

fn assemble_leading(m: u128, residue: Estimate, u_one: f64, truncation: f64) -> Estimate {
    // c^m / (m - 1)! as a running product to stay in range
    let mut scale = residue.value;
    for i in 1..m {
        scale *= residue.value / i as f64;
    }
    let rel = m as f64 * residue.error / residue.value.abs() + truncation / u_one.abs();
    Estimate {
        value: scale * u_one,
        error: rel * (scale * u_one).abs(),
        provenance: if residue.provenance == Provenance::Fallback {
            Provenance::Fallback
        } else {
            Provenance::ClosedForm
        },
    }
}

/// As [`leading_coeff_tau`] with `U(1)` taken as the Euler product
/// `prod_p L_p(1/p) prod_{P | p} (1 - 1/N(P))^m` over `p <= bound`.
pub fn leading_coeff_tau_euler(desc: &FunctionDescriptor, bound: u64) -> Result<LeadingCoefficient> {
    let m =
        desc.euler_exponent().ok_or_else(|| Error::invalid(format!("{desc} has no single-zeta Euler comparison")))?;
    let fields = desc.fields();
    let comp = if fields.is_empty() { None } else { Some(compositum_all(&fields)?) };
    let residue = match &comp {
        Some(k) => residue_dedekind(k)?,
        None => Estimate::exact(1.0),
    };
    let mi = i32::try_from(m).map_err(|_| Error::invalid("exponent too large"))?;
    let (u_one, truncation) = euler_product(bound, |p| {
        let l = local_series(desc, p, 1.0, 0)?;
        let z = match &comp {
            Some(k) => inverse_local_zeta(k, p, 1.0)?,
            None => 1.0 - 1.0 / p as f64,
        };
        Ok(l * z.powi(mi))
    })?;
    let value = assemble_leading(m, residue, u_one, truncation);
    Ok(LeadingCoefficient { m, residue, u_one, truncation, terms: bound as usize, value, label: desc.to_string() })
}

/// Tail estimate from the decay of complete dyadic block sums.
fn dyadic_tail(blocks: &[f64]) -> f64 {
    match blocks {
        [] => 0.0,
        [only] => only.abs(),
        [.., prev, last] => {
            let r = (last / prev).abs();
            if r.is_finite() && r < 1.0 {
                last.abs() * r / (1.0 - r)
            } else {
                last.abs()
            }
        }
    }
}

/// The main term for a descriptor: `sigma` or a coprime `sigma` pair, or the
/// leading term of `x P_m(log x)` otherwise.
pub fn predicted_main_term(desc: &FunctionDescriptor, u_terms: usize) -> Result<MainTerm> {
    let active: Vec<_> = desc.factors().iter().filter(|f| f.func != ArithFn::One).collect();
    let sigmas: Vec<_> = active.iter().filter(|f| matches!(f.func, ArithFn::Sigma(_))).collect();
    if sigmas.is_empty() {
        return Ok(leading_coeff_tau(desc, u_terms)?.main_term());
    }
    match active.as_slice() {
        [f] if f.power == 1 => match f.func {
            ArithFn::Sigma(a) => main_term_sigma(&f.field, a),
            _ => unreachable!(),
        },
        [f, g] if f.power == 1 && g.power == 1 && sigmas.len() == 2 => match (f.func, g.func) {
            (ArithFn::Sigma(a), ArithFn::Sigma(b)) => main_term_sigma_pair(&f.field, &g.field, a, b),
            _ => unreachable!(),
        },
        _ => Err(Error::invalid(format!("no main term is known for {desc}"))),
    }
}
