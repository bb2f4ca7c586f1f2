//! Residue `c_K` of `zeta_K` at `s = 1`.

use num_complex::Complex64;

use super::characters::field_characters;
use super::lvalues::{check_real, l_one};
use super::{CompensatedSum, Estimate, Provenance};
use crate::arith::{sieve_multiplicative, ArithFn, FunctionDescriptor, DEFAULT_MEMORY_BUDGET};
use crate::error::Result;
use crate::numfield::NumberField;

/// Default ideal-count bound for the numerical fallback.
pub const DEFAULT_FALLBACK_TERMS: usize = 1 << 20;

/// `c_K = lim (s - 1) zeta_K(s)`.
///
/// Abelian fields with a known character group use `prod L(1, chi)` over
/// their nonprincipal characters; everything else goes through
/// [`residue_fallback`].
pub fn residue_dedekind(k: &NumberField) -> Result<Estimate> {
    match field_characters(k) {
        Some(chars) => {
            let mut value = Complex64::new(1.0, 0.0);
            let mut rel = 0.0;
            for chi in &chars {
                let l = l_one(chi)?;
                value *= l.value;
                rel += l.error / l.value.norm();
            }
            check_real(value, k)?;
            Ok(Estimate { value: value.re, error: rel * value.re.abs(), provenance: Provenance::ClosedForm })
        }
        None => residue_fallback(k, DEFAULT_FALLBACK_TERMS),
    }
}

/// Numerical residue from ideal counts up to `terms`.
///
/// `F(delta) = delta sum_{n <= N} a(n) n^(-1-delta) + c~ N^(-delta)` approximates
/// `(s - 1) zeta_K(s)` at `s = 1 + delta`, the tail replaced by the density `c~`,
/// the mean of `S(M)/M` over `N/2 <= M <= N`. `F` is extrapolated to `delta = 0`
/// along `delta = 1/8, 1/16, ...`. The error estimate is the spread of `S(M)/M`
/// on that window plus the extrapolation residual.
pub fn residue_fallback(k: &NumberField, terms: usize) -> Result<Estimate> {
    let terms = terms.max(16);
    let seq = sieve_multiplicative(
        &FunctionDescriptor::single(ArithFn::IdealCount, k.clone()),
        terms,
        DEFAULT_MEMORY_BUDGET,
    )?;

    let lo = terms / 2;
    let mut mean = CompensatedSum::default();
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for m in lo..=terms {
        let r = seq.summatory_f64(m) / m as f64;
        mean.add(r);
        min = min.min(r);
        max = max.max(r);
    }
    let density = mean.value() / (terms - lo + 1) as f64;

    let n = terms as f64;
    let deltas: Vec<f64> = (3..8).map(|i| 0.5f64.powi(i)).collect();
    let samples: Vec<f64> = deltas
        .iter()
        .map(|&d| {
            let mut sum = CompensatedSum::default();
            for i in 1..=terms {
                let a = seq.value_f64(i);
                if a != 0.0 {
                    sum.add(a * (i as f64).powf(-1.0 - d));
                }
            }
            d * sum.value() + density * n.powf(-d)
        })
        .collect();

    let mut table = vec![samples];
    for j in 1..table[0].len() {
        let prev = &table[j - 1];
        let f = (1u64 << j) as f64;
        let next: Vec<f64> = prev.windows(2).map(|w| (f * w[1] - w[0]) / (f - 1.0)).collect();
        table.push(next);
    }
    let value = table[table.len() - 1][0];
    let extrapolation = (value - table[table.len() - 2][1]).abs();
    let spread = max - min;
    Ok(Estimate { value, error: spread + extrapolation, provenance: Provenance::Fallback })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asym::dirichlet_l_one;
    use crate::numfield::compositum;
    use std::f64::consts::PI;

    #[test]
    fn quadratic_residue_is_l_one() {
        for d in [-4, -3, 5, 8, -20] {
            let r = residue_dedekind(&NumberField::quadratic(d).unwrap()).unwrap();
            let l = dirichlet_l_one(d).unwrap();
            assert_eq!(r.value, l.value);
            assert_eq!(r.provenance, Provenance::ClosedForm);
        }
    }

    #[test]
    fn biquadratic_residue() {
        let k = compositum(&NumberField::quadratic(-4).unwrap(), &NumberField::quadratic(5).unwrap()).unwrap();
        let r = residue_dedekind(&k).unwrap();
        let expected = PI / 4.0 * (2.0 / 5f64.sqrt() * ((1.0 + 5f64.sqrt()) / 2.0).ln()) * (2.0 * PI / 20f64.sqrt());
        assert!((r.value - expected).abs() < 1e-10, "{r} vs {expected}");
        assert!((r.value - 0.4749370346).abs() < 1e-9);
    }

    #[test]
    fn cyclotomic_residue_matches_fallback() {
        let k = NumberField::cyclotomic(5).unwrap();
        let closed = residue_dedekind(&k).unwrap();
        let fallback = residue_fallback(&k, 1 << 18).unwrap();
        assert!((closed.value - fallback.value).abs() <= fallback.error, "{closed} vs {fallback}");
    }

    #[test]
    fn rationals_have_residue_one() {
        let r = residue_dedekind(&NumberField::rationals()).unwrap();
        assert_eq!(r.value, 1.0);
        let f = residue_fallback(&NumberField::rationals(), 1000).unwrap();
        assert!((f.value - 1.0).abs() <= f.error + 1e-12);
    }
}
