//! Truncated Dirichlet series with exact rational coefficients.
//!
//! Products, inverses and powers are exact up to the truncation length, which
//! makes the coefficient identity `u_p = 0` of `U = L * Z^(-m)` a hard
//! equality test rather than a floating-point comparison.

use std::io::{self, Write};
use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{sieve_multiplicative, ArithFn, FunctionDescriptor, DEFAULT_MEMORY_BUDGET};
use crate::error::{Error, Result};
use crate::numfield::compositum_all;
use crate::primes::primes_up_to;

/// Coefficients `c_1, ..., c_N` of `sum c_n n^(-s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedDirichletSeries {
    coeffs: Vec<BigRational>,
}

impl TruncatedDirichletSeries {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "truncation length must be >= 1");
        TruncatedDirichletSeries { coeffs }
    }

    pub fn from_integers<I: Into<BigInt>>(coeffs: impl IntoIterator<Item = I>) -> Self {
        Self::new(coeffs.into_iter().map(|c| BigRational::from_integer(c.into())).collect())
    }

    pub fn from_fn(len: usize, f: impl Fn(usize) -> BigRational) -> Self {
        Self::new((1..=len).map(f).collect())
    }

    /// The identity `delta = 1`.
    pub fn delta(len: usize) -> Self {
        Self::from_fn(len, |n| if n == 1 { BigRational::one() } else { BigRational::zero() })
    }

    /// Riemann zeta, all coefficients 1.
    pub fn zeta(len: usize) -> Self {
        Self::from_fn(len, |_| BigRational::one())
    }

    /// Truncation length `N`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient `c_n`, `1 <= n <= N`.
    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.coeffs[n - 1]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Exact Dirichlet convolution up to `N`.
    pub fn dirichlet_mul(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        let n = self.len();
        let mut out = vec![BigRational::zero(); n];
        for d in 1..=n {
            let fd = &self.coeffs[d - 1];
            if fd.is_zero() {
                continue;
            }
            for e in 1..=n / d {
                let ge = &other.coeffs[e - 1];
                if !ge.is_zero() {
                    out[d * e - 1] += fd * ge;
                }
            }
        }
        Ok(Self::new(out))
    }

    /// Dirichlet inverse: `g_n = -(1/c_1) sum_{d | n, d > 1} c_d g_(n/d)`.
    pub fn dirichlet_inv(&self) -> Result<Self> {
        let c1 = self.coeffs[0].clone();
        if c1.is_zero() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        let n = self.len();
        let inv_c1 = c1.recip();
        // acc[k] collects sum_{d | k, d > 1} c_d g_(k/d) as the g's become known
        let mut acc = vec![BigRational::zero(); n];
        let mut g = Vec::with_capacity(n);
        for k in 1..=n {
            let delta = if k == 1 { BigRational::one() } else { BigRational::zero() };
            let gk = (delta - &acc[k - 1]) * &inv_c1;
            if !gk.is_zero() {
                for d in 2..=n / k {
                    let cd = &self.coeffs[d - 1];
                    if !cd.is_zero() {
                        acc[k * d - 1] += cd * &gk;
                    }
                }
            }
            g.push(gk);
        }
        Ok(Self::new(g))
    }

    /// `f^m`; negative `m` uses the inverse.
    pub fn dirichlet_pow(&self, m: i64) -> Result<Self> {
        let base = if m < 0 { self.dirichlet_inv()? } else { self.clone() };
        let mut exp = m.unsigned_abs();
        let mut acc = Self::delta(self.len());
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.dirichlet_mul(&sq)?;
            }
            exp >>= 1;
            if exp > 0 {
                sq = sq.dirichlet_mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// `sum_{n <= N} c_n n^(-s)` in floating point.
    pub fn evaluate(&self, s: f64) -> f64 {
        self.coeffs.iter().enumerate().map(|(i, c)| c.to_f64().unwrap_or(f64::NAN) * ((i + 1) as f64).powf(-s)).sum()
    }

    /// Running sums `sum_{n <= 2^j} |c_n| n^(-sigma)` at dyadic block ends,
    /// with the increment contributed by each block.
    pub fn dyadic_abs_sums(&self, sigma: f64) -> Vec<(usize, f64, f64)> {
        let mut out = Vec::new();
        let mut total = 0.0;
        let mut block_start = 1;
        while block_start <= self.len() {
            let block_end = (2 * block_start - 1).min(self.len());
            let inc: f64 = (block_start..=block_end)
                .map(|n| self.coeffs[n - 1].abs().to_f64().unwrap_or(f64::NAN) * (n as f64).powf(-sigma))
                .sum();
            total += inc;
            out.push((block_end, total, inc));
            block_start *= 2;
        }
        out
    }

    /// CSV rows `n,numerator,denominator` after a header line.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "n,numerator,denominator")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            writeln!(w, "{},{},{}", i + 1, c.numer(), c.denom())?;
        }
        Ok(())
    }
}

impl Mul for &TruncatedDirichletSeries {
    type Output = TruncatedDirichletSeries;

    fn mul(self, rhs: Self) -> TruncatedDirichletSeries {
        self.dirichlet_mul(rhs).expect("series lengths differ")
    }
}

/// `U = L * Z^(-m)`. `Z` must have `Z_1 = 1`.
pub fn u_series(
    l: &TruncatedDirichletSeries,
    z: &TruncatedDirichletSeries,
    m: u64,
) -> Result<TruncatedDirichletSeries> {
    if !z.coeff(1).is_one() {
        return Err(Error::invalid("u_series needs Z_1 = 1"));
    }
    if l.len() != z.len() {
        return Err(Error::LengthMismatch(l.len(), z.len()));
    }
    let m = i64::try_from(m).map_err(|_| Error::invalid("exponent too large"))?;
    l.dirichlet_mul(&z.dirichlet_pow(-m)?)
}

/// Series of a descriptor's values `f(1..=N)`.
pub fn series_of(desc: &FunctionDescriptor, len: usize) -> Result<TruncatedDirichletSeries> {
    let seq = sieve_multiplicative(desc, len, DEFAULT_MEMORY_BUDGET)?;
    Ok(TruncatedDirichletSeries::from_integers((1..=len).map(|n| seq.value(n))))
}

/// The comparison series for a descriptor: `L` (its values), `Z` (ideal
/// counts of the compositum of its fields) and the exponent `m`.
#[derive(Debug, Clone)]
pub struct EulerComparison {
    pub l: TruncatedDirichletSeries,
    pub z: TruncatedDirichletSeries,
    pub m: u64,
}

impl EulerComparison {
    pub fn build(desc: &FunctionDescriptor, len: usize) -> Result<Self> {
        let m = desc
            .euler_exponent()
            .ok_or_else(|| Error::invalid(format!("{desc} has no single-zeta Euler comparison")))?;
        let m = u64::try_from(m).map_err(|_| Error::invalid("exponent too large"))?;
        let fields = desc.fields();
        let z_desc = if fields.is_empty() {
            FunctionDescriptor::one()
        } else {
            FunctionDescriptor::single(ArithFn::IdealCount, compositum_all(&fields)?)
        };
        Ok(EulerComparison { l: series_of(desc, len)?, z: series_of(&z_desc, len)?, m })
    }

    pub fn u(&self) -> Result<TruncatedDirichletSeries> {
        u_series(&self.l, &self.z, self.m)
    }
}

/// One prime where `f(p) != m * a(p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeDisagreement {
    pub p: u64,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

/// Outcome of comparing `f(p)` against `m * a_{K_1...K_l}(p)` for `p <= P`.
#[derive(Debug, Clone)]
pub struct PrimeCheckReport {
    pub m: u128,
    pub primes_checked: usize,
    pub disagreements: Vec<PrimeDisagreement>,
    /// Ramified primes of the fields involved.
    pub exceptional: Vec<u64>,
    /// Exceptional primes whose splitting is unknown, so neither side was evaluated.
    pub unevaluated: Vec<u64>,
}

impl PrimeCheckReport {
    /// Disagreeing primes outside the exceptional set.
    pub fn unexpected(&self) -> Vec<u64> {
        self.disagreements.iter().map(|d| d.p).filter(|p| !self.exceptional.contains(p)).collect()
    }

    pub fn is_consistent(&self) -> bool {
        self.unexpected().is_empty()
    }
}

/// Compares the prime coefficients of a descriptor with those of
/// `zeta_{K_1...K_l}^m`. `m` defaults to [`FunctionDescriptor::euler_exponent`].
pub fn prime_coefficient_check(desc: &FunctionDescriptor, m: Option<u128>, bound: u64) -> Result<PrimeCheckReport> {
    let m = match m {
        Some(m) => m,
        None => desc
            .euler_exponent()
            .ok_or_else(|| Error::invalid(format!("{desc} has no single-zeta Euler comparison")))?,
    };
    let fields = desc.fields();
    let comp = if fields.is_empty() { None } else { Some(compositum_all(&fields)?) };
    let mut exceptional: Vec<u64> = fields.iter().flat_map(|k| k.ramified_primes(bound)).collect();
    exceptional.sort_unstable();
    exceptional.dedup();

    let primes = primes_up_to(bound);
    let mut disagreements = Vec::new();
    let mut unevaluated = Vec::new();
    for &p in &primes {
        let sides = (|| -> Result<(BigInt, BigInt)> {
            let lhs = desc.prime_power_values(p, 1)?.swap_remove(1);
            let a = match &comp {
                Some(k) => k.ideal_count_prime_power(p, 1)?,
                None => 1,
            };
            Ok((lhs, BigInt::from(m) * BigInt::from(a)))
        })();
        match sides {
            Ok((lhs, rhs)) => {
                if lhs != rhs {
                    disagreements.push(PrimeDisagreement { p, lhs, rhs });
                }
            }
            Err(Error::UnknownSplitting { .. }) if exceptional.contains(&p) => unevaluated.push(p),
            Err(e) => return Err(e),
        }
    }
    Ok(PrimeCheckReport { m, primes_checked: primes.len(), disagreements, exceptional, unevaluated })
}
