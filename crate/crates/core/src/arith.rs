//! Divisor-type functions over number fields: pointwise evaluation,
//! function descriptors, and the multiplicative sieve.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numfield::{parse_field, NumberField};
use crate::primes::{factor, linear_sieve};

/// `tau_k^K(p^m)` for `m = 0..=max_m`, by k-fold convolution of the ideal
/// counts `a_K(p^j)` along the exponent.
fn tau_prime_power_table(k: &NumberField, tau: u32, p: u64, max_m: u32) -> Result<Vec<u128>> {
    if tau == 0 {
        return Err(Error::invalid("tau_k needs k >= 1"));
    }
    let a: Vec<u128> = (0..=max_m).map(|m| k.ideal_count_prime_power(p, m)).collect::<Result<_>>()?;
    let mut t = a.clone();
    for _ in 1..tau {
        let mut next = vec![0u128; t.len()];
        for (s, out) in next.iter_mut().enumerate() {
            for j in 0..=s {
                let term = t[j].checked_mul(a[s - j]).ok_or_else(overflow)?;
                *out = out.checked_add(term).ok_or_else(overflow)?;
            }
        }
        t = next;
    }
    Ok(t)
}

fn overflow() -> Error {
    Error::invalid("value exceeds 128 bits")
}

/// `tau_k^K(p^m)`: the number of k-tuples of ideals whose norms multiply to `p^m`.
pub fn tau_k_prime_power(k: &NumberField, tau: u32, p: u64, m: u32) -> Result<u128> {
    Ok(tau_prime_power_table(k, tau, p, m)?[m as usize])
}

fn multiplicative<F>(n: u64, mut at_prime_power: F) -> Result<u128>
where
    F: FnMut(u64, u32) -> Result<u128>,
{
    if n == 0 {
        return Err(Error::invalid("arithmetic functions are defined for n >= 1"));
    }
    factor(n).into_iter().try_fold(1u128, |acc, (p, m)| acc.checked_mul(at_prime_power(p, m)?).ok_or_else(overflow))
}

/// `tau_k^K(n)`.
pub fn tau_k(k: &NumberField, tau: u32, n: u64) -> Result<u128> {
    multiplicative(n, |p, m| tau_k_prime_power(k, tau, p, m))
}

/// `tau_k^K(n^2)`, assembled from the prime powers `p^(2m)`.
pub fn tau_k_square(k: &NumberField, tau: u32, n: u64) -> Result<u128> {
    multiplicative(n, |p, m| tau_k_prime_power(k, tau, p, 2 * m))
}

/// `sigma_a^K(p^m) = sum_{j <= m} a_K(p^j) p^(j a)`.
pub fn sigma_a_prime_power(k: &NumberField, a: u32, p: u64, m: u32) -> Result<BigInt> {
    let mut acc = BigInt::zero();
    let pa = BigInt::from(p).pow(a);
    let mut scale = BigInt::one();
    for j in 0..=m {
        acc += &scale * BigInt::from(k.ideal_count_prime_power(p, j)?);
        scale *= &pa;
    }
    Ok(acc)
}

/// `sigma_a^K(n)`, the sum of `N(I)^a` over ideals `I` whose norm divides `n`.
pub fn sigma_a(k: &NumberField, a: u32, n: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::invalid("sigma_a is defined for n >= 1"));
    }
    factor(n).into_iter().try_fold(BigInt::one(), |acc, (p, m)| Ok(acc * sigma_a_prime_power(k, a, p, m)?))
}

/// The building blocks a descriptor factor can name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithFn {
    /// The constant function 1.
    One,
    /// `a_K(n)`.
    IdealCount,
    /// `tau_k^K(n)`.
    Tau(u32),
    /// `tau_k^K(n^2)`.
    TauSquare(u32),
    /// `sigma_a^K(n)`.
    Sigma(u32),
}

impl ArithFn {
    /// Values at `p^0, ..., p^max_m`.
    fn prime_power_values(self, k: &NumberField, p: u64, max_m: u32) -> Result<Vec<BigInt>> {
        Ok(match self {
            ArithFn::One => vec![BigInt::one(); max_m as usize + 1],
            ArithFn::IdealCount => {
                (0..=max_m).map(|m| k.ideal_count_prime_power(p, m).map(BigInt::from)).collect::<Result<_>>()?
            }
            ArithFn::Tau(t) => tau_prime_power_table(k, t, p, max_m)?.into_iter().map(BigInt::from).collect(),
            ArithFn::TauSquare(t) => {
                let table = tau_prime_power_table(k, t, p, 2 * max_m)?;
                table.into_iter().step_by(2).map(BigInt::from).collect()
            }
            ArithFn::Sigma(a) => {
                let pa = BigInt::from(p).pow(a);
                let mut out = Vec::with_capacity(max_m as usize + 1);
                let mut acc = BigInt::zero();
                let mut scale = BigInt::one();
                for j in 0..=max_m {
                    acc += &scale * BigInt::from(k.ideal_count_prime_power(p, j)?);
                    scale *= &pa;
                    out.push(acc.clone());
                }
                out
            }
        })
    }
}

impl fmt::Display for ArithFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithFn::One => write!(f, "one"),
            ArithFn::IdealCount => write!(f, "a"),
            ArithFn::Tau(k) => write!(f, "tau:{k}"),
            ArithFn::TauSquare(k) => write!(f, "tau2:{k}"),
            ArithFn::Sigma(a) => write!(f, "sigma:{a}"),
        }
    }
}

/// One factor of a product descriptor: `func^power` over `field`.
#[derive(Debug, Clone)]
pub struct FnFactor {
    pub func: ArithFn,
    pub power: u32,
    pub field: NumberField,
}

impl FnFactor {
    pub fn new(func: ArithFn, field: NumberField) -> Self {
        FnFactor { func, power: 1, field }
    }

    pub fn pow(mut self, power: u32) -> Self {
        self.power = power;
        self
    }
}

/// A product of multiplicative functions, each bound to a field, such as
/// `tau2:2@quad:-4 * tau2:2@cyclo:7`.
#[derive(Debug, Clone)]
pub struct FunctionDescriptor {
    factors: Vec<FnFactor>,
}

impl FunctionDescriptor {
    pub fn new(factors: Vec<FnFactor>) -> Self {
        FunctionDescriptor { factors }
    }

    pub fn single(func: ArithFn, field: NumberField) -> Self {
        Self::new(vec![FnFactor::new(func, field)])
    }

    /// The constant function 1.
    pub fn one() -> Self {
        Self::new(vec![FnFactor::new(ArithFn::One, NumberField::rationals())])
    }

    pub fn factors(&self) -> &[FnFactor] {
        &self.factors
    }

    /// Distinct fields in order of first appearance (the constant factor has none).
    pub fn fields(&self) -> Vec<NumberField> {
        let mut out: Vec<NumberField> = Vec::new();
        for f in &self.factors {
            if f.func != ArithFn::One && !out.iter().any(|k| k.name() == f.field.name()) {
                out.push(f.field.clone());
            }
        }
        out
    }

    /// `f(p^0), ..., f(p^max_m)`.
    pub fn prime_power_values(&self, p: u64, max_m: u32) -> Result<Vec<BigInt>> {
        let mut acc = vec![BigInt::one(); max_m as usize + 1];
        for factor in &self.factors {
            let vals = factor.func.prime_power_values(&factor.field, p, max_m)?;
            for (a, v) in acc.iter_mut().zip(vals) {
                *a *= v.pow(factor.power);
            }
        }
        Ok(acc)
    }

    /// Pointwise value `f(n)`.
    pub fn value(&self, n: u64) -> Result<BigInt> {
        if n == 0 {
            return Err(Error::invalid("arithmetic functions are defined for n >= 1"));
        }
        factor(n).into_iter().try_fold(BigInt::one(), |acc, (p, m)| {
            let vals = self.prime_power_values(p, m)?;
            Ok(acc * &vals[m as usize])
        })
    }

    /// The exponent `m` with `f(p) = m * a_{K_1...K_l}(p)` at good primes.
    ///
    /// Each factor `c * a_K(p)` raised to `j` contributes `c^j`, and a field
    /// carrying total exponent `J` contributes `d^(J - 1)` via
    /// `a_K(p)^J = d^(J-1) a_K(p)`. `tau2:k` uses `c = (k^2 d + k)/2`, which is
    /// only correct for Galois fields of odd degree. `None` for descriptors
    /// containing `sigma`, whose prime values are not of this shape.
    pub fn euler_exponent(&self) -> Option<u128> {
        let mut m: u128 = 1;
        for f in &self.factors {
            let d = f.field.degree() as u128;
            let c = match f.func {
                ArithFn::One => continue,
                ArithFn::IdealCount => 1,
                ArithFn::Tau(k) => k as u128,
                ArithFn::TauSquare(k) => (k as u128 * k as u128 * d + k as u128) / 2,
                ArithFn::Sigma(_) => return None,
            };
            m = m.checked_mul(c.checked_pow(f.power)?)?;
        }
        for k in self.fields() {
            let total: u32 = self
                .factors
                .iter()
                .filter(|f| f.func != ArithFn::One && f.field.name() == k.name())
                .map(|f| f.power)
                .sum();
            m = m.checked_mul((k.degree() as u128).checked_pow(total.saturating_sub(1))?)?;
        }
        Some(m)
    }
}

impl fmt::Display for FunctionDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|x| {
                let pow = if x.power == 1 { String::new() } else { format!("^{}", x.power) };
                if x.func == ArithFn::One {
                    format!("one{pow}")
                } else {
                    format!("{}{pow}@{}", x.func, x.field.name())
                }
            })
            .collect();
        f.write_str(&parts.join(" * "))
    }
}

/// Parses descriptors like `tau2:2@quad:-4 * a^2@cyclo:7`.
///
/// A factor without `@field` binds to `default_fields[i]` where `i` is its
/// position, or to the only default field when exactly one is given.
pub fn parse_descriptor(text: &str, default_fields: &[NumberField]) -> Result<FunctionDescriptor> {
    let mut factors = Vec::new();
    let mut column = 1;
    let pieces: Vec<&str> = text.split('*').collect();
    for (i, piece) in pieces.iter().enumerate() {
        let lead = piece.len() - piece.trim_start().len();
        let col = column + lead;
        let piece = piece.trim();
        if piece.is_empty() {
            return Err(Error::parse(col, "empty factor"));
        }
        let (head, field_spec) = match piece.split_once('@') {
            Some((h, f)) => (h.trim(), Some(f.trim())),
            None => (piece, None),
        };
        let (name, power) = match head.split_once('^') {
            Some((n, e)) => {
                let e: u32 =
                    e.trim().parse().map_err(|_| Error::parse(col + n.len() + 1, format!("bad exponent {e:?}")))?;
                (n.trim(), e)
            }
            None => (head, 1),
        };
        let (base, param) = match name.split_once(':') {
            Some((b, p)) => {
                let v: u32 =
                    p.trim().parse().map_err(|_| Error::parse(col + b.len() + 1, format!("bad parameter {p:?}")))?;
                (b, Some(v))
            }
            None => (name, None),
        };
        let func = match (base, param) {
            ("one" | "1", None) => ArithFn::One,
            ("a", None) => ArithFn::IdealCount,
            ("tau", Some(k)) if k >= 1 => ArithFn::Tau(k),
            ("tau2", Some(k)) if k >= 1 => ArithFn::TauSquare(k),
            ("sigma", Some(a)) => ArithFn::Sigma(a),
            _ => return Err(Error::parse(col, format!("unknown function {name:?}"))),
        };
        let field = match (func, field_spec) {
            (ArithFn::One, _) => NumberField::rationals(),
            (_, Some(spec)) => {
                let at = col + piece.find('@').unwrap_or(0) + 1;
                parse_field(spec).map_err(|e| match e {
                    Error::Parse { column, message } => Error::parse(at + column - 1, message),
                    other => other,
                })?
            }
            (_, None) => match default_fields {
                [only] => only.clone(),
                fields if i < fields.len() => fields[i].clone(),
                _ => return Err(Error::parse(col, format!("factor {piece:?} has no field binding"))),
            },
        };
        factors.push(FnFactor { func, power, field });
        column += pieces[i].len() + 1;
    }
    Ok(FunctionDescriptor::new(factors))
}

/// Exact values `f(1..=X)` of a multiplicative function with running sums.
///
/// Values are 128-bit while they fit and arbitrary precision otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SievedSequence {
    values: Column,
    summatory: Column,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Column {
    Narrow(Vec<i128>),
    Wide(Vec<BigInt>),
}

impl Column {
    fn len(&self) -> usize {
        match self {
            Column::Narrow(v) => v.len(),
            Column::Wide(v) => v.len(),
        }
    }

    fn get(&self, i: usize) -> BigInt {
        match self {
            Column::Narrow(v) => BigInt::from(v[i]),
            Column::Wide(v) => v[i].clone(),
        }
    }

    fn get_f64(&self, i: usize) -> f64 {
        match self {
            Column::Narrow(v) => v[i] as f64,
            Column::Wide(v) => v[i].to_f64().unwrap_or(f64::INFINITY),
        }
    }

    fn prefix_sums(&self) -> Column {
        match self {
            Column::Narrow(v) => {
                let mut out = Vec::with_capacity(v.len());
                let mut acc: i128 = 0;
                for &x in v {
                    match acc.checked_add(x) {
                        Some(s) => acc = s,
                        None => return Column::Wide(v.iter().map(|&x| BigInt::from(x)).collect()).prefix_sums(),
                    }
                    out.push(acc);
                }
                Column::Narrow(out)
            }
            Column::Wide(v) => {
                let mut acc = BigInt::zero();
                Column::Wide(
                    v.iter()
                        .map(|x| {
                            acc += x;
                            acc.clone()
                        })
                        .collect(),
                )
            }
        }
    }
}

/// Bytes per sieved index: smallest prime factor, prime-power table, values, sums.
pub const SIEVE_BYTES_PER_INDEX: u64 = 4 + 16 + 16 + 16;

/// Default memory budget for sieving, 2 GiB.
pub const DEFAULT_MEMORY_BUDGET: u64 = 2 << 30;

impl SievedSequence {
    /// Builds a sequence from explicit values `f(1..=X)`.
    pub fn from_values(values: Vec<i128>) -> Self {
        let mut v = Vec::with_capacity(values.len() + 1);
        v.push(0);
        v.extend(values);
        let values = Column::Narrow(v);
        let summatory = values.prefix_sums();
        SievedSequence { values, summatory }
    }

    /// Upper bound `X`.
    pub fn bound(&self) -> usize {
        self.values.len() - 1
    }

    pub fn value(&self, n: usize) -> BigInt {
        assert!(n >= 1 && n <= self.bound(), "index {n} outside 1..={}", self.bound());
        self.values.get(n)
    }

    pub fn value_f64(&self, n: usize) -> f64 {
        self.values.get_f64(n)
    }

    /// `S(x) = sum_{n <= x} f(n)`; `S(0) = 0`.
    pub fn summatory(&self, x: usize) -> BigInt {
        self.summatory.get(x.min(self.bound()))
    }

    pub fn summatory_f64(&self, x: usize) -> f64 {
        self.summatory.get_f64(x.min(self.bound()))
    }

    pub fn is_wide(&self) -> bool {
        matches!(self.values, Column::Wide(_))
    }

    /// Values as 128-bit integers when they fit.
    pub fn narrow_values(&self) -> Option<&[i128]> {
        match &self.values {
            Column::Narrow(v) => Some(&v[1..]),
            Column::Wide(_) => None,
        }
    }
}

/// Sieves `f(1..=bound)` for a multiplicative function described by `desc`.
///
/// A linear sieve supplies smallest prime factors; prime-power values are
/// computed once per prime and shared; each `f(n)` is then the product of
/// the prime-power values along the factorization of `n`. Work is split over
/// contiguous index ranges, so the output does not depend on the thread count.
pub fn sieve_multiplicative(desc: &FunctionDescriptor, bound: usize, memory_budget: u64) -> Result<SievedSequence> {
    if bound == 0 {
        return Err(Error::invalid("sieve bound must be >= 1"));
    }
    let required = (bound as u64 + 1) * SIEVE_BYTES_PER_INDEX;
    if required > memory_budget {
        return Err(Error::MemoryBudget { required, available: memory_budget });
    }
    let (spf, primes) = linear_sieve(bound);

    let per_prime: Vec<(u64, Vec<BigInt>)> = primes
        .par_iter()
        .map(|&p| {
            let p = p as u64;
            let mut max_m = 0u32;
            let mut q = 1u64;
            while q.saturating_mul(p) <= bound as u64 {
                q *= p;
                max_m += 1;
            }
            desc.prime_power_values(p, max_m).map(|v| (p, v))
        })
        .collect::<Result<_>>()?;

    let narrow = per_prime.iter().all(|(_, vals)| vals.iter().all(|v| v.to_i128().is_some()));
    let values = if narrow {
        let mut table = vec![0i128; bound + 1];
        for (p, vals) in &per_prime {
            let mut q = *p as usize;
            for v in &vals[1..] {
                table[q] = v.to_i128().expect("checked narrow");
                q = q.saturating_mul(*p as usize);
            }
        }
        drop(per_prime);
        match fill_narrow(&spf, &table) {
            Some(v) => Column::Narrow(v),
            None => Column::Wide(fill_wide(&spf, &|q| BigInt::from(table[q]))),
        }
    } else {
        let mut table = vec![BigInt::zero(); bound + 1];
        for (p, vals) in per_prime {
            let mut q = p as usize;
            for v in vals.into_iter().skip(1) {
                table[q] = v;
                q = q.saturating_mul(p as usize);
            }
        }
        Column::Wide(fill_wide(&spf, &|q| table[q].clone()))
    };
    let summatory = values.prefix_sums();
    Ok(SievedSequence { values, summatory })
}

const CHUNK: usize = 1 << 14;

/// Splits `n` into `(p^m, n / p^m)` for its smallest prime `p`.
#[inline]
fn split_smallest(spf: &[u32], n: usize) -> (usize, usize) {
    let p = spf[n] as usize;
    let mut q = p;
    let mut rest = n / p;
    while rest % p == 0 {
        rest /= p;
        q *= p;
    }
    (q, rest)
}

fn fill_narrow(spf: &[u32], table: &[i128]) -> Option<Vec<i128>> {
    let mut out = vec![0i128; spf.len()];
    let ok = out
        .par_chunks_mut(CHUNK)
        .enumerate()
        .map(|(ci, chunk)| {
            let base = ci * CHUNK;
            for (j, slot) in chunk.iter_mut().enumerate() {
                let mut n = base + j;
                if n == 0 {
                    continue;
                }
                let mut acc: i128 = 1;
                while n > 1 {
                    let (q, rest) = split_smallest(spf, n);
                    match acc.checked_mul(table[q]) {
                        Some(v) => acc = v,
                        None => return false,
                    }
                    n = rest;
                }
                *slot = acc;
            }
            true
        })
        .reduce(|| true, |a, b| a && b);
    ok.then_some(out)
}

fn fill_wide(spf: &[u32], table: &(dyn Fn(usize) -> BigInt + Sync)) -> Vec<BigInt> {
    (0..spf.len())
        .into_par_iter()
        .with_min_len(CHUNK)
        .map(|n| {
            if n == 0 {
                return BigInt::zero();
            }
            let mut n = n;
            let mut acc = BigInt::one();
            while n > 1 {
                let (q, rest) = split_smallest(spf, n);
                acc *= table(q);
                n = rest;
            }
            acc
        })
        .collect()
}

/// `g(n) = prod_i f_i(n)` with the running sums recomputed.
pub fn pointwise_product(seqs: &[SievedSequence]) -> Result<SievedSequence> {
    let (first, rest) = seqs.split_first().ok_or_else(|| Error::invalid("pointwise_product needs a sequence"))?;
    for s in rest {
        if s.bound() != first.bound() {
            return Err(Error::LengthMismatch(first.bound(), s.bound()));
        }
    }
    let n = first.bound();
    let all_narrow = seqs.iter().all(|s| !s.is_wide());
    let mut values = if all_narrow {
        let mut out = vec![0i128; n + 1];
        let mut ok = true;
        'outer: for (i, slot) in out.iter_mut().enumerate().skip(1) {
            let mut acc: i128 = 1;
            for s in seqs {
                let Column::Narrow(v) = &s.values else { unreachable!() };
                match acc.checked_mul(v[i]) {
                    Some(x) => acc = x,
                    None => {
                        ok = false;
                        break 'outer;
                    }
                }
            }
            *slot = acc;
        }
        ok.then_some(Column::Narrow(out))
    } else {
        None
    };
    if values.is_none() {
        let mut out = vec![BigInt::zero(); n + 1];
        for (i, slot) in out.iter_mut().enumerate().skip(1) {
            *slot = seqs.iter().fold(BigInt::one(), |acc, s| acc * s.values.get(i));
        }
        values = Some(Column::Wide(out));
    }
    let values = values.expect("filled above");
    let summatory = values.prefix_sums();
    Ok(SievedSequence { values, summatory })
}
