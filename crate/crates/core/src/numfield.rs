//! Number fields, prime splitting types and the ideal counting function.
//!
//! A field is given by a monic irreducible defining polynomial. At primes not
//! dividing the polynomial discriminant, splitting comes from the factor-degree
//! profile of the polynomial mod p (Dedekind). Primes dividing it are handled
//! by a user override, a family rule (quadratic, cyclotomic, compositum of
//! Galois fields), or fail with [`Error::UnknownSplitting`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ffpoly::{factor_degree_profile, PrimePoly, MAX_MODULUS};
use crate::primes::{euler_phi, factor, gcd_u64, is_fundamental_discriminant, kronecker, multiplicative_order};
use crate::zpoly;

/// One class of prime ideals above `p`: `count` ideals, each with ramification
/// index `e` and residue degree `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeIdealClass {
    pub e: u32,
    pub f: u32,
    pub count: u32,
}

/// How a rational prime decomposes: the multiset of `(e, f)` over the prime
/// ideals above it, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SplittingType {
    classes: Vec<PrimeIdealClass>,
}

impl SplittingType {
    pub fn new(classes: impl IntoIterator<Item = PrimeIdealClass>) -> Result<Self> {
        let mut merged: BTreeMap<(u32, u32), u32> = BTreeMap::new();
        for c in classes {
            if c.e == 0 || c.f == 0 || c.count == 0 {
                return Err(Error::invalid(format!("splitting entries must be positive: {c:?}")));
            }
            *merged.entry((c.e, c.f)).or_default() += c.count;
        }
        if merged.is_empty() {
            return Err(Error::invalid("empty splitting type"));
        }
        let classes = merged.into_iter().map(|((e, f), count)| PrimeIdealClass { e, f, count }).collect();
        Ok(SplittingType { classes })
    }

    /// Unramified splitting with the given residue degrees `(f, count)`.
    pub fn unramified(profile: &[(usize, usize)]) -> Self {
        Self::new(profile.iter().map(|&(f, count)| PrimeIdealClass { e: 1, f: f as u32, count: count as u32 }))
            .expect("profile entries are positive")
    }

    /// `g` primes with common `(e, f)`.
    pub fn uniform(e: u32, f: u32, g: u32) -> Self {
        Self::new([PrimeIdealClass { e, f, count: g }]).expect("positive entries")
    }

    pub fn classes(&self) -> &[PrimeIdealClass] {
        &self.classes
    }

    /// `sum e * f * count`, which equals the field degree.
    pub fn degree(&self) -> u64 {
        self.classes.iter().map(|c| c.e as u64 * c.f as u64 * c.count as u64).sum()
    }

    /// `(e, f, g)` when every prime above p has the same `(e, f)`.
    pub fn efg(&self) -> Option<(u32, u32, u32)> {
        match self.classes.as_slice() {
            [c] => Some((c.e, c.f, c.count)),
            _ => None,
        }
    }

    pub fn is_ramified(&self) -> bool {
        self.classes.iter().any(|c| c.e > 1)
    }

    pub fn splits_completely(&self) -> bool {
        self.efg().is_some_and(|(e, f, _)| e == 1 && f == 1)
    }

    /// Residue degrees of the individual prime ideals (with repetition).
    pub fn residue_degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.classes.iter().flat_map(|c| std::iter::repeat_n(c.f, c.count as usize))
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.classes.iter().map(|c| format!("{},{},{}", c.e, c.f, c.count)).collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// Which closed-form splitting rule, if any, applies to a field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// `Q(sqrt(D))` for a fundamental discriminant `D`.
    Quadratic {
        disc: i64,
    },
    /// `Q(zeta_t)`.
    Cyclotomic {
        conductor: u64,
    },
    /// Compositum of two Galois fields with coprime discriminants.
    Compositum(Box<NumberField>, Box<NumberField>),
    Generic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberField {
    name: String,
    poly: Vec<i64>,
    poly_disc: BigInt,
    field_disc: Option<BigInt>,
    family: Family,
    galois: bool,
    overrides: BTreeMap<u64, SplittingType>,
}

impl NumberField {
    /// Field from a monic integer polynomial (lowest degree first).
    pub fn from_polynomial(poly: Vec<i64>, field_disc: Option<BigInt>, galois: bool) -> Result<Self> {
        let name = format!(
            "poly:{}{}{}",
            poly.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","),
            field_disc.as_ref().map(|d| format!(";disc={d}")).unwrap_or_default(),
            format_args!(";galois={galois}")
        );
        Self::build(name, poly, field_disc, Family::Generic, galois)
    }

    fn build(name: String, poly: Vec<i64>, field_disc: Option<BigInt>, family: Family, galois: bool) -> Result<Self> {
        if poly.len() < 2 || *poly.last().unwrap() != 1 {
            return Err(Error::invalid(format!("defining polynomial of {name} must be monic of degree >= 1")));
        }
        let poly_disc = if poly.len() == 2 { BigInt::one() } else { zpoly::discriminant(&zpoly::to_big(&poly)) };
        if poly_disc.is_zero() {
            return Err(Error::invalid(format!("defining polynomial of {name} has a repeated root")));
        }
        Ok(NumberField { name, poly, poly_disc, field_disc, family, galois, overrides: BTreeMap::new() })
    }

    /// The rational field, degree 1.
    pub fn rationals() -> Self {
        let mut k = Self::build("rationals".into(), vec![0, 1], Some(BigInt::one()), Family::Generic, true)
            .expect("x is monic");
        k.name = "rationals".into();
        k
    }

    /// `Q(sqrt(D))`, defined by `x^2 - D/4` or `x^2 - x + (1 - D)/4`.
    pub fn quadratic(disc: i64) -> Result<Self> {
        if !is_fundamental_discriminant(disc) {
            return Err(Error::invalid(format!("{disc} is not a fundamental discriminant")));
        }
        let poly = if disc.rem_euclid(4) == 0 { vec![-disc / 4, 0, 1] } else { vec![(1 - disc) / 4, -1, 1] };
        Self::build(format!("quad:{disc}"), poly, Some(BigInt::from(disc)), Family::Quadratic { disc }, true)
    }

    /// `Q(zeta_t)` for `t >= 3`.
    pub fn cyclotomic(t: u64) -> Result<Self> {
        if t < 3 || t % 4 == 2 {
            // t = 2 mod 4 gives the same field as t / 2
            return Err(Error::invalid(format!("cyclotomic conductor must be >= 3 and not 2 mod 4, got {t}")));
        }
        let poly = zpoly::cyclotomic(t);
        // disc(Q(zeta_t)) = (-1)^(phi/2) t^phi / prod_{p | t} p^(phi/(p-1))
        let phi = euler_phi(t);
        let mut disc = BigInt::from(t).pow(phi as u32);
        for (p, _) in factor(t) {
            disc /= BigInt::from(p).pow((phi / (p - 1)) as u32);
        }
        if (phi / 2) % 2 == 1 {
            disc = -disc;
        }
        Self::build(format!("cyclo:{t}"), poly, Some(disc), Family::Cyclotomic { conductor: t }, true)
    }

    pub fn with_overrides(mut self, overrides: BTreeMap<u64, SplittingType>) -> Result<Self> {
        for (p, st) in &overrides {
            if st.degree() != self.degree() as u64 {
                return Err(Error::invalid(format!(
                    "override at {p} has degree {} but {} has degree {}",
                    st.degree(),
                    self.name,
                    self.degree()
                )));
            }
        }
        self.overrides.extend(overrides);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn polynomial(&self) -> &[i64] {
        &self.poly
    }

    pub fn polynomial_discriminant(&self) -> &BigInt {
        &self.poly_disc
    }

    pub fn field_discriminant(&self) -> Option<&BigInt> {
        self.field_disc.as_ref()
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn is_galois(&self) -> bool {
        self.galois
    }

    pub fn overrides(&self) -> &BTreeMap<u64, SplittingType> {
        &self.overrides
    }

    /// Whether `p` divides the polynomial discriminant.
    pub fn is_bad_prime(&self, p: u64) -> bool {
        (&self.poly_disc % BigInt::from(p)).is_zero()
    }

    /// Whether `p` divides the field discriminant (falls back to the
    /// polynomial discriminant when the field discriminant is unknown).
    pub fn is_ramified_prime(&self, p: u64) -> bool {
        let d = self.field_disc.as_ref().unwrap_or(&self.poly_disc);
        (d % BigInt::from(p)).is_zero()
    }

    /// Prime factors of the polynomial discriminant found by trial division
    /// up to `limit`, plus the unfactored cofactor (1 when complete).
    pub fn bad_primes(&self, limit: u64) -> (Vec<u64>, BigInt) {
        let mut rest = num_traits::Signed::abs(&self.poly_disc);
        let mut out = Vec::new();
        let mut d = 2u64;
        while d <= limit && rest > BigInt::one() {
            let bd = BigInt::from(d);
            if (&rest % &bd).is_zero() {
                out.push(d);
                while (&rest % &bd).is_zero() {
                    rest /= &bd;
                }
            }
            d += 1;
        }
        (out, rest)
    }

    fn reduce_mod(&self, p: u64) -> PrimePoly {
        PrimePoly::from_signed(p, &self.poly)
    }

    /// Splitting given by the field family alone, ignoring Dedekind and overrides.
    pub fn family_splitting(&self, p: u64) -> Result<Option<SplittingType>> {
        let d = self.degree() as u32;
        Ok(match &self.family {
            Family::Quadratic { disc } => Some(match kronecker(*disc, p) {
                1 => SplittingType::uniform(1, 1, 2),
                -1 => SplittingType::uniform(1, 2, 1),
                _ => SplittingType::uniform(2, 1, 1),
            }),
            Family::Cyclotomic { conductor } => {
                let t = *conductor;
                let mut v = 0u32;
                let mut rest = t;
                while rest % p == 0 {
                    rest /= p;
                    v += 1;
                }
                let e = if v == 0 { 1 } else { euler_phi(p.pow(v)) as u32 };
                let f = multiplicative_order(p % rest, rest) as u32;
                let g = euler_phi(rest) as u32 / f;
                Some(SplittingType::uniform(e, f, g))
            }
            Family::Compositum(k1, k2) => {
                let (e1, f1, _) = k1.galois_efg(p)?;
                let (e2, f2, _) = k2.galois_efg(p)?;
                let e = e1 * e2;
                let f = f1 / gcd_u64(f1 as u64, f2 as u64) as u32 * f2;
                if d % (e * f) != 0 {
                    return Err(Error::GaloisInconsistent(format!("{e},{f} in degree {d} at p={p}")));
                }
                Some(SplittingType::uniform(e, f, d / (e * f)))
            }
            Family::Generic if d == 1 => Some(SplittingType::uniform(1, 1, 1)),
            Family::Generic => None,
        })
    }

    fn galois_efg(&self, p: u64) -> Result<(u32, u32, u32)> {
        let st = self.splitting_type(p)?;
        st.efg().ok_or_else(|| Error::GaloisInconsistent(format!("{st} in {}", self.name)))
    }

    /// Splitting type of the prime `p`.
    pub fn splitting_type(&self, p: u64) -> Result<SplittingType> {
        if p >= MAX_MODULUS {
            return Err(Error::invalid(format!("prime {p} exceeds the supported range")));
        }
        let st = if let Some(st) = self.overrides.get(&p) {
            st.clone()
        } else if !self.is_bad_prime(p) {
            let profile = factor_degree_profile(&self.reduce_mod(p))?;
            SplittingType::unramified(&profile)
        } else {
            self.family_splitting(p)?.ok_or_else(|| Error::UnknownSplitting { p, field: self.name.clone() })?
        };
        if st.degree() != self.degree() as u64 {
            return Err(Error::invalid(format!("splitting {st} at {p} does not sum to degree {}", self.degree())));
        }
        if self.galois && st.efg().is_none() {
            return Err(Error::GaloisInconsistent(format!("{st} at p={p} in {}", self.name)));
        }
        Ok(st)
    }

    /// Number of ideals of norm `p^m`.
    pub fn ideal_count_prime_power(&self, p: u64, m: u32) -> Result<u128> {
        Ok(ideal_count_from_splitting(&self.splitting_type(p)?, m))
    }

    /// `a_K(n)`, the number of ideals of norm `n`.
    pub fn ideal_count(&self, n: u64) -> Result<u128> {
        if n == 0 {
            return Err(Error::invalid("ideal_count needs n >= 1"));
        }
        factor(n).into_iter().try_fold(1u128, |acc, (p, m)| Ok(acc * self.ideal_count_prime_power(p, m)?))
    }

    /// Ramified primes known from the field discriminant, by trial division up to `limit`.
    pub fn ramified_primes(&self, limit: u64) -> Vec<u64> {
        let d = self.field_disc.as_ref().unwrap_or(&self.poly_disc);
        let mut rest = num_traits::Signed::abs(d);
        let mut out = Vec::new();
        let mut q = 2u64;
        while q <= limit && rest > BigInt::one() {
            let bq = BigInt::from(q);
            if (&rest % &bq).is_zero() {
                out.push(q);
                while (&rest % &bq).is_zero() {
                    rest /= &bq;
                }
            }
            q += 1;
        }
        out
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// `#{(a_j) : sum a_j f_j = m}` over the prime ideals above p, by bounded
/// dynamic programming over the residue degrees.
pub fn ideal_count_from_splitting(st: &SplittingType, m: u32) -> u128 {
    let m = m as usize;
    let mut ways = vec![0u128; m + 1];
    ways[0] = 1;
    for f in st.residue_degrees() {
        let f = f as usize;
        for s in f..=m {
            ways[s] += ways[s - f];
        }
    }
    ways[m]
}

/// `sum_{d | n} (D / d)`, the classical divisor-sum formula for `a_K(n)` of a
/// quadratic field.
pub fn quadratic_ideal_count_oracle(disc: i64, n: u64) -> i64 {
    let mut divisors = vec![1u64];
    for (p, e) in factor(n) {
        let len = divisors.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divisors.push(divisors[i] * pk);
            }
        }
    }
    divisors.into_iter().map(|d| kronecker(disc, d) as i64).sum()
}

/// Largest shift tried when searching for a primitive element `c*alpha + beta`.
pub const MAX_COMPOSITUM_SHIFT: i64 = 20;

/// Compositum of two Galois fields with coprime discriminants.
///
/// The defining polynomial is `Res_y(f1(y), f2(x - c*y))` for the first
/// `c = 1, 2, ...` making it squarefree of degree `d1 * d2`.
pub fn compositum(k1: &NumberField, k2: &NumberField) -> Result<NumberField> {
    for k in [k1, k2] {
        if !k.is_galois() {
            return Err(Error::NotGalois(k.name().to_string()));
        }
    }
    let d1 = k1.field_discriminant().ok_or_else(|| Error::MissingDiscriminant(k1.name().into()))?;
    let d2 = k2.field_discriminant().ok_or_else(|| Error::MissingDiscriminant(k2.name().into()))?;
    let g = zpoly::abs_gcd(d1, d2);
    if !g.is_one() {
        return Err(Error::NonCoprimeDiscriminants { d1: d1.to_string(), d2: d2.to_string(), gcd: g.to_string() });
    }
    let degree = k1.degree() * k2.degree();
    let f1 = zpoly::to_big(k1.polynomial());
    let f2 = zpoly::to_big(k2.polynomial());
    for c in 1..=MAX_COMPOSITUM_SHIFT {
        let h = zpoly::shifted_resultant(&f1, &f2, c);
        if h.len() != degree + 1 || zpoly::discriminant(&h).is_zero() {
            continue;
        }
        let poly =
            zpoly::to_i64(&h).ok_or_else(|| Error::invalid("compositum polynomial coefficients exceed 64 bits"))?;
        // Coprime discriminants: D = D1^d2 * D2^d1.
        let disc = d1.pow(k2.degree() as u32) * d2.pow(k1.degree() as u32);
        let name = format!("{}*{}", k1.name(), k2.name());
        let family = Family::Compositum(Box::new(k1.clone()), Box::new(k2.clone()));
        return NumberField::build(name, poly, Some(disc), family, true);
    }
    Err(Error::CompositumDegreeMismatch { degree, max_shift: MAX_COMPOSITUM_SHIFT })
}

/// Compositum of a nonempty list of fields, folded left to right.
pub fn compositum_all(fields: &[NumberField]) -> Result<NumberField> {
    let (first, rest) = fields.split_first().ok_or_else(|| Error::invalid("empty field list"))?;
    rest.iter().try_fold(first.clone(), |acc, k| compositum(&acc, k))
}

fn parse_int<T: std::str::FromStr>(s: &str, column: usize) -> Result<T> {
    s.trim().parse().map_err(|_| Error::parse(column, format!("expected an integer, found {s:?}")))
}

/// Parses `quad:D`, `cyclo:t` or `poly:c0,c1,...,1;disc=D;galois=true|false`.
pub fn parse_field(spec: &str) -> Result<NumberField> {
    let spec = spec.trim();
    let (kind, body) =
        spec.split_once(':').ok_or_else(|| Error::parse(1, format!("missing ':' in field spec {spec:?}")))?;
    let col = kind.len() + 2;
    match kind {
        "quad" => NumberField::quadratic(parse_int(body, col)?),
        "cyclo" => NumberField::cyclotomic(parse_int(body, col)?),
        "poly" => {
            let mut parts = body.split(';');
            let coeff_str = parts.next().unwrap_or("");
            let mut poly = Vec::new();
            let mut c = col;
            for tok in coeff_str.split(',') {
                poly.push(parse_int::<i64>(tok, c)?);
                c += tok.len() + 1;
            }
            let mut disc = None;
            let mut galois = false;
            let mut c = col + coeff_str.len() + 1;
            for part in parts {
                let (key, value) = part
                    .split_once('=')
                    .ok_or_else(|| Error::parse(c, format!("expected key=value, found {part:?}")))?;
                match key.trim() {
                    "disc" => {
                        disc = Some(
                            value
                                .trim()
                                .parse::<BigInt>()
                                .map_err(|_| Error::parse(c + key.len() + 1, "bad discriminant"))?,
                        )
                    }
                    "galois" => {
                        galois = match value.trim() {
                            "true" => true,
                            "false" => false,
                            v => {
                                return Err(Error::parse(
                                    c + key.len() + 1,
                                    format!("galois must be true or false, found {v:?}"),
                                ))
                            }
                        }
                    }
                    k => return Err(Error::parse(c, format!("unknown field option {k:?}"))),
                }
                c += part.len() + 1;
            }
            NumberField::from_polynomial(poly, disc, galois)
        }
        other => Err(Error::parse(1, format!("unknown field kind {other:?}"))),
    }
}

/// Parses override lines `p e,f,count[;e,f,count...]`; `#` starts a comment.
pub fn parse_overrides(text: &str) -> Result<BTreeMap<u64, SplittingType>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::parse(1, format!("line {}: {msg}", lineno + 1));
        let (p, rest) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| err(format!("expected 'p e,f,count', found {line:?}")))?;
        let p: u64 = p.parse().map_err(|_| err(format!("bad prime {p:?}")))?;
        let mut classes = Vec::new();
        for entry in rest.trim().split(';') {
            let nums: Vec<u32> = entry
                .split(',')
                .map(|t| t.trim().parse::<u32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| err(format!("bad entry {entry:?}")))?;
            match nums[..] {
                [e, f, count] => classes.push(PrimeIdealClass { e, f, count }),
                _ => return Err(err(format!("entry {entry:?} needs three numbers"))),
            }
        }
        out.insert(p, SplittingType::new(classes).map_err(|e| err(e.to_string()))?);
    }
    Ok(out)
}
