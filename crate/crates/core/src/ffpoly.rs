//! Univariate polynomials over prime fields `F_p`, `p < 2^31`.
//!
//! Only what Dedekind splitting needs is here: gcd, modular powering and
//! distinct-degree factorization, which yields the multiset of irreducible
//! factor degrees without recovering the factors themselves.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported modulus (exclusive).
pub const MAX_MODULUS: u64 = 1 << 31;

/// A polynomial over `F_p`, coefficients stored lowest degree first.
///
/// The zero polynomial has no coefficients; otherwise the last coefficient
/// is nonzero and every coefficient lies in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PrimePoly {
    p: u64,
    coeffs: Vec<u64>,
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn invmod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    powmod(a, p - 2, p)
}

impl PrimePoly {
    /// Builds a polynomial from signed integer coefficients (lowest degree first),
    /// reducing them mod `p`.
    pub fn from_signed(p: u64, coeffs: &[i64]) -> Self {
        assert!(p >= 2 && p < MAX_MODULUS, "modulus {p} out of range");
        let m = p as i64;
        let coeffs = coeffs.iter().map(|&c| c.rem_euclid(m) as u64).collect();
        Self::normalized(p, coeffs)
    }

    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        assert!(p >= 2 && p < MAX_MODULUS, "modulus {p} out of range");
        let coeffs = coeffs.into_iter().map(|c| c % p).collect();
        Self::normalized(p, coeffs)
    }

    fn normalized(p: u64, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PrimePoly { p, coeffs }
    }

    pub fn zero(p: u64) -> Self {
        Self::new(p, Vec::new())
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    /// The monomial `x`.
    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    fn check_modulus(&self, other: &Self) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::ModulusMismatch(self.p, other.p))
        }
    }

    /// Scales to leading coefficient 1; the zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = invmod(self.leading(), self.p);
        let coeffs = self.coeffs.iter().map(|&c| mulmod(c, inv, self.p)).collect();
        PrimePoly { p: self.p, coeffs }
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| mulmod(c, i as u64 % p, p)).collect();
        Self::normalized(p, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_modulus(other)?;
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + p - b) % p
            })
            .collect();
        Ok(Self::normalized(p, coeffs))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_modulus(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.p));
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mulmod(a, b, p)) % p;
            }
        }
        Ok(Self::normalized(p, out))
    }

    /// Euclidean division; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check_modulus(divisor)?;
        let dd = divisor.degree().ok_or_else(|| Error::invalid("division by the zero polynomial"))?;
        let p = self.p;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(p), self.clone()));
        }
        let inv = invmod(divisor.leading(), p);
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = mulmod(rem[i], inv, p);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let k = i - dd + j;
                rem[k] = (rem[k] + p - mulmod(c, b, p)) % p;
            }
        }
        rem.truncate(dd);
        Ok((Self::normalized(p, quot), Self::normalized(p, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// `self^exp mod modulus` by repeated squaring.
    pub fn pow_mod(&self, mut exp: u64, modulus: &Self) -> Result<Self> {
        let mut base = self.rem(modulus)?;
        let mut acc = Self::one(self.p).rem(modulus)?;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base)?.rem(modulus)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base)?.rem(modulus)?;
            }
        }
        Ok(acc)
    }
}

impl fmt::Debug for PrimePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self, self.p)
    }
}

impl fmt::Display for PrimePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Monic greatest common divisor; `gcd(f, 0) = monic(f)`.
pub fn poly_gcd(f: &PrimePoly, g: &PrimePoly) -> Result<PrimePoly> {
    f.check_modulus(g)?;
    let mut a = f.clone();
    let mut b = g.clone();
    while !b.is_zero() {
        let r = a.rem(&b)?;
        a = b;
        b = r;
    }
    Ok(a.monic())
}

/// `x^(p^i) mod f` for monic `f` of degree at least one.
pub fn frobenius_power(f: &PrimePoly, i: u32) -> Result<PrimePoly> {
    if !f.is_monic() || f.degree().unwrap_or(0) < 1 {
        return Err(Error::invalid("frobenius_power needs a monic polynomial of degree >= 1"));
    }
    let p = f.modulus();
    let mut h = PrimePoly::x(p).rem(f)?;
    for _ in 0..i {
        h = h.pow_mod(p, f)?;
    }
    Ok(h)
}

pub fn is_squarefree(f: &PrimePoly) -> Result<bool> {
    let g = poly_gcd(f, &f.derivative())?;
    Ok(g.degree() == Some(0))
}

/// Multiset of irreducible factor degrees of a monic squarefree `f`, as
/// sorted `(degree, count)` pairs.
///
/// Distinct-degree factorization: at step `i` the product of all degree-`i`
/// irreducible factors is `gcd(f*, x^(p^i) - x)` where `f*` has had the
/// lower-degree factors removed.
pub fn factor_degree_profile(f: &PrimePoly) -> Result<Vec<(usize, usize)>> {
    let p = f.modulus();
    let deg = match f.degree() {
        Some(d) if d >= 1 && f.is_monic() => d,
        _ => return Err(Error::invalid("factor_degree_profile needs a monic polynomial of degree >= 1")),
    };
    if !is_squarefree(f)? {
        return Err(Error::NotSquarefree { p });
    }
    let x = PrimePoly::x(p);
    let mut rest = f.clone();
    let mut h = x.rem(f)?;
    let mut profile = Vec::new();
    let mut i = 1usize;
    while let Some(rd) = rest.degree() {
        if rd == 0 {
            break;
        }
        if rd < 2 * i {
            // Whatever remains has no factor of degree < i, so it is irreducible.
            profile.push((rd, 1));
            break;
        }
        h = h.pow_mod(p, &rest)?;
        let g = poly_gcd(&rest, &h.sub(&x)?)?;
        let gd = g.degree().unwrap_or(0);
        if gd > 0 {
            profile.push((i, gd / i));
            rest = rest.div_rem(&g)?.0;
            h = h.rem(&rest)?;
        }
        i += 1;
    }
    debug_assert_eq!(profile.iter().map(|&(d, c)| d * c).sum::<usize>(), deg);
    Ok(profile)
}
