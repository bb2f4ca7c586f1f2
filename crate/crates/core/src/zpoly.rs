//! Integer polynomial helpers: resultants, discriminants, cyclotomic
//! polynomials. Coefficients are stored lowest degree first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

pub fn to_big(coeffs: &[i64]) -> Vec<BigInt> {
    trim(coeffs.iter().map(|&c| BigInt::from(c)).collect())
}

pub fn derivative(f: &[BigInt]) -> Vec<BigInt> {
    trim(f.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
}

/// Fraction-free (Bareiss) determinant.
pub fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v.div_floor(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Resultant via the Sylvester matrix. Both inputs must be nonzero.
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let f = trim(f.to_vec());
    let g = trim(g.to_vec());
    assert!(!f.is_empty() && !g.is_empty(), "resultant of the zero polynomial");
    let m = f.len() - 1;
    let n = g.len() - 1;
    if m == 0 {
        return f[0].pow(n as u32);
    }
    if n == 0 {
        return g[0].pow(m as u32);
    }
    let size = m + n;
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    // Rows hold coefficients from highest degree down.
    for r in 0..n {
        for (i, c) in f.iter().rev().enumerate() {
            rows[r][r + i] = c.clone();
        }
    }
    for r in 0..m {
        for (i, c) in g.iter().rev().enumerate() {
            rows[n + r][r + i] = c.clone();
        }
    }
    determinant(rows)
}

/// Discriminant of a monic polynomial of degree >= 1.
pub fn discriminant(f: &[BigInt]) -> BigInt {
    let n = f.len() - 1;
    let r = resultant(f, &derivative(f));
    if (n * (n - 1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// `f(x0 - c*y)` as a polynomial in `y`.
fn substitute_shift(f: &[BigInt], x0: &BigInt, c: i64) -> Vec<BigInt> {
    let lin = vec![x0.clone(), BigInt::from(-c)];
    let mut acc: Vec<BigInt> = Vec::new();
    // Horner in y
    for coeff in f.iter().rev() {
        acc = poly_mul(&acc, &lin);
        if acc.is_empty() {
            acc.push(BigInt::zero());
        }
        acc[0] += coeff;
        acc = trim(acc);
    }
    acc
}

/// `Res_y(f(y), g(x - c*y))` as a polynomial in `x`, recovered by evaluation
/// at `deg f * deg g + 1` integer points and exact interpolation.
/// For monic `f` and `g` the result is monic with roots `c*alpha + beta`.
pub fn shifted_resultant(f: &[BigInt], g: &[BigInt], c: i64) -> Vec<BigInt> {
    let degree = (f.len() - 1) * (g.len() - 1);
    let xs: Vec<BigInt> = (0..=degree as i64).map(BigInt::from).collect();
    let ys: Vec<BigInt> = xs.iter().map(|x0| resultant(f, &substitute_shift(g, x0, c))).collect();
    interpolate(&xs, &ys)
}

/// Newton interpolation through integer nodes; panics if the interpolant is
/// not integral.
fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> Vec<BigInt> {
    let n = xs.len();
    let mut coef: Vec<BigRational> = ys.iter().map(|y| BigRational::from_integer(y.clone())).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = &coef[i] - &coef[i - 1];
            let den = BigRational::from_integer(&xs[i] - &xs[i - j]);
            coef[i] = num / den;
        }
    }
    // Expand the Newton form into monomials.
    let mut poly: Vec<BigRational> = vec![coef[n - 1].clone()];
    for k in (0..n - 1).rev() {
        let mut next = vec![BigRational::zero(); poly.len() + 1];
        for (i, a) in poly.iter().enumerate() {
            next[i + 1] += a;
            next[i] -= a * BigRational::from_integer(xs[k].clone());
        }
        next[0] += &coef[k];
        poly = next;
    }
    trim(
        poly.into_iter()
            .map(|r| {
                assert!(r.is_integer(), "interpolated resultant has non-integral coefficient");
                r.to_integer()
            })
            .collect(),
    )
}

/// Coefficients of the `t`-th cyclotomic polynomial.
pub fn cyclotomic(t: u64) -> Vec<i64> {
    assert!(t >= 1);
    // x^t - 1 divided by Phi_d for every proper divisor d of t
    let mut num: Vec<i64> = vec![0; t as usize + 1];
    num[0] = -1;
    num[t as usize] = 1;
    for d in (1..t).filter(|d| t % d == 0) {
        num = exact_div_monic(&num, &cyclotomic(d));
    }
    num
}

fn exact_div_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i64; a.len() - db];
    for i in (db..a.len()).rev() {
        let c = rem[i];
        q[i - db] = c;
        for (j, &bj) in b.iter().enumerate() {
            rem[i - db + j] -= c * bj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Converts to `i64` coefficients when they all fit.
pub fn to_i64(f: &[BigInt]) -> Option<Vec<i64>> {
    f.iter().map(|c| i64::try_from(c).ok()).collect()
}

pub fn abs_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.abs().gcd(&b.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        to_big(v)
    }

    #[test]
    fn discriminants() {
        assert_eq!(discriminant(&big(&[1, 0, 1])), BigInt::from(-4));
        assert_eq!(discriminant(&big(&[-1, -1, 1])), BigInt::from(5));
        assert_eq!(discriminant(&big(&[-1, -2, 1, 1])), BigInt::from(49));
        // x^3 + a x + b: -4a^3 - 27b^2
        assert_eq!(discriminant(&big(&[1, 2, 0, 1])), BigInt::from(-4 * 8 - 27));
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(cyclotomic(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic(7).len(), 7);
    }

    #[test]
    fn resultant_of_i_and_sqrt5() {
        let h = shifted_resultant(&big(&[1, 0, 1]), &big(&[-5, 0, 1]), 1);
        assert_eq!(h, big(&[36, 0, -8, 0, 1]));
    }

    #[test]
    fn resultant_small_cases() {
        // Res(x - a, g) = g(a)
        let g = big(&[3, 0, 2]);
        assert_eq!(resultant(&big(&[-2, 1]), &g), BigInt::from(11));
        assert_eq!(resultant(&big(&[5]), &g), BigInt::from(25));
    }
}
