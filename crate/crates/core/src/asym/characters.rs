//! Dirichlet characters for abelian fields: Kronecker symbols, the full
//! character group mod t, primitive reduction and products.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::numfield::{Family, NumberField};
use crate::primes::{factor, gcd_u64, kronecker, powmod_u64};

/// A primitive Dirichlet character stored as its table of values mod `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletCharacter {
    modulus: u64,
    values: Vec<Complex64>,
    real: bool,
}

impl DirichletCharacter {
    /// `chi_D(n) = (D / n)` for a fundamental discriminant `D`.
    pub fn kronecker(disc: i64) -> Self {
        let q = disc.unsigned_abs();
        let values = (0..q).map(|n| Complex64::new(kronecker(disc, n) as f64, 0.0)).collect();
        DirichletCharacter { modulus: q, values, real: true }
    }

    /// The trivial character mod 1.
    pub fn principal() -> Self {
        DirichletCharacter { modulus: 1, values: vec![Complex64::new(1.0, 0.0)], real: true }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn is_principal(&self) -> bool {
        self.values.iter().enumerate().all(|(n, v)| gcd_u64(n as u64, self.modulus) != 1 || (v - 1.0).norm() < 1e-12)
    }

    #[inline]
    pub fn value(&self, n: u64) -> Complex64 {
        self.values[(n % self.modulus) as usize]
    }

    /// Table of values `chi(0), ..., chi(q - 1)`.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Product of characters with coprime moduli (primitive again).
    pub fn product(&self, other: &Self) -> Self {
        assert_eq!(gcd_u64(self.modulus, other.modulus), 1, "moduli must be coprime");
        let q = self.modulus * other.modulus;
        let values = (0..q).map(|n| self.value(n) * other.value(n)).collect();
        DirichletCharacter { modulus: q, values, real: self.real && other.real }
    }

    /// Largest `|sum_{n <= x} chi(n)|` over one period.
    pub fn max_partial_sum(&self) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut best: f64 = 0.0;
        for n in 1..=self.modulus {
            acc += self.value(n);
            best = best.max(acc.norm());
        }
        best
    }
}

/// Cyclic factors of `(Z/tZ)^*`: `(modulus of the factor, p^v, generator, order)`.
fn cyclic_components(t: u64) -> Vec<(u64, u64, u64)> {
    // each entry: (prime power p^v, generator as residue mod p^v, order)
    let mut out = Vec::new();
    for (p, v) in factor(t) {
        let pv = p.pow(v);
        if p == 2 {
            match v {
                1 => {}
                2 => out.push((pv, 3, 2)),
                _ => {
                    out.push((pv, pv - 1, 2));
                    out.push((pv, 5, pv / 4));
                }
            }
        } else {
            let order = (p - 1) * p.pow(v - 1);
            let g = (2..pv)
                .find(|&g| gcd_u64(g, p) == 1 && factor(order).iter().all(|&(q, _)| powmod_u64(g, order / q, pv) != 1))
                .expect("odd prime powers have primitive roots");
            out.push((pv, g, order));
        }
    }
    out
}

/// Discrete log of `n` in each cyclic component (brute force; components are small).
fn component_logs(n: u64, comps: &[(u64, u64, u64)]) -> Vec<u64> {
    let mut logs = Vec::with_capacity(comps.len());
    let mut i = 0;
    while i < comps.len() {
        let (pv, g, order) = comps[i];
        let r = n % pv;
        if pv % 8 == 0 && i + 1 < comps.len() && comps[i + 1].0 == pv {
            // 2^v with v >= 3: n = (-1)^a 5^b
            let (a, r5) = if r % 4 == 1 { (0, r) } else { (1, pv - r) };
            let (_, five, ord5) = comps[i + 1];
            let b = (0..ord5).find(|&b| powmod_u64(five, b, pv) == r5).expect("5 generates the 1 mod 4 units");
            logs.push(a);
            logs.push(b);
            i += 2;
        } else {
            let l = (0..order).find(|&k| powmod_u64(g, k, pv) == r).expect("unit has a discrete log");
            logs.push(l);
            i += 1;
        }
    }
    logs
}

/// All nonprincipal characters of `(Z/tZ)^*`, each replaced by the primitive
/// character inducing it.
pub fn nonprincipal_primitive_characters(t: u64) -> Vec<DirichletCharacter> {
    let comps = cyclic_components(t);
    let orders: Vec<u64> = comps.iter().map(|c| c.2).collect();
    let units: Vec<u64> = (1..t).filter(|&n| gcd_u64(n, t) == 1).collect();
    let logs: Vec<Vec<u64>> = units.iter().map(|&n| component_logs(n, &comps)).collect();

    let total: u64 = orders.iter().product();
    let mut out = Vec::new();
    for idx in 1..total {
        // mixed-radix digits select the character on each component
        let mut digits = Vec::with_capacity(orders.len());
        let mut rest = idx;
        for &o in &orders {
            digits.push(rest % o);
            rest /= o;
        }
        let chi_at = |li: &[u64]| -> (u64, u64) {
            // value as a fraction of a full turn: sum digit*log/order
            let lcm = orders.iter().fold(1u64, |a, &b| a / gcd_u64(a, b) * b);
            let k =
                li.iter().zip(&digits).zip(&orders).map(|((&l, &d), &o)| (l * d % o) * (lcm / o)).sum::<u64>() % lcm;
            (k, lcm)
        };
        let table: Vec<(u64, (u64, u64))> = units.iter().zip(&logs).map(|(&n, l)| (n, chi_at(l))).collect();
        out.push(primitive_from_table(t, &table));
    }
    out
}

fn primitive_from_table(t: u64, table: &[(u64, (u64, u64))]) -> DirichletCharacter {
    let trivial_mod = |q: u64| table.iter().all(|&(n, (k, _))| n % q != 1 % q || k == 0);
    let conductor = (1..=t).filter(|q| t % q == 0).find(|&q| trivial_mod(q)).expect("t itself works");
    let lookup = |n: u64| table.iter().find(|&&(m, _)| m == n).map(|&(_, v)| v);
    let mut real = true;
    let values = (0..conductor)
        .map(|r| {
            if gcd_u64(r, conductor) != 1 {
                return Complex64::new(0.0, 0.0);
            }
            let lift = (0..t).map(|j| r + j * conductor).find(|&a| gcd_u64(a, t) == 1).expect("lift exists");
            let (k, den) = lookup(lift % t).expect("lift is a unit");
            if 2 * k % den != 0 {
                real = false;
            }
            let angle = 2.0 * PI * k as f64 / den as f64;
            // exact values at quarter turns
            match (4 * k % den == 0, 4 * k / den.max(1)) {
                (true, 0) => Complex64::new(1.0, 0.0),
                (true, 1) => Complex64::new(0.0, 1.0),
                (true, 2) => Complex64::new(-1.0, 0.0),
                (true, 3) => Complex64::new(0.0, -1.0),
                _ => Complex64::new(angle.cos(), angle.sin()),
            }
        })
        .collect();
    DirichletCharacter { modulus: conductor, values, real }
}

/// Nonprincipal primitive characters whose L-functions factor `zeta_K`,
/// when `K` is abelian with a known character group.
pub fn field_characters(k: &NumberField) -> Option<Vec<DirichletCharacter>> {
    if k.degree() == 1 {
        return Some(Vec::new());
    }
    match k.family() {
        Family::Quadratic { disc } => Some(vec![DirichletCharacter::kronecker(*disc)]),
        Family::Cyclotomic { conductor } => Some(nonprincipal_primitive_characters(*conductor)),
        Family::Compositum(a, b) => {
            let xs = field_characters(a)?;
            let ys = field_characters(b)?;
            let mut out = xs.clone();
            out.extend(ys.iter().cloned());
            for x in &xs {
                for y in &ys {
                    if gcd_u64(x.modulus(), y.modulus()) != 1 {
                        return None;
                    }
                    out.push(x.product(y));
                }
            }
            Some(out)
        }
        Family::Generic => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::compositum;

    #[test]
    fn kronecker_character() {
        let chi = DirichletCharacter::kronecker(-4);
        assert_eq!(chi.modulus(), 4);
        assert_eq!(chi.value(5).re, 1.0);
        assert_eq!(chi.value(3).re, -1.0);
        assert!(!chi.is_principal());
        assert!(DirichletCharacter::principal().is_principal());
        assert_eq!(chi.max_partial_sum(), 1.0);
    }

    #[test]
    fn cyclotomic_groups() {
        // Q(zeta_5): characters mod 5 of orders 2, 4, 4
        let chars = nonprincipal_primitive_characters(5);
        assert_eq!(chars.len(), 3);
        assert!(chars.iter().all(|c| c.modulus() == 5));
        assert_eq!(chars.iter().filter(|c| c.is_real()).count(), 1);

        // mod 8: conductors 4, 8, 8
        let mut conductors: Vec<u64> = nonprincipal_primitive_characters(8).iter().map(|c| c.modulus()).collect();
        conductors.sort();
        assert_eq!(conductors, vec![4, 8, 8]);

        // mod 12: chi_{-4}, chi_{-3}, chi_{12}
        let mut conductors: Vec<u64> = nonprincipal_primitive_characters(12).iter().map(|c| c.modulus()).collect();
        conductors.sort();
        assert_eq!(conductors, vec![3, 4, 12]);
    }

    #[test]
    fn character_values_are_multiplicative() {
        for t in [5u64, 7, 8, 9, 12, 15, 16] {
            for chi in nonprincipal_primitive_characters(t) {
                let q = chi.modulus();
                for a in 0..q {
                    for b in 0..q {
                        let lhs = chi.value(a * b);
                        let rhs = chi.value(a) * chi.value(b);
                        assert!((lhs - rhs).norm() < 1e-12, "t={t} q={q} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn kronecker_matches_group_character() {
        // the real character mod 5 is chi_5
        let chars = nonprincipal_primitive_characters(5);
        let real = chars.iter().find(|c| c.is_real()).unwrap();
        let chi5 = DirichletCharacter::kronecker(5);
        for n in 0..5 {
            assert!((real.value(n) - chi5.value(n)).norm() < 1e-12);
        }
    }

    #[test]
    fn biquadratic_characters() {
        let k = compositum(&NumberField::quadratic(-4).unwrap(), &NumberField::quadratic(5).unwrap()).unwrap();
        let chars = field_characters(&k).unwrap();
        assert_eq!(chars.len(), 3);
        let chi20 = DirichletCharacter::kronecker(-20);
        let prod = &chars[2];
        assert_eq!(prod.modulus(), 20);
        for n in 0..20 {
            assert!((prod.value(n) - chi20.value(n)).norm() < 1e-12);
        }
    }

    #[test]
    fn splitting_matches_characters() {
        // p splits completely iff every character is 1 at p
        for k in [NumberField::cyclotomic(7).unwrap(), NumberField::cyclotomic(12).unwrap()] {
            let chars = field_characters(&k).unwrap();
            for p in crate::primes::primes_up_to(300) {
                if k.is_ramified_prime(p) {
                    continue;
                }
                let all_one = chars.iter().all(|c| (c.value(p) - 1.0).norm() < 1e-9);
                assert_eq!(all_one, k.splitting_type(p).unwrap().splits_completely(), "{k} at {p}");
            }
        }
    }
}
