//! Prime sieving, integer factorization and small modular helpers.

use std::sync::OnceLock;

/// Default bound for the shared smallest-prime-factor table.
pub const DEFAULT_FACTOR_SIEVE: u64 = 1 << 20;

/// Linear sieve: smallest prime factor of every `n <= limit` (`spf[0] = spf[1] = 0`)
/// together with the primes in increasing order.
pub fn linear_sieve(limit: usize) -> (Vec<u32>, Vec<u32>) {
    let mut spf = vec![0u32; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            let ip = i * p as usize;
            if p > si || ip > limit {
                break;
            }
            spf[ip] = p;
        }
    }
    (spf, primes)
}

/// Primes `<= limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Factors integers with a smallest-prime-factor table below `bound` and
/// trial division above it.
pub struct Factorizer {
    spf: Vec<u32>,
}

impl Factorizer {
    pub fn new(bound: u64) -> Self {
        let (spf, _) = linear_sieve(bound.max(2) as usize);
        Factorizer { spf }
    }

    /// Process-wide table of size [`DEFAULT_FACTOR_SIEVE`], built on first use.
    pub fn shared() -> &'static Factorizer {
        static SHARED: OnceLock<Factorizer> = OnceLock::new();
        SHARED.get_or_init(|| Factorizer::new(DEFAULT_FACTOR_SIEVE))
    }

    pub fn bound(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Prime factorization as `(p, exponent)` pairs with increasing `p`.
    pub fn factor(&self, mut n: u64) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = Vec::new();
        let mut push = |p: u64| match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        };
        if n > self.bound() {
            let mut d = 2u64;
            while d * d <= n && n > self.bound() {
                while n % d == 0 {
                    push(d);
                    n /= d;
                }
                d += if d == 2 { 1 } else { 2 };
            }
            if n > self.bound() {
                // n has no factor below sqrt(n)
                push(n);
                n = 1;
            }
        }
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            push(p);
            n /= p;
        }
        out
    }
}

pub fn factor(n: u64) -> Vec<(u64, u32)> {
    Factorizer::shared().factor(n)
}

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n).into_iter().map(|(p, e)| (p - 1) * p.pow(e - 1)).product()
}

/// Multiplicative order of `a` modulo `m`; `a` must be a unit mod `m`.
pub fn multiplicative_order(a: u64, m: u64) -> u64 {
    assert!(gcd_u64(a % m, m) == 1, "{a} is not a unit mod {m}");
    if m == 1 {
        return 1;
    }
    let mut ord = euler_phi(m);
    for (q, _) in factor(ord) {
        while ord % q == 0 && powmod_u64(a, ord / q, m) == 1 {
            ord /= q;
        }
    }
    ord
}

/// Kronecker symbol `(a / n)` for `n >= 0`.
pub fn kronecker(a: i64, n: u64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut result: i8 = 1;
    let tz = n.trailing_zeros();
    if tz > 0 {
        if a % 2 == 0 {
            return 0;
        }
        // (a/2) = 1 for a = +-1 mod 8, -1 for a = +-3 mod 8
        if tz % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
        n >>= tz;
    }
    // Jacobi symbol (a mod n / n) for odd n
    let mut a = a.rem_euclid(n as i64) as u64;
    while a != 0 {
        let t = a.trailing_zeros();
        a >>= t;
        if t % 2 == 1 && matches!(n % 8, 3 | 5) {
            result = -result;
        }
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        (a, n) = (n % a, a);
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Whether `d` is a fundamental discriminant.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let squarefree = |m: u64| factor(m).iter().all(|&(_, e)| e == 1);
    match d.rem_euclid(4) {
        1 => squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}
