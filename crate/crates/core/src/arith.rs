//! Exact integer and modular arithmetic: inverses, factorizations, totients,
//! unit-group generators and exact rational phases.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Least nonnegative residue of `a` modulo `c`.
#[inline]
pub fn rem_euclid(a: i64, c: u64) -> u64 {
    (a as i128).rem_euclid(c as i128) as u64
}

#[inline]
pub fn mul_mod(a: u64, b: u64, c: u64) -> u64 {
    ((a as u128 * b as u128) % c as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, c: u64) -> u64 {
    if c == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= c;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, c);
        }
        base = mul_mod(base, base, c);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `c`, as a residue in `[0, c)`.
pub fn mod_inverse(a: i64, c: u64) -> Result<u64> {
    if c == 0 {
        return Err(Error::NotInvertible { a, c });
    }
    if c == 1 {
        return Ok(0);
    }
    let (mut old_r, mut r) = (rem_euclid(a, c) as i128, c as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    if old_r != 1 {
        return Err(Error::NotInvertible { a, c });
    }
    Ok(old_s.rem_euclid(c as i128) as u64)
}

/// Inverses of all of `values` modulo `c` with a single extended-Euclid call
/// (Montgomery's product trick). Every value must be a unit mod `c`.
pub fn batch_inverse(values: &[u64], c: u64) -> Result<Vec<u64>> {
    if values.is_empty() {
        return Ok(Vec::new());
    }
    let mut prefix = Vec::with_capacity(values.len());
    let mut acc = 1 % c;
    for &v in values {
        acc = mul_mod(acc, v % c, c);
        prefix.push(acc);
    }
    let mut inv = match mod_inverse(acc as i64, c) {
        Ok(v) => v,
        Err(_) => {
            // Report the offending entry rather than the product.
            let bad = values.iter().find(|&&v| gcd(v, c) != 1).copied().unwrap_or(acc);
            return Err(Error::NotInvertible { a: bad as i64, c });
        }
    };
    let mut out = vec![0u64; values.len()];
    for i in (0..values.len()).rev() {
        let before = if i == 0 { 1 % c } else { prefix[i - 1] };
        out[i] = mul_mod(inv, before, c);
        inv = mul_mod(inv, values[i] % c, c);
    }
    Ok(out)
}

/// Prime factorization as `(prime, exponent)` pairs with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization(Vec<(u64, u32)>);

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn product(&self) -> u64 {
        self.0.iter().map(|&(p, e)| p.pow(e)).product()
    }

    /// `Some((p, e))` when the factored number is a prime power `p^e`, `e >= 1`.
    pub fn as_prime_power(&self) -> Option<(u64, u32)> {
        match self.0.as_slice() {
            [single] => Some(*single),
            _ => None,
        }
    }
}

/// Trial-division factorization. Fine for the moduli used here (well below 10^12).
pub fn factorize(mut n: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut out = Vec::new();
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        push(d, &mut n);
        push(d + 2, &mut n);
        d += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    Factorization(out)
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .pairs()
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for &(p, e) in factorize(n).pairs() {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

pub fn divisor_count(n: u64) -> u64 {
    factorize(n).pairs().iter().map(|&(_, e)| e as u64 + 1).product()
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).as_prime_power() == Some((n, 1))
}

fn smallest_primitive_root_mod_prime(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let order_primes: Vec<u64> = factorize(p - 1).pairs().iter().map(|&(r, _)| r).collect();
    (2..p)
        .find(|&g| order_primes.iter().all(|&r| pow_mod(g, (p - 1) / r, p) != 1))
        .expect("every prime has a primitive root")
}

/// Generators of `(Z/p^e)^*` with their orders.
///
/// Odd `p` (and `p^e` in {2, 4}) give a single cyclic generator. For `2^e`
/// with `e >= 3` the group is `C_2 x C_{2^{e-2}}`, generated by `-1` and `5`.
pub fn unit_group_generators(p: u64, e: u32) -> Vec<(u64, u64)> {
    assert!(e >= 1 && p >= 2, "unit_group_generators requires p^e >= 2");
    let pe = p.pow(e);
    if p == 2 {
        return match e {
            1 => vec![(1, 1)],
            2 => vec![(3, 2)],
            _ => vec![(pe - 1, 2), (5, 1 << (e - 2))],
        };
    }
    let mut g = smallest_primitive_root_mod_prime(p);
    if e >= 2 && pow_mod(g, p - 1, p * p) == 1 {
        g += p;
    }
    vec![(g % pe, (p - 1) * p.pow(e - 1))]
}

/// An exact fraction `numerator / denominator` in lowest terms with a positive
/// denominator. Used for every phase `e(x) = exp(2 pi i x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalPhase {
    numerator: i64,
    denominator: u64,
}

impl RationalPhase {
    pub fn new(numerator: i64, denominator: u64) -> Self {
        assert!(denominator >= 1, "phase denominator must be positive");
        let g = gcd(numerator.unsigned_abs(), denominator).max(1);
        Self { numerator: numerator / g as i64, denominator: denominator / g }
    }

    pub fn integer(n: i64) -> Self {
        Self { numerator: n, denominator: 1 }
    }

    pub fn numerator(&self) -> i64 {
        self.numerator
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn is_integer(&self) -> bool {
        self.denominator == 1
    }

    /// Numerator of the representative in `[0, 1)`.
    pub fn residue(&self) -> u64 {
        rem_euclid(self.numerator, self.denominator)
    }

    /// Fractional part `{x}` in `[0, 1)`.
    pub fn frac(&self) -> f64 {
        self.residue() as f64 / self.denominator as f64
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    pub fn neg(&self) -> Self {
        Self { numerator: -self.numerator, denominator: self.denominator }
    }

    /// Sum reduced modulo 1, which is all that matters for a phase.
    pub fn add_mod_one(&self, other: &Self) -> Self {
        let den = lcm(self.denominator, other.denominator);
        let a = mul_mod(self.residue(), den / self.denominator, den);
        let b = mul_mod(other.residue(), den / other.denominator, den);
        Self::new(((a + b) % den) as i64, den)
    }

    /// `e(x) = exp(2 pi i x)`, evaluated from the representative of `x` mod 1
    /// closest to zero.
    pub fn e(&self) -> Complex64 {
        e_frac(self.residue(), self.denominator)
    }
}

impl fmt::Display for RationalPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// `e(r / d)` for a residue `r` in `[0, d)`.
#[inline]
pub fn e_frac(r: u64, d: u64) -> Complex64 {
    let signed = if 2 * r > d { r as i64 - d as i64 } else { r as i64 };
    let (s, c) = (TAU * (signed as f64 / d as f64)).sin_cos();
    Complex64::new(c, s)
}
