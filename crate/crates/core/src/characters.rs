//! Dirichlet characters modulo q, represented by exponent vectors against fixed
//! generators of the unit group of each prime-power factor of q.
//!
//! Discrete logarithms are tabulated once per modulus, so evaluation is a table
//! lookup followed by a single exact rational phase.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::arith::{self, factorize, gcd, lcm, mul_mod, RationalPhase};
use crate::error::{Error, Result};
use crate::sum::ComplexSum;

const NOT_A_UNIT: u32 = u32::MAX;

#[derive(Debug)]
struct LocalGroup {
    p: u64,
    e: u32,
    pe: u64,
    generators: Vec<(u64, u64)>,
    /// `logs[r * width + j]` is the log of `r` against generator `j`, or
    /// `NOT_A_UNIT`.
    logs: Vec<u32>,
}

impl LocalGroup {
    fn new(p: u64, e: u32) -> Self {
        let pe = p.pow(e);
        let generators = arith::unit_group_generators(p, e);
        let width = generators.len();
        let mut logs = vec![NOT_A_UNIT; pe as usize * width];
        // Every unit is g0^i * g1^j for exactly one (i, j).
        let (g0, ord0) = generators[0];
        let second = generators.get(1).copied().unwrap_or((1, 1));
        let mut row = 1 % pe;
        for i in 0..ord0 {
            let mut v = row;
            for j in 0..second.1 {
                let slot = v as usize * width;
                logs[slot] = i as u32;
                if width == 2 {
                    logs[slot + 1] = j as u32;
                }
                v = mul_mod(v, second.0, pe);
            }
            row = mul_mod(row, g0, pe);
        }
        Self { p, e, pe, generators, logs }
    }

    fn width(&self) -> usize {
        self.generators.len()
    }

    fn log(&self, r: u64) -> Option<&[u32]> {
        let w = self.width();
        let slot = &self.logs[r as usize * w..(r as usize + 1) * w];
        (w == 0 || slot[0] != NOT_A_UNIT).then_some(slot)
    }
}

/// The group of Dirichlet characters modulo `q`, with its discrete-log tables.
#[derive(Debug)]
pub struct CharacterGroup {
    modulus: u64,
    locals: Vec<LocalGroup>,
    /// Exponent of the unit group: every character value is an `exponent`-th root of unity.
    exponent: u64,
}

impl CharacterGroup {
    pub fn new(q: u64) -> Arc<Self> {
        assert!(q >= 1, "character modulus must be positive");
        let locals: Vec<LocalGroup> =
            factorize(q).pairs().iter().map(|&(p, e)| LocalGroup::new(p, e)).collect();
        let exponent = locals
            .iter()
            .flat_map(|l| l.generators.iter().map(|&(_, ord)| ord))
            .fold(1, lcm);
        Arc::new(Self { modulus: q, locals, exponent })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Orders of the generators, in the order exponent vectors are written.
    pub fn orders(&self) -> Vec<u64> {
        self.locals
            .iter()
            .flat_map(|l| l.generators.iter().map(|&(_, ord)| ord))
            .collect()
    }

    /// The generators themselves, as residues modulo their prime power.
    pub fn generators(&self) -> Vec<(u64, u64, u64)> {
        self.locals
            .iter()
            .flat_map(|l| l.generators.iter().map(move |&(g, ord)| (l.pe, g, ord)))
            .collect()
    }
}

/// A Dirichlet character modulo `q`.
#[derive(Clone)]
pub struct Character {
    group: Arc<CharacterGroup>,
    exponents: Vec<u64>,
}

impl PartialEq for Character {
    fn eq(&self, other: &Self) -> bool {
        self.group.modulus == other.group.modulus && self.exponents == other.exponents
    }
}

impl Eq for Character {}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Character(q={}, exponents={:?})", self.modulus(), self.exponents)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exps: Vec<String> = self.exponents.iter().map(|e| e.to_string()).collect();
        write!(f, "chi_{}[{}]", self.modulus(), exps.join(","))
    }
}

impl Character {
    pub fn trivial(q: u64) -> Self {
        let group = CharacterGroup::new(q);
        let width = group.orders().len();
        Self { group, exponents: vec![0; width] }
    }

    /// Character with the given exponent vector. Exponents are ordered by the
    /// prime factors of `q` (ascending), two entries for `2^e` with `e >= 3`.
    pub fn from_exponents(q: u64, exponents: &[u64]) -> Result<Self> {
        Self::in_group(CharacterGroup::new(q), exponents)
    }

    pub fn in_group(group: Arc<CharacterGroup>, exponents: &[u64]) -> Result<Self> {
        let orders = group.orders();
        if orders.len() != exponents.len() {
            return Err(Error::InvalidCharacter(format!(
                "modulus {} needs {} exponents, got {}",
                group.modulus,
                orders.len(),
                exponents.len()
            )));
        }
        if let Some((k, ord)) = exponents.iter().zip(&orders).find(|(k, ord)| *k >= *ord) {
            return Err(Error::InvalidCharacter(format!(
                "exponent {k} out of range for a generator of order {ord}"
            )));
        }
        Ok(Self { group, exponents: exponents.to_vec() })
    }

    pub fn group(&self) -> &Arc<CharacterGroup> {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&k| k == 0)
    }

    /// The complex conjugate character (exponents negated).
    pub fn conj(&self) -> Self {
        let exponents = self
            .exponents
            .iter()
            .zip(self.group.orders())
            .map(|(&k, ord)| (ord - k) % ord)
            .collect();
        Self { group: Arc::clone(&self.group), exponents }
    }

    /// `chi(n)` as an exact phase, or `None` when `gcd(n, q) > 1`.
    pub fn phase(&self, n: i64) -> Option<RationalPhase> {
        let q = self.modulus();
        let r = arith::rem_euclid(n, q);
        if gcd(r, q) != 1 {
            return None;
        }
        let big = self.group.exponent;
        let mut num = 0u64;
        let mut exps = self.exponents.iter();
        for local in &self.group.locals {
            let logs = local.log(r % local.pe)?;
            for (&lg, &(_, ord)) in logs.iter().zip(&local.generators) {
                let k = *exps.next().expect("exponent vector matches generators");
                num = (num + mul_mod(k * (big / ord) % big, lg as u64, big)) % big;
            }
        }
        Some(RationalPhase::new(num as i64, big))
    }

    pub fn evaluate(&self, n: i64) -> Complex64 {
        self.phase(n).map_or(Complex64::new(0.0, 0.0), |ph| ph.e())
    }

    /// `chi(0), chi(1), ..., chi(q-1)`.
    pub fn value_table(&self) -> Vec<Complex64> {
        (0..self.modulus() as i64).map(|n| self.evaluate(n)).collect()
    }

    /// `chi(-1)`, which is `+1` or `-1`.
    pub fn parity(&self) -> i32 {
        if self.evaluate(-1).re > 0.0 {
            1
        } else {
            -1
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == 1
    }

    /// Smallest `f | q` such that the character factors through `(Z/f)^*`.
    pub fn conductor(&self) -> u64 {
        let mut offset = 0;
        let mut f_total = 1;
        for local in &self.group.locals {
            let width = local.width();
            let exps = &self.exponents[offset..offset + width];
            offset += width;
            f_total *= local_conductor(local, exps);
        }
        f_total
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus()
    }
}

/// Conductor of the restriction of a character to `(Z/p^e)^*`: the least
/// `p^f` such that the character is trivial on units congruent to 1 mod `p^f`.
fn local_conductor(local: &LocalGroup, exps: &[u64]) -> u64 {
    if exps.iter().all(|&k| k == 0) {
        return 1;
    }
    let big = local.generators.iter().map(|&(_, o)| o).fold(1, lcm);
    let trivial_at = |u: u64| -> bool {
        let logs = local.log(u).expect("1 mod p^f is a unit");
        let num = logs
            .iter()
            .zip(&local.generators)
            .zip(exps)
            .fold(0u64, |acc, ((&lg, &(_, ord)), &k)| (acc + mul_mod(k * (big / ord), lg as u64, big)) % big);
        num == 0
    };
    for f in 1..local.e {
        let pf = local.p.pow(f);
        if (0..local.pe / pf).all(|k| trivial_at((1 + k * pf) % local.pe)) {
            return pf;
        }
    }
    local.pe
}

/// All `phi(q)` characters modulo `q`, exponent vectors in lexicographic order.
pub fn enumerate_characters(q: u64) -> Vec<Character> {
    let group = CharacterGroup::new(q);
    let orders = group.orders();
    let total: u64 = orders.iter().product();
    (0..total)
        .map(|mut idx| {
            let mut exps = vec![0u64; orders.len()];
            for j in (0..orders.len()).rev() {
                exps[j] = idx % orders[j];
                idx /= orders[j];
            }
            Character { group: Arc::clone(&group), exponents: exps }
        })
        .collect()
}

/// A Gauss sum together with the character it belongs to.
#[derive(Debug, Clone)]
pub struct GaussSumValue {
    pub value: Complex64,
    pub character: Character,
}

/// `tau(chi) = sum_{l=1}^{q} chi(l) e(l/q)`.
pub fn gauss_sum(chi: &Character) -> GaussSumValue {
    let q = chi.modulus();
    let value = exponential_sum(chi, &RationalPhase::new(1, q));
    GaussSumValue { value, character: chi.clone() }
}

/// `sum_{l=1}^{q} chi(l) e(l a / c)` for `c | q`.
pub fn twisted_exponential_sum(chi: &Character, a: i64, c: u64) -> Result<Complex64> {
    let q = chi.modulus();
    if c == 0 || !q.is_multiple_of(c) {
        return Err(Error::ModulusMismatch { c, q });
    }
    Ok(exponential_sum(chi, &RationalPhase::new(a, c)))
}

/// `sum_{l=1}^{q} chi(l) e(l x)` with the combined phase kept exact per term.
fn exponential_sum(chi: &Character, x: &RationalPhase) -> Complex64 {
    let q = chi.modulus();
    let mut acc = ComplexSum::new();
    for l in 1..=q {
        if let Some(ph) = chi.phase(l as i64) {
            let lx = RationalPhase::new(
                arith::mul_mod(l, x.residue(), x.denominator()) as i64,
                x.denominator(),
            );
            acc.add(ph.add_mod_one(&lx).e());
        }
    }
    acc.value()
}
