//! Exact coefficient fields.
//!
//! A [`Field`] is a context object; elements are plain values and every
//! arithmetic operation goes through the context. This keeps elements of
//! `F_{p^k}` as bare `u32` codes while the lookup tables live behind an
//! `Arc` in the field itself.

mod finite;
mod rational;

pub use finite::{canonical_modulus, is_prime, prime_power, Embedding, FiniteField, MAX_TABLE_ORDER};
pub use rational::{format_rational, parse_rational, Rationals};

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use serde::Serialize;

/// Identifies a field: characteristic 0 is ℚ, otherwise `F_{p^k}` presented
/// as `F_p[x]/(modulus)` with the modulus listed low-to-high.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FieldSpec {
    pub characteristic: u64,
    pub extension_degree: u32,
    pub modulus: Vec<u64>,
}

impl FieldSpec {
    pub fn rational() -> Self {
        FieldSpec {
            characteristic: 0,
            extension_degree: 1,
            modulus: Vec::new(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.characteristic == 0
    }

    /// Number of elements, `None` for ℚ or on overflow.
    pub fn order(&self) -> Option<u64> {
        if self.characteristic == 0 {
            return None;
        }
        self.characteristic.checked_pow(self.extension_degree)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.characteristic, self.extension_degree) {
            (0, _) => write!(f, "Q"),
            (p, 1) => write!(f, "F_{p}"),
            (p, k) => write!(f, "F_{p}^{k}"),
        }
    }
}

pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn characteristic(&self) -> u64;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// A random element; small-height rationals for ℚ.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// Canonical JSON: fraction strings for ℚ, coefficient vectors over the
    /// modulus basis for finite fields.
    fn to_json(&self, a: &Self::Elem) -> serde_json::Value;
    fn display(&self, a: &Self::Elem) -> String;

    /// Rank of a dense row-major matrix. Fields may override with faster
    /// exact strategies.
    fn matrix_rank(&self, rows: usize, cols: usize, data: &[Self::Elem]) -> usize {
        crate::matrix::gaussian_rank(self, rows, cols, data.to_vec())
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Image of a rational number; `None` when the denominator vanishes.
    fn from_rational(&self, r: &BigRational) -> Option<Self::Elem> {
        let n = self.from_bigint(r.numer());
        let d = self.from_bigint(r.denom());
        self.div(&n, &d)
    }

    fn same_field(&self, other: &Self) -> bool {
        self.spec() == other.spec()
    }
}

/// Binomial-free helper: `n!/(i!j!k!)` for small arguments.
pub fn multinomial(parts: &[u32]) -> u64 {
    let n: u32 = parts.iter().sum();
    let mut num: u64 = 1;
    for v in 1..=n as u64 {
        num *= v;
    }
    for &p in parts {
        for v in 1..=p as u64 {
            num /= v;
        }
    }
    num
}

pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    multinomial(&[k, n - k])
}
