use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use super::{Field, FieldSpec};

/// The rational numbers with unbounded numerators and denominators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

/// Primes used for the modular full-rank shortcut in [`Field::matrix_rank`].
const RANK_PRIMES: [u64; 2] = [2_147_483_629, 2_147_483_587];

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::rational()
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        let n: i64 = rng.gen_range(-9..=9);
        let d: i64 = if rng.gen_bool(0.25) { rng.gen_range(1..=4) } else { 1 };
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn to_json(&self, a: &BigRational) -> serde_json::Value {
        serde_json::Value::String(format_rational(a))
    }

    fn display(&self, a: &BigRational) -> String {
        format_rational(a)
    }

    fn matrix_rank(&self, rows: usize, cols: usize, data: &[BigRational]) -> usize {
        // Rank over Q is at least the rank modulo any prime not dividing a
        // denominator; when that already equals min(rows, cols) we are done.
        let full = rows.min(cols);
        for &p in &RANK_PRIMES {
            if let Some(reduced) = reduce_matrix(data, p) {
                let f = super::FiniteField::prime(p).expect("rank prime");
                if crate::matrix::gaussian_rank(&f, rows, cols, reduced) == full {
                    return full;
                }
            }
        }
        crate::matrix::gaussian_rank(self, rows, cols, data.to_vec())
    }
}

fn reduce_matrix(data: &[BigRational], p: u64) -> Option<Vec<u32>> {
    let pb = BigInt::from(p);
    data.iter()
        .map(|r| {
            let d = r.denom().mod_floor(&pb).to_u64()?;
            if d == 0 {
                return None;
            }
            let n = r.numer().mod_floor(&pb).to_u64()?;
            let dinv = super::finite::inv_mod(d, p);
            Some(((n as u128 * dinv as u128) % p as u128) as u32)
        })
        .collect()
}

/// Lowest-terms `a` or `a/b` with the sign on the numerator.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        let sign = if r.is_negative() { "-" } else { "" };
        format!("{}{}/{}", sign, r.numer().abs(), r.denom())
    }
}

/// Parses `"a"` or `"a/b"` into a reduced rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        None => text.parse::<BigInt>().ok().map(BigRational::from_integer),
        Some((n, d)) => {
            let n = n.trim().parse::<BigInt>().ok()?;
            let d = d.trim().parse::<BigInt>().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fraction_format_round_trips() {
        for s in ["0", "7", "-3/4", "5/6"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("6/-4").unwrap()), "-3/2");
        assert!(parse_rational("1/0").is_none());
    }
}
