//! Zeta functions of smooth plane quartics over small finite fields.
//!
//! Genus is fixed at 3. The L-polynomial is rebuilt from `N1, N2, N3` by
//! Newton's identities and completed with the functional equation.

use serde::{Deserialize, Serialize};

use crate::curve;
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::quartic::TernaryQuartic;

/// Largest `q^k` for which points are counted.
pub const COUNT_CAP: u64 = 1 << 20;

/// Projective points of `f = 0` over `F_{q^k}`, where `F_q` is the field of `f`.
pub fn count_points(f: &TernaryQuartic<FiniteField>, k: u32) -> Result<u64> {
    f.require_smooth()?;
    count_points_unchecked(f, k)
}

fn count_points_unchecked(f: &TernaryQuartic<FiniteField>, k: u32) -> Result<u64> {
    if k == 0 {
        return Err(Error::Precondition("extension degree must be positive".into()));
    }
    let base = f.field();
    let q = base.order();
    let size = q.checked_pow(k).filter(|&n| n <= COUNT_CAP);
    if size.is_none() {
        return Err(Error::CapExceeded(format!("{q}^{k} exceeds {COUNT_CAP}")));
    }
    if k == 1 {
        return Ok(curve::count_points(f));
    }
    let big = FiniteField::new(base.p(), base.degree() * k)?;
    Ok(curve::count_points_extended(f, &base.embedding_into(&big)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LPolynomial {
    /// `c0..c6` with `c0 = 1`.
    pub coeffs: [i64; 7],
    pub q: u64,
    /// `N1, N2, N3`.
    pub counts: [u64; 3],
    pub p_rank: u32,
    pub ordinary: bool,
}

impl LPolynomial {
    /// Builds and checks an L-polynomial from three point counts over `F_q`.
    pub fn from_counts(q: u64, counts: [u64; 3]) -> Result<Self> {
        let (p, _) = crate::field::prime_power(q)
            .ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        let qi = q as i64;
        let n1 = counts[0] as i64;
        if (n1 - qi - 1).pow(2) > 36 * qi {
            return Err(Error::Inconsistent(format!("N1 = {n1} violates the Weil bound for q = {q}")));
        }
        let s: Vec<i64> = (0..3)
            .map(|k| qi.pow(k as u32 + 1) + 1 - counts[k] as i64)
            .collect();
        let exact = |num: i64, den: i64, what: &str| -> Result<i64> {
            if num % den != 0 {
                return Err(Error::Inconsistent(format!("non-integral {what}: {num}/{den}")));
            }
            Ok(num / den)
        };
        let e1 = s[0];
        let e2 = exact(e1 * s[0] - s[1], 2, "e2")?;
        let e3 = exact(e2 * s[0] - e1 * s[1] + s[2], 3, "e3")?;
        let mut c = [1, -e1, e2, -e3, 0, 0, 0];
        for i in 0..3 {
            c[6 - i] = qi.pow(3 - i as u32) * c[i];
        }
        let l1: i64 = c.iter().sum();
        if l1 <= 0 {
            return Err(Error::Inconsistent(format!("L(1) = {l1} is not positive")));
        }
        let p_rank = c
            .iter()
            .rposition(|&ci| ci.rem_euclid(p as i64) != 0)
            .unwrap_or(0) as u32;
        Ok(LPolynomial {
            coeffs: c,
            q,
            counts,
            p_rank,
            ordinary: p_rank == 3,
        })
    }

    /// `q + 1 − N1`.
    pub fn trace(&self) -> i64 {
        -self.coeffs[1]
    }

    /// `#Jac(F_q) = L(1)`.
    pub fn class_number(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// Power sums `s_k` of the reciprocal roots, recovered from the
    /// coefficients by Newton's identities.
    pub fn power_sums(&self, n: usize) -> Vec<i64> {
        let e: Vec<i64> = (0..7)
            .map(|i| if i % 2 == 0 { self.coeffs[i] } else { -self.coeffs[i] })
            .collect();
        let mut s = Vec::with_capacity(n);
        for k in 1..=n {
            let mut v = if k <= 6 { (k as i64) * e[k] * sign(k + 1) } else { 0 };
            for i in 1..k {
                if i <= 6 {
                    v += sign(i + 1) * e[i] * s[k - i - 1];
                }
            }
            s.push(v);
        }
        s
    }

    /// Predicted `N_k` for `k = 1..=n`.
    pub fn predicted_counts(&self, n: usize) -> Vec<i64> {
        let q = self.q as i64;
        self.power_sums(n)
            .into_iter()
            .enumerate()
            .map(|(k, s)| q.pow(k as u32 + 1) + 1 - s)
            .collect()
    }

    /// `L(−T)`, the L-polynomial of the quadratic twist.
    pub fn twist(&self) -> Result<Self> {
        let q = self.q as i64;
        let mut counts = [0u64; 3];
        for (k, s) in self.power_sums(3).into_iter().enumerate() {
            let tw = if k % 2 == 0 { -s } else { s };
            counts[k] = (q.pow(k as u32 + 1) + 1 - tw) as u64;
        }
        Self::from_counts(self.q, counts)
    }

    /// Every odd coefficient vanishes, so `L(T) = L(−T)`.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|&c| c == 0)
    }
}

fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// L-polynomial of a smooth quartic over its field of definition.
pub fn l_polynomial(f: &TernaryQuartic<FiniteField>) -> Result<LPolynomial> {
    f.require_smooth()?;
    let q = f.field().order();
    if q.checked_pow(3).map_or(true, |n| n > COUNT_CAP) {
        return Err(Error::CapExceeded(format!("{q}^3 exceeds {COUNT_CAP}")));
    }
    let mut counts = [0u64; 3];
    for k in 1..=3u32 {
        counts[k as usize - 1] = count_points_unchecked(f, k)?;
    }
    let l = LPolynomial::from_counts(q, counts)?;
    if q.checked_pow(4).is_some_and(|n| n <= COUNT_CAP) {
        let n4 = count_points_unchecked(f, 4)? as i64;
        if l.predicted_counts(4)[3] != n4 {
            return Err(Error::Inconsistent(format!("N4 = {n4} disagrees with the L-polynomial")));
        }
    }
    Ok(l)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwistVerdict {
    Equal,
    QuadraticTwist,
    Unrelated,
    /// Every odd coefficient vanishes, so `L(T) = L(−T)` and the sign
    /// cannot be read off.
    Inconclusive,
}

/// Compares two L-polynomials over the same `F_q`.
pub fn twist_compare(c: &LPolynomial, g: &LPolynomial) -> Result<TwistVerdict> {
    if c.q != g.q {
        return Err(Error::Precondition(format!("different base fields: q = {} vs {}", c.q, g.q)));
    }
    let neg: Vec<i64> = g
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, &x)| if i % 2 == 1 { -x } else { x })
        .collect();
    let equal = c.coeffs == g.coeffs;
    let twisted = c.coeffs[..] == neg[..];
    Ok(match (equal, twisted) {
        (true, true) => TwistVerdict::Inconclusive,
        (true, false) => TwistVerdict::Equal,
        (false, true) => TwistVerdict::QuadraticTwist,
        (false, false) => TwistVerdict::Unrelated,
    })
}
