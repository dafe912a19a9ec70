//! Theta characteristics as quadratic refinements of the Weil pairing on
//! `F2^{2g}`.
//!
//! μ2 is written additively: `+1 ↔ 0` and `−1 ↔ 1`. A vector is a bitmask
//! whose bits `0..g` are the `e_i` coordinates and bits `g..2g` the `f_i`
//! coordinates.

use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_GENUS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SymplecticF2 {
    g: usize,
}

impl SymplecticF2 {
    pub fn new(g: usize) -> Result<Self> {
        if !(1..=MAX_GENUS).contains(&g) {
            return Err(Error::Precondition(format!("genus {g} outside 1..={MAX_GENUS}")));
        }
        Ok(SymplecticF2 { g })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    /// `2^{2g}`.
    pub fn size(&self) -> usize {
        1 << (2 * self.g)
    }

    pub fn e(&self, i: usize) -> u64 {
        1 << i
    }

    pub fn f(&self, i: usize) -> u64 {
        1 << (self.g + i)
    }

    fn halves(&self, p: u64) -> (u64, u64) {
        let mask = (1u64 << self.g) - 1;
        (p & mask, (p >> self.g) & mask)
    }

    /// `e2(p, q)`: `⟨e_i, f_i⟩ = 1`, other basis pairs 0.
    pub fn pair(&self, p: u64, q: u64) -> u8 {
        let (a, b) = self.halves(p);
        let (c, d) = self.halves(q);
        (((a & d).count_ones() + (b & c).count_ones()) & 1) as u8
    }

    pub fn vectors(&self) -> impl Iterator<Item = u64> {
        0..self.size() as u64
    }

    /// `e1+f2` style label, `0` for the zero vector.
    pub fn label(&self, p: u64) -> String {
        let (a, b) = self.halves(p);
        let mut parts = Vec::new();
        for i in 0..self.g {
            if a >> i & 1 == 1 {
                parts.push(format!("e{}", i + 1));
            }
        }
        for i in 0..self.g {
            if b >> i & 1 == 1 {
                parts.push(format!("f{}", i + 1));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }

    /// Symplectic transvection `x ↦ x + e2(x, v)·v`.
    pub fn transvection(&self, v: u64, x: u64) -> u64 {
        if self.pair(x, v) == 1 {
            x ^ v
        } else {
            x
        }
    }
}

/// A function `F2^{2g} → F2` stored as its value table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QuadFormF2 {
    pub g: usize,
    pub values: Vec<u8>,
}

impl QuadFormF2 {
    pub fn from_fn(space: &SymplecticF2, t: impl Fn(u64) -> u8) -> Self {
        QuadFormF2 {
            g: space.g,
            values: space.vectors().map(|p| t(p) & 1).collect(),
        }
    }

    /// `t0(Σ a_i e_i + b_i f_i) = Σ a_i b_i`.
    pub fn base(space: &SymplecticF2) -> Self {
        Self::from_fn(space, |p| {
            let (a, b) = space.halves(p);
            ((a & b).count_ones() & 1) as u8
        })
    }

    pub fn space(&self) -> SymplecticF2 {
        SymplecticF2 { g: self.g }
    }

    pub fn value(&self, p: u64) -> u8 {
        self.values[p as usize]
    }

    /// Checks `t(p+q) + t(p) + t(q) = e2(p, q)` for all pairs.
    pub fn is_refinement(&self) -> bool {
        let s = self.space();
        if self.values.len() != s.size() || self.values[0] != 0 {
            return false;
        }
        s.vectors()
            .all(|p| s.vectors().all(|q| self.value(p ^ q) ^ self.value(p) ^ self.value(q) == s.pair(p, q)))
    }

    /// Number of zeros of `t`; `2^{g−1}(2^g + 1)` exactly for even forms.
    pub fn zero_count(&self) -> usize {
        self.values.iter().filter(|&&v| v == 0).count()
    }

    /// `t(T x)` for a map `T` on vectors.
    pub fn compose(&self, map: impl Fn(u64) -> u64) -> Self {
        let s = self.space();
        Self::from_fn(&s, |p| self.value(map(p)))
    }
}

/// All `2^{2g}` refinements `t_c = t0 + e2(c, ·)`, indexed by `c`.
pub fn enumerate_theta_characteristics(g: usize) -> Result<Vec<QuadFormF2>> {
    let s = SymplecticF2::new(g)?;
    let t0 = QuadFormF2::base(&s);
    Ok(s.vectors().map(|c| torsor_translate(&t0, c)).collect())
}

/// `Σ t(e_i)·t(f_i)`; 0 is even, 1 is odd.
pub fn arf(t: &QuadFormF2) -> u8 {
    let s = t.space();
    (0..s.g).fold(0, |acc, i| acc ^ (t.value(s.e(i)) & t.value(s.f(i))))
}

/// `q ↦ t(q) + e2(p, q)`.
pub fn torsor_translate(t: &QuadFormF2, p: u64) -> QuadFormF2 {
    let s = t.space();
    QuadFormF2::from_fn(&s, |q| t.value(q) ^ s.pair(p, q))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ParityCounts {
    pub g: usize,
    pub even: usize,
    pub odd: usize,
}

pub fn parity_counts(g: usize) -> Result<ParityCounts> {
    let forms = enumerate_theta_characteristics(g)?;
    let odd = forms.iter().filter(|t| arf(t) == 1).count();
    Ok(ParityCounts {
        g,
        even: forms.len() - odd,
        odd,
    })
}

fn span(basis: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64];
    for &v in basis {
        let n = out.len();
        for i in 0..n {
            out.push(out[i] ^ v);
        }
    }
    out
}

fn check_lagrangian(s: &SymplecticF2, basis: &[u64], name: &str) -> Result<Vec<u64>> {
    if basis.len() != s.g {
        return Err(Error::Precondition(format!("{name} needs {} basis vectors, got {}", s.g, basis.len())));
    }
    if basis.iter().any(|&v| v >= s.size() as u64) {
        return Err(Error::Precondition(format!("{name} has a vector outside F2^{}", 2 * s.g)));
    }
    for &v in basis {
        for &w in basis {
            if s.pair(v, w) != 0 {
                return Err(Error::Precondition(format!("{name} is not isotropic")));
            }
        }
    }
    let mut elems = span(basis);
    elems.sort_unstable();
    elems.dedup();
    if elems.len() != 1 << s.g {
        return Err(Error::Precondition(format!("{name} basis is linearly dependent")));
    }
    Ok(span(basis))
}

/// The even characteristic `δ(p) = f(p, p)` attached to complementary
/// Lagrangians `L`, `M`, where `f(a + α, b + β) = e2(β, a)` identifies `M`
/// with the dual of `L`.
pub fn igusa_delta(g: usize, l: &[u64], m: &[u64]) -> Result<QuadFormF2> {
    let s = SymplecticF2::new(g)?;
    let ls = check_lagrangian(&s, l, "L")?;
    let ms = check_lagrangian(&s, m, "M")?;
    let mut table = vec![u8::MAX; s.size()];
    for &a in &ls {
        for &alpha in &ms {
            let p = (a ^ alpha) as usize;
            if table[p] != u8::MAX {
                return Err(Error::Precondition("L and M are not complementary".into()));
            }
            table[p] = s.pair(alpha, a);
        }
    }
    let delta = QuadFormF2 { g, values: table };
    if !delta.is_refinement() {
        return Err(Error::Inconsistent("δ does not refine e2".into()));
    }
    if arf(&delta) != 0 {
        return Err(Error::Inconsistent("δ is odd".into()));
    }
    Ok(delta)
}

/// The standard pair `L = ⟨e_i⟩`, `M = ⟨f_i⟩`.
pub fn standard_lagrangians(g: usize) -> Result<(Vec<u64>, Vec<u64>)> {
    let s = SymplecticF2::new(g)?;
    Ok(((0..g).map(|i| s.e(i)).collect(), (0..g).map(|i| s.f(i)).collect()))
}
