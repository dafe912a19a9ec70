//! Dense univariate polynomials, with root finding over finite fields.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Field, FiniteField};

/// Coefficients low degree first, with no trailing zeros.
#[derive(Clone, Debug)]
pub struct UPoly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> PartialEq for UPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_field(&other.field) && self.coeffs == other.coeffs
    }
}

impl<F: Field> UPoly<F> {
    pub fn new(field: F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        UPoly { field, coeffs }
    }

    pub fn zero(field: F) -> Self {
        UPoly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    pub fn one(field: F) -> Self {
        let one = field.one();
        Self::constant(field, one)
    }

    /// The monomial `c·X^n`.
    pub fn monomial(field: F, c: F::Elem, n: usize) -> Self {
        let mut coeffs = vec![field.zero(); n + 1];
        coeffs[n] = c;
        Self::new(field, coeffs)
    }

    pub fn x(field: F) -> Self {
        let one = field.one();
        Self::monomial(field, one, 1)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> F::Elem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            f.clone(),
            (0..n).map(|i| f.add(&self.coeff(i), &other.coeff(i))).collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            f.clone(),
            (0..n).map(|i| f.sub(&self.coeff(i), &other.coeff(i))).collect(),
        )
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Self::new(f.clone(), self.coeffs.iter().map(|c| f.neg(c)).collect())
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        Self::new(f.clone(), self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f.clone());
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Self::new(f.clone(), out)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.field.clone());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn monic(&self) -> Self {
        match self.field.inv(&self.lead()) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        Self::new(
            f.clone(),
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| f.mul(&f.from_i64(i as i64), c))
                .collect(),
        )
    }

    /// Quotient and remainder; fails on division by zero.
    pub fn divrem(&self, b: &Self) -> Result<(Self, Self)> {
        self.check_field(b)?;
        let f = &self.field;
        let db = b
            .degree()
            .ok_or_else(|| Error::Precondition("division by the zero polynomial".into()))?;
        let inv = f.inv(&b.lead()).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return Ok((Self::zero(f.clone()), self.clone()));
        }
        let mut q = vec![f.zero(); r.len() - db];
        for i in (db..r.len()).rev() {
            if f.is_zero(&r[i]) {
                continue;
            }
            let c = f.mul(&r[i], &inv);
            for (j, bj) in b.coeffs.iter().enumerate() {
                let idx = i - db + j;
                r[idx] = f.sub(&r[idx], &f.mul(&c, bj));
            }
            q[i - db] = c;
        }
        r.truncate(db);
        Ok((Self::new(f.clone(), q), Self::new(f.clone(), r)))
    }

    pub fn rem(&self, b: &Self) -> Result<Self> {
        Ok(self.divrem(b)?.1)
    }

    /// Exact division; fails if `b` does not divide `self`.
    pub fn div_exact(&self, b: &Self) -> Result<Self> {
        let (q, r) = self.divrem(b)?;
        if !r.is_zero() {
            return Err(Error::Inconsistent("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn mulmod(&self, other: &Self, m: &Self) -> Self {
        self.mul(other).rem(m).expect("nonzero modulus")
    }

    pub fn powmod(&self, mut e: u64, m: &Self) -> Self {
        let mut acc = Self::one(self.field.clone()).rem(m).expect("nonzero modulus");
        let mut base = self.rem(m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mulmod(&base, m);
            }
        }
        acc
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field.same_field(&other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field.spec(), other.field.spec()))
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn lcm(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.field.clone()));
        }
        let g = self.gcd(other)?;
        Ok(self.mul(other).div_exact(&g)?.monic())
    }

    /// Resultant via the Euclidean recursion
    /// `Res(a, b) = (-1)^{deg a deg b} lc(b)^{deg a - deg r} Res(b, r)`.
    pub fn resultant(&self, other: &Self) -> Result<F::Elem> {
        self.check_field(other)?;
        let f = &self.field;
        let mut a = self.clone();
        let mut b = other.clone();
        let mut acc = f.one();
        loop {
            let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
                return Ok(f.zero());
            };
            if db == 0 {
                return Ok(f.mul(&acc, &f.pow(&b.lead(), da as u64)));
            }
            let r = a.rem(&b)?;
            let Some(dr) = r.degree() else {
                return Ok(f.zero());
            };
            if (da * db) % 2 == 1 {
                acc = f.neg(&acc);
            }
            acc = f.mul(&acc, &f.pow(&b.lead(), (da - dr) as u64));
            a = b;
            b = r;
        }
    }

    /// Newton interpolation through `(xs[i], ys[i])` with distinct `xs`.
    pub fn interpolate(field: F, xs: &[F::Elem], ys: &[F::Elem]) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch {
                expected: xs.len(),
                got: ys.len(),
            });
        }
        let f = &field;
        let n = xs.len();
        let mut dd = ys.to_vec();
        for level in 1..n {
            for i in (level..n).rev() {
                let den = f.sub(&xs[i], &xs[i - level]);
                let inv = f
                    .inv(&den)
                    .ok_or_else(|| Error::Precondition("repeated interpolation node".into()))?;
                dd[i] = f.mul(&f.sub(&dd[i], &dd[i - 1]), &inv);
            }
        }
        let mut out = Self::zero(f.clone());
        for i in (0..n).rev() {
            let lin = Self::new(f.clone(), vec![f.neg(&xs[i]), f.one()]);
            out = out.mul(&lin).add(&Self::constant(f.clone(), dd[i].clone()));
        }
        Ok(out)
    }
}

impl UPoly<FiniteField> {
    /// `g` with `g(X)^p = self`; requires every exponent to be divisible by p.
    pub fn pth_root(&self) -> Result<Self> {
        let f = &self.field;
        let p = f.p() as usize;
        let inv_frob = f.order() / f.p();
        let mut out = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % p != 0 {
                if *c != 0 {
                    return Err(Error::Precondition("polynomial is not a p-th power".into()));
                }
                continue;
            }
            out.push(f.pow(c, inv_frob));
        }
        Ok(Self::new(f.clone(), out))
    }

    /// Product of the distinct monic irreducible factors.
    pub fn radical(&self) -> Self {
        let f = &self.field;
        if self.degree().unwrap_or(0) == 0 {
            return Self::one(f.clone());
        }
        let monic = self.monic();
        let d = monic.derivative();
        if d.is_zero() {
            return monic.pth_root().expect("zero derivative").radical();
        }
        let g = monic.gcd(&d).expect("same field");
        let h = monic.div_exact(&g).expect("gcd divides");
        h.lcm(&g.radical()).expect("same field")
    }

    /// `X^q mod self`.
    fn frobenius_x(&self) -> Self {
        let q = self.field.order();
        Self::x(self.field.clone()).powmod(q, self)
    }

    /// Product of the distinct linear factors.
    pub fn split_part(&self) -> Self {
        let f = &self.field;
        if self.degree().unwrap_or(0) == 0 {
            return Self::one(f.clone());
        }
        let m = self.monic();
        let xq = m.frobenius_x();
        xq.sub(&Self::x(f.clone())).gcd(&m).expect("same field")
    }

    pub fn count_distinct_roots(&self) -> usize {
        if self.is_zero() {
            return self.field.order() as usize;
        }
        self.split_part().degree().unwrap_or(0)
    }

    /// Multiplicity of `r` as a root.
    pub fn root_multiplicity(&self, r: u32) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let f = &self.field;
        // Synthetic division by (X - r) until the remainder is nonzero.
        let mut cur = self.coeffs.clone();
        let mut m = 0;
        loop {
            let n = cur.len();
            if n == 0 {
                return m;
            }
            let mut q = vec![0u32; n.saturating_sub(1)];
            let mut acc = 0u32;
            for i in (0..n).rev() {
                acc = f.add_u(f.mul_u(acc, r), cur[i]);
                if i > 0 {
                    q[i - 1] = acc;
                }
            }
            if acc != 0 || n == 1 {
                return m;
            }
            m += 1;
            cur = q;
        }
    }
}

const EXHAUSTIVE_ROOT_ORDER: u64 = 64;

/// Distinct roots of a nonzero polynomial over a finite field, ascending.
/// Deterministic: splitting uses a fixed-seed generator.
pub fn roots(poly: &UPoly<FiniteField>) -> Vec<u32> {
    let f = poly.field();
    let Some(d) = poly.degree() else {
        return Vec::new();
    };
    if d == 0 {
        return Vec::new();
    }
    let mut out = if f.order() <= EXHAUSTIVE_ROOT_ORDER {
        f.elements().filter(|x| poly.eval(x) == 0).collect()
    } else {
        let split = poly.split_part();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_1a7);
        let mut acc = Vec::new();
        equal_degree_split(&split, &mut rng, &mut acc);
        acc
    };
    out.sort_unstable();
    out
}

fn equal_degree_split(g: &UPoly<FiniteField>, rng: &mut ChaCha8Rng, out: &mut Vec<u32>) {
    let f = g.field().clone();
    let d = g.degree().unwrap_or(0);
    if d == 0 {
        return;
    }
    if d == 1 {
        let g = g.monic();
        out.push(f.neg_u(g.coeff(0)));
        return;
    }
    loop {
        let a = f.random(rng);
        let t = if f.p() == 2 {
            // Tr(a·x) separates any two distinct roots for some a; a shift
            // x + a would not, since Tr is additive.
            let lin = UPoly::new(f.clone(), vec![0, a]);
            let mut w = lin.rem(g).expect("nonzero");
            let mut t = w.clone();
            for _ in 1..f.degree() {
                w = w.mulmod(&w, g);
                t = t.add(&w);
            }
            t
        } else {
            let lin = UPoly::new(f.clone(), vec![a, 1]);
            lin.powmod((f.order() - 1) / 2, g)
                .sub(&UPoly::one(f.clone()))
        };
        let h = t.gcd(g).expect("same field");
        let dh = h.degree().unwrap_or(0);
        if dh > 0 && dh < d {
            let other = g.div_exact(&h).expect("gcd divides");
            equal_degree_split(&h, rng, out);
            equal_degree_split(&other, rng, out);
            return;
        }
    }
}
