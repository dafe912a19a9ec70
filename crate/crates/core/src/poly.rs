//! Sparse multivariate polynomials keyed by exponent vectors.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;

pub type Exponents = Vec<u16>;

#[derive(Clone, Debug)]
pub struct MultiPoly<F: Field> {
    field: F,
    vars: Arc<[String]>,
    terms: BTreeMap<Exponents, F::Elem>,
}

impl<F: Field> PartialEq for MultiPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_field(&other.field) && self.vars == other.vars && self.terms == other.terms
    }
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(field: F, vars: Arc<[String]>) -> Self {
        MultiPoly {
            field,
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn with_names(field: F, names: &[&str]) -> Self {
        let vars: Arc<[String]> = names.iter().map(|s| s.to_string()).collect();
        Self::zero(field, vars)
    }

    pub fn from_terms(
        field: F,
        vars: Arc<[String]>,
        terms: impl IntoIterator<Item = (Exponents, F::Elem)>,
    ) -> Self {
        let mut p = Self::zero(field, vars);
        for (e, c) in terms {
            debug_assert_eq!(e.len(), p.vars.len());
            p.add_term(e, c);
        }
        p
    }

    pub fn constant(field: F, vars: Arc<[String]>, c: F::Elem) -> Self {
        let n = vars.len();
        Self::from_terms(field, vars, [(vec![0; n], c)])
    }

    pub fn var(field: F, vars: Arc<[String]>, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let one = field.one();
        Self::from_terms(field, vars, [(e, one)])
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, F::Elem> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u16]) -> F::Elem {
        self.terms.get(e).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Adds `c·x^e` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, e: Exponents, c: F::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.field.add(o.get(), &c);
                if self.field.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if !self.field.same_field(&other.field) {
            return Err(Error::FieldMismatch(self.field.spec(), other.field.spec()));
        }
        if self.vars != other.vars {
            return Err(Error::Input("polynomials over different variable lists".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other).expect("compatible polynomials");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        MultiPoly {
            field: f.clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), f.neg(c))).collect(),
        }
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let f = &self.field;
        if f.is_zero(s) {
            return Self::zero(f.clone(), self.vars.clone());
        }
        MultiPoly {
            field: f.clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), f.mul(c, s))).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other).expect("compatible polynomials");
        let f = &self.field;
        let mut out = Self::zero(f.clone(), self.vars.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, f.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let n = self.num_vars();
        let mut acc = Self::constant(self.field.clone(), self.vars.clone(), self.field.one());
        let mut base = self.clone();
        debug_assert_eq!(acc.num_vars(), n);
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

    pub fn total_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u32).sum())
            .max()
    }

    /// The common degree of all terms, if the polynomial is homogeneous and
    /// nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().map(|&x| x as u32).sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Degree in the variables with indices in `which`, if homogeneous there.
    pub fn homogeneous_degree_in(&self, which: &[usize]) -> Option<u32> {
        let mut degs = self
            .terms
            .keys()
            .map(|e| which.iter().map(|&i| e[i] as u32).sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn eval(&self, point: &[F::Elem]) -> Result<F::Elem> {
        if point.len() != self.num_vars() {
            return Err(Error::LengthMismatch {
                expected: self.num_vars(),
                got: point.len(),
            });
        }
        let f = &self.field;
        let maxdeg = self
            .terms
            .keys()
            .flat_map(|e| e.iter().copied())
            .max()
            .unwrap_or(0) as usize;
        let powers: Vec<Vec<F::Elem>> = point
            .iter()
            .map(|x| {
                let mut v = Vec::with_capacity(maxdeg + 1);
                v.push(f.one());
                for i in 0..maxdeg {
                    v.push(f.mul(&v[i], x));
                }
                v
            })
            .collect();
        Ok(self.terms.iter().fold(f.zero(), |acc, (e, c)| {
            let term = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .fold(c.clone(), |t, (i, &k)| f.mul(&t, &powers[i][k as usize]));
            f.add(&acc, &term)
        }))
    }

    pub fn partial(&self, i: usize) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f.clone(), self.vars.clone());
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            out.add_term(d, f.mul(c, &f.from_i64(e[i] as i64)));
        }
        out
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.num_vars()).map(|i| self.partial(i)).collect()
    }

    /// Substitutes `images[i]` for variable `i`; the images share a target
    /// variable list.
    pub fn compose(&self, images: &[MultiPoly<F>]) -> Result<MultiPoly<F>> {
        if images.len() != self.num_vars() {
            return Err(Error::LengthMismatch {
                expected: self.num_vars(),
                got: images.len(),
            });
        }
        let target = images
            .first()
            .map(|p| p.vars.clone())
            .ok_or_else(|| Error::Input("composition with no variables".into()))?;
        let f = &self.field;
        let maxdeg = self
            .terms
            .keys()
            .flat_map(|e| e.iter().copied())
            .max()
            .unwrap_or(0) as u32;
        let powers: Vec<Vec<MultiPoly<F>>> = images
            .iter()
            .map(|img| {
                let mut v = vec![MultiPoly::constant(f.clone(), target.clone(), f.one())];
                for k in 0..maxdeg as usize {
                    v.push(v[k].mul(img));
                }
                v
            })
            .collect();
        let mut out = MultiPoly::zero(f.clone(), target.clone());
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(f.clone(), target.clone(), c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&powers[i][k as usize]);
                }
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Applies a ring map to the coefficients.
    pub fn map_coeffs<G: Field>(&self, target: G, mut map: impl FnMut(&F::Elem) -> G::Elem) -> MultiPoly<G> {
        let mut out = MultiPoly::zero(target, self.vars.clone());
        for (e, c) in &self.terms {
            let v = map(c);
            out.add_term(e.clone(), v);
        }
        out
    }

    /// Same terms under a different variable list of equal length.
    pub fn rename(&self, vars: Arc<[String]>) -> Result<Self> {
        if vars.len() != self.num_vars() {
            return Err(Error::LengthMismatch {
                expected: self.num_vars(),
                got: vars.len(),
            });
        }
        Ok(MultiPoly {
            field: self.field.clone(),
            vars,
            terms: self.terms.clone(),
        })
    }

    /// `Some(λ)` with `self = λ·other`, for nonzero `other`.
    pub fn proportionality(&self, other: &Self) -> Option<F::Elem> {
        let f = &self.field;
        let (e0, c0) = other.terms.iter().next()?;
        let lambda = f.div(&self.coeff(e0), c0)?;
        let same_support = self.terms.keys().all(|e| other.terms.contains_key(e));
        (same_support
            && other
                .terms
                .iter()
                .all(|(e, c)| self.coeff(e) == f.mul(&lambda, c)))
        .then_some(lambda)
    }

    pub fn display(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let f = &self.field;
        self.terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| {
                        if k == 1 {
                            self.vars[i].clone()
                        } else {
                            format!("{}^{}", self.vars[i], k)
                        }
                    })
                    .collect();
                if mono.is_empty() {
                    f.display(c)
                } else if f.is_one(c) {
                    mono.join("*")
                } else {
                    format!("({})*{}", f.display(c), mono.join("*"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Exponent vectors of degree `d` in `n` variables, lexicographically
/// descending (`x^d` first).
pub fn monomials(n: usize, d: u16) -> Vec<Exponents> {
    fn rec(n: usize, d: u16, prefix: &mut Exponents, out: &mut Vec<Exponents>) {
        if n == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=d).rev() {
            prefix.push(k);
            rec(n - 1, d - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, d, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FiniteField, Rationals};
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn xyz<F: Field>(field: F) -> Vec<MultiPoly<F>> {
        let vars: Arc<[String]> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        (0..3).map(|i| MultiPoly::var(field.clone(), vars.clone(), i)).collect()
    }

    #[test]
    fn eval_examples() {
        let q = Rationals;
        let v = xyz(q);
        let fermat = v[0].pow(4).add(&v[1].pow(4)).add(&v[2].pow(4));
        let one = q.one();
        assert_eq!(fermat.eval(&[one.clone(), one.clone(), one.clone()]).unwrap(), q.from_i64(3));
        assert!(fermat.eval(&[one]).is_err());

        let f3 = FiniteField::prime(3).unwrap();
        let v = xyz(f3.clone());
        let klein = v[0].pow(3).mul(&v[1]).add(&v[1].pow(3).mul(&v[2])).add(&v[2].pow(3).mul(&v[0]));
        assert_eq!(klein.eval(&[1, 1, 1]).unwrap(), 0);
        assert_eq!(klein.partial(0).homogeneous_degree(), Some(3));
    }

    #[test]
    fn monomial_order() {
        let m = monomials(3, 2);
        assert_eq!(m[0], vec![2, 0, 0]);
        assert_eq!(m[5], vec![0, 0, 2]);
        assert_eq!(monomials(3, 4).len(), 15);
        assert_eq!(monomials(3, 12).len(), 91);
    }

    fn random_poly(field: &FiniteField, seed: u64) -> MultiPoly<FiniteField> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let vars: Arc<[String]> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let terms: Vec<_> = (0..6)
            .map(|_| {
                let e = vec![rand::Rng::gen_range(&mut rng, 0..4), rand::Rng::gen_range(&mut rng, 0..4), rand::Rng::gen_range(&mut rng, 0..4)];
                (e, field.random(&mut rng))
            })
            .collect();
        MultiPoly::from_terms(field.clone(), vars, terms)
    }

    proptest! {
        #[test]
        fn ring_laws_under_evaluation(seed in 0u64..1000, x in 0u32..49, y in 0u32..49, z in 0u32..49) {
            let f = FiniteField::new(7, 2).unwrap();
            let p = random_poly(&f, seed);
            let q = random_poly(&f, seed + 1);
            let pt = [x, y, z];
            let (pv, qv) = (p.eval(&pt).unwrap(), q.eval(&pt).unwrap());
            prop_assert_eq!(p.add(&q).eval(&pt).unwrap(), f.add(&pv, &qv));
            prop_assert_eq!(p.mul(&q).eval(&pt).unwrap(), f.mul(&pv, &qv));
        }
    }
}
