//! Binary quartics, their invariants S and T, and restriction of ternary
//! quartics to lines.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{binomial, Field, Rationals};
use crate::poly::MultiPoly;
use crate::quartic::{exponent_index, xyz_vars, TernaryQuartic};
use crate::umbral::{s_symbolic, t_symbolic};

/// `g = Σ c_k x^{4-k} y^k = Σ (4 choose k) a_k x^{4-k} y^k`.
///
/// As for ternary quartics the monomial coefficients are always present and
/// the `a_k` only when they are determined.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryQuartic<F: Field> {
    field: F,
    monomial: [F::Elem; 5],
    multinomial: Option<[F::Elem; 5]>,
}

impl<F: Field> BinaryQuartic<F> {
    pub fn from_multinomial(field: F, a: [F::Elem; 5]) -> Self {
        let monomial = std::array::from_fn(|k| field.mul(&a[k], &field.from_i64(binomial(4, k as u32) as i64)));
        BinaryQuartic {
            field,
            monomial,
            multinomial: Some(a),
        }
    }

    pub fn from_monomial(field: F, c: [F::Elem; 5]) -> Self {
        let a: Option<Vec<F::Elem>> = (0..5)
            .map(|k| {
                let w = field.from_i64(binomial(4, k as u32) as i64);
                if field.is_zero(&w) {
                    field.is_zero(&c[k]).then(|| field.zero())
                } else {
                    field.div(&c[k], &w)
                }
            })
            .collect();
        let multinomial = a.map(|v| std::array::from_fn(|k| v[k].clone()));
        BinaryQuartic {
            field,
            monomial: c,
            multinomial,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn monomial_coeffs(&self) -> &[F::Elem; 5] {
        &self.monomial
    }

    pub fn multinomial_coeffs(&self) -> Result<&[F::Elem; 5]> {
        self.multinomial.as_ref().ok_or_else(|| {
            Error::unsupported(
                self.field.characteristic(),
                "binary coefficients are not representable in the multinomial convention",
            )
        })
    }

    pub fn is_zero(&self) -> bool {
        self.monomial.iter().all(|c| self.field.is_zero(c))
    }

    pub fn eval(&self, s: &F::Elem, t: &F::Elem) -> F::Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for k in 0..5 {
            let term = f.mul(&self.monomial[k], &f.mul(&f.pow(s, 4 - k as u64), &f.pow(t, k as u64)));
            acc = f.add(&acc, &term);
        }
        acc
    }

    /// Substitutes `(x, y) ↦ (m00 x + m01 y, m10 x + m11 y)`.
    pub fn transform(&self, m: &[F::Elem; 4]) -> Self {
        let f = &self.field;
        let vars: std::sync::Arc<[String]> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        let lin = |a: &F::Elem, b: &F::Elem| {
            MultiPoly::from_terms(f.clone(), vars.clone(), [(vec![1, 0], a.clone()), (vec![0, 1], b.clone())])
        };
        let images = [lin(&m[0], &m[1]), lin(&m[2], &m[3])];
        let g = MultiPoly::from_terms(
            f.clone(),
            vars.clone(),
            (0..5).map(|k| (vec![4 - k as u16, k as u16], self.monomial[k].clone())),
        );
        let h = g.compose(&images).expect("two images");
        let c = std::array::from_fn(|k| h.coeff(&[4 - k as u16, k as u16]));
        match &self.multinomial {
            // Symbolically g = (α·x)^4, so a'_k is the umbral value of
            // (m00 α1 + m10 α2)^{4-k} (m01 α1 + m11 α2)^k.
            Some(a) => {
                let p0 = lin(&m[0], &m[2]);
                let p1 = lin(&m[1], &m[3]);
                let a2 = std::array::from_fn(|k| {
                    let prod = p0.pow(4 - k as u32).mul(&p1.pow(k as u32));
                    prod.terms()
                        .iter()
                        .fold(f.zero(), |acc, (e, c)| f.add(&acc, &f.mul(c, &a[e[1] as usize])))
                });
                BinaryQuartic {
                    field: f.clone(),
                    monomial: c,
                    multinomial: Some(a2),
                }
            }
            None => Self::from_monomial(f.clone(), c),
        }
    }
}

/// Value of `(αβ)^4` at `g`.
pub fn invariant_s<F: Field>(g: &BinaryQuartic<F>) -> Result<F::Elem> {
    s_symbolic().specialize_binary(&g.field, g.multinomial_coeffs()?)
}

/// Value of `(αβ)^2(αγ)^2(βγ)^2` at `g`.
pub fn invariant_t<F: Field>(g: &BinaryQuartic<F>) -> Result<F::Elem> {
    t_symbolic().specialize_binary(&g.field, g.multinomial_coeffs()?)
}

/// The unique `c` with `S³ − c·T²` vanishing on binary quartics with a
/// repeated root, fitted on 20 random samples over ℚ.
pub fn discriminant_constant() -> Result<BigRational> {
    let q = Rationals;
    let mut rng = ChaCha8Rng::seed_from_u64(0xd15c);
    let mut c: Option<BigRational> = None;
    let mut used = 0;
    for _ in 0..20 {
        // (x - r y)^2 (α x^2 + β x y + γ y^2)
        let r = q.random(&mut rng);
        let quad: [BigRational; 3] = std::array::from_fn(|_| q.random(&mut rng));
        let sq = [q.one(), q.mul(&q.from_i64(-2), &r), q.mul(&r, &r)];
        let mut coeffs: [BigRational; 5] = std::array::from_fn(|_| q.zero());
        for i in 0..3 {
            for j in 0..3 {
                coeffs[i + j] = q.add(&coeffs[i + j], &q.mul(&sq[i], &quad[j]));
            }
        }
        let g = BinaryQuartic::from_monomial(q, coeffs);
        let s = invariant_s(&g)?;
        let t = invariant_t(&g)?;
        let s3 = q.pow(&s, 3);
        if q.is_zero(&t) {
            if !q.is_zero(&s3) {
                return Err(Error::Normalization("T vanishes but S does not on a degenerate quartic".into()));
            }
            continue;
        }
        let ratio = q.div(&s3, &q.mul(&t, &t)).expect("T nonzero");
        match &c {
            None => c = Some(ratio),
            Some(prev) if *prev != ratio => {
                return Err(Error::Normalization(format!(
                    "inconsistent discriminant constants {} and {}",
                    q.display(prev),
                    q.display(&ratio)
                )))
            }
            _ => {}
        }
        used += 1;
    }
    if used < 2 {
        return Err(Error::Normalization("too few usable samples".into()));
    }
    Ok(c.expect("at least one sample"))
}

/// The two basis vectors spanning the line `u·x = 0`: with `i` the first
/// nonzero index of `u`, each remaining coordinate is set to 1 in turn and
/// coordinate `i` solved for.
pub fn line_basis<F: Field>(field: &F, u: &[F::Elem; 3]) -> Result<[[F::Elem; 3]; 2]> {
    let i = u
        .iter()
        .position(|c| !field.is_zero(c))
        .ok_or_else(|| Error::Precondition("the zero vector is not a line".into()))?;
    let inv = field.inv(&u[i]).expect("nonzero");
    let mut out: Vec<[F::Elem; 3]> = Vec::with_capacity(2);
    for j in (0..3).filter(|&j| j != i) {
        let mut v: [F::Elem; 3] = std::array::from_fn(|_| field.zero());
        v[j] = field.one();
        v[i] = field.neg(&field.mul(&u[j], &inv));
        out.push(v);
    }
    Ok([out[0].clone(), out[1].clone()])
}

/// `f(s·v1 + t·v2)` for the canonical basis of the line `u`.
pub fn restrict_to_line<F: Field>(f: &TernaryQuartic<F>, u: &[F::Elem; 3]) -> Result<BinaryQuartic<F>> {
    let basis = line_basis(f.field(), u)?;
    Ok(restrict_along(f, &basis[0], &basis[1]))
}

/// `f(s·v1 + t·v2)` for an arbitrary pair of vectors.
pub fn restrict_along<F: Field>(f: &TernaryQuartic<F>, v1: &[F::Elem; 3], v2: &[F::Elem; 3]) -> BinaryQuartic<F> {
    let field = f.field();
    let vars = xyz_vars();
    let lin = |v: &[F::Elem; 3]| {
        MultiPoly::from_terms(
            field.clone(),
            vars.clone(),
            (0..3).map(|i| {
                let mut e = vec![0u16; 3];
                e[i] = 1;
                (e, v[i].clone())
            }),
        )
    };
    let (l1, l2) = (lin(v1), lin(v2));
    let p1: Vec<MultiPoly<F>> = (0..5).map(|k| l1.pow(k)).collect();
    let p2: Vec<MultiPoly<F>> = (0..5).map(|k| l2.pow(k)).collect();
    // (a·v1)^{4-k} (a·v2)^k as a polynomial in the symbol a; its umbral value
    // is a_k, and contracting with the monomial weights gives c_k.
    let prods: Vec<MultiPoly<F>> = (0..5).map(|k| p1[4 - k].mul(&p2[k])).collect();
    let contract = |coeffs: &[F::Elem], weighted: bool| -> [F::Elem; 5] {
        std::array::from_fn(|k| {
            prods[k].terms().iter().fold(field.zero(), |acc, (e, c)| {
                let idx = exponent_index([e[0], e[1], e[2]]).expect("degree 4");
                let mut v = field.mul(c, &coeffs[idx]);
                if weighted {
                    v = field.mul(&v, &field.from_i64(binomial(4, k as u32) as i64));
                }
                field.add(&acc, &v)
            })
        })
    };
    match f.multinomial_coeffs() {
        Ok(a) => BinaryQuartic::from_multinomial(field.clone(), contract(a, false)),
        Err(_) => {
            // Expand directly from monomial coefficients.
            let g = f
                .to_poly()
                .compose(&[
                    binary_lin(field, &v1[0], &v2[0]),
                    binary_lin(field, &v1[1], &v2[1]),
                    binary_lin(field, &v1[2], &v2[2]),
                ])
                .expect("three images");
            BinaryQuartic::from_monomial(field.clone(), std::array::from_fn(|k| g.coeff(&[4 - k as u16, k as u16])))
        }
    }
}

fn binary_lin<F: Field>(field: &F, a: &F::Elem, b: &F::Elem) -> MultiPoly<F> {
    let vars: std::sync::Arc<[String]> = ["s", "t"].iter().map(|s| s.to_string()).collect();
    MultiPoly::from_terms(field.clone(), vars, [(vec![1, 0], a.clone()), (vec![0, 1], b.clone())])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RestrictionTag {
    NotSquare,
    SquareOfSeparable,
    SquareOfSquare,
    IdenticallyZero,
}

/// `tag`, and for squares a quadratic `r = r0 s² + r1 st + r2 t²` with
/// `g = λ·r²`.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictionClass<F: Field> {
    pub tag: RestrictionTag,
    pub square_root: Option<[F::Elem; 3]>,
}

/// Decides whether `g` is a constant times a square.
///
/// The root at infinity `(1:0)` has multiplicity `e`, the index of the first
/// nonzero `c_k`; the affine part `h(X) = g(X, 1)` of degree `4 − e` is
/// tested by extracting its monic square root from the top coefficients.
/// This agrees with the `gcd(g, g')` criterion wherever that criterion
/// applies and also covers fourth powers, where the gcd has degree 3.
pub fn classify_restriction<F: Field>(g: &BinaryQuartic<F>) -> Result<RestrictionClass<F>> {
    let f = &g.field;
    if f.characteristic() == 2 {
        return Err(Error::unsupported(2, "square classification needs odd characteristic"));
    }
    let c = &g.monomial;
    let Some(e) = c.iter().position(|x| !f.is_zero(x)) else {
        return Ok(RestrictionClass {
            tag: RestrictionTag::IdenticallyZero,
            square_root: None,
        });
    };
    let not_square = RestrictionClass {
        tag: RestrictionTag::NotSquare,
        square_root: None,
    };
    if e % 2 == 1 {
        return Ok(not_square);
    }
    // h(X) = Σ_{k ≥ e} c_k X^{4-k}, monic after dividing by c_e.
    let lead_inv = f.inv(&c[e]).expect("nonzero");
    let deg = 4 - e;
    let h: Vec<F::Elem> = (0..=deg).map(|j| f.mul(&c[4 - j], &lead_inv)).collect();
    let m = deg / 2;
    let half = f.inv(&f.from_i64(2)).expect("odd characteristic");
    let mut q = vec![f.zero(); m + 1];
    q[m] = f.one();
    for k in 1..=m {
        let idx = deg - k;
        let mut acc = h[idx].clone();
        for i in (m - k + 1)..=m {
            let j = idx as isize - i as isize;
            if j > (m - k) as isize && j <= m as isize {
                acc = f.sub(&acc, &f.mul(&q[i], &q[j as usize]));
            }
        }
        q[m - k] = f.mul(&acc, &half);
    }
    for idx in 0..=deg {
        let mut s = f.zero();
        for i in 0..=m {
            if idx >= i && idx - i <= m {
                s = f.add(&s, &f.mul(&q[i], &q[idx - i]));
            }
        }
        if s != h[idx] {
            return Ok(not_square);
        }
    }
    // Homogenize: r(s, t) = t^{e/2} · t^m q(s/t).
    let mut root: [F::Elem; 3] = std::array::from_fn(|_| f.zero());
    for (i, qi) in q.iter().enumerate() {
        // q_i X^i ↦ q_i s^i t^{m-i} t^{e/2}; slot k counts powers of t.
        let k = (m - i) + e / 2;
        root[k] = qi.clone();
    }
    let separable = match m {
        2 => {
            let disc = f.sub(&f.mul(&q[1], &q[1]), &f.mul(&f.from_i64(4), &q[0]));
            !f.is_zero(&disc)
        }
        1 => true,
        _ => false,
    };
    Ok(RestrictionClass {
        tag: if separable {
            RestrictionTag::SquareOfSeparable
        } else {
            RestrictionTag::SquareOfSquare
        },
        square_root: Some(root),
    })
}

/// A random invertible 2×2 matrix.
pub fn random_gl2<F: Field, R: Rng + ?Sized>(field: &F, rng: &mut R) -> ([F::Elem; 4], F::Elem) {
    loop {
        let m: [F::Elem; 4] = std::array::from_fn(|_| field.random(rng));
        let d = field.sub(&field.mul(&m[0], &m[3]), &field.mul(&m[1], &m[2]));
        if !field.is_zero(&d) {
            return (m, d);
        }
    }
}
