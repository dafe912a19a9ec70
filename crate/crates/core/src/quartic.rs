//! Ternary quartic forms.

use std::sync::{Arc, OnceLock};

use num_rational::BigRational;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{multinomial, Embedding, Field, FiniteField, Rationals};
use crate::matrix::MatrixF;
use crate::poly::{monomials, MultiPoly};

/// Exponents of the 15 quartic monomials, `x^4` first, lexicographically
/// descending.
pub const QUARTIC_EXPONENTS: [[u16; 3]; 15] = [
    [4, 0, 0],
    [3, 1, 0],
    [3, 0, 1],
    [2, 2, 0],
    [2, 1, 1],
    [2, 0, 2],
    [1, 3, 0],
    [1, 2, 1],
    [1, 1, 2],
    [1, 0, 3],
    [0, 4, 0],
    [0, 3, 1],
    [0, 2, 2],
    [0, 1, 3],
    [0, 0, 4],
];

pub fn exponent_index(e: [u16; 3]) -> Option<usize> {
    QUARTIC_EXPONENTS.iter().position(|x| *x == e)
}

/// `4!/(i!j!k!)` for each entry of [`QUARTIC_EXPONENTS`].
pub fn multinomial_weights() -> [u64; 15] {
    QUARTIC_EXPONENTS.map(|[i, j, k]| multinomial(&[i as u32, j as u32, k as u32]))
}

pub fn xyz_vars() -> Arc<[String]> {
    static VARS: OnceLock<Arc<[String]>> = OnceLock::new();
    VARS.get_or_init(|| ["x", "y", "z"].iter().map(|s| s.to_string()).collect())
        .clone()
}

/// `f = Σ c_e x^e = Σ (4 choose e) A_e x^e`.
///
/// Monomial coefficients `c_e` are always stored. The multinomial
/// coefficients `A_e` are stored when they are determined, which fails only in
/// characteristic 2 or 3 when some `c_e ≠ 0` sits on a multinomial weight
/// divisible by p ("monomial-native" forms).
#[derive(Clone, Debug)]
pub struct TernaryQuartic<F: Field> {
    field: F,
    monomial: Vec<F::Elem>,
    multinomial: Option<Vec<F::Elem>>,
    smooth: OnceLock<bool>,
}

impl<F: Field> PartialEq for TernaryQuartic<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_field(&other.field) && self.monomial == other.monomial && self.multinomial == other.multinomial
    }
}

impl<F: Field> TernaryQuartic<F> {
    pub fn from_monomial(field: F, coeffs: Vec<F::Elem>) -> Result<Self> {
        if coeffs.len() != 15 {
            return Err(Error::LengthMismatch {
                expected: 15,
                got: coeffs.len(),
            });
        }
        let weights = multinomial_weights();
        let multinomial: Option<Vec<F::Elem>> = coeffs
            .iter()
            .zip(weights)
            .map(|(c, w)| {
                let w = field.from_i64(w as i64);
                if field.is_zero(&w) {
                    field.is_zero(c).then(|| field.zero())
                } else {
                    field.div(c, &w)
                }
            })
            .collect();
        Ok(TernaryQuartic {
            field,
            monomial: coeffs,
            multinomial,
            smooth: OnceLock::new(),
        })
    }

    pub fn from_multinomial(field: F, a: Vec<F::Elem>) -> Result<Self> {
        if a.len() != 15 {
            return Err(Error::LengthMismatch {
                expected: 15,
                got: a.len(),
            });
        }
        let monomial = a
            .iter()
            .zip(multinomial_weights())
            .map(|(ai, w)| field.mul(ai, &field.from_i64(w as i64)))
            .collect();
        Ok(TernaryQuartic {
            field,
            monomial,
            multinomial: Some(a),
            smooth: OnceLock::new(),
        })
    }

    /// Reads a homogeneous quartic in three variables.
    pub fn from_poly(p: &MultiPoly<F>) -> Result<Self> {
        if p.num_vars() != 3 {
            return Err(Error::Input("a ternary quartic needs three variables".into()));
        }
        let mut coeffs = vec![p.field().zero(); 15];
        for (e, c) in p.terms() {
            let idx = exponent_index([e[0], e[1], e[2]])
                .ok_or_else(|| Error::Input(format!("term {e:?} is not of degree 4")))?;
            coeffs[idx] = c.clone();
        }
        Self::from_monomial(p.field().clone(), coeffs)
    }

    /// Parses terms given by exponent triples, monomial convention.
    pub fn from_terms(field: F, terms: &[([u16; 3], i64)]) -> Self {
        let mut coeffs = vec![field.zero(); 15];
        for &(e, c) in terms {
            let idx = exponent_index(e).expect("quartic exponent");
            coeffs[idx] = field.add(&coeffs[idx], &field.from_i64(c));
        }
        Self::from_monomial(field, coeffs).expect("15 coefficients")
    }

    pub fn fermat(field: F) -> Self {
        Self::from_terms(field, &[([4, 0, 0], 1), ([0, 4, 0], 1), ([0, 0, 4], 1)])
    }

    /// `x³y + y³z + z³x`.
    pub fn klein(field: F) -> Self {
        Self::from_terms(field, &[([3, 1, 0], 1), ([0, 3, 1], 1), ([1, 0, 3], 1)])
    }

    /// `x³y + y⁴ + z⁴`, whose `K1` is four concurrent lines.
    pub fn cone_example(field: F) -> Self {
        Self::from_terms(field, &[([3, 1, 0], 1), ([0, 4, 0], 1), ([0, 0, 4], 1)])
    }

    pub fn random<R: Rng + ?Sized>(field: F, rng: &mut R) -> Self {
        let coeffs = (0..15).map(|_| field.random(rng)).collect();
        Self::from_monomial(field, coeffs).expect("15 coefficients")
    }

    pub fn random_smooth<R: Rng + ?Sized>(field: F, rng: &mut R) -> Self {
        loop {
            let f = Self::random(field.clone(), rng);
            if f.is_smooth() {
                return f;
            }
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn monomial_coeffs(&self) -> &[F::Elem] {
        &self.monomial
    }

    pub fn has_multinomial(&self) -> bool {
        self.multinomial.is_some()
    }

    /// The coefficients `A_e`; fails for monomial-native forms.
    pub fn multinomial_coeffs(&self) -> Result<&[F::Elem]> {
        self.multinomial.as_deref().ok_or_else(|| {
            Error::unsupported(
                self.field.characteristic(),
                "coefficients are not representable in the multinomial convention",
            )
        })
    }

    pub fn coeff(&self, e: [u16; 3]) -> F::Elem {
        exponent_index(e)
            .map(|i| self.monomial[i].clone())
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.monomial.iter().all(|c| self.field.is_zero(c))
    }

    pub fn to_poly(&self) -> MultiPoly<F> {
        MultiPoly::from_terms(
            self.field.clone(),
            xyz_vars(),
            QUARTIC_EXPONENTS
                .iter()
                .zip(&self.monomial)
                .map(|(e, c)| (e.to_vec(), c.clone())),
        )
    }

    pub fn eval(&self, p: &[F::Elem; 3]) -> F::Elem {
        let f = &self.field;
        let pw: Vec<[F::Elem; 5]> = p
            .iter()
            .map(|x| {
                let x2 = f.mul(x, x);
                let x3 = f.mul(&x2, x);
                let x4 = f.mul(&x3, x);
                [f.one(), x.clone(), x2, x3, x4]
            })
            .collect();
        QUARTIC_EXPONENTS
            .iter()
            .zip(&self.monomial)
            .fold(f.zero(), |acc, ([i, j, k], c)| {
                if f.is_zero(c) {
                    return acc;
                }
                let t = f.mul(&f.mul(c, &pw[0][*i as usize]), &f.mul(&pw[1][*j as usize], &pw[2][*k as usize]));
                f.add(&acc, &t)
            })
    }

    pub fn gradient(&self) -> [MultiPoly<F>; 3] {
        let p = self.to_poly();
        [p.partial(0), p.partial(1), p.partial(2)]
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let f = &self.field;
        TernaryQuartic {
            field: f.clone(),
            monomial: self.monomial.iter().map(|c| f.mul(c, s)).collect(),
            multinomial: self
                .multinomial
                .as_ref()
                .map(|a| a.iter().map(|c| f.mul(c, s)).collect()),
            smooth: OnceLock::new(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        TernaryQuartic {
            field: f.clone(),
            monomial: self
                .monomial
                .iter()
                .zip(&other.monomial)
                .map(|(a, b)| f.add(a, b))
                .collect(),
            multinomial: match (&self.multinomial, &other.multinomial) {
                (Some(a), Some(b)) => Some(a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()),
                _ => None,
            },
            smooth: OnceLock::new(),
        }
    }

    /// `f(g·x)` for a row-major 3×3 matrix `g`.
    ///
    /// With multinomial coefficients present the new `A_e` are computed
    /// symbolically from `f = (a·x)^4`: `A'_e` is the coefficient extraction
    /// of `Π_r ((gᵀa)_r)^{e_r}`, which needs no division.
    pub fn transform(&self, g: &[F::Elem; 9]) -> Self {
        let f = &self.field;
        if let Some(a) = &self.multinomial {
            let vars = xyz_vars();
            let lin: Vec<MultiPoly<F>> = (0..3)
                .map(|r| {
                    MultiPoly::from_terms(
                        f.clone(),
                        vars.clone(),
                        (0..3).map(|s| {
                            let mut e = vec![0u16; 3];
                            e[s] = 1;
                            (e, g[3 * s + r].clone())
                        }),
                    )
                })
                .collect();
            let new_a = QUARTIC_EXPONENTS
                .iter()
                .map(|e| {
                    let prod = lin[0].pow(e[0] as u32).mul(&lin[1].pow(e[1] as u32)).mul(&lin[2].pow(e[2] as u32));
                    prod.terms().iter().fold(f.zero(), |acc, (ep, c)| {
                        let idx = exponent_index([ep[0], ep[1], ep[2]]).expect("degree 4");
                        f.add(&acc, &f.mul(c, &a[idx]))
                    })
                })
                .collect();
            return Self::from_multinomial(f.clone(), new_a).expect("15 coefficients");
        }
        let vars = xyz_vars();
        let lin: Vec<MultiPoly<F>> = (0..3)
            .map(|r| {
                MultiPoly::from_terms(
                    f.clone(),
                    vars.clone(),
                    (0..3).map(|c| {
                        let mut e = vec![0u16; 3];
                        e[c] = 1;
                        (e, g[3 * r + c].clone())
                    }),
                )
            })
            .collect();
        Self::from_poly(&self.to_poly().compose(&lin).expect("three images")).expect("quartic")
    }

    /// Smooth iff `(f, f_x, f_y, f_z)` contains every form of degree 10.
    ///
    /// With no common projective zero, three general quartics in the ideal
    /// form a regular sequence whose quotient vanishes from degree 10 on; a
    /// common zero keeps every graded piece proper. Valid in all
    /// characteristics.
    pub fn is_smooth(&self) -> bool {
        *self.smooth.get_or_init(|| self.smoothness_rank() == 66)
    }

    fn smoothness_rank(&self) -> usize {
        let f = &self.field;
        let target = monomials(3, 10);
        let col = |e: &[u16]| target.iter().position(|t| t.as_slice() == e).expect("degree 10");
        let p = self.to_poly();
        let gens: Vec<(MultiPoly<F>, u16)> = vec![(p.clone(), 6), (p.partial(0), 7), (p.partial(1), 7), (p.partial(2), 7)];
        let mut rows = Vec::new();
        for (g, mult_deg) in &gens {
            if g.is_zero() {
                continue;
            }
            for m in monomials(3, *mult_deg) {
                let mut row = vec![f.zero(); 66];
                for (e, c) in g.terms() {
                    let s: Vec<u16> = e.iter().zip(&m).map(|(a, b)| a + b).collect();
                    row[col(&s)] = c.clone();
                }
                rows.push(row);
            }
        }
        if rows.is_empty() {
            return 0;
        }
        let m = MatrixF::from_rows(f.clone(), rows).expect("uniform rows");
        m.rank()
    }

    pub fn require_smooth(&self) -> Result<()> {
        if self.is_smooth() {
            Ok(())
        } else {
            Err(Error::Singular("the quartic is singular".into()))
        }
    }

    /// Maps coefficients through a ring homomorphism, preferring the
    /// multinomial coefficients so that `A_e` survive reduction.
    pub fn map_field<G: Field>(&self, target: G, map: impl Fn(&F::Elem) -> Option<G::Elem>) -> Result<TernaryQuartic<G>> {
        let conv = |v: &[F::Elem]| -> Result<Vec<G::Elem>> {
            v.iter()
                .map(|c| map(c).ok_or_else(|| Error::Precondition("coefficient does not reduce".into())))
                .collect()
        };
        match &self.multinomial {
            Some(a) => TernaryQuartic::from_multinomial(target, conv(a)?),
            None => TernaryQuartic::from_monomial(target, conv(&self.monomial)?),
        }
    }
}

impl TernaryQuartic<Rationals> {
    /// Reduction modulo the characteristic of `target`.
    pub fn reduce(&self, target: &FiniteField) -> Result<TernaryQuartic<FiniteField>> {
        self.map_field(target.clone(), |c: &BigRational| target.from_rational(c))
    }
}

impl TernaryQuartic<FiniteField> {
    /// Base change along a field embedding.
    pub fn extend(&self, e: &Embedding) -> TernaryQuartic<FiniteField> {
        self.map_field(e.target().clone(), |c| Some(e.map(*c)))
            .expect("embeddings are total")
    }

    /// Row-major 3×3 monomial coefficient blocks of the partials, used by
    /// the characteristic-3 Fermat guard: every partial is a cube of a
    /// linear form.
    pub fn partials_are_cubes(&self) -> bool {
        let f = &self.field;
        if f.characteristic() != 3 {
            return false;
        }
        // In characteristic 3 a cube of a linear form is a·x³ + b·y³ + c·z³
        // with a, b, c cubes, and every element of F_{3^k} is a cube. So the
        // criterion is that each partial is supported on x³, y³, z³.
        let pure = |e: &[u16]| e.iter().filter(|&&k| k > 0).count() <= 1;
        self.gradient()
            .iter()
            .all(|g| g.terms().keys().all(|e| pure(e)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn named_curves_are_smooth() {
        let q = Rationals;
        assert!(TernaryQuartic::fermat(q).is_smooth());
        assert!(TernaryQuartic::klein(q).is_smooth());
        assert!(TernaryQuartic::cone_example(q).is_smooth());
        let x4 = TernaryQuartic::from_terms(q, &[([4, 0, 0], 1)]);
        assert!(!x4.is_smooth());
        let nodal = TernaryQuartic::from_terms(q, &[([2, 2, 0], 1), ([0, 0, 4], 1), ([4, 0, 0], 1), ([0, 4, 0], 1)]);
        // x^4 + x^2y^2 + y^4 + z^4 is smooth over Q; (x^2 - y^2)^2 + z^4 is not.
        assert!(nodal.is_smooth());
        let sq = TernaryQuartic::from_terms(q, &[([4, 0, 0], 1), ([2, 2, 0], -2), ([0, 4, 0], 1), ([0, 0, 4], 1)]);
        assert!(!sq.is_smooth());
    }

    #[test]
    fn smoothness_in_small_characteristic() {
        let f2 = FiniteField::prime(2).unwrap();
        assert!(TernaryQuartic::klein(f2.clone()).is_smooth());
        // The Fermat quartic is a double line in characteristic 2.
        assert!(!TernaryQuartic::fermat(f2).is_smooth());
        let f3 = FiniteField::prime(3).unwrap();
        assert!(TernaryQuartic::fermat(f3.clone()).is_smooth());
        assert!(TernaryQuartic::fermat(f3).partials_are_cubes());
        let f7 = FiniteField::prime(7).unwrap();
        assert!(!TernaryQuartic::klein(f7).is_smooth());
    }

    #[test]
    fn monomial_native_flag() {
        let f2 = FiniteField::prime(2).unwrap();
        let f = TernaryQuartic::from_terms(f2.clone(), &[([2, 1, 1], 1), ([4, 0, 0], 1)]);
        assert!(!f.has_multinomial());
        let g = TernaryQuartic::from_terms(f2, &[([4, 0, 0], 1), ([0, 4, 0], 1)]);
        assert!(g.has_multinomial());
    }

    #[test]
    fn smoothness_agrees_with_exhaustive_search() {
        let f = FiniteField::prime(5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let q = TernaryQuartic::random(f.clone(), &mut rng);
            let ext = FiniteField::new(5, 2).unwrap();
            let qe = q.extend(&f.embedding_into(&ext).unwrap());
            let grad = qe.gradient();
            // A singular point of a quartic over F_5 need not be rational, so
            // only the implication "rational singular point ⇒ singular" is
            // checked exactly.
            let mut found = false;
            for p in crate::proj::points(&ext) {
                if qe.eval(&p) == 0 && grad.iter().all(|g| g.eval(&p).unwrap() == 0) {
                    found = true;
                    break;
                }
            }
            if found {
                assert!(!q.is_smooth());
            }
        }
    }

    #[test]
    fn transform_agrees_on_both_conventions() {
        let q = Rationals;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let f = TernaryQuartic::random(q, &mut rng);
        let g: [BigRational; 9] = std::array::from_fn(|_| q.random(&mut rng));
        let via_a = f.transform(&g);
        let plain = TernaryQuartic::from_monomial(q, f.monomial_coeffs().to_vec()).unwrap();
        let mut plain = plain;
        plain.multinomial = None;
        assert_eq!(via_a.monomial_coeffs(), plain.transform(&g).monomial_coeffs());
    }

    #[test]
    fn reduction_keeps_multinomial_coefficients() {
        let q = Rationals;
        let f = TernaryQuartic::from_terms(q, &[([2, 1, 1], 12), ([4, 0, 0], 1), ([0, 4, 0], 1), ([0, 0, 4], 1)]);
        let r = f.reduce(&FiniteField::prime(3).unwrap()).unwrap();
        assert!(r.has_multinomial());
        assert_eq!(r.multinomial_coeffs().unwrap()[4], 1);
        assert_eq!(r.coeff([2, 1, 1]), 0);
    }
}
