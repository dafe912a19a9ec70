//! The contravariants `K1`, `K2` of a ternary quartic and its dual curve.

use std::collections::BTreeSet;

use num_rational::BigRational;
use rand::Rng;
use serde::Serialize;

use crate::binary::{invariant_s, invariant_t, restrict_to_line};
use crate::curve::{rational_points, tangent_line};
use crate::error::{Error, Result};
use crate::field::{multinomial, Field, FiniteField, Rationals};
use crate::matrix::MatrixF;
use crate::poly::{monomials, MultiPoly};
use crate::quartic::{exponent_index, TernaryQuartic};
use crate::umbral::{k2_symbolic, ternary_vars, u_vars};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Formula,
    Umbral,
    Interpolation,
}

/// A ternary form in `u1, u2, u3`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualForm<F: Field> {
    pub degree: u32,
    pub provenance: Provenance,
    pub poly: MultiPoly<F>,
}

impl<F: Field> DualForm<F> {
    pub fn eval(&self, u: &[F::Elem; 3]) -> F::Elem {
        self.poly.eval(u).expect("three variables")
    }
}

/// One summand of the closed formula for `K1`: a multinomial coefficient
/// with sign, the two `A` indices, and the `u` exponent.
struct K1Term {
    coeff: i64,
    first: usize,
    second: usize,
    u: [u16; 3],
}

/// The summands `(4 choose ℓ)(−1)^{ℓ2+ℓ4+ℓ6} A_{ℓ1+ℓ2,ℓ3+ℓ4,ℓ5+ℓ6}
/// A_{ℓ4+ℓ5,ℓ1+ℓ6,ℓ2+ℓ3} u^{(ℓ3+ℓ6,ℓ2+ℓ5,ℓ1+ℓ4)}` over 6-tuples
/// `ℓ` with `|ℓ| = 4`.
fn k1_terms() -> Vec<K1Term> {
    let mut out = Vec::new();
    for l in monomials(6, 4) {
        let l: Vec<u32> = l.iter().map(|&x| x as u32).collect();
        let sign = if (l[1] + l[3] + l[5]) % 2 == 0 { 1 } else { -1 };
        let first = exponent_index([(l[0] + l[1]) as u16, (l[2] + l[3]) as u16, (l[4] + l[5]) as u16]).expect("degree 4");
        let second = exponent_index([(l[3] + l[4]) as u16, (l[0] + l[5]) as u16, (l[1] + l[2]) as u16]).expect("degree 4");
        out.push(K1Term {
            coeff: sign * multinomial(&l) as i64,
            first,
            second,
            u: [(l[2] + l[5]) as u16, (l[1] + l[4]) as u16, (l[0] + l[3]) as u16],
        });
    }
    out
}

/// The closed formula for `K1` as a polynomial in `A_e` and `u`.
pub fn k1_generic() -> MultiPoly<Rationals> {
    let q = Rationals;
    let mut p = MultiPoly::zero(q, ternary_vars());
    for t in k1_terms() {
        let mut e = vec![0u16; 18];
        e[t.first] += 1;
        e[t.second] += 1;
        e[15..].copy_from_slice(&t.u);
        p.add_term(e, q.from_i64(t.coeff));
    }
    p
}

/// `K1(f)` by the closed formula.
pub fn k1_expanded<F: Field>(f: &TernaryQuartic<F>) -> Result<DualForm<F>> {
    let field = f.field();
    let a = f.multinomial_coeffs()?;
    let mut p = MultiPoly::zero(field.clone(), u_vars());
    for t in k1_terms() {
        let v = field.mul(&field.from_i64(t.coeff), &field.mul(&a[t.first], &a[t.second]));
        p.add_term(t.u.to_vec(), v);
    }
    Ok(DualForm {
        degree: 4,
        provenance: Provenance::Formula,
        poly: p,
    })
}

/// `K2(f)` from the umbral expansion of `(abu)²(acu)²(bcu)²`.
pub fn k2_umbral<F: Field>(f: &TernaryQuartic<F>) -> Result<DualForm<F>> {
    Ok(DualForm {
        degree: 6,
        provenance: Provenance::Umbral,
        poly: k2_symbolic().specialize(f)?,
    })
}

#[derive(Clone, Debug)]
pub struct DualCurve<F: Field> {
    /// `K1³ − 6K2²`.
    pub form: DualForm<F>,
    /// Characteristic 3: the form equals `K1³`; the reduced dual curve is
    /// `K1` itself, of degree 4.
    pub non_reduced: bool,
    pub reduced_degree: u32,
}

/// `B = K1³ − 6K2²`.
pub fn dual_curve<F: Field>(f: &TernaryQuartic<F>) -> Result<DualCurve<F>> {
    let field = f.field();
    if field.characteristic() == 2 {
        return Err(Error::unsupported(2, "the dual-curve formula needs odd characteristic"));
    }
    f.require_smooth()?;
    let k1 = k1_expanded(f)?.poly;
    let k2 = k2_umbral(f)?.poly;
    let b = k1.pow(3).sub(&k2.pow(2).scale(&field.from_i64(6)));
    let non_reduced = field.characteristic() == 3;
    Ok(DualCurve {
        form: DualForm {
            degree: 12,
            provenance: Provenance::Formula,
            poly: b,
        },
        non_reduced,
        reduced_degree: if non_reduced { 4 } else { 12 },
    })
}

#[derive(Clone, Debug)]
pub struct Interpolated {
    pub form: DualForm<FiniteField>,
    pub degree: u32,
    pub kernel_dim: usize,
    pub ambiguous: bool,
    pub lines: usize,
}

/// Distinct tangent lines at the smooth rational points, sorted.
pub fn tangent_lines(f: &TernaryQuartic<FiniteField>) -> Vec<[u32; 3]> {
    let set: BTreeSet<[u32; 3]> = rational_points(f)
        .iter()
        .filter_map(|p| tangent_line(f, p))
        .collect();
    set.into_iter().collect()
}

/// Evaluation matrix of the degree-`d` monomials at the given points.
pub fn evaluation_matrix<F: Field>(field: &F, pts: &[[F::Elem; 3]], d: u16) -> MatrixF<F> {
    let mons = monomials(3, d);
    let mut data = Vec::with_capacity(pts.len() * mons.len());
    for p in pts {
        let pw: Vec<Vec<F::Elem>> = p
            .iter()
            .map(|x| {
                let mut v = vec![field.one()];
                for k in 0..d as usize {
                    v.push(field.mul(&v[k], x));
                }
                v
            })
            .collect();
        for m in &mons {
            data.push(field.mul(&field.mul(&pw[0][m[0] as usize], &pw[1][m[1] as usize]), &pw[2][m[2] as usize]));
        }
    }
    MatrixF::new(field.clone(), pts.len(), mons.len(), data).expect("consistent shape")
}

/// Form from a coefficient vector over [`monomials`]`(3, d)`.
pub fn form_from_vector<F: Field>(field: &F, d: u16, v: &[F::Elem]) -> MultiPoly<F> {
    MultiPoly::from_terms(field.clone(), u_vars(), monomials(3, d).into_iter().zip(v.iter().cloned()))
}

/// Least-degree dual form vanishing on every tangent line at a smooth
/// rational point. Degree `d` is examined only once there are at least as
/// many lines as forms of degree `d`.
pub fn dual_by_tangent_interpolation(f: &TernaryQuartic<FiniteField>, degree_cap: u16) -> Result<Interpolated> {
    f.require_smooth()?;
    let field = f.field();
    let lines = tangent_lines(f);
    if lines.len() < 15 {
        return Err(Error::InsufficientData(format!(
            "{} tangent lines, at least 15 needed",
            lines.len()
        )));
    }
    let mut examined = false;
    for d in 4..=degree_cap {
        let dim = (d as usize + 1) * (d as usize + 2) / 2;
        if lines.len() < dim {
            continue;
        }
        examined = true;
        let m = evaluation_matrix(field, &lines, d);
        let kernel = m.nullspace();
        if kernel.is_empty() {
            continue;
        }
        return Ok(Interpolated {
            form: DualForm {
                degree: d as u32,
                provenance: Provenance::Interpolation,
                poly: form_from_vector(field, d, &kernel[0]),
            },
            degree: d as u32,
            kernel_dim: kernel.len(),
            ambiguous: kernel.len() > 1,
            lines: lines.len(),
        });
    }
    if examined {
        Err(Error::CapExceeded(format!("no vanishing dual form up to degree {degree_cap}")))
    } else {
        Err(Error::InsufficientData(format!(
            "{} tangent lines do not determine any degree up to {degree_cap}",
            lines.len()
        )))
    }
}

/// Solves `B = α K1³ + β K2²` and returns `c = −β/α`, the scalar in
/// `B ∝ K1³ − c K2²`.
pub fn dual_scalar<F: Field>(b: &MultiPoly<F>, k1: &MultiPoly<F>, k2: &MultiPoly<F>) -> Option<F::Elem> {
    let field = b.field();
    let cube = k1.pow(3);
    let sq = k2.pow(2);
    let mons = monomials(3, 12);
    let rows: Vec<Vec<F::Elem>> = mons
        .iter()
        .map(|m| vec![cube.coeff(m), sq.coeff(m), b.coeff(m)])
        .collect();
    let mat = MatrixF::from_rows(field.clone(), rows).ok()?;
    let kernel = mat.nullspace();
    if kernel.len() != 1 {
        return None;
    }
    let v = &kernel[0];
    if field.is_zero(&v[0]) || field.is_zero(&v[2]) {
        return None;
    }
    // x K1³ + y K2² + z B = 0  ⇒  B = −(x/z) K1³ − (y/z) K2².
    field.div(&field.neg(&v[1]), &v[0])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Which {
    K1,
    K2,
}

#[derive(Clone, Debug)]
pub struct TransferReport<F: Field> {
    pub which: Which,
    /// `K(u)·λ^w / I(f|_u)` with `λ` the inverse of the first nonzero entry
    /// of `u` and `w = 4` (S) or `6` (T).
    pub constant: F::Elem,
    /// Zero when every sampled ratio equals `constant`.
    pub max_deviation: F::Elem,
    pub samples: usize,
    /// Lines on which both sides vanished.
    pub zero_samples: usize,
}

/// Samples random lines and compares `K1` with `S` (or `K2` with `T`) of
/// the restriction.
pub fn transfer_check<F: Field, R: Rng + ?Sized>(
    f: &TernaryQuartic<F>,
    which: Which,
    trials: usize,
    rng: &mut R,
) -> Result<TransferReport<F>>
where
    F::Elem: PartialOrd,
{
    let field = f.field();
    let ch = field.characteristic();
    if ch == 2 || ch == 3 {
        return Err(Error::unsupported(ch, "transfer scaling needs characteristic other than 2 and 3"));
    }
    let (k, w) = match which {
        Which::K1 => (k1_expanded(f)?, 4),
        Which::K2 => (k2_umbral(f)?, 6),
    };
    let mut constant: Option<F::Elem> = None;
    let mut max_dev = field.zero();
    let mut samples = 0;
    let mut zero_samples = 0;
    let mut attempts = 0;
    while samples < trials {
        attempts += 1;
        if attempts > 20 * trials + 100 {
            return Err(Error::Inconsistent("could not find lines with nonvanishing invariant".into()));
        }
        let u: [F::Elem; 3] = std::array::from_fn(|_| field.random(rng));
        let Some(lead) = u.iter().find(|c| !field.is_zero(c)) else {
            continue;
        };
        let lambda = field.inv(lead).expect("nonzero");
        let g = restrict_to_line(f, &u)?;
        let inv = match which {
            Which::K1 => invariant_s(&g)?,
            Which::K2 => invariant_t(&g)?,
        };
        let lhs = field.mul(&k.eval(&u), &field.pow(&lambda, w));
        if field.is_zero(&inv) {
            if !field.is_zero(&lhs) {
                return Err(Error::Inconsistent("invariant vanishes on a line where the contravariant does not".into()));
            }
            zero_samples += 1;
            continue;
        }
        let ratio = field.div(&lhs, &inv).expect("nonzero");
        match &constant {
            None => constant = Some(ratio),
            Some(c) => {
                let dev = field.sub(&ratio, c);
                if !field.is_zero(&dev) && field.is_zero(&max_dev) {
                    max_dev = dev;
                }
            }
        }
        samples += 1;
    }
    Ok(TransferReport {
        which,
        constant: constant.unwrap_or_else(|| field.zero()),
        max_deviation: max_dev,
        samples,
        zero_samples,
    })
}

#[derive(Clone, Debug)]
pub struct TangentCheck {
    pub prime: u64,
    pub sampled: usize,
    pub vanishing: usize,
}

/// Reduces `f` and `B` modulo a large prime, samples points of the curve
/// there and evaluates `B` on their tangent lines.
pub fn dual_vanishes_on_tangents<R: Rng + ?Sized>(
    f: &TernaryQuartic<Rationals>,
    b: &MultiPoly<Rationals>,
    prime: u64,
    samples: usize,
    rng: &mut R,
) -> Result<TangentCheck> {
    let fp = FiniteField::prime(prime)?;
    let fr = f.reduce(&fp)?;
    let br = b.map_coeffs(fp.clone(), |c: &BigRational| fp.from_rational(c).expect("denominator prime to p"));
    let mut sampled = 0;
    let mut vanishing = 0;
    let mut attempts = 0;
    while sampled < samples {
        attempts += 1;
        if attempts > 100 * samples {
            return Err(Error::InsufficientData("too few points found modulo the sampling prime".into()));
        }
        let x = fp.random(rng);
        let poly = crate::upoly::UPoly::new(
            fp.clone(),
            (0..5u16)
                .map(|k| {
                    // coefficient of z^k in f(1, x, z)
                    crate::quartic::QUARTIC_EXPONENTS
                        .iter()
                        .zip(fr.monomial_coeffs())
                        .filter(|(e, _)| e[2] == k)
                        .fold(0, |acc, (e, c)| fp.add_u(acc, fp.mul_u(*c, fp.pow(&x, e[1] as u64))))
                })
                .collect(),
        );
        if poly.is_zero() {
            continue;
        }
        let zs = crate::upoly::roots(&poly);
        let Some(&z) = zs.first() else {
            continue;
        };
        let p = [1, x, z];
        let Some(line) = tangent_line(&fr, &p) else {
            continue;
        };
        sampled += 1;
        if br.eval(&line)? == 0 {
            vanishing += 1;
        }
    }
    Ok(TangentCheck {
        prime,
        sampled,
        vanishing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::umbral::k1_symbolic;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn u_form(q: Rationals, terms: &[([u16; 3], i64)]) -> MultiPoly<Rationals> {
        MultiPoly::from_terms(q, u_vars(), terms.iter().map(|(e, c)| (e.to_vec(), q.from_i64(*c))))
    }

    #[test]
    fn closed_formula_equals_umbral_expansion() {
        assert_eq!(k1_generic(), k1_symbolic().polynomial);
    }

    #[test]
    fn fermat_k1() {
        let q = Rationals;
        let k1 = k1_expanded(&TernaryQuartic::fermat(q)).unwrap();
        assert_eq!(k1.poly, u_form(q, &[([4, 0, 0], 2), ([0, 4, 0], 2), ([0, 0, 4], 2)]));
        let single = TernaryQuartic::from_terms(q, &[([4, 0, 0], 1)]);
        assert!(k1_expanded(&single).unwrap().poly.is_zero());
        assert!(k2_umbral(&single).unwrap().poly.is_zero());
    }

    #[test]
    fn cone_example_k1_is_four_concurrent_lines() {
        let q = Rationals;
        let k1 = k1_expanded(&TernaryQuartic::cone_example(q)).unwrap().poly;
        // 2u1⁴ − 2u1u2³: free of u3, so a multiplicity-4 point at (0,0,1).
        assert!(k1.terms().keys().all(|e| e[2] == 0));
        assert!(!k1.is_zero());
    }

    #[test]
    fn fermat_k2_is_symmetric() {
        let q = Rationals;
        let k2 = k2_umbral(&TernaryQuartic::fermat(q)).unwrap().poly;
        assert_eq!(k2.homogeneous_degree(), Some(6));
        for (e, c) in k2.terms() {
            for perm in [[1, 0, 2], [0, 2, 1], [2, 1, 0]] {
                let pe: Vec<u16> = perm.iter().map(|&i| e[i]).collect();
                assert_eq!(k2.coeff(&pe), *c);
            }
        }
    }

    #[test]
    fn k2_is_cubic_in_f() {
        let q = Rationals;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = TernaryQuartic::random(q, &mut rng);
        let lam = q.from_i64(3);
        let lhs = k2_umbral(&f.scale(&lam)).unwrap().poly;
        let rhs = k2_umbral(&f).unwrap().poly.scale(&q.pow(&lam, 3));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn transfer_constant_is_one() {
        let q = Rationals;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = TernaryQuartic::random(q, &mut rng);
        for which in [Which::K1, Which::K2] {
            let r = transfer_check(&f, which, 10, &mut rng).unwrap();
            assert_eq!(r.constant, q.one());
            assert!(q.is_zero(&r.max_deviation));
        }
        // Scaling f leaves the ratio unchanged: both sides have the same
        // degree in the coefficients.
        let r = transfer_check(&f.scale(&q.from_i64(5)), Which::K1, 5, &mut rng).unwrap();
        assert_eq!(r.constant, q.one());
    }

    #[test]
    fn contravariance_weights() {
        let p = FiniteField::prime(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = TernaryQuartic::random(p.clone(), &mut rng);
        let g: [u32; 9] = std::array::from_fn(|_| p.random(&mut rng));
        let det = MatrixF::new(p.clone(), 3, 3, g.to_vec()).unwrap().determinant().unwrap();
        if det == 0 {
            return;
        }
        let fg = f.transform(&g);
        let v: [u32; 3] = std::array::from_fn(|_| p.random(&mut rng));
        // gᵀ v
        let gtv: [u32; 3] = std::array::from_fn(|c| (0..3).fold(0, |acc, r| p.add_u(acc, p.mul_u(g[3 * r + c], v[r]))));
        let lhs1 = k1_expanded(&fg).unwrap().eval(&gtv);
        let rhs1 = p.mul(&p.pow(&det, 4), &k1_expanded(&f).unwrap().eval(&v));
        assert_eq!(lhs1, rhs1);
        let lhs2 = k2_umbral(&fg).unwrap().eval(&gtv);
        let rhs2 = p.mul(&p.pow(&det, 6), &k2_umbral(&f).unwrap().eval(&v));
        assert_eq!(lhs2, rhs2);
    }

    #[test]
    fn fermat_dual_over_f3_is_a_cube() {
        let f3 = FiniteField::prime(3).unwrap();
        let d = dual_curve(&TernaryQuartic::fermat(f3.clone())).unwrap();
        assert!(d.non_reduced);
        assert_eq!(d.reduced_degree, 4);
        let fermat_u = MultiPoly::from_terms(f3.clone(), u_vars(), [(vec![4, 0, 0], 1), (vec![0, 4, 0], 1), (vec![0, 0, 4], 1)]);
        assert!(d.form.poly.proportionality(&fermat_u.pow(3)).is_some());
    }

    #[test]
    fn interpolation_needs_points() {
        // Fermat over F_3 has 4 points.
        let f = TernaryQuartic::fermat(FiniteField::prime(3).unwrap());
        assert!(matches!(dual_by_tangent_interpolation(&f, 12), Err(Error::InsufficientData(_))));
        // Over F_9 it is Hermitian: 28 points, all tangent lines on u1⁴+u2⁴+u3⁴.
        let f9 = FiniteField::new(3, 2).unwrap();
        let r = dual_by_tangent_interpolation(&TernaryQuartic::fermat(f9.clone()), 4).unwrap();
        assert_eq!(r.degree, 4);
        let fermat_u = MultiPoly::from_terms(f9.clone(), u_vars(), [(vec![4, 0, 0], 1), (vec![0, 4, 0], 1), (vec![0, 0, 4], 1)]);
        assert!(r.form.poly.proportionality(&fermat_u).is_some());
    }
}
