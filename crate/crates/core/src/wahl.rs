//! The Wahl–Gauss map `∧²H⁰(K) → H⁰(3K)`, `s∧t ↦ s dt − t ds`, of a
//! smooth plane quartic.
//!
//! `H⁰(K)` is the space of linear forms. In the chart `z = 1` with
//! `ω0 = dx/f_y` one has `dt = (t_x f_y − t_y f_x)·ω0` on the curve, so
//! `s dt − t ds = E·ω0³` with
//! `E = s(t_x f_y − t_y f_x) − t(s_x f_y − s_y f_x)`, a quartic. Since `ω0`
//! corresponds to `z`, the image is the cubic `C` with `E ≡ z·C` modulo
//! `f`. That congruence is solved exactly, without Euler's identity, which
//! collapses in characteristic 2.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Field, FiniteField, Rationals};
use crate::matrix::MatrixF;
use crate::poly::{monomials, MultiPoly};
use crate::quartic::{xyz_vars, TernaryQuartic};
use crate::series::{self, Series};
use crate::upoly::{roots, UPoly};

/// Domain basis, in matrix row order.
pub const WEDGE_BASIS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];
pub const WEDGE_LABELS: [&str; 3] = ["x^y", "x^z", "y^z"];

/// Points of the curve used to confirm each cubic representative.
pub const VALIDATION_POINTS: usize = 20;
/// Series are compared in degrees `0..=VALIDATION_ORDER`.
pub const VALIDATION_ORDER: usize = 12;

#[derive(Clone, Debug)]
pub struct WahlData<F: Field> {
    pub curve: TernaryQuartic<F>,
    /// 3×10: rows `x∧y, x∧z, y∧z`, columns the cubic monomials in
    /// [`cubic_monomials`] order.
    pub matrix: MatrixF<F>,
    pub kernel_dim: usize,
    /// Field over which the representatives were confirmed.
    pub validation_field: String,
    pub validated_points: usize,
}

/// `x³, x²y, x²z, xy², xyz, xz², y³, y²z, yz², z³`.
pub fn cubic_monomials() -> Vec<Vec<u16>> {
    monomials(3, 3)
}

fn linear<F: Field>(field: &F, i: usize) -> MultiPoly<F> {
    MultiPoly::var(field.clone(), xyz_vars(), i)
}

/// The cubic representative of `s dt − t ds`.
pub fn wahl_cubic<F: Field>(f: &TernaryQuartic<F>, s: &MultiPoly<F>, t: &MultiPoly<F>) -> Result<MultiPoly<F>> {
    let field = f.field();
    let fp = f.to_poly();
    let (fx, fy) = (fp.partial(0), fp.partial(1));
    let jac = |u: &MultiPoly<F>| fy.mul(&u.partial(0)).sub(&fx.mul(&u.partial(1)));
    let e = s.mul(&jac(t)).sub(&t.mul(&jac(s)));
    // λ with E − λf free of z-less monomials, i.e. E(x, y, 0) = λ f(x, y, 0).
    let restrict = |p: &MultiPoly<F>| {
        let mut out = MultiPoly::zero(field.clone(), xyz_vars());
        for (ex, c) in p.terms() {
            if ex[2] == 0 {
                out.add_term(ex.clone(), c.clone());
            }
        }
        out
    };
    let (e0, f0) = (restrict(&e), restrict(&fp));
    if f0.is_zero() {
        return Err(Error::Singular("z divides f".into()));
    }
    let lambda = if e0.is_zero() {
        field.zero()
    } else {
        e0.proportionality(&f0)
            .ok_or_else(|| Error::Inconsistent("E(x, y, 0) is not a multiple of f(x, y, 0)".into()))?
    };
    let rem = e.sub(&fp.scale(&lambda));
    let mut cubic = MultiPoly::zero(field.clone(), xyz_vars());
    for (ex, c) in rem.terms() {
        if ex[2] == 0 {
            return Err(Error::Inconsistent("E − λf is not divisible by z".into()));
        }
        let mut lowered = ex.clone();
        lowered[2] -= 1;
        cubic.add_term(lowered, c.clone());
    }
    Ok(cubic)
}

/// Wahl matrix of `f` without series validation.
pub fn wahl_matrix<F: Field>(f: &TernaryQuartic<F>) -> Result<(MatrixF<F>, Vec<MultiPoly<F>>)> {
    f.require_smooth()?;
    let field = f.field();
    let mons = cubic_monomials();
    let mut cubics = Vec::new();
    let mut rows = Vec::new();
    for &(i, j) in &WEDGE_BASIS {
        let c = wahl_cubic(f, &linear(field, i), &linear(field, j))?;
        rows.push(mons.iter().map(|m| c.coeff(m)).collect());
        cubics.push(c);
    }
    Ok((MatrixF::from_rows(field.clone(), rows)?, cubics))
}

/// Wahl data for a quartic over a finite field, with the representatives
/// confirmed over an extension of order at least `2^14` when one fits.
pub fn wahl_kernel_dim(f: &TernaryQuartic<FiniteField>) -> Result<WahlData<FiniteField>> {
    let (matrix, cubics) = wahl_matrix(f)?;
    let base = f.field();
    let big = validation_extension(base)?;
    let emb = base.embedding_into(&big)?;
    let g = f.extend(&emb);
    let lifted: Vec<MultiPoly<FiniteField>> = cubics.iter().map(|c| c.map_coeffs(big.clone(), |x| emb.map(*x))).collect();
    let checked = validate(&g, &lifted, VALIDATION_POINTS)?;
    let kernel_dim = 3 - matrix.rank();
    Ok(WahlData {
        curve: f.clone(),
        matrix,
        kernel_dim,
        validation_field: big.spec().to_string(),
        validated_points: checked,
    })
}

fn validation_extension(base: &FiniteField) -> Result<FiniteField> {
    let (p, d) = (base.p(), base.degree());
    let mut m = d;
    while p.pow(m) < 1 << 14 {
        if p.pow(m + d) > crate::field::MAX_TABLE_ORDER {
            break;
        }
        m += d;
    }
    FiniteField::new(p, m)
}

/// Primes tried for the rational case; the first of good reduction is used.
const VALIDATION_PRIMES_FROM: u64 = 1_000_003;

/// Wahl data over ℚ; representatives are confirmed modulo a large prime.
pub fn wahl_kernel_dim_rational(f: &TernaryQuartic<Rationals>) -> Result<WahlData<Rationals>> {
    let (matrix, cubics) = wahl_matrix(f)?;
    let mut checked = None;
    for p in (VALIDATION_PRIMES_FROM..).filter(|&p| crate::field::is_prime(p)).take(20) {
        let fp = FiniteField::prime(p)?;
        let Ok(g) = f.reduce(&fp) else { continue };
        if !g.is_smooth() {
            continue;
        }
        let mut bad = false;
        let reduced: Vec<MultiPoly<FiniteField>> = cubics
            .iter()
            .map(|c| {
                c.map_coeffs(fp.clone(), |x| {
                    fp.from_rational(x).unwrap_or_else(|| {
                        bad = true;
                        0
                    })
                })
            })
            .collect();
        if bad {
            continue;
        }
        checked = Some((fp.spec().to_string(), validate(&g, &reduced, VALIDATION_POINTS)?));
        break;
    }
    let (validation_field, validated_points) =
        checked.ok_or_else(|| Error::InsufficientData("no prime of good reduction found".into()))?;
    let kernel_dim = 3 - matrix.rank();
    Ok(WahlData {
        curve: f.clone(),
        matrix,
        kernel_dim,
        validation_field,
        validated_points,
    })
}

/// Branch `y(τ)` through `(x0, y0)` with `x = x0 + τ` in the chart `z = 1`.
fn branch(f: &MultiPoly<FiniteField>, fy: &MultiPoly<FiniteField>, x0: u32, y0: u32, n: usize) -> Result<Series<u32>> {
    let field = f.field();
    let mut xs = series::constant(field, x0, n);
    if n > 1 {
        xs[1] = 1;
    }
    let zs = series::constant(field, 1, n);
    let mut ys = series::constant(field, y0, n);
    // Newton's method doubles the precision each round.
    let mut prec = 1;
    while prec < n {
        let val = series::eval_poly(f, &[xs.clone(), ys.clone(), zs.clone()], n);
        let der = series::eval_poly(fy, &[xs.clone(), ys.clone(), zs.clone()], n);
        let inv = series::inv(field, &der).ok_or_else(|| Error::Inconsistent("f_y vanishes at the base point".into()))?;
        ys = series::sub(field, &ys, &series::mul(field, &val, &inv));
        prec *= 2;
    }
    let val = series::eval_poly(f, &[xs, ys.clone(), zs], n);
    if series::valuation(field, &val).is_some() {
        return Err(Error::Inconsistent("branch did not converge".into()));
    }
    Ok(ys)
}

/// Compares `s t′ − t s′` with `C/f_y` along local branches at up to
/// `count` random points of the chart `z = 1` where `f_y ≠ 0`.
pub fn validate(f: &TernaryQuartic<FiniteField>, cubics: &[MultiPoly<FiniteField>], count: usize) -> Result<usize> {
    let field = f.field().clone();
    let fp = f.to_poly();
    let fy = fp.partial(1);
    let q = field.order();
    let mut rng = ChaCha8Rng::seed_from_u64(0x3a11);
    let mut points = Vec::new();
    let mut attempts = 0;
    while points.len() < count && attempts < 50 * count.max(1) && (attempts as u64) < 4 * q {
        attempts += 1;
        let x0 = rng.gen_range(0..q) as u32;
        let coeffs: Vec<u32> = (0..=4u16)
            .map(|k| {
                fp.terms()
                    .iter()
                    .filter(|(e, _)| e[1] == k)
                    .fold(0, |acc, (e, c)| field.add_u(acc, field.mul_u(*c, field.pow(&x0, e[0] as u64))))
            })
            .collect();
        let slice = UPoly::new(field.clone(), coeffs);
        if slice.is_zero() {
            continue;
        }
        for y0 in roots(&slice) {
            let pt = [x0, y0, 1];
            if fy.eval(&pt)? != 0 && !points.contains(&(x0, y0)) {
                points.push((x0, y0));
                break;
            }
        }
    }
    let n = VALIDATION_ORDER + 2;
    points
        .par_iter()
        .map(|&(x0, y0)| -> Result<()> {
            let ys = branch(&fp, &fy, x0, y0, n)?;
            let mut xs = series::constant(&field, x0, n);
            xs[1] = 1;
            let zs = series::constant(&field, 1, n);
            let args = [xs, ys, zs];
            let fy_s = series::eval_poly(&fy, &args, n);
            let fy_inv = series::inv(&field, &fy_s).expect("f_y(P) ≠ 0");
            for (&(i, j), c) in WEDGE_BASIS.iter().zip(cubics) {
                let s = &args[i];
                let t = &args[j];
                let lhs = series::sub(
                    &field,
                    &series::mul(&field, s, &series::derivative(&field, t)),
                    &series::mul(&field, t, &series::derivative(&field, s)),
                );
                let rhs = series::mul(&field, &series::eval_poly(c, &args, n), &fy_inv);
                if lhs[..=VALIDATION_ORDER] != rhs[..=VALIDATION_ORDER] {
                    return Err(Error::Inconsistent(format!(
                        "cubic for {} disagrees with s dt − t ds at ({x0}, {y0})",
                        WEDGE_LABELS[WEDGE_BASIS.iter().position(|w| *w == (i, j)).expect("basis pair")]
                    )));
                }
            }
            Ok(())
        })
        .collect::<Result<Vec<()>>>()?;
    Ok(points.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `det(∇s, ∇t, ∇f)`, the classical closed form of the representative.
    fn det_oracle<F: Field>(f: &TernaryQuartic<F>, i: usize, j: usize) -> MultiPoly<F> {
        let k = 3 - i - j;
        let grad = f.to_poly().gradient();
        // Permutation sign of (i, j, k).
        let sign = if (i, j, k) == (0, 1, 2) || (i, j, k) == (1, 2, 0) || (i, j, k) == (2, 0, 1) {
            1
        } else {
            -1
        };
        grad[k].scale(&f.field().from_i64(sign))
    }

    #[test]
    fn representatives_match_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for p in [2u64, 3, 5, 13] {
            let field = FiniteField::prime(p).unwrap();
            for _ in 0..5 {
                let f = TernaryQuartic::random_smooth(field.clone(), &mut rng);
                let (_, cubics) = wahl_matrix(&f).unwrap();
                for (&(i, j), c) in WEDGE_BASIS.iter().zip(&cubics) {
                    assert_eq!(*c, det_oracle(&f, i, j));
                }
            }
        }
    }

    #[test]
    fn fermat_over_q() {
        let f = TernaryQuartic::fermat(Rationals);
        let d = wahl_kernel_dim_rational(&f).unwrap();
        assert_eq!(d.kernel_dim, 0);
        assert_eq!(d.validated_points, VALIDATION_POINTS);
    }

    #[test]
    fn klein_over_f2() {
        let f = TernaryQuartic::klein(FiniteField::prime(2).unwrap());
        let d = wahl_kernel_dim(&f).unwrap();
        assert_eq!(d.kernel_dim, 0);
        assert_eq!(d.matrix.rows(), 3);
        assert_eq!(d.matrix.cols(), 10);
        assert_eq!(d.validated_points, VALIDATION_POINTS);
    }

    #[test]
    fn singular_rejected() {
        let f = TernaryQuartic::from_terms(FiniteField::prime(5).unwrap(), &[([4, 0, 0], 1)]);
        assert!(matches!(wahl_kernel_dim(&f), Err(Error::Singular(_))));
    }

    #[test]
    fn alternating() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let field = FiniteField::prime(7).unwrap();
        let f = TernaryQuartic::random_smooth(field.clone(), &mut rng);
        let (x, y) = (linear(&field, 0), linear(&field, 1));
        let a = wahl_cubic(&f, &x, &y).unwrap();
        let b = wahl_cubic(&f, &y, &x).unwrap();
        assert_eq!(a, b.neg());
        assert!(wahl_cubic(&f, &x, &x).unwrap().is_zero());
    }

    #[test]
    fn wrong_representative_is_caught() {
        let field = FiniteField::new(5, 6).unwrap();
        let f = TernaryQuartic::fermat(field.clone());
        let (_, mut cubics) = wahl_matrix(&f).unwrap();
        cubics[0] = cubics[0].add(&linear(&field, 0).pow(3));
        assert!(matches!(validate(&f, &cubics, 5), Err(Error::Inconsistent(_))));
    }
}
