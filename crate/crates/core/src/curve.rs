//! Rational points and tangent lines of plane quartics over finite fields.

use rayon::prelude::*;

use crate::field::{Embedding, Field, FiniteField};
use crate::quartic::{TernaryQuartic, QUARTIC_EXPONENTS};
use crate::upoly::{roots, UPoly};

/// `f(1, a, Z)` as a polynomial in `Z`.
fn slice_affine(f: &TernaryQuartic<FiniteField>, a: u32) -> UPoly<FiniteField> {
    let field = f.field();
    let mut pow = [1u32; 5];
    for i in 1..5 {
        pow[i] = field.mul_u(pow[i - 1], a);
    }
    let mut c = [0u32; 5];
    for (e, coef) in QUARTIC_EXPONENTS.iter().zip(f.monomial_coeffs()) {
        if *coef == 0 {
            continue;
        }
        let t = field.mul_u(*coef, pow[e[1] as usize]);
        c[e[2] as usize] = field.add_u(c[e[2] as usize], t);
    }
    UPoly::new(field.clone(), c.to_vec())
}

/// Points of `f = 0` over the target of `e`, for `f` over its source.
/// Slices at parameters conjugate under `Gal(target/source)` have equally
/// many roots, so one slice per orbit is counted.
pub fn count_points_extended(f: &TernaryQuartic<FiniteField>, e: &Embedding) -> u64 {
    let g = f.extend(e);
    let field = g.field();
    let q = field.order() as u32;
    let steps = e.source().degree();
    let sigma = |a: u32| (0..steps).fold(a, |b, _| field.frobenius(b));
    let affine: u64 = (0..q)
        .into_par_iter()
        .map(|a| {
            let mut orbit = 1;
            let mut b = sigma(a);
            while b != a {
                if b < a {
                    return 0;
                }
                b = sigma(b);
                orbit += 1;
            }
            orbit * slice_count(field, &slice_affine(&g, a))
        })
        .sum();
    affine + slice_count(field, &slice_infinity(&g)) + u64::from(g.eval(&[0, 0, 1]) == 0)
}

fn slice_count(field: &FiniteField, s: &UPoly<FiniteField>) -> u64 {
    let mut c = [0u32; 5];
    for (i, &x) in s.coeffs().iter().enumerate() {
        c[i] = x;
    }
    count_roots_small(field, &c)
}

/// `f(0, 1, Z)`.
fn slice_infinity(f: &TernaryQuartic<FiniteField>) -> UPoly<FiniteField> {
    let field = f.field();
    let mut c = [0u32; 5];
    for (e, coef) in QUARTIC_EXPONENTS.iter().zip(f.monomial_coeffs()) {
        if e[0] == 0 {
            c[e[2] as usize] = field.add_u(c[e[2] as usize], *coef);
        }
    }
    UPoly::new(field.clone(), c.to_vec())
}

/// All points of `f = 0` in `P²(F_q)`, canonical representatives in
/// enumeration order. A slice that vanishes identically contributes every
/// point of that line.
pub fn rational_points(f: &TernaryQuartic<FiniteField>) -> Vec<[u32; 3]> {
    let field = f.field();
    let q = field.order() as u32;
    let mut pts: Vec<[u32; 3]> = (0..q)
        .into_par_iter()
        .flat_map_iter(|a| {
            let s = slice_affine(f, a);
            let zs: Vec<u32> = if s.is_zero() { (0..q).collect() } else { roots(&s) };
            zs.into_iter().map(move |b| [1, a, b])
        })
        .collect();
    let s = slice_infinity(f);
    if s.is_zero() {
        pts.extend((0..q).map(|b| [0, 1, b]));
    } else {
        pts.extend(roots(&s).into_iter().map(|b| [0, 1, b]));
    }
    if f.eval(&[0, 0, 1]) == 0 {
        pts.push([0, 0, 1]);
    }
    pts
}

/// `a·b mod g` for residues of degree `< d`, `g` monic of degree `d ≤ 4`.
fn mulmod4(field: &FiniteField, a: &[u32; 4], b: &[u32; 4], g: &[u32; 5], d: usize) -> [u32; 4] {
    let mut t = [0u32; 8];
    for i in 0..d {
        if a[i] == 0 {
            continue;
        }
        for j in 0..d {
            t[i + j] = field.add_u(t[i + j], field.mul_u(a[i], b[j]));
        }
    }
    for k in (d..2 * d - 1).rev() {
        let c = t[k];
        if c == 0 {
            continue;
        }
        for i in 0..d {
            t[k - d + i] = field.sub_u(t[k - d + i], field.mul_u(c, g[i]));
        }
    }
    let mut out = [0u32; 4];
    out[..d].copy_from_slice(&t[..d]);
    out
}

fn degree_of(c: &[u32]) -> Option<usize> {
    c.iter().rposition(|&x| x != 0)
}

/// Distinct roots in `F_q` of `c0 + c1 Z + … + c4 Z⁴` (not all zero):
/// `deg gcd(g, Z^q − Z)` computed on fixed-size arrays.
fn count_roots_small(field: &FiniteField, c: &[u32; 5]) -> u64 {
    let Some(d) = degree_of(c) else { return field.order() };
    if d <= 1 {
        return d as u64;
    }
    let lead = field.inv_u(c[d]).expect("nonzero leading coefficient");
    let mut g = [0u32; 5];
    for i in 0..=d {
        g[i] = field.mul_u(c[i], lead);
    }
    // Z^p by square-and-multiply, then Z^{p^{i+1}} = Σ frob(h_j)·Z^{jp} from
    // Z^{p^i} = Σ h_j Z^j.
    let mut z = [0u32; 4];
    z[1] = 1;
    let mut zp = [0u32; 4];
    zp[0] = 1;
    let mut base = z;
    let mut e = field.p();
    while e > 0 {
        if e & 1 == 1 {
            zp = mulmod4(field, &zp, &base, &g, d);
        }
        e >>= 1;
        if e > 0 {
            base = mulmod4(field, &base, &base, &g, d);
        }
    }
    let mut powers = [[0u32; 4]; 4];
    powers[0][0] = 1;
    for j in 1..d {
        powers[j] = mulmod4(field, &powers[j - 1], &zp, &g, d);
    }
    let mut acc = zp;
    for _ in 1..field.degree() {
        let mut next = [0u32; 4];
        for j in 0..d {
            let c = field.frobenius(acc[j]);
            if c == 0 {
                continue;
            }
            for i in 0..d {
                next[i] = field.add_u(next[i], field.mul_u(c, powers[j][i]));
            }
        }
        acc = next;
    }
    acc[1] = field.sub_u(acc[1], 1);
    // Euclid on (g, acc) with remainders kept in place.
    let mut a: Vec<u32> = g[..=d].to_vec();
    let mut b: Vec<u32> = acc[..d].to_vec();
    loop {
        let Some(db) = degree_of(&b) else {
            return degree_of(&a).unwrap_or(0) as u64;
        };
        b.truncate(db + 1);
        let inv = field.inv_u(b[db]).expect("nonzero leading coefficient");
        while let Some(da) = degree_of(&a).filter(|&da| da >= db) {
            let s = field.mul_u(a[da], inv);
            for i in 0..=db {
                a[da - db + i] = field.sub_u(a[da - db + i], field.mul_u(s, b[i]));
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
}

/// Number of points of `f = 0` in `P²(F_q)`.
pub fn count_points(f: &TernaryQuartic<FiniteField>) -> u64 {
    let field = f.field();
    let q = field.order() as u32;
    let affine: u64 = (0..q).into_par_iter().map(|a| slice_count(field, &slice_affine(f, a))).sum();
    affine + slice_count(field, &slice_infinity(f)) + u64::from(f.eval(&[0, 0, 1]) == 0)
}

/// `∇f(P)`.
pub fn gradient_at<F: Field>(f: &TernaryQuartic<F>, p: &[F::Elem; 3]) -> [F::Elem; 3] {
    let field = f.field();
    let mut g: [F::Elem; 3] = std::array::from_fn(|_| field.zero());
    for (e, c) in QUARTIC_EXPONENTS.iter().zip(f.monomial_coeffs()) {
        if field.is_zero(c) {
            continue;
        }
        for v in 0..3 {
            if e[v] == 0 {
                continue;
            }
            let mut t = field.mul(c, &field.from_i64(e[v] as i64));
            for w in 0..3 {
                let k = if w == v { e[w] - 1 } else { e[w] };
                if k > 0 {
                    t = field.mul(&t, &field.pow(&p[w], k as u64));
                }
            }
            g[v] = field.add(&g[v], &t);
        }
    }
    g
}

/// Normalized tangent line at a smooth point, `None` at a singular point.
pub fn tangent_line<F: Field>(f: &TernaryQuartic<F>, p: &[F::Elem; 3]) -> Option<[F::Elem; 3]> {
    crate::proj::normalize(f.field(), &gradient_at(f, p))
}
