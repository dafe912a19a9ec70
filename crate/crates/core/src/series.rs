//! Truncated power series in one variable, stored as coefficient vectors
//! of a fixed length.

use crate::field::Field;
use crate::poly::MultiPoly;

pub type Series<E> = Vec<E>;

pub fn constant<F: Field>(f: &F, c: F::Elem, n: usize) -> Series<F::Elem> {
    let mut out = vec![f.zero(); n];
    if n > 0 {
        out[0] = c;
    }
    out
}

pub fn add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Series<F::Elem> {
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

pub fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Series<F::Elem> {
    a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
}

pub fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Series<F::Elem> {
    let n = a.len().min(b.len());
    let mut out = vec![f.zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    out
}

/// Inverse of a series with unit constant term.
pub fn inv<F: Field>(f: &F, a: &[F::Elem]) -> Option<Series<F::Elem>> {
    let n = a.len();
    let a0 = f.inv(a.first()?)?;
    let mut out = vec![f.zero(); n];
    out[0] = a0.clone();
    for m in 1..n {
        let mut acc = f.zero();
        for k in 1..=m {
            acc = f.add(&acc, &f.mul(&a[k], &out[m - k]));
        }
        out[m] = f.neg(&f.mul(&acc, &a0));
    }
    Some(out)
}

/// Formal derivative; the top coefficient is lost.
pub fn derivative<F: Field>(f: &F, a: &[F::Elem]) -> Series<F::Elem> {
    let n = a.len();
    (0..n)
        .map(|k| {
            if k + 1 < n {
                f.mul(&a[k + 1], &f.from_i64(k as i64 + 1))
            } else {
                f.zero()
            }
        })
        .collect()
}

pub fn valuation<F: Field>(f: &F, a: &[F::Elem]) -> Option<usize> {
    a.iter().position(|x| !f.is_zero(x))
}

/// `p(args)` for a polynomial whose variables are substituted by series.
pub fn eval_poly<F: Field>(p: &MultiPoly<F>, args: &[Series<F::Elem>], n: usize) -> Series<F::Elem> {
    let f = p.field();
    let mut powers: Vec<Vec<Series<F::Elem>>> = args.iter().map(|a| vec![constant(f, f.one(), n), a.clone()]).collect();
    let mut out = vec![f.zero(); n];
    for (e, c) in p.terms() {
        let mut term = constant(f, c.clone(), n);
        for (v, &k) in e.iter().enumerate() {
            let k = k as usize;
            while powers[v].len() <= k {
                let next = mul(f, powers[v].last().expect("nonempty"), &args[v]);
                powers[v].push(next);
            }
            if k > 0 {
                term = mul(f, &term, &powers[v][k]);
            }
        }
        out = add(f, &out, &term);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;

    #[test]
    fn inverse_of_one_minus_t() {
        let f = FiniteField::prime(7).unwrap();
        let a = vec![1, 6, 0, 0, 0];
        assert_eq!(inv(&f, &a).unwrap(), vec![1, 1, 1, 1, 1]);
        assert_eq!(mul(&f, &a, &inv(&f, &a).unwrap()), vec![1, 0, 0, 0, 0]);
        assert!(inv(&f, &[0, 1]).is_none());
    }

    #[test]
    fn derivative_in_char_p() {
        let f = FiniteField::prime(3).unwrap();
        assert_eq!(derivative(&f, &[5, 1, 1, 1, 1]), vec![1, 2, 0, 1, 0]);
        assert_eq!(valuation(&f, &[0, 0, 2]), Some(2));
    }
}
