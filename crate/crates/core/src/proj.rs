//! Projective points and lines over finite fields.

use crate::field::{Field, FiniteField};

/// Canonical representatives of `P²(F_q)`: `(1, a, b)`, then `(0, 1, b)`,
/// then `(0, 0, 1)`.
pub fn points(field: &FiniteField) -> impl Iterator<Item = [u32; 3]> {
    let q = field.order() as u32;
    let affine = (0..q).flat_map(move |a| (0..q).map(move |b| [1, a, b]));
    let infinity = (0..q).map(|b| [0, 1, b]);
    affine.chain(infinity).chain(std::iter::once([0, 0, 1]))
}

pub fn count(field: &FiniteField) -> u64 {
    let q = field.order();
    q * q + q + 1
}

/// The `i`-th point in the order of [`points`].
pub fn point_at(field: &FiniteField, i: u64) -> [u32; 3] {
    let q = field.order();
    if i < q * q {
        [1, (i / q) as u32, (i % q) as u32]
    } else if i < q * q + q {
        [0, 1, (i - q * q) as u32]
    } else {
        [0, 0, 1]
    }
}

/// Scales so that the first nonzero coordinate is 1; `None` for zero.
pub fn normalize<F: Field>(field: &F, v: &[F::Elem; 3]) -> Option<[F::Elem; 3]> {
    let lead = v.iter().find(|c| !field.is_zero(c))?;
    let inv = field.inv(lead)?;
    Some([field.mul(&v[0], &inv), field.mul(&v[1], &inv), field.mul(&v[2], &inv)])
}

pub fn cross<F: Field>(field: &F, a: &[F::Elem; 3], b: &[F::Elem; 3]) -> [F::Elem; 3] {
    let m = |x: &F::Elem, y: &F::Elem, z: &F::Elem, w: &F::Elem| field.sub(&field.mul(x, y), &field.mul(z, w));
    [m(&a[1], &b[2], &a[2], &b[1]), m(&a[2], &b[0], &a[0], &b[2]), m(&a[0], &b[1], &a[1], &b[0])]
}

pub fn dot<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    a.iter().zip(b).fold(field.zero(), |acc, (x, y)| field.add(&acc, &field.mul(x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_matches_indexing() {
        let f = FiniteField::new(2, 2).unwrap();
        let all: Vec<_> = points(&f).collect();
        assert_eq!(all.len() as u64, count(&f));
        for (i, p) in all.iter().enumerate() {
            assert_eq!(point_at(&f, i as u64), *p);
            assert_eq!(normalize(&f, p).unwrap(), *p);
        }
    }
}
