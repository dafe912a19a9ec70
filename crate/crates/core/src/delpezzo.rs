//! The degree-2 del Pezzo double cover `w² = K1(u)` and its branch quartic.

use std::sync::Arc;

use serde::Serialize;

use crate::binary::{invariant_s, invariant_t, BinaryQuartic};
use crate::contravariant::{k1_expanded, DualForm};
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, FiniteField, Rationals};
use crate::poly::MultiPoly;
use crate::quartic::TernaryQuartic;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointType {
    SmoothBranch,
    Node,
    Cusp,
    TacnodeOrWorse,
    TriplePoint,
    ConePoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    SmoothDelPezzo,
    RdpDelPezzo,
    SimplyElliptic,
    Degenerate,
    /// Reductions modulo different primes disagree, or no singular point
    /// of a singular branch was located within the extension cap.
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchSingularity {
    pub field: FieldSpec,
    pub point: [u32; 3],
    pub kind: PointType,
    pub multiplicity: u32,
}

/// The tangent cone at a multiplicity-4 point: four concurrent lines given
/// by a binary quartic in local coordinates, with its invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeData {
    pub point: [u32; 3],
    pub binary_monomial: [u32; 5],
    pub s: u32,
    pub t: u32,
    /// `S³ − 6T²`; nonzero when the four lines are distinct.
    pub discriminant: u32,
}

#[derive(Clone, Debug)]
pub struct DoubleCoverSurface<F: Field> {
    pub branch_quartic: DualForm<F>,
    pub branch_singularities: Vec<BranchSingularity>,
    pub classification: Classification,
    pub reported_index: u8,
    pub cone: Option<ConeData>,
    /// Primes used for reductions of a curve over ℚ.
    pub primes: Vec<u64>,
}

/// Index of the del Pezzo surface as stated for the two cases: 2 exactly in
/// characteristic 3. Reported, not recomputed.
pub fn classify_index(characteristic: u64) -> Result<u8> {
    match characteristic {
        2 => Err(Error::unsupported(2, "the double cover is inseparable in characteristic 2")),
        3 => Ok(2),
        _ => Ok(1),
    }
}

/// A reduced quartic has at most 6 singular points.
const MAX_REDUCED_SINGULARITIES: usize = 6;

/// Extension degrees tried when the branch is singular but no singular
/// point is rational.
const MAX_SEARCH_ORDER: u64 = 1 << 16;

/// `g(P + a·e_j + b·e_k)` with `P_i = 1`, as a polynomial in `a, b`.
fn local_expansion(g: &MultiPoly<FiniteField>, p: &[u32; 3]) -> MultiPoly<FiniteField> {
    let field = g.field();
    let i = p.iter().position(|&x| x != 0).expect("nonzero point");
    let others: Vec<usize> = (0..3).filter(|&j| j != i).collect();
    let vars: Arc<[String]> = ["a", "b"].iter().map(|s| s.to_string()).collect();
    let images: Vec<MultiPoly<FiniteField>> = (0..3)
        .map(|c| {
            let mut terms = vec![(vec![0, 0], p[c])];
            if c == others[0] {
                terms.push((vec![1, 0], 1));
            }
            if c == others[1] {
                terms.push((vec![0, 1], 1));
            }
            MultiPoly::from_terms(field.clone(), vars.clone(), terms)
        })
        .collect();
    g.compose(&images).expect("three images")
}

fn homogeneous_part(g: &MultiPoly<FiniteField>, d: u16) -> [u32; 5] {
    let mut out = [0u32; 5];
    for (e, c) in g.terms() {
        if e[0] + e[1] == d {
            out[e[1] as usize] = *c;
        }
    }
    out
}

/// Multiplicity and type of the point `p` of the plane quartic `g`.
pub fn classify_point(g: &MultiPoly<FiniteField>, p: &[u32; 3]) -> (u32, PointType) {
    let field = g.field();
    let local = local_expansion(g, p);
    let m = local.terms().keys().map(|e| e[0] + e[1]).min().unwrap_or(4);
    let kind = match m {
        0 | 1 => PointType::SmoothBranch,
        2 => {
            // Quadratic part α a² + β ab + γ b²: slot k holds the b^k term.
            let q = homogeneous_part(&local, 2);
            let (al, be, ga) = (q[0], q[1], q[2]);
            let disc = field.sub_u(field.mul_u(be, be), field.mul_u(field.from_u64(4), field.mul_u(al, ga)));
            if disc != 0 {
                PointType::Node
            } else {
                // Tangent cone ℓ²; cusp iff ℓ does not divide the cubic part.
                let c = homogeneous_part(&local, 3);
                let (x, y) = if al != 0 {
                    // ℓ = 2αa + βb vanishes at (a, b) = (−β, 2α).
                    (field.neg_u(be), field.add_u(al, al))
                } else {
                    (1, 0)
                };
                let cubic_at = (0..4).fold(0, |acc, k| {
                    let term = field.mul_u(c[k], field.mul_u(field.pow(&x, 3 - k as u64), field.pow(&y, k as u64)));
                    field.add_u(acc, term)
                });
                if cubic_at != 0 {
                    PointType::Cusp
                } else {
                    PointType::TacnodeOrWorse
                }
            }
        }
        3 => PointType::TriplePoint,
        _ => PointType::ConePoint,
    };
    (m as u32, kind)
}

/// Rational singular points of `g`.
pub fn singular_points(g: &MultiPoly<FiniteField>) -> Vec<[u32; 3]> {
    let field = g.field();
    let grad = g.gradient();
    crate::proj::points(field)
        .filter(|p| g.eval(p).expect("three variables") == 0 && grad.iter().all(|d| d.eval(p).expect("three variables") == 0))
        .collect()
}

fn cone_data(g: &MultiPoly<FiniteField>, p: &[u32; 3]) -> Result<ConeData> {
    let field = g.field();
    let local = local_expansion(g, p);
    let c = homogeneous_part(&local, 4);
    let bq = BinaryQuartic::from_monomial(field.clone(), c);
    let (s, t) = match (invariant_s(&bq), invariant_t(&bq)) {
        (Ok(s), Ok(t)) => (s, t),
        _ => (0, 0),
    };
    let disc = field.sub_u(field.pow(&s, 3), field.mul_u(field.from_u64(6), field.mul_u(t, t)));
    Ok(ConeData {
        point: *p,
        binary_monomial: c,
        s,
        t,
        discriminant: disc,
    })
}

struct Located {
    singularities: Vec<BranchSingularity>,
    classification: Classification,
    cone: Option<ConeData>,
}

fn classify_from(singularities: &[BranchSingularity]) -> Classification {
    if singularities.len() > MAX_REDUCED_SINGULARITIES {
        return Classification::Degenerate;
    }
    if singularities.iter().any(|s| s.kind == PointType::ConePoint) {
        return Classification::SimplyElliptic;
    }
    if singularities.iter().any(|s| s.kind == PointType::TriplePoint) {
        return Classification::Degenerate;
    }
    Classification::RdpDelPezzo
}

/// Locates the singular points of a singular branch quartic over `F_q`,
/// widening the field until some are found.
fn locate(k1: &MultiPoly<FiniteField>) -> Result<Located> {
    let base = k1.field().clone();
    let mut k = base.degree();
    loop {
        let field = FiniteField::new(base.p(), k)?;
        let emb = base.embedding_into(&field)?;
        let g = k1.map_coeffs(field.clone(), |c| emb.map(*c));
        let pts = singular_points(&g);
        if !pts.is_empty() {
            let singularities: Vec<BranchSingularity> = pts
                .iter()
                .map(|p| {
                    let (multiplicity, kind) = classify_point(&g, p);
                    BranchSingularity {
                        field: field.spec(),
                        point: *p,
                        kind,
                        multiplicity,
                    }
                })
                .collect();
            let cone = match singularities.iter().find(|s| s.kind == PointType::ConePoint) {
                Some(s) => Some(cone_data(&g, &s.point)?),
                None => None,
            };
            return Ok(Located {
                classification: classify_from(&singularities),
                singularities,
                cone,
            });
        }
        k += base.degree();
        if base.p().checked_pow(k).map_or(true, |q| q > MAX_SEARCH_ORDER) {
            return Ok(Located {
                singularities: Vec::new(),
                classification: Classification::Undetermined,
                cone: None,
            });
        }
    }
}

/// The branch quartic `K1` of `f` over a finite field and its
/// classification.
pub fn branch_quartic_surface(f: &TernaryQuartic<FiniteField>) -> Result<DoubleCoverSurface<FiniteField>> {
    let reported_index = classify_index(f.field().characteristic())?;
    f.require_smooth()?;
    let k1 = k1_expanded(f)?;
    let located = classify_branch(&k1.poly)?;
    Ok(DoubleCoverSurface {
        branch_quartic: k1,
        branch_singularities: located.singularities,
        classification: located.classification,
        reported_index,
        cone: located.cone,
        primes: Vec::new(),
    })
}

fn classify_branch(k1: &MultiPoly<FiniteField>) -> Result<Located> {
    if k1.is_zero() {
        return Ok(Located {
            singularities: Vec::new(),
            classification: Classification::Degenerate,
            cone: None,
        });
    }
    if TernaryQuartic::from_poly(k1)?.is_smooth() {
        return Ok(Located {
            singularities: Vec::new(),
            classification: Classification::SmoothDelPezzo,
            cone: None,
        });
    }
    locate(k1)
}

/// Primes used for curves over ℚ.
pub const REDUCTION_PRIMES: [u64; 3] = [101, 103, 107];

/// Over ℚ: `K1` is computed exactly and classified modulo three primes; the
/// classification is reported only if all three agree.
pub fn branch_quartic_surface_rational(f: &TernaryQuartic<Rationals>) -> Result<DoubleCoverSurface<Rationals>> {
    f.require_smooth()?;
    let k1 = k1_expanded(f)?;
    let mut results = Vec::new();
    let mut primes = Vec::new();
    let mut candidates = (REDUCTION_PRIMES[0]..).filter(|&p| crate::field::is_prime(p));
    while primes.len() < 3 {
        let p = candidates.next().expect("infinitely many primes");
        let fp = FiniteField::prime(p)?;
        let Some(red) = reduce_poly(&k1.poly, &fp) else {
            continue;
        };
        let Ok(fr) = f.reduce(&fp) else {
            continue;
        };
        if !fr.is_smooth() {
            continue;
        }
        results.push(classify_branch(&red)?);
        primes.push(p);
    }
    let first = results[0].classification;
    let agree = results.iter().all(|r| r.classification == first);
    let located = results.swap_remove(0);
    Ok(DoubleCoverSurface {
        branch_quartic: k1,
        branch_singularities: located.singularities,
        classification: if agree { first } else { Classification::Undetermined },
        reported_index: classify_index(0)?,
        cone: located.cone,
        primes,
    })
}

fn reduce_poly(p: &MultiPoly<Rationals>, fp: &FiniteField) -> Option<MultiPoly<FiniteField>> {
    let mut ok = true;
    let out = p.map_coeffs(fp.clone(), |c| {
        fp.from_rational(c).unwrap_or_else(|| {
            ok = false;
            0
        })
    });
    ok.then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn index_by_characteristic() {
        assert_eq!(classify_index(0).unwrap(), 1);
        assert_eq!(classify_index(3).unwrap(), 2);
        assert_eq!(classify_index(5).unwrap(), 1);
        assert!(classify_index(2).is_err());
    }

    #[test]
    fn cone_example_is_simply_elliptic() {
        let f = TernaryQuartic::cone_example(FiniteField::prime(13).unwrap());
        let s = branch_quartic_surface(&f).unwrap();
        assert_eq!(s.classification, Classification::SimplyElliptic);
        let cone = s.cone.unwrap();
        assert_eq!(cone.point, [0, 0, 1]);
        assert_ne!(cone.discriminant, 0);
        let q = branch_quartic_surface_rational(&TernaryQuartic::cone_example(Rationals)).unwrap();
        assert_eq!(q.classification, Classification::SimplyElliptic);
        assert_eq!(q.reported_index, 1);
    }

    #[test]
    fn fermat_is_smooth_del_pezzo() {
        let s = branch_quartic_surface_rational(&TernaryQuartic::fermat(Rationals)).unwrap();
        assert_eq!(s.classification, Classification::SmoothDelPezzo);
        let s3 = branch_quartic_surface(&TernaryQuartic::fermat(FiniteField::new(3, 2).unwrap())).unwrap();
        assert_eq!(s3.reported_index, 2);
    }

    #[test]
    fn generic_rational_curve_is_smooth_del_pezzo() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = TernaryQuartic::random_smooth(Rationals, &mut rng);
        let s = branch_quartic_surface_rational(&f).unwrap();
        assert_eq!(s.classification, Classification::SmoothDelPezzo);
        assert_eq!(s.primes.len(), 3);
    }

    #[test]
    fn point_types() {
        let field = FiniteField::prime(7).unwrap();
        let vars = crate::umbral::u_vars();
        let poly = |terms: &[([u16; 3], u32)]| {
            MultiPoly::from_terms(field.clone(), vars.clone(), terms.iter().map(|(e, c)| (e.to_vec(), *c)))
        };
        // Node: z²(xy) + x⁴ + y⁴ at (0,0,1).
        let node = poly(&[([1, 1, 2], 1), ([4, 0, 0], 1), ([0, 4, 0], 1)]);
        assert_eq!(classify_point(&node, &[0, 0, 1]), (2, PointType::Node));
        // Cusp: y²z² − x³z + y⁴, locally y² − x³.
        let cusp = poly(&[([0, 2, 2], 1), ([3, 0, 1], 6), ([0, 4, 0], 1)]);
        assert_eq!(classify_point(&cusp, &[0, 0, 1]), (2, PointType::Cusp));
        // Tacnode: y²z² − x⁴ − y⁴, locally y² − x⁴ − y⁴.
        let tac = poly(&[([0, 2, 2], 1), ([4, 0, 0], 6), ([0, 4, 0], 6)]);
        assert_eq!(classify_point(&tac, &[0, 0, 1]), (2, PointType::TacnodeOrWorse));
        let triple = poly(&[([3, 0, 1], 1), ([0, 3, 1], 1), ([4, 0, 0], 1)]);
        assert_eq!(classify_point(&triple, &[0, 0, 1]).1, PointType::TriplePoint);
    }
}
