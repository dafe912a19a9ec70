//! Bitangents, flexes and the Plücker identities of smooth plane quartics
//! over finite fields.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::binary::{line_basis, BinaryQuartic, RestrictionTag};
use crate::contravariant::{evaluation_matrix, form_from_vector, k1_expanded, DualForm, Provenance};
use crate::curve::{rational_points, tangent_line};
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, FiniteField, MAX_TABLE_ORDER};
use crate::matrix::MatrixF;
use crate::poly::MultiPoly;
use crate::quartic::{TernaryQuartic, QUARTIC_EXPONENTS};
use crate::series::{self, Series};
use crate::upoly::UPoly;

/// Default escalation cap on `p^k`.
pub const DEFAULT_CAP: u64 = 1 << 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Completeness {
    Complete,
    Partial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LineKind {
    Ordinary,
    Hyperflex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BitangentRecord {
    pub line: [u32; 3],
    pub kind: LineKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineCensus {
    pub delta1: usize,
    pub delta2: usize,
    pub lines: Vec<BitangentRecord>,
    pub completeness: Completeness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlexRecord {
    pub point: [u32; 3],
    pub tangent: [u32; 3],
    /// 3 for a flex, 4 for a hyperflex.
    pub contact: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointCensus {
    /// Rational ordinary flexes.
    pub kappa: usize,
    /// Rational hyperflex points.
    pub hyperflexes: usize,
    pub points: usize,
    pub flexes: Vec<FlexRecord>,
    /// Weighted total equals the expected geometric total (24 with
    /// hyperflexes counted twice, or 8 unweighted in characteristic 3).
    pub completeness: Completeness,
}

/// Flex counts over the algebraic closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GeometricFlexes {
    /// Distinct points with contact at least 3.
    pub flex_points: usize,
    /// Distinct points with contact 4.
    pub hyperflex_points: usize,
}

impl GeometricFlexes {
    pub fn kappa(&self) -> usize {
        self.flex_points - self.hyperflex_points
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub field: FieldSpec,
    pub delta1: usize,
    pub delta2: usize,
    pub kappa: usize,
    pub completeness: Completeness,
    pub lines: LineCensus,
    pub points: PointCensus,
    /// `None` when the curve is excluded (characteristic-3 Fermat type).
    pub geometric: Option<GeometricFlexes>,
    pub fermat_type: bool,
}

/// `f(s·v1 + t·v2)` as monomial coefficients `c_k` of `s^{4−k} t^k`.
fn restrict_u(field: &FiniteField, c: &[u32], v1: &[u32; 3], v2: &[u32; 3]) -> [u32; 5] {
    // powers[i][n][j]: coefficient of s^{n−j} t^j in (v1_i s + v2_i t)^n
    let mut powers = [[[0u32; 5]; 5]; 3];
    for i in 0..3 {
        powers[i][0][0] = 1;
        for n in 1..5 {
            for j in 0..=n {
                let mut acc = 0;
                if j < n {
                    acc = field.mul_u(powers[i][n - 1][j], v1[i]);
                }
                if j > 0 {
                    acc = field.add_u(acc, field.mul_u(powers[i][n - 1][j - 1], v2[i]));
                }
                powers[i][n][j] = acc;
            }
        }
    }
    let mut out = [0u32; 5];
    for (e, &coef) in QUARTIC_EXPONENTS.iter().zip(c) {
        if coef == 0 {
            continue;
        }
        let (a, b, d) = (e[0] as usize, e[1] as usize, e[2] as usize);
        for i in 0..=a {
            let pi = powers[0][a][i];
            if pi == 0 {
                continue;
            }
            let ci = field.mul_u(coef, pi);
            for j in 0..=b {
                let pj = powers[1][b][j];
                if pj == 0 {
                    continue;
                }
                let cij = field.mul_u(ci, pj);
                for k in 0..=d {
                    let pk = powers[2][d][k];
                    if pk != 0 {
                        out[i + j + k] = field.add_u(out[i + j + k], field.mul_u(cij, pk));
                    }
                }
            }
        }
    }
    out
}

/// Restriction to `u = (1, a, b)` with basis `(−a, 1, 0)`, `(−b, 0, 1)`:
/// `Σ_m (−as − bt)^m F_m(s, t)` where `f = Σ x^m F_m(y, z)`.
fn restrict_affine_line(field: &FiniteField, c: &[u32], na: u32, nb: u32) -> [u32; 5] {
    let mut lin = [[0u32; 5]; 5];
    lin[0][0] = 1;
    for m in 1..5 {
        for j in 0..=m {
            let mut acc = 0;
            if j < m {
                acc = field.mul_u(lin[m - 1][j], na);
            }
            if j > 0 {
                acc = field.add_u(acc, field.mul_u(lin[m - 1][j - 1], nb));
            }
            lin[m][j] = acc;
        }
    }
    let mut out = [0u32; 5];
    for (e, &coef) in QUARTIC_EXPONENTS.iter().zip(c) {
        if coef == 0 {
            continue;
        }
        let m = e[0] as usize;
        let shift = e[2] as usize;
        for j in 0..=m {
            out[j + shift] = field.add_u(out[j + shift], field.mul_u(coef, lin[m][j]));
        }
    }
    out
}

/// The square test of [`classify_restriction`] on raw codes.
fn square_tag(field: &FiniteField, c: &[u32; 5], half: u32) -> RestrictionTag {
    let Some(e) = c.iter().position(|&x| x != 0) else {
        return RestrictionTag::IdenticallyZero;
    };
    if e % 2 == 1 {
        return RestrictionTag::NotSquare;
    }
    let li = field.inv_u(c[e]).expect("nonzero");
    let h = |j: usize| field.mul_u(c[4 - j], li);
    match (4 - e) / 2 {
        0 => RestrictionTag::SquareOfSquare,
        1 => {
            let q0 = field.mul_u(h(1), half);
            if field.mul_u(q0, q0) == h(0) {
                RestrictionTag::SquareOfSeparable
            } else {
                RestrictionTag::NotSquare
            }
        }
        _ => {
            let q1 = field.mul_u(h(3), half);
            let q0 = field.mul_u(field.sub_u(h(2), field.mul_u(q1, q1)), half);
            let two = field.add_u(1, 1);
            if field.mul_u(two, field.mul_u(q0, q1)) != h(1) || field.mul_u(q0, q0) != h(0) {
                return RestrictionTag::NotSquare;
            }
            let four = field.add_u(two, two);
            if field.mul_u(q1, q1) == field.mul_u(four, q0) {
                RestrictionTag::SquareOfSquare
            } else {
                RestrictionTag::SquareOfSeparable
            }
        }
    }
}

fn guard_census(f: &TernaryQuartic<FiniteField>) -> Result<()> {
    if f.field().characteristic() == 2 {
        return Err(Error::unsupported(2, "bitangents are not classified in characteristic 2"));
    }
    f.require_smooth()
}

/// All lines `L` of `P²(F_q)` on which `f|_L` is a nonzero constant times a
/// square.
pub fn bitangents(f: &TernaryQuartic<FiniteField>) -> Result<LineCensus> {
    guard_census(f)?;
    let field = f.field();
    let q = field.order() as u32;
    let c = f.monomial_coeffs();
    let half = field.inv_u(field.from_u64(2)).expect("odd characteristic");
    let mut found: Vec<BitangentRecord> = (0..q)
        .into_par_iter()
        .flat_map_iter(|a| {
            let na = field.neg_u(a);
            (0..q).filter_map(move |b| {
                let g = restrict_affine_line(field, c, na, field.neg_u(b));
                record([1, a, b], square_tag(field, &g, half))
            })
        })
        .collect();
    for b in 0..q {
        let u = [0, 1, b];
        let g = restrict_u(field, c, &[1, 0, 0], &[0, field.neg_u(b), 1]);
        found.extend(record(u, square_tag(field, &g, half)));
    }
    let g = restrict_u(field, c, &[1, 0, 0], &[0, 1, 0]);
    found.extend(record([0, 0, 1], square_tag(field, &g, half)));
    let delta1 = found.iter().filter(|r| r.kind == LineKind::Ordinary).count();
    let delta2 = found.len() - delta1;
    Ok(LineCensus {
        delta1,
        delta2,
        completeness: if delta1 + delta2 == 28 {
            Completeness::Complete
        } else {
            Completeness::Partial
        },
        lines: found,
    })
}

fn record(line: [u32; 3], tag: RestrictionTag) -> Option<BitangentRecord> {
    let kind = match tag {
        RestrictionTag::SquareOfSeparable => LineKind::Ordinary,
        RestrictionTag::SquareOfSquare => LineKind::Hyperflex,
        _ => return None,
    };
    Some(BitangentRecord { line, kind })
}

/// Multiplicity of `p` as a root of `f` restricted to the line `u` through
/// it, in the basis of [`line_basis`].
pub fn contact_order(f: &TernaryQuartic<FiniteField>, p: &[u32; 3], u: &[u32; 3]) -> Result<u32> {
    let field = f.field();
    let basis = line_basis(field, u)?;
    let i = u.iter().position(|&x| x != 0).expect("nonzero line");
    let others: Vec<usize> = (0..3).filter(|&j| j != i).collect();
    let (s0, t0) = (p[others[0]], p[others[1]]);
    let g = restrict_u(field, f.monomial_coeffs(), &basis[0], &basis[1]);
    if g.iter().all(|&x| x == 0) {
        return Err(Error::Degenerate("the curve contains the line".into()));
    }
    if t0 == 0 {
        return Ok(g.iter().position(|&x| x != 0).expect("nonzero") as u32);
    }
    let x0 = field.mul_u(s0, field.inv_u(t0).expect("nonzero"));
    // g(X, 1) = Σ c_k X^{4−k}
    let h = UPoly::new(field.clone(), (0..5).map(|j| g[4 - j]).collect());
    Ok(h.root_multiplicity(x0) as u32)
}

/// Contact order of the tangent line at every rational point.
pub fn flex_census(f: &TernaryQuartic<FiniteField>) -> Result<PointCensus> {
    f.require_smooth()?;
    let pts = rational_points(f);
    let mut flexes = Vec::new();
    for p in &pts {
        let line = tangent_line(f, p).ok_or_else(|| Error::Singular(format!("rational point {p:?}")))?;
        let contact = contact_order(f, p, &line)?;
        if contact >= 3 {
            flexes.push(FlexRecord {
                point: *p,
                tangent: line,
                contact,
            });
        }
    }
    let hyperflexes = flexes.iter().filter(|r| r.contact >= 4).count();
    let kappa = flexes.len() - hyperflexes;
    let complete = if f.field().characteristic() == 3 {
        hyperflexes + kappa == 8
    } else {
        2 * hyperflexes + kappa == 24
    };
    Ok(PointCensus {
        kappa,
        hyperflexes,
        points: pts.len(),
        flexes,
        completeness: if complete {
            Completeness::Complete
        } else {
            Completeness::Partial
        },
    })
}

fn vars4() -> Arc<[String]> {
    ["x", "y", "z", "t"].iter().map(|s| s.to_string()).collect()
}

fn lift<F: Field>(p: &MultiPoly<F>, vars: &Arc<[String]>) -> MultiPoly<F> {
    MultiPoly::from_terms(
        p.field().clone(),
        vars.clone(),
        p.terms().iter().map(|(e, c)| (vec![e[0], e[1], e[2], 0], c.clone())),
    )
}

/// `f(P + tT)` with `T = (0, f_z, −f_y)` tangent at `P`: returns the
/// coefficients of `t²` and `t³` as forms in `x, y, z`. At a point of the
/// affine chart `x = 1`, contact with the tangent is at least 3 iff the
/// first vanishes, and 4 iff both do.
pub fn contact_forms<F: Field>(f: &TernaryQuartic<F>) -> (MultiPoly<F>, MultiPoly<F>) {
    let field = f.field();
    let p = f.to_poly();
    let v = vars4();
    let var = |i| MultiPoly::var(field.clone(), v.clone(), i);
    let fy = lift(&p.partial(1), &v);
    let fz = lift(&p.partial(2), &v);
    let t = var(3);
    let images = [var(0), var(1).add(&t.mul(&fz)), var(2).sub(&t.mul(&fy))];
    let g = p.compose(&images).expect("three images");
    let coef = |k: u16| {
        MultiPoly::from_terms(
            field.clone(),
            p.vars().clone(),
            g.terms().iter().filter(|(e, _)| e[3] == k).map(|(e, c)| (vec![e[0], e[1], e[2]], c.clone())),
        )
    };
    (coef(2), coef(3))
}

/// Coefficients in `z` of `p(1, y, z)`, each a polynomial in `y`.
fn dehomogenize(field: &FiniteField, p: &MultiPoly<FiniteField>) -> Vec<UPoly<FiniteField>> {
    let dz = p.terms().keys().map(|e| e[2] as usize).max().unwrap_or(0);
    let dy = p.terms().keys().map(|e| e[1] as usize).max().unwrap_or(0);
    let mut rows = vec![vec![0u32; dy + 1]; dz + 1];
    for (e, c) in p.terms() {
        let slot = &mut rows[e[2] as usize][e[1] as usize];
        *slot = field.add_u(*slot, *c);
    }
    rows.into_iter().map(|r| UPoly::new(field.clone(), r)).collect()
}

fn at_y(field: &FiniteField, rows: &[UPoly<FiniteField>], y: u32) -> UPoly<FiniteField> {
    UPoly::new(field.clone(), rows.iter().map(|r| r.eval(&y)).collect())
}

/// `Π_{f(1,y,α)=0} g(1,y,α)` as a polynomial in `y`, by interpolation.
fn norm_polynomial(
    field: &FiniteField,
    f_rows: &[UPoly<FiniteField>],
    g_rows: &[UPoly<FiniteField>],
    bound: usize,
) -> Result<UPoly<FiniteField>> {
    let xs: Vec<u32> = (0..=bound as u32).collect();
    let mut ys = Vec::with_capacity(xs.len());
    for &y in &xs {
        let fy = at_y(field, f_rows, y);
        let gy = at_y(field, g_rows, y);
        let r = fy.resultant(&gy)?;
        let dg = gy.degree().unwrap_or(0) as u64;
        let lc = field.pow(&fy.lead(), dg);
        ys.push(field.mul_u(r, field.inv_u(lc).expect("monic in z")));
    }
    UPoly::interpolate(field.clone(), &xs, &ys)
}

fn distinct_roots(p: &UPoly<FiniteField>) -> usize {
    p.radical().degree().unwrap_or(0)
}

/// Working field for the projection counts: `F_{p^m}` with `k | m`, large
/// enough that random projections separate the intersection points.
fn projection_field(base: &FiniteField) -> Result<FiniteField> {
    let (p, k) = (base.p(), base.degree());
    let mut best = k;
    let mut m = k;
    while let Some(q) = p.checked_pow(m) {
        if q > MAX_TABLE_ORDER {
            break;
        }
        best = m;
        if q >= 1 << 14 {
            break;
        }
        m += k;
    }
    FiniteField::new(p, best)
}

/// Counts flexes and hyperflexes over the algebraic closure.
///
/// After a random projective change of coordinates, the flexes are the
/// common zeros of `f` and the first form of [`contact_forms`] in the chart
/// `x = 1`; by Euler's relation no point of a smooth curve there has
/// `f_y = f_z = 0`. The number of distinct `y`-coordinates is the degree of
/// the radical of the norm polynomial. Collisions can only lower the count,
/// so trials repeat until two agree.
pub fn geometric_flexes(f: &TernaryQuartic<FiniteField>) -> Result<GeometricFlexes> {
    guard_census(f)?;
    if f.partials_are_cubes() {
        return Err(Error::Degenerate("every point is a hyperflex (characteristic-3 Fermat type)".into()));
    }
    let work = projection_field(f.field())?;
    let fe = f.extend(&f.field().embedding_into(&work)?);
    let mut rng = ChaCha8Rng::seed_from_u64(0x0f1e_c5);
    let mut seen: Vec<GeometricFlexes> = Vec::new();
    for _ in 0..12 {
        let g: [u32; 9] = std::array::from_fn(|_| work.random(&mut rng));
        let det = MatrixF::new(work.clone(), 3, 3, g.to_vec())?.determinant()?;
        if det == 0 {
            continue;
        }
        let h = fe.transform(&g);
        if h.eval(&[0, 0, 1]) == 0 {
            continue;
        }
        let (phi, psi) = contact_forms(&h);
        let f_rows = dehomogenize(&work, &h.to_poly());
        let r_phi = norm_polynomial(&work, &f_rows, &dehomogenize(&work, &phi), 32)?;
        if r_phi.is_zero() {
            return Err(Error::Degenerate("every point is a flex".into()));
        }
        let r_psi = norm_polynomial(&work, &f_rows, &dehomogenize(&work, &psi), 40)?;
        let hyper = if r_psi.is_zero() {
            r_phi.clone()
        } else {
            r_phi.gcd(&r_psi)?
        };
        let now = GeometricFlexes {
            flex_points: distinct_roots(&r_phi),
            hyperflex_points: distinct_roots(&hyper),
        };
        if seen.contains(&now) {
            return Ok(now);
        }
        seen.push(now);
    }
    seen.into_iter()
        .max_by_key(|g| g.flex_points)
        .ok_or_else(|| Error::Inconsistent("no usable projection".into()))
}

/// Line and point census over `F_{p^k}`, `k` a multiple of the degree of
/// the field of `f`. With `escalate`, `k` grows by that degree until the 28
/// bitangents are found or `p^k` exceeds `cap`.
pub fn census(f: &TernaryQuartic<FiniteField>, k: u32, escalate: bool, cap: u64) -> Result<CensusReport> {
    guard_census(f)?;
    let base = f.field();
    let step = base.degree();
    if k == 0 || k % step != 0 {
        return Err(Error::Precondition(format!(
            "extension degree {k} is not a multiple of {step}"
        )));
    }
    let fermat_type = f.partials_are_cubes();
    let geometric = if fermat_type { None } else { Some(geometric_flexes(f)?) };
    let mut k = k;
    loop {
        let field = FiniteField::new(base.p(), k)?;
        let fk = f.extend(&base.embedding_into(&field)?);
        let lines = bitangents(&fk)?;
        let next = base.p().checked_pow(k + step);
        let more = escalate
            && lines.completeness == Completeness::Partial
            && next.is_some_and(|q| q <= cap.min(MAX_TABLE_ORDER));
        if more {
            k += step;
            continue;
        }
        let points = flex_census(&fk)?;
        return Ok(CensusReport {
            field: field.spec(),
            delta1: lines.delta1,
            delta2: lines.delta2,
            kappa: points.kappa,
            completeness: lines.completeness,
            lines,
            points,
            geometric,
            fermat_type,
        });
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub lhs: usize,
    pub rhs: usize,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub checks: Vec<IdentityCheck>,
    pub note: Option<String>,
}

fn check(identity: &str, lhs: usize, rhs: usize) -> IdentityCheck {
    IdentityCheck {
        identity: identity.into(),
        lhs,
        rhs,
        holds: lhs == rhs,
    }
}

/// The Plücker identities for the given counts in characteristic `ch`.
pub fn pluecker_verdict(ch: u64, delta1: usize, delta2: usize, kappa: usize) -> Verdict {
    let mut checks = vec![check("delta1 + delta2 = 28", delta1 + delta2, 28)];
    if ch == 3 {
        checks.push(check("delta2 + kappa = 8", delta2 + kappa, 8));
    } else {
        checks.push(check("2 delta2 + kappa = 24", 2 * delta2 + kappa, 24));
    }
    Verdict {
        outcome: if checks.iter().all(|c| c.holds) {
            Outcome::Pass
        } else {
            Outcome::Fail
        },
        checks,
        note: None,
    }
}

/// Applies [`pluecker_verdict`] to a complete report. Flex counts come from
/// the geometric count when available, otherwise from a complete rational
/// point census; the hyperflex lines of the line census must match the
/// hyperflex points.
pub fn pluecker_check(report: &CensusReport) -> Verdict {
    let inconclusive = |note: &str| Verdict {
        outcome: Outcome::Inconclusive,
        checks: Vec::new(),
        note: Some(note.into()),
    };
    if report.completeness != Completeness::Complete {
        return inconclusive("line census is partial");
    }
    if report.fermat_type {
        return inconclusive("characteristic-3 Fermat type is excluded");
    }
    let (hyper, kappa) = match (&report.geometric, report.points.completeness) {
        (Some(g), _) => (g.hyperflex_points, g.kappa()),
        (None, Completeness::Complete) => (report.points.hyperflexes, report.points.kappa),
        (None, Completeness::Partial) => return inconclusive("flex census is partial"),
    };
    let mut v = pluecker_verdict(report.field.characteristic, report.delta1, report.delta2, kappa);
    let agree = check("hyperflex lines = hyperflex points", report.delta2, hyper);
    if !agree.holds {
        v.outcome = Outcome::Fail;
    }
    v.checks.push(agree);
    v
}

/// Value semigroup of the dual branch at a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemigroupRecord {
    pub point: Vec<String>,
    pub generators: Vec<u32>,
}

const SERIES_ORDER: usize = 13;

/// Semigroup of the dual branch `v ∧ v′` where `v(t)` is the branch of `C`
/// at `P`, computed from power series truncated at order 12.
pub fn local_dual_semigroup<F: Field>(f: &TernaryQuartic<F>, p: &[F::Elem; 3]) -> Result<SemigroupRecord>
where
    F::Elem: std::fmt::Display,
{
    let field = f.field();
    if !field.is_zero(&f.eval(p)) {
        return Err(Error::Precondition("the point is not on the curve".into()));
    }
    let grad = crate::curve::gradient_at(f, p);
    if grad.iter().all(|g| field.is_zero(g)) {
        return Err(Error::Singular("the point is singular".into()));
    }
    let cross = |a: &[F::Elem; 3], b: &[F::Elem; 3]| crate::proj::cross(field, a, b);
    let unit = |j: usize| -> [F::Elem; 3] { std::array::from_fn(|i| if i == j { field.one() } else { field.zero() }) };
    let tangent = (0..3)
        .map(|j| cross(&grad, &unit(j)))
        .find(|t| cross(t, p).iter().any(|x| !field.is_zero(x)))
        .ok_or_else(|| Error::Inconsistent("no tangent direction".into()))?;
    let j = grad.iter().position(|g| !field.is_zero(g)).expect("nonzero gradient");
    let normal = unit(j);
    // φ(t, h) = f(P + tT + hN) as coefficients φ[a][b] of t^a h^b.
    let vars: Arc<[String]> = ["t", "h"].iter().map(|s| s.to_string()).collect();
    let images: Vec<MultiPoly<F>> = (0..3)
        .map(|i| {
            MultiPoly::from_terms(
                field.clone(),
                vars.clone(),
                [(vec![0, 0], p[i].clone()), (vec![1, 0], tangent[i].clone()), (vec![0, 1], normal[i].clone())],
            )
        })
        .collect();
    let phi = f.to_poly().compose(&images)?;
    let c01 = phi.coeff(&[0, 1]);
    let c01_inv = field.inv(&c01).ok_or_else(|| Error::Singular("the point is singular".into()))?;
    // Fixed point h ← h − φ(t, h)/c01 gains one order per step.
    let mut h: Series<F::Elem> = vec![field.zero(); SERIES_ORDER];
    for _ in 0..SERIES_ORDER {
        let mut hp: Vec<Series<F::Elem>> = vec![{
            let mut one = vec![field.zero(); SERIES_ORDER];
            one[0] = field.one();
            one
        }];
        for k in 1..5 {
            hp.push(series::mul(field, &hp[k - 1], &h));
        }
        let mut val = vec![field.zero(); SERIES_ORDER];
        for (e, c) in phi.terms() {
            let (a, b) = (e[0] as usize, e[1] as usize);
            for (n, x) in hp[b].iter().enumerate() {
                if n + a < SERIES_ORDER {
                    val[n + a] = field.add(&val[n + a], &field.mul(c, x));
                }
            }
        }
        for n in 0..SERIES_ORDER {
            h[n] = field.sub(&h[n], &field.mul(&val[n], &c01_inv));
        }
    }
    // v(t) = P + tT + h(t)N, and w = v × v′.
    let v: [Series<F::Elem>; 3] = std::array::from_fn(|i| {
        (0..SERIES_ORDER)
            .map(|n| {
                let mut x = field.mul(&h[n], &normal[i]);
                if n == 0 {
                    x = field.add(&x, &p[i]);
                }
                if n == 1 {
                    x = field.add(&x, &tangent[i]);
                }
                x
            })
            .collect()
    });
    let dv: [Series<F::Elem>; 3] = std::array::from_fn(|i| {
        (0..SERIES_ORDER)
            .map(|n| {
                if n + 1 < SERIES_ORDER {
                    field.mul(&v[i][n + 1], &field.from_i64(n as i64 + 1))
                } else {
                    field.zero()
                }
            })
            .collect()
    });
    let w: [Series<F::Elem>; 3] = std::array::from_fn(|i| {
        let (a, b) = ((i + 1) % 3, (i + 2) % 3);
        let x = series::mul(field, &v[a], &dv[b]);
        let y = series::mul(field, &v[b], &dv[a]);
        x.iter().zip(&y).map(|(x, y)| field.sub(x, y)).collect()
    });
    let k = (0..3).find(|&i| !field.is_zero(&w[i][0])).ok_or_else(|| Error::Inconsistent("degenerate dual branch".into()))?;
    let inv = series::inv(field, &w[k]).expect("unit");
    let mut coords: Vec<Series<F::Elem>> = (0..3)
        .filter(|&i| i != k)
        .map(|i| {
            let mut s = series::mul(field, &w[i], &inv);
            s[0] = field.zero();
            s
        })
        .collect();
    let generators = semigroup_generators(field, &mut coords)?;
    Ok(SemigroupRecord {
        point: p.iter().map(|x| x.to_string()).collect(),
        generators,
    })
}

/// First two generators of the value semigroup of the branch `(X(t), Y(t))`
/// through the origin: the multiplicity `m`, then the first order not
/// divisible by `m` after removing powers of `X` from `Y`.
fn semigroup_generators<F: Field>(field: &F, coords: &mut [Series<F::Elem>]) -> Result<Vec<u32>> {
    let truncated = || Error::Inconsistent("branch not resolved within the truncation order".into());
    let (ox, oy) = (series::valuation(field, &coords[0]), series::valuation(field, &coords[1]));
    let (mut x, mut y) = match (ox, oy) {
        (Some(a), Some(b)) if b < a => (coords[1].clone(), coords[0].clone()),
        (None, Some(_)) => (coords[1].clone(), coords[0].clone()),
        (Some(_), _) => (coords[0].clone(), coords[1].clone()),
        (None, None) => return Err(truncated()),
    };
    let m = series::valuation(field, &x).expect("nonzero");
    if m == 1 {
        return Ok(vec![1]);
    }
    loop {
        let Some(n) = series::valuation(field, &y) else {
            return Err(truncated());
        };
        if n % m != 0 {
            return Ok(vec![m as u32, n as u32]);
        }
        // Cancel the leading term of y with c·x^{n/m}.
        let mut xp = x.clone();
        for _ in 1..n / m {
            xp = series::mul(field, &xp, &x);
        }
        let c = field.div(&y[n], &xp[n]).expect("leading coefficient");
        for i in 0..SERIES_ORDER {
            y[i] = field.sub(&y[i], &field.mul(&c, &xp[i]));
        }
        // Keep x the series of smaller order.
        if series::valuation(field, &y).is_some_and(|v| v < m) {
            std::mem::swap(&mut x, &mut y);
        }
    }
}

#[derive(Clone, Debug)]
pub struct CuspRecovery {
    pub form: DualForm<FiniteField>,
    pub nullity: usize,
    pub proportional_to_k1: bool,
}

/// The quartic through the 24 flex tangent lines, compared with `K1`.
pub fn cusp_quartic_recovery(f: &TernaryQuartic<FiniteField>) -> Result<CuspRecovery> {
    let field = f.field();
    let ch = field.characteristic();
    if ch == 2 || ch == 3 {
        return Err(Error::unsupported(ch, "cusp recovery needs characteristic other than 2 and 3"));
    }
    let points = flex_census(f)?;
    if points.hyperflexes > 0 {
        return Err(Error::Degenerate(format!(
            "{} hyperflexes: the 24-cusp configuration degenerates",
            points.hyperflexes
        )));
    }
    if points.kappa != 24 {
        return Err(Error::InsufficientData(format!(
            "{} rational flexes, 24 needed",
            points.kappa
        )));
    }
    let lines: Vec<[u32; 3]> = points.flexes.iter().map(|r| r.tangent).collect();
    let kernel = evaluation_matrix(field, &lines, 4).nullspace();
    if kernel.len() != 1 {
        return Err(Error::Degenerate(format!("nullspace has dimension {}", kernel.len())));
    }
    let form = form_from_vector(field, 4, &kernel[0]);
    let k1 = k1_expanded(f)?.poly;
    Ok(CuspRecovery {
        proportional_to_k1: form.proportionality(&k1).is_some() || k1.proportionality(&form).is_some(),
        form: DualForm {
            degree: 4,
            provenance: Provenance::Interpolation,
            poly: form,
        },
        nullity: 1,
    })
}

/// A random smooth quartic over the prime field `F_p`.
pub fn random_smooth_curve<R: Rng + ?Sized>(p: u64, rng: &mut R) -> Result<TernaryQuartic<FiniteField>> {
    Ok(TernaryQuartic::random_smooth(FiniteField::prime(p)?, rng))
}

/// Binary restriction as a [`BinaryQuartic`], for callers outside the sweep.
pub fn restriction(f: &TernaryQuartic<FiniteField>, u: &[u32; 3]) -> Result<BinaryQuartic<FiniteField>> {
    let basis = line_basis(f.field(), u)?;
    let c = restrict_u(f.field(), f.monomial_coeffs(), &basis[0], &basis[1]);
    Ok(BinaryQuartic::from_monomial(f.field().clone(), c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binary::{classify_restriction, restrict_to_line};

    #[test]
    fn fast_restriction_matches_generic() {
        let field = FiniteField::new(5, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = TernaryQuartic::random(field.clone(), &mut rng);
        let half = field.inv_u(2).unwrap();
        for u in crate::proj::points(&field).step_by(7) {
            let slow = restrict_to_line(&f, &u).unwrap();
            let fast = restriction(&f, &u).unwrap();
            assert_eq!(slow.monomial_coeffs(), fast.monomial_coeffs());
            if u[0] == 1 {
                let g = restrict_affine_line(&field, f.monomial_coeffs(), field.neg_u(u[1]), field.neg_u(u[2]));
                assert_eq!(&g, fast.monomial_coeffs());
            }
            let tag = classify_restriction(&slow).unwrap().tag;
            assert_eq!(square_tag(&field, fast.monomial_coeffs(), half), tag);
        }
    }

    #[test]
    fn fermat_over_f17() {
        let f = TernaryQuartic::fermat(FiniteField::prime(17).unwrap());
        let lines = bitangents(&f).unwrap();
        assert_eq!((lines.delta1, lines.delta2), (16, 12));
        let pts = flex_census(&f).unwrap();
        assert_eq!((pts.hyperflexes, pts.kappa), (12, 0));
        assert_eq!(pts.completeness, Completeness::Complete);
        let g = geometric_flexes(&f).unwrap();
        assert_eq!(g, GeometricFlexes { flex_points: 12, hyperflex_points: 12 });
        let report = census(&f, 1, false, DEFAULT_CAP).unwrap();
        assert_eq!(pluecker_check(&report).outcome, Outcome::Pass);
    }

    #[test]
    fn fermat_hyperflex_line() {
        // x + a³y = 0 with a⁴ = −1 over F_17: a = 2 (16 = −1), a³ = 8.
        let field = FiniteField::prime(17).unwrap();
        let f = TernaryQuartic::fermat(field.clone());
        let lines = bitangents(&f).unwrap();
        let rec = lines.lines.iter().find(|r| r.line == [1, 8, 0]).unwrap();
        assert_eq!(rec.kind, LineKind::Hyperflex);
    }

    #[test]
    fn fermat_over_f5_is_partial() {
        let f = TernaryQuartic::fermat(FiniteField::prime(5).unwrap());
        let lines = bitangents(&f).unwrap();
        assert_eq!(lines.completeness, Completeness::Partial);
        assert!(lines.delta1 + lines.delta2 < 28);
    }

    #[test]
    fn verdicts_on_counts() {
        assert_eq!(pluecker_verdict(0, 16, 12, 0).outcome, Outcome::Pass);
        assert_eq!(pluecker_verdict(0, 28, 0, 24).outcome, Outcome::Pass);
        assert_eq!(pluecker_verdict(0, 27, 0, 24).outcome, Outcome::Fail);
        assert_eq!(pluecker_verdict(3, 28, 0, 8).outcome, Outcome::Pass);
    }

    #[test]
    fn char2_is_unsupported() {
        let f = TernaryQuartic::klein(FiniteField::new(2, 3).unwrap());
        assert!(matches!(bitangents(&f), Err(Error::UnsupportedCharacteristic { .. })));
    }

    #[test]
    fn semigroups_of_fermat() {
        let field = FiniteField::prime(17).unwrap();
        let f = TernaryQuartic::fermat(field.clone());
        let pts = flex_census(&f).unwrap();
        let hyper = pts.flexes[0].point;
        assert_eq!(local_dual_semigroup(&f, &hyper).unwrap().generators, vec![3, 4]);
        // Over F_17 every rational point is a hyperflex; take a generic one
        // over F_{17²}.
        let f2 = TernaryQuartic::fermat(FiniteField::new(17, 2).unwrap());
        let pts2 = flex_census(&f2).unwrap();
        let generic = rational_points(&f2)
            .into_iter()
            .find(|p| !pts2.flexes.iter().any(|r| r.point == *p))
            .unwrap();
        assert_eq!(local_dual_semigroup(&f2, &generic).unwrap().generators, vec![1]);
        assert!(matches!(local_dual_semigroup(&f, &[1, 1, 1]), Err(Error::Precondition(_))));
    }
}
