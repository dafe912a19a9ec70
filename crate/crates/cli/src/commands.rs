use std::fs;
use std::path::Path;

use quartic_core::census::{self, Completeness, DEFAULT_CAP};
use quartic_core::contravariant::{self, DualForm};
use quartic_core::delpezzo::{self, DoubleCoverSurface};
use quartic_core::field::{prime_power, Field, FiniteField, MAX_TABLE_ORDER};
use quartic_core::quartic::TernaryQuartic;
use quartic_core::wahl::{self, WahlData, WEDGE_LABELS};
use quartic_core::zeta::{self, LPolynomial};
use quartic_core::{heis, theta, umbral, Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Cli, Command, CorpusCmd, HeisCmd, QuarticCmd, ThetaCmd, UmbralCmd, WhichForm};
use crate::canonical::{matrix_json, poly_json};
use crate::curvefile::{parse_curve_file, Curve, CurveFile};

/// Tangent lines sampled by the dual-curve check over ℚ.
const TANGENT_SAMPLES: usize = 50;
const TANGENT_PRIME: u64 = 1_000_003;

/// Result of one invocation, with the bytes it read for the output hash.
pub struct Output {
    pub name: &'static str,
    pub value: Value,
    pub inputs: Vec<Vec<u8>>,
}

fn read(path: &Path, inputs: &mut Vec<Vec<u8>>) -> Result<Vec<u8>> {
    let bytes = fs::read(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    inputs.push(bytes.clone());
    Ok(bytes)
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report types serialize")
}

pub fn error_json(e: &Error) -> Value {
    json!({"error": e.to_string(), "exit_code": e.exit_code()})
}

fn extend(f: TernaryQuartic<FiniteField>, deg: Option<u32>) -> Result<TernaryQuartic<FiniteField>> {
    let base = f.field().clone();
    let Some(k) = deg else { return Ok(f) };
    if k == 0 || k % base.degree() != 0 {
        return Err(Error::Precondition(format!(
            "degree {k} is not a multiple of the curve's field degree {}",
            base.degree()
        )));
    }
    if k == base.degree() {
        return Ok(f);
    }
    let big = FiniteField::new(base.p(), k)?;
    Ok(f.extend(&base.embedding_into(&big)?))
}

/// Applies `--char` and `--deg` to a parsed curve.
pub fn resolve(cf: &CurveFile, ch: Option<u64>, deg: Option<u32>) -> Result<Curve> {
    match (&cf.curve, ch) {
        (Curve::Rational(f), None) => {
            if deg.is_some() {
                return Err(Error::Precondition("--deg needs --char for a curve over Q".into()));
            }
            Ok(Curve::Rational(f.clone()))
        }
        (Curve::Rational(f), Some(p)) => {
            let g = f.reduce(&FiniteField::prime(p)?)?;
            Ok(Curve::Finite(extend(g, deg)?))
        }
        (Curve::Finite(f), Some(p)) if p != f.field().p() => Err(Error::Precondition(format!(
            "curve is over characteristic {}, --char gives {p}",
            f.field().p()
        ))),
        (Curve::Finite(f), _) => Ok(Curve::Finite(extend(f.clone(), deg)?)),
    }
}

fn finite(c: Curve) -> Result<TernaryQuartic<FiniteField>> {
    match c {
        Curve::Finite(f) => Ok(f),
        Curve::Rational(_) => Err(Error::Precondition("this command needs a finite field; pass --char".into())),
    }
}

fn form_json<F: Field>(d: &DualForm<F>) -> Value {
    json!({"degree": d.degree, "provenance": d.provenance, "form": poly_json(&d.poly)})
}

pub fn census_json(f: &TernaryQuartic<FiniteField>, deg: Option<u32>, escalate: bool) -> Result<Value> {
    let k = deg.unwrap_or(f.field().degree());
    let report = census::census(f, k, escalate, DEFAULT_CAP)?;
    Ok(json!({"report": to_value(&report), "pluecker": to_value(&census::pluecker_check(&report))}))
}

fn bitangents_json(f: TernaryQuartic<FiniteField>, deg: Option<u32>, escalate: bool) -> Result<Value> {
    let base = f.field().clone();
    let step = base.degree();
    let mut k = deg.unwrap_or(step);
    loop {
        let fk = extend(f.clone(), Some(k))?;
        let lines = census::bitangents(&fk)?;
        let next = base.p().checked_pow(k + step);
        if escalate
            && lines.completeness == Completeness::Partial
            && next.is_some_and(|q| q <= DEFAULT_CAP.min(MAX_TABLE_ORDER))
        {
            k += step;
            continue;
        }
        return Ok(json!({"field": fk.field().spec(), "census": to_value(&lines)}));
    }
}

fn contravariant_json<F: Field>(f: &TernaryQuartic<F>, which: WhichForm) -> Result<Value> {
    Ok(match which {
        WhichForm::K1 => form_json(&contravariant::k1_expanded(f)?),
        WhichForm::K2 => form_json(&contravariant::k2_umbral(f)?),
        WhichForm::Dual => {
            let d = contravariant::dual_curve(f)?;
            let mut v = form_json(&d.form);
            v["non_reduced"] = json!(d.non_reduced);
            v["reduced_degree"] = json!(d.reduced_degree);
            v
        }
    })
}

fn delpezzo_json<F: Field>(s: &DoubleCoverSurface<F>) -> Value {
    json!({
        "branch_quartic": form_json(&s.branch_quartic),
        "branch_singularities": to_value(&s.branch_singularities),
        "classification": s.classification,
        "reported_index": s.reported_index,
        "cone": to_value(&s.cone),
        "primes": s.primes,
    })
}

pub fn wahl_json<F: Field>(w: &WahlData<F>) -> Value {
    json!({
        "rows": WEDGE_LABELS,
        "columns": wahl::cubic_monomials(),
        "matrix": matrix_json(&w.matrix),
        "kernel_dim": w.kernel_dim,
        "validation_field": w.validation_field,
        "validated_points": w.validated_points,
    })
}

pub fn wahl_for(c: &Curve) -> Result<Value> {
    match c {
        Curve::Rational(f) => Ok(wahl_json(&wahl::wahl_kernel_dim_rational(f)?)),
        Curve::Finite(f) => Ok(wahl_json(&wahl::wahl_kernel_dim(f)?)),
    }
}

fn l_json(f: &TernaryQuartic<FiniteField>, k: u32) -> Result<Value> {
    if k < 3 {
        return Err(Error::Precondition("three point counts determine L; --k must be at least 3".into()));
    }
    let l = zeta::l_polynomial(f)?;
    let predicted = l.predicted_counts(k as usize);
    let mut checked = Vec::new();
    for j in 4..=k {
        let n = zeta::count_points(f, j)? as i64;
        if n != predicted[j as usize - 1] {
            return Err(Error::Inconsistent(format!("N{j} = {n} disagrees with the L-polynomial")));
        }
        checked.push(n);
    }
    let mut v = to_value(&l);
    v["field"] = to_value(&f.field().spec());
    v["trace"] = json!(l.trace());
    v["class_number"] = json!(l.class_number());
    v["further_counts"] = json!(checked);
    Ok(v)
}

fn zeta_json(cf: &CurveFile, cli: &Cli, q: Option<u64>, k: u32) -> Result<Value> {
    let q_prime = q.and_then(prime_power).map(|(p, _)| p);
    let ch = match (&cf.curve, cli.characteristic) {
        (Curve::Rational(_), None) => q_prime,
        (_, ch) => ch,
    };
    let f = finite(resolve(cf, ch, None)?)?;
    let p = f.field().p();
    let deg = match q {
        None => cli.deg,
        Some(q) => {
            let (pq, e) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
            if pq != p {
                return Err(Error::Precondition(format!("q = {q} is not a power of {p}")));
            }
            if cli.deg.is_some_and(|d| d != e) {
                return Err(Error::Precondition(format!("--q {q} and --deg disagree")));
            }
            Some(e)
        }
    };
    l_json(&extend(f, deg)?, k)
}

fn read_l(path: &Path, inputs: &mut Vec<Vec<u8>>) -> Result<LPolynomial> {
    let bytes = read(path, inputs)?;
    let l: LPolynomial =
        serde_json::from_slice(&bytes).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let again = LPolynomial::from_counts(l.q, l.counts)?;
    if again.coeffs != l.coeffs {
        return Err(Error::Inconsistent(format!("{}: coefficients do not match the counts", path.display())));
    }
    Ok(l)
}

fn umbral_json(expr: &str) -> Result<Value> {
    let e = umbral::expand_text(expr)?;
    Ok(json!({
        "expr": expr,
        "u_degree": e.u_degree,
        "coefficient_degree": e.coefficient_degree,
        "polynomial": poly_json(&e.polynomial),
    }))
}

fn igusa_json(g: usize) -> Result<Value> {
    let (l, m) = theta::standard_lagrangians(g)?;
    let delta = theta::igusa_delta(g, &l, &m)?;
    let s = delta.space();
    let labels = |v: &[u64]| v.iter().map(|&x| s.label(x)).collect::<Vec<_>>();
    let table: Vec<Value> = s
        .vectors()
        .map(|p| json!({"vector": s.label(p), "value": delta.value(p)}))
        .collect();
    Ok(json!({"g": g, "l": labels(&l), "m": labels(&m), "arf": theta::arf(&delta), "table": table}))
}

fn heis_json(g: usize) -> Result<Value> {
    let s = theta::SymplecticF2::new(g)?;
    let records = heis::heisenberg_records(g)?;
    Ok(Value::Array(
        records
            .iter()
            .map(|r| {
                let odd: Vec<String> = s.vectors().filter(|&p| r.theta.value(p) == 1).map(|p| s.label(p)).collect();
                let mut v = to_value(r);
                v["odd_vectors"] = json!(odd);
                v
            })
            .collect(),
    ))
}

/// Commands run on each corpus file, by field type.
fn battery(cf: &CurveFile, cli: &Cli) -> Result<Vec<(&'static str, Result<Value>)>> {
    let c = resolve(cf, cli.characteristic, None)?;
    Ok(match &c {
        Curve::Finite(f) => vec![
            ("census", census_json(f, cli.deg, cli.escalate)),
            ("zeta", l_json(f, 3)),
            ("wahl", wahl_for(&c)),
        ],
        Curve::Rational(f) => vec![
            ("contravariant-k1", contravariant_json(f, WhichForm::K1)),
            ("delpezzo", delpezzo::branch_quartic_surface_rational(f).map(|s| delpezzo_json(&s))),
            ("wahl", wahl_for(&c)),
        ],
    })
}

fn corpus_json(dir: &Path, cli: &Cli, inputs: &mut Vec<Vec<u8>>) -> Result<Value> {
    let entries = fs::read_dir(dir).map_err(|e| Error::Input(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut files = Vec::new();
    for p in &paths {
        let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        inputs.push(name.clone().into_bytes());
        files.push((name, read(p, inputs)?));
    }
    let rows: Vec<(Value, usize)> = files
        .par_iter()
        .map(|(name, bytes)| {
            let (row, failures) = match parse_curve_file(bytes).and_then(|cf| Ok((cf.to_json(), battery(&cf, cli)?))) {
                Err(e) => (json!({"error": error_json(&e)}), 1),
                Ok((curve, runs)) => {
                    let mut results = serde_json::Map::new();
                    let mut failures = 0;
                    for (cmd, r) in runs {
                        let v = r.unwrap_or_else(|e| {
                            failures += 1;
                            error_json(&e)
                        });
                        results.insert(cmd.to_string(), v);
                    }
                    (json!({"curve": curve, "results": results}), failures)
                }
            };
            let mut row = row;
            row["file"] = json!(name);
            (row, failures)
        })
        .collect();
    let failures: usize = rows.iter().map(|r| r.1).sum();
    Ok(json!({
        "files": rows.into_iter().map(|r| r.0).collect::<Vec<_>>(),
        "total": files.len(),
        "failures": failures,
    }))
}

pub fn run(cli: &Cli) -> Result<Output> {
    let mut inputs = Vec::new();
    let (name, value) = match &cli.command {
        Command::Quartic(q) => {
            let load = |path: &Path, inputs: &mut Vec<Vec<u8>>| parse_curve_file(&read(path, inputs)?);
            match q {
                QuarticCmd::Census { curve } => {
                    let cf = load(curve, &mut inputs)?;
                    let f = finite(resolve(&cf, cli.characteristic, None)?)?;
                    let mut v = census_json(&f, cli.deg, cli.escalate)?;
                    v["curve"] = cf.to_json();
                    ("quartic-census", v)
                }
                QuarticCmd::Bitangents { curve } => {
                    let cf = load(curve, &mut inputs)?;
                    let f = finite(resolve(&cf, cli.characteristic, None)?)?;
                    ("quartic-bitangents", bitangents_json(f, cli.deg, cli.escalate)?)
                }
                QuarticCmd::Contravariant { which, curve } => {
                    let cf = load(curve, &mut inputs)?;
                    let v = match resolve(&cf, cli.characteristic, cli.deg)? {
                        Curve::Rational(f) => {
                            let mut v = contravariant_json(&f, *which)?;
                            if let (WhichForm::Dual, Some(seed)) = (which, cli.seed) {
                                let b = contravariant::dual_curve(&f)?.form.poly;
                                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                                let t = contravariant::dual_vanishes_on_tangents(&f, &b, TANGENT_PRIME, TANGENT_SAMPLES, &mut rng)?;
                                v["tangent_check"] = json!({"prime": t.prime, "sampled": t.sampled, "vanishing": t.vanishing});
                            }
                            v
                        }
                        Curve::Finite(f) => {
                            let mut v = contravariant_json(&f, *which)?;
                            if *which == WhichForm::Dual {
                                let b = contravariant::dual_curve(&f)?.form;
                                let lines = contravariant::tangent_lines(&f);
                                let vanishing = lines.iter().filter(|u| f.field().is_zero(&b.eval(u))).count();
                                v["tangent_check"] = json!({"sampled": lines.len(), "vanishing": vanishing});
                            }
                            v
                        }
                    };
                    ("quartic-contravariant", v)
                }
                QuarticCmd::Delpezzo { curve } => {
                    let cf = load(curve, &mut inputs)?;
                    let v = match resolve(&cf, cli.characteristic, cli.deg)? {
                        Curve::Rational(f) => delpezzo_json(&delpezzo::branch_quartic_surface_rational(&f)?),
                        Curve::Finite(f) => delpezzo_json(&delpezzo::branch_quartic_surface(&f)?),
                    };
                    ("quartic-delpezzo", v)
                }
                QuarticCmd::Zeta { curve, q, k } => {
                    let cf = load(curve, &mut inputs)?;
                    ("quartic-zeta", zeta_json(&cf, cli, *q, *k)?)
                }
                QuarticCmd::TwistCompare { first, second } => {
                    let a = read_l(first, &mut inputs)?;
                    let b = read_l(second, &mut inputs)?;
                    let verdict = zeta::twist_compare(&a, &b)?;
                    ("quartic-twist-compare", json!({"q": a.q, "verdict": verdict}))
                }
                QuarticCmd::Wahl { curve } => {
                    let cf = load(curve, &mut inputs)?;
                    ("quartic-wahl", wahl_for(&resolve(&cf, cli.characteristic, cli.deg)?)?)
                }
                QuarticCmd::CuspRecover { curve } => {
                    let cf = load(curve, &mut inputs)?;
                    let f = finite(resolve(&cf, cli.characteristic, cli.deg)?)?;
                    let r = census::cusp_quartic_recovery(&f)?;
                    let v = json!({
                        "field": f.field().spec(),
                        "form": form_json(&r.form),
                        "nullity": r.nullity,
                        "proportional_to_k1": r.proportional_to_k1,
                    });
                    ("quartic-cusp-recover", v)
                }
            }
        }
        Command::Umbral(UmbralCmd::Expand { expr }) => ("umbral-expand", umbral_json(expr)?),
        Command::Theta(ThetaCmd::Count { g }) => ("theta-count", to_value(&theta::parity_counts(*g)?)),
        Command::Theta(ThetaCmd::Igusa { g }) => ("theta-igusa", igusa_json(*g)?),
        Command::Heis(HeisCmd::Enumerate { g }) => ("heis-enumerate", heis_json(*g)?),
        Command::Corpus(CorpusCmd::Run { dir }) => ("corpus-run", corpus_json(dir, cli, &mut inputs)?),
    };
    Ok(Output { name, value, inputs })
}
