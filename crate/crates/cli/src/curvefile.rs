//! Curve files: a quartic with its field and coefficient convention.
//!
//! ```json
//! {"coeffs":[{"exps":[4,0,0],"value":"1"}],"convention":"monomial","field":{"char":17,"deg":1}}
//! ```
//!
//! `value` is an integer or fraction string (reduced into the prime field
//! over `F_q`), a JSON integer, or, over `F_q`, a coefficient vector in the
//! basis of the field modulus.

use std::collections::BTreeSet;

use quartic_core::field::{parse_rational, Field, FiniteField, Rationals};
use quartic_core::quartic::{exponent_index, TernaryQuartic, QUARTIC_EXPONENTS};
use quartic_core::{Error, Result};
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Monomial,
    Multinomial,
}

impl Convention {
    fn name(self) -> &'static str {
        match self {
            Convention::Monomial => "monomial",
            Convention::Multinomial => "multinomial",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum FieldDecl {
    Finite { char: u64, deg: u32 },
    Named(String),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawValue {
    Text(String),
    Int(i64),
    Vector(Vec<u64>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    exps: Vec<u16>,
    value: RawValue,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCurveFile {
    field: FieldDecl,
    coeffs: Vec<RawEntry>,
    convention: Convention,
}

#[derive(Clone, Debug)]
pub enum Curve {
    Rational(TernaryQuartic<Rationals>),
    Finite(TernaryQuartic<FiniteField>),
}

/// A parsed curve file.
#[derive(Clone, Debug)]
pub struct CurveFile {
    pub curve: Curve,
    pub convention: Convention,
    /// Monomial input whose multinomial coefficients are undetermined
    /// because some weight `(4 choose e)` vanishes mod p.
    pub monomial_native: bool,
}

fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn finite_value(field: &FiniteField, v: &RawValue) -> Result<u32> {
    match v {
        RawValue::Vector(c) => field.from_coeffs(c),
        RawValue::Int(n) => Ok(field.from_i64(*n)),
        RawValue::Text(t) => {
            let r = parse_rational(t).ok_or_else(|| input(format!("cannot parse value {t:?}")))?;
            field
                .from_rational(&r)
                .ok_or_else(|| input(format!("denominator of {t} vanishes mod {}", field.p())))
        }
    }
}

fn rational_value(v: &RawValue) -> Result<<Rationals as Field>::Elem> {
    match v {
        RawValue::Vector(_) => Err(input("coefficient vectors need a finite field")),
        RawValue::Int(n) => Ok(Rationals.from_i64(*n)),
        RawValue::Text(t) => parse_rational(t).ok_or_else(|| input(format!("cannot parse value {t:?}"))),
    }
}

fn collect<F: Field>(
    field: F,
    entries: &[RawEntry],
    convention: Convention,
    value: impl Fn(&F, &RawValue) -> Result<F::Elem>,
) -> Result<TernaryQuartic<F>> {
    let mut coeffs = vec![field.zero(); 15];
    let mut seen = BTreeSet::new();
    for e in entries {
        let exps: [u16; 3] = e
            .exps
            .as_slice()
            .try_into()
            .map_err(|_| input(format!("exponent {:?} does not have three entries", e.exps)))?;
        let idx = exponent_index(exps)
            .ok_or_else(|| input(format!("exponent {exps:?} does not sum to 4")))?;
        if !seen.insert(idx) {
            return Err(input(format!("duplicate exponent {exps:?}")));
        }
        coeffs[idx] = value(&field, &e.value)?;
    }
    match convention {
        Convention::Monomial => TernaryQuartic::from_monomial(field, coeffs),
        Convention::Multinomial => TernaryQuartic::from_multinomial(field, coeffs),
    }
}

pub fn parse_curve_file(bytes: &[u8]) -> Result<CurveFile> {
    let raw: RawCurveFile = serde_json::from_slice(bytes).map_err(|e| input(format!("curve file: {e}")))?;
    let curve = match raw.field {
        FieldDecl::Named(name) if name == "rational" => {
            Curve::Rational(collect(Rationals, &raw.coeffs, raw.convention, |_, v| rational_value(v))?)
        }
        FieldDecl::Named(name) => return Err(input(format!("unknown field {name:?}"))),
        FieldDecl::Finite { char, deg } => {
            let field = FiniteField::new(char, deg)?;
            Curve::Finite(collect(field, &raw.coeffs, raw.convention, finite_value)?)
        }
    };
    let monomial_native = match &curve {
        Curve::Rational(f) => !f.has_multinomial(),
        Curve::Finite(f) => !f.has_multinomial(),
    };
    Ok(CurveFile {
        curve,
        convention: raw.convention,
        monomial_native,
    })
}

fn entries<F: Field>(f: &TernaryQuartic<F>, convention: Convention) -> Vec<Value> {
    let field = f.field();
    let multinomial = match convention {
        Convention::Multinomial => f.multinomial_coeffs().ok(),
        Convention::Monomial => None,
    };
    let values = multinomial.unwrap_or_else(|| f.monomial_coeffs());
    QUARTIC_EXPONENTS
        .iter()
        .zip(values)
        .filter(|(_, c)| !field.is_zero(c))
        .map(|(e, c)| json!({"exps": e, "value": field.to_json(c)}))
        .collect()
}

impl CurveFile {
    /// Canonical JSON form. A monomial-native curve is always written in
    /// the monomial convention.
    pub fn to_json(&self) -> Value {
        let convention = if self.monomial_native { Convention::Monomial } else { self.convention };
        let (field, coeffs) = match &self.curve {
            Curve::Rational(f) => (json!("rational"), entries(f, convention)),
            Curve::Finite(f) => {
                let k = f.field();
                (json!({"char": k.p(), "deg": k.degree()}), entries(f, convention))
            }
        };
        json!({"field": field, "coeffs": coeffs, "convention": convention.name()})
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::to_canonical_string;

    const FERMAT: &str = r#"{"field":{"char":17,"deg":1},"convention":"monomial","coeffs":[
        {"exps":[4,0,0],"value":"1"},{"exps":[0,4,0],"value":"1"},{"exps":[0,0,4],"value":"1"}]}"#;

    #[test]
    fn fermat_file() {
        let cf = parse_curve_file(FERMAT.as_bytes()).unwrap();
        let Curve::Finite(f) = &cf.curve else { panic!("finite field expected") };
        assert_eq!(*f, TernaryQuartic::fermat(FiniteField::prime(17).unwrap()));
        let a = f.multinomial_coeffs().unwrap();
        for (e, c) in QUARTIC_EXPONENTS.iter().zip(a) {
            assert_eq!(*c, u32::from(e.contains(&4)));
        }
        assert!(!cf.monomial_native);
    }

    #[test]
    fn rejects_bad_entries() {
        let bad = [
            r#"{"field":"rational","convention":"monomial","coeffs":[{"exps":[3,0,0],"value":"1"}]}"#,
            r#"{"field":"rational","convention":"monomial","coeffs":[{"exps":[4,0],"value":"1"}]}"#,
            r#"{"field":"rational","convention":"monomial","coeffs":[{"exps":[4,0,0],"value":"1"},{"exps":[4,0,0],"value":"2"}]}"#,
            r#"{"field":"rational","convention":"monomial","coeffs":[{"exps":[4,0,0],"value":"1/0"}]}"#,
            r#"{"field":"complex","convention":"monomial","coeffs":[]}"#,
            r#"{"field":{"char":6,"deg":1},"convention":"monomial","coeffs":[]}"#,
            r#"{"field":{"char":5,"deg":1},"convention":"monomial","coeffs":[{"exps":[4,0,0],"value":"1/5"}]}"#,
            r#"{"field":"rational","convention":"binomial","coeffs":[]}"#,
            r#"{"field":"rational","convention":"monomial","coeffs":[],"extra":1}"#,
            "not json",
        ];
        for text in bad {
            let e = parse_curve_file(text.as_bytes()).unwrap_err();
            assert_eq!(e.exit_code(), 2, "{text}: {e}");
        }
    }

    #[test]
    fn monomial_native_in_characteristic_two() {
        // (4 choose 2,1,1) = 12 ≡ 0 mod 2
        let text = r#"{"field":{"char":2,"deg":1},"convention":"monomial","coeffs":[{"exps":[2,1,1],"value":"1"}]}"#;
        let cf = parse_curve_file(text.as_bytes()).unwrap();
        assert!(cf.monomial_native);
        let Curve::Finite(f) = &cf.curve else { panic!("finite field expected") };
        assert_eq!(f.coeff([2, 1, 1]), 1);
        assert!(f.multinomial_coeffs().is_err());
    }

    #[test]
    fn multinomial_convention_scales() {
        let text = r#"{"field":"rational","convention":"multinomial","coeffs":[{"exps":[2,1,1],"value":"1/3"}]}"#;
        let cf = parse_curve_file(text.as_bytes()).unwrap();
        let Curve::Rational(f) = &cf.curve else { panic!("rational field expected") };
        assert_eq!(f.coeff([2, 1, 1]), Rationals.from_i64(4));
    }

    #[test]
    fn fractions_reduce_mod_p() {
        let text = r#"{"field":{"char":7,"deg":1},"convention":"monomial","coeffs":[{"exps":[0,0,4],"value":"1/2"},{"exps":[4,0,0],"value":-1}]}"#;
        let cf = parse_curve_file(text.as_bytes()).unwrap();
        let Curve::Finite(f) = &cf.curve else { panic!("finite field expected") };
        assert_eq!(f.coeff([0, 0, 4]), 4);
        assert_eq!(f.coeff([4, 0, 0]), 6);
    }

    #[test]
    fn extension_values_as_vectors() {
        let text = r#"{"field":{"char":3,"deg":2},"convention":"monomial","coeffs":[{"exps":[4,0,0],"value":[1,2]},{"exps":[0,4,0],"value":"2"},{"exps":[0,0,4],"value":[0,1]}]}"#;
        let cf = parse_curve_file(text.as_bytes()).unwrap();
        let out = to_canonical_string(cf.to_json());
        assert_eq!(
            out,
            "{\"coeffs\":[{\"exps\":[4,0,0],\"value\":[1,2]},{\"exps\":[0,4,0],\"value\":[2,0]},{\"exps\":[0,0,4],\"value\":[0,1]}],\"convention\":\"monomial\",\"field\":{\"char\":3,\"deg\":2}}\n"
        );
    }

    #[test]
    fn round_trip_is_byte_identical() {
        for text in [
            FERMAT,
            r#"{"field":"rational","convention":"multinomial","coeffs":[{"exps":[1,3,0],"value":"6/4"},{"exps":[0,0,4],"value":"-2"}]}"#,
        ] {
            let once = to_canonical_string(parse_curve_file(text.as_bytes()).unwrap().to_json());
            let twice = to_canonical_string(parse_curve_file(once.as_bytes()).unwrap().to_json());
            assert_eq!(once, twice);
        }
    }
}
