//! Symbolic bracket expressions for quartic forms and their umbral
//! expansion.
//!
//! A bracket `(abu)` is the determinant whose rows are the symbol vectors of
//! its letters, in the listed order. After expanding a product of brackets,
//! each symbolic letter carries a monomial `a₁^i a₂^j a₃^k` of degree 4,
//! which is replaced by the coefficient `A_{ijk}` of
//! `f = Σ (4 choose i,j,k) A_{ijk} x^i y^j z^k`. The letter `u` is the
//! dual-line variable and stays literal. Two-letter brackets `(ab)` describe
//! binary quartics `Σ (4 choose k) a_k x^{4-k} y^k`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::{Field, Rationals};
use crate::poly::MultiPoly;
use crate::quartic::{exponent_index, TernaryQuartic, QUARTIC_EXPONENTS};

/// The reserved dual-line letter.
pub const DUAL_LETTER: char = 'u';

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub letters: Vec<char>,
    pub exponent: u32,
    /// Byte offset of the opening parenthesis.
    pub offset: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketExpr {
    pub factors: Vec<Factor>,
    /// 3 for ternary brackets, 2 for binary ones.
    pub arity: usize,
    degrees: BTreeMap<char, u32>,
}

impl BracketExpr {
    /// Total exponent of brackets containing `letter`.
    pub fn letter_degree(&self, letter: char) -> u32 {
        self.degrees.get(&letter).copied().unwrap_or(0)
    }

    /// Symbolic letters of positive degree, sorted.
    pub fn symbolic_letters(&self) -> Vec<char> {
        self.degrees
            .iter()
            .filter(|(&c, &d)| c != DUAL_LETTER && d > 0)
            .map(|(&c, _)| c)
            .collect()
    }

    pub fn u_degree(&self) -> u32 {
        self.letter_degree(DUAL_LETTER)
    }
}

const MAX_EXPONENT: u32 = 64;

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, offset: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }

    fn unexpected(&self) -> Error {
        match self.text[self.pos..].chars().next() {
            Some(c) => self.err(self.pos, format!("unexpected character '{c}'")),
            None => self.err(self.pos, "unexpected end of input"),
        }
    }

    fn factor(&mut self) -> Result<Factor> {
        let offset = self.pos;
        self.pos += 1;
        let mut letters = Vec::new();
        loop {
            match self.peek() {
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                Some(c) if c.is_ascii_lowercase() => {
                    let letter = c as char;
                    if letters.contains(&letter) {
                        return Err(Error::RepeatedLetter { offset, letter });
                    }
                    letters.push(letter);
                    self.pos += 1;
                }
                _ => return Err(self.unexpected()),
            }
        }
        let exponent = if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err(start, "expected an exponent after '^'"));
            }
            let n: u32 = self.text[start..self.pos]
                .parse()
                .ok()
                .filter(|&n| n <= MAX_EXPONENT)
                .ok_or_else(|| self.err(start, format!("exponent exceeds {MAX_EXPONENT}")))?;
            n
        } else {
            1
        };
        Ok(Factor {
            letters,
            exponent,
            offset,
        })
    }
}

/// Parses `factor+` with `factor := '(' letter+ ')' ('^' int)?`.
pub fn parse_bracket_expr(text: &str) -> Result<BracketExpr> {
    let mut p = Parser {
        text,
        bytes: text.as_bytes(),
        pos: 0,
    };
    let mut factors: Vec<Factor> = Vec::new();
    while let Some(c) = p.peek() {
        if c != b'(' {
            return Err(p.unexpected());
        }
        factors.push(p.factor()?);
    }
    if factors.is_empty() {
        return Err(p.err(p.pos, "expected at least one bracket"));
    }
    let arity = factors[0].letters.len();
    for fac in &factors {
        let n = fac.letters.len();
        if n != 2 && n != 3 {
            return Err(p.err(fac.offset, format!("a bracket needs 2 or 3 letters, found {n}")));
        }
        if n != arity {
            return Err(p.err(fac.offset, "brackets of different sizes"));
        }
        if n == 2 && fac.letters.contains(&DUAL_LETTER) {
            return Err(p.err(fac.offset, "'u' is reserved for ternary brackets"));
        }
    }
    let mut degrees = BTreeMap::new();
    for fac in &factors {
        for &c in &fac.letters {
            *degrees.entry(c).or_insert(0) += fac.exponent;
        }
    }
    for (&letter, &degree) in &degrees {
        if letter != DUAL_LETTER && degree != 0 && degree != 4 {
            return Err(Error::LetterDegree { letter, degree });
        }
    }
    Ok(BracketExpr {
        factors,
        arity,
        degrees,
    })
}

/// An expansion with integer coefficients over ℚ in the variables
/// `A_400, …, A_004, u1, u2, u3` (ternary) or `a0, …, a4` (binary).
#[derive(Clone, Debug, PartialEq)]
pub struct ExpandedContravariant {
    pub u_degree: u32,
    pub coefficient_degree: u32,
    pub polynomial: MultiPoly<Rationals>,
}

pub fn ternary_vars() -> Arc<[String]> {
    static VARS: OnceLock<Arc<[String]>> = OnceLock::new();
    VARS.get_or_init(|| {
        QUARTIC_EXPONENTS
            .iter()
            .map(|[i, j, k]| format!("A_{i}{j}{k}"))
            .chain(["u1", "u2", "u3"].iter().map(|s| s.to_string()))
            .collect()
    })
    .clone()
}

pub fn binary_vars() -> Arc<[String]> {
    static VARS: OnceLock<Arc<[String]>> = OnceLock::new();
    VARS.get_or_init(|| (0..5).map(|k| format!("a{k}")).collect()).clone()
}

pub fn u_vars() -> Arc<[String]> {
    static VARS: OnceLock<Arc<[String]>> = OnceLock::new();
    VARS.get_or_init(|| ["u1", "u2", "u3"].iter().map(|s| s.to_string()).collect())
        .clone()
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i128)> {
    if n == 2 {
        vec![(vec![0, 1], 1), (vec![1, 0], -1)]
    } else {
        vec![
            (vec![0, 1, 2], 1),
            (vec![1, 2, 0], 1),
            (vec![2, 0, 1], 1),
            (vec![0, 2, 1], -1),
            (vec![2, 1, 0], -1),
            (vec![1, 0, 2], -1),
        ]
    }
}

/// Expands over ℚ.
pub fn expand_brackets(expr: &BracketExpr) -> ExpandedContravariant {
    let n = expr.arity;
    let mut letters = expr.symbolic_letters();
    let u_deg = expr.u_degree();
    if n == 3 {
        letters.push(DUAL_LETTER);
    }
    let slot = |c: char| letters.iter().position(|&l| l == c);
    let width = letters.len() * n;
    let perms = permutations(n);

    // Raw expansion in the letters' coordinates.
    let mut acc: HashMap<Vec<u8>, i128> = HashMap::new();
    acc.insert(vec![0; width], 1);
    for fac in &expr.factors {
        let rows: Vec<usize> = match fac.letters.iter().map(|&c| slot(c)).collect::<Option<Vec<_>>>() {
            Some(r) => r,
            None => continue, // only reachable for exponent 0
        };
        for _ in 0..fac.exponent {
            let mut next: HashMap<Vec<u8>, i128> = HashMap::with_capacity(acc.len() * perms.len());
            for (e, c) in &acc {
                for (perm, sign) in &perms {
                    let mut e2 = e.clone();
                    for (r, &col) in rows.iter().zip(perm) {
                        e2[r * n + col] += 1;
                    }
                    *next.entry(e2).or_insert(0) += sign * c;
                }
            }
            next.retain(|_, c| *c != 0);
            acc = next;
        }
    }

    let symbolic = expr.symbolic_letters().len();
    let (vars, nvars) = if n == 3 {
        (ternary_vars(), 18)
    } else {
        (binary_vars(), 5)
    };
    let mut out: BTreeMap<Vec<u16>, i128> = BTreeMap::new();
    for (e, c) in acc {
        let mut key = vec![0u16; nvars];
        for li in 0..symbolic {
            let chunk = &e[li * n..(li + 1) * n];
            let idx = if n == 3 {
                exponent_index([chunk[0] as u16, chunk[1] as u16, chunk[2] as u16]).expect("letter degree 4")
            } else {
                chunk[1] as usize
            };
            key[idx] += 1;
        }
        if n == 3 {
            let uc = &e[symbolic * 3..symbolic * 3 + 3];
            for t in 0..3 {
                key[15 + t] = uc[t] as u16;
            }
        }
        *out.entry(key).or_insert(0) += c;
    }
    let q = Rationals;
    let polynomial = MultiPoly::from_terms(
        q,
        vars,
        out.into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(k, c)| (k, BigRational::from_integer(BigInt::from(c)))),
    );
    ExpandedContravariant {
        u_degree: u_deg,
        coefficient_degree: symbolic as u32,
        polynomial,
    }
}

pub fn expand_text(text: &str) -> Result<ExpandedContravariant> {
    Ok(expand_brackets(&parse_bracket_expr(text)?))
}

impl ExpandedContravariant {
    /// Reduction of the integer coefficients into another field.
    pub fn reduce<F: Field>(&self, field: &F) -> MultiPoly<F> {
        self.polynomial
            .map_coeffs(field.clone(), |c| field.from_bigint(c.numer()))
    }

    /// Substitutes the multinomial coefficients of `f`, leaving a form in
    /// `u1, u2, u3`.
    pub fn specialize<F: Field>(&self, f: &TernaryQuartic<F>) -> Result<MultiPoly<F>> {
        if self.polynomial.num_vars() != 18 {
            return Err(Error::Input("not a ternary expansion".into()));
        }
        let field = f.field();
        let a = f.multinomial_coeffs()?;
        let mut out = MultiPoly::zero(field.clone(), u_vars());
        for (e, c) in self.polynomial.terms() {
            let mut v = field.from_bigint(c.numer());
            for (i, &k) in e[..15].iter().enumerate() {
                if k > 0 {
                    v = field.mul(&v, &field.pow(&a[i], k as u64));
                }
            }
            out.add_term(e[15..].to_vec(), v);
        }
        Ok(out)
    }

    /// Substitutes binary coefficients `a0..a4`.
    pub fn specialize_binary<F: Field>(&self, field: &F, a: &[F::Elem; 5]) -> Result<F::Elem> {
        if self.polynomial.num_vars() != 5 {
            return Err(Error::Input("not a binary expansion".into()));
        }
        Ok(self.polynomial.terms().iter().fold(field.zero(), |acc, (e, c)| {
            let mut v = field.from_bigint(c.numer());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    v = field.mul(&v, &field.pow(&a[i], k as u64));
                }
            }
            field.add(&acc, &v)
        }))
    }
}

/// `(abu)^4`, expanded once.
pub fn k1_symbolic() -> &'static ExpandedContravariant {
    static K1: OnceLock<ExpandedContravariant> = OnceLock::new();
    K1.get_or_init(|| expand_text("(abu)^4").expect("valid expression"))
}

/// `(abu)^2(acu)^2(bcu)^2`, expanded once.
pub fn k2_symbolic() -> &'static ExpandedContravariant {
    static K2: OnceLock<ExpandedContravariant> = OnceLock::new();
    K2.get_or_init(|| expand_text("(abu)^2(acu)^2(bcu)^2").expect("valid expression"))
}

/// `(ab)^4` for binary quartics.
pub fn s_symbolic() -> &'static ExpandedContravariant {
    static S: OnceLock<ExpandedContravariant> = OnceLock::new();
    S.get_or_init(|| expand_text("(ab)^4").expect("valid expression"))
}

/// `(ab)^2(ac)^2(bc)^2` for binary quartics.
pub fn t_symbolic() -> &'static ExpandedContravariant {
    static T: OnceLock<ExpandedContravariant> = OnceLock::new();
    T.get_or_init(|| expand_text("(ab)^2(ac)^2(bc)^2").expect("valid expression"))
}
