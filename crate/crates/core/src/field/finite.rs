use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use super::{Field, FieldSpec};
use crate::error::{Error, Result};
use crate::upoly::UPoly;

/// Largest `p^k` (k > 1) for which log/Zech tables are built.
pub const MAX_TABLE_ORDER: u64 = 1 << 22;

const NO_LOG: u32 = u32::MAX;

/// `F_{p^k}`. Elements are `u32` codes `Σ c_i p^i` of their coefficient
/// vectors over the canonical modulus. Prime fields use direct modular
/// arithmetic; proper extensions use log and Zech-logarithm tables.
#[derive(Clone)]
pub struct FiniteField {
    inner: Arc<Inner>,
}

struct Inner {
    p: u64,
    k: u32,
    q: u64,
    modulus: Vec<u64>,
    tables: Option<Tables>,
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    half: u32,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec())
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.inner.p == other.inner.p && self.inner.k == other.inner.k
    }
}

impl Eq for FiniteField {}

fn cache() -> &'static Mutex<HashMap<(u64, u32), FiniteField>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), FiniteField>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl FiniteField {
    /// `F_{p^k}` with the canonical modulus. Constructed fields are cached.
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if let Some(f) = cache().lock().expect("field cache").get(&(p, k)) {
            return Ok(f.clone());
        }
        let field = Self::build(p, k)?;
        cache()
            .lock()
            .expect("field cache")
            .insert((p, k), field.clone());
        Ok(field)
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    /// Field of order `q`, which must be a prime power.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        Self::new(p, k)
    }

    fn build(p: u64, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidField("extension degree must be positive".into()));
        }
        if p < 2 || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if k == 1 {
            if p > u32::MAX as u64 {
                return Err(Error::InvalidField(format!("prime {p} exceeds 32 bits")));
            }
            return Ok(FiniteField {
                inner: Arc::new(Inner {
                    p,
                    k,
                    q: p,
                    modulus: vec![0, 1],
                    tables: None,
                }),
            });
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= MAX_TABLE_ORDER)
            .ok_or_else(|| Error::CapExceeded(format!("F_{p}^{k} exceeds the table cap {MAX_TABLE_ORDER}")))?;
        let modulus = canonical_modulus(p, k);
        let tables = build_tables(p, k, q, &modulus);
        Ok(FiniteField {
            inner: Arc::new(Inner {
                p,
                k,
                q,
                modulus,
                tables: Some(tables),
            }),
        })
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.k
    }

    pub fn order(&self) -> u64 {
        self.inner.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.inner.q as u32
    }

    pub fn to_coeffs(&self, a: u32) -> Vec<u64> {
        let mut v = a as u64;
        (0..self.inner.k)
            .map(|_| {
                let c = v % self.inner.p;
                v /= self.inner.p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<u32> {
        if coeffs.len() > self.inner.k as usize {
            return Err(Error::LengthMismatch {
                expected: self.inner.k as usize,
                got: coeffs.len(),
            });
        }
        let mut code = 0u64;
        for &c in coeffs.iter().rev() {
            if c >= self.inner.p {
                return Err(Error::Input(format!("coefficient {c} not reduced mod {}", self.inner.p)));
            }
            code = code * self.inner.p + c;
        }
        Ok(code as u32)
    }

    /// The generator `x` of `F_p[x]/(modulus)`.
    pub fn generator(&self) -> u32 {
        if self.inner.k == 1 {
            0
        } else {
            self.inner.p as u32
        }
    }

    /// `a^p` by one table lookup; the identity on prime fields.
    #[inline]
    pub fn frobenius(&self, a: u32) -> u32 {
        let inner = &*self.inner;
        match &inner.tables {
            None => a,
            Some(_) if a == 0 => 0,
            Some(t) => t.exp[((t.log[a as usize] as u64 * inner.p) % (inner.q - 1)) as usize],
        }
    }

    /// Embedding of `self` into `target`, sending the generator to the
    /// smallest root of `self`'s modulus in `target`.
    pub fn embedding_into(&self, target: &FiniteField) -> Result<Embedding> {
        if self.p() != target.p() || target.degree() % self.degree() != 0 {
            return Err(Error::FieldMismatch(self.spec(), target.spec()));
        }
        let k = self.degree() as usize;
        let powers = if k == 1 {
            vec![target.one()]
        } else {
            let m = UPoly::new(
                target.clone(),
                self.modulus().iter().map(|&c| c as u32).collect(),
            );
            let root = *crate::upoly::roots(&m)
                .first()
                .ok_or_else(|| Error::Inconsistent("modulus has no root in the target field".into()))?;
            let mut acc = target.one();
            (0..k)
                .map(|_| {
                    let cur = acc;
                    acc = target.mul(&acc, &root);
                    cur
                })
                .collect()
        };
        Ok(Embedding {
            source: self.clone(),
            target: target.clone(),
            powers,
        })
    }

    #[inline]
    pub fn add_u(&self, a: u32, b: u32) -> u32 {
        let inner = &*self.inner;
        match &inner.tables {
            None => {
                let s = a as u64 + b as u64;
                (if s >= inner.p { s - inner.p } else { s }) as u32
            }
            Some(t) => {
                if inner.p == 2 {
                    return a ^ b;
                }
                if a == 0 {
                    return b;
                }
                if b == 0 {
                    return a;
                }
                let qm1 = (inner.q - 1) as u32;
                let la = t.log[a as usize];
                let lb = t.log[b as usize];
                let d = if lb >= la { lb - la } else { lb + qm1 - la };
                let z = t.zech[d as usize];
                if z == NO_LOG {
                    0
                } else {
                    t.exp[(la + z) as usize]
                }
            }
        }
    }

    #[inline]
    pub fn neg_u(&self, a: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        let inner = &*self.inner;
        match &inner.tables {
            None => (inner.p - a as u64) as u32,
            Some(t) => {
                if inner.p == 2 {
                    a
                } else {
                    t.exp[(t.log[a as usize] + t.half) as usize]
                }
            }
        }
    }

    #[inline]
    pub fn sub_u(&self, a: u32, b: u32) -> u32 {
        self.add_u(a, self.neg_u(b))
    }

    #[inline]
    pub fn mul_u(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let inner = &*self.inner;
        match &inner.tables {
            None => ((a as u64 * b as u64) % inner.p) as u32,
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
        }
    }

    #[inline]
    pub fn inv_u(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let inner = &*self.inner;
        Some(match &inner.tables {
            None => inv_mod(a as u64, inner.p) as u32,
            Some(t) => {
                let qm1 = (inner.q - 1) as u32;
                let la = t.log[a as usize];
                t.exp[((qm1 - la) % qm1) as usize]
            }
        })
    }

    /// Embeds a prime-field residue.
    #[inline]
    pub fn from_u64(&self, n: u64) -> u32 {
        (n % self.inner.p) as u32
    }
}

impl Field for FiniteField {
    type Elem = u32;

    fn spec(&self) -> FieldSpec {
        FieldSpec {
            characteristic: self.inner.p,
            extension_degree: self.inner.k,
            modulus: self.inner.modulus.clone(),
        }
    }

    fn characteristic(&self) -> u64 {
        self.inner.p
    }

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1
    }

    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.inner.p as i64) as u32
    }

    fn from_bigint(&self, n: &BigInt) -> u32 {
        n.mod_floor(&BigInt::from(self.inner.p))
            .to_u32()
            .expect("residue fits")
    }

    fn add(&self, a: &u32, b: &u32) -> u32 {
        self.add_u(*a, *b)
    }

    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.sub_u(*a, *b)
    }

    fn neg(&self, a: &u32) -> u32 {
        self.neg_u(*a)
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.mul_u(*a, *b)
    }

    fn inv(&self, a: &u32) -> Option<u32> {
        self.inv_u(*a)
    }

    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.inner.q) as u32
    }

    fn to_json(&self, a: &u32) -> serde_json::Value {
        serde_json::Value::Array(
            self.to_coeffs(*a)
                .into_iter()
                .map(serde_json::Value::from)
                .collect(),
        )
    }

    fn same_field(&self, other: &Self) -> bool {
        self == other
    }

    fn display(&self, a: &u32) -> String {
        if self.inner.k == 1 {
            a.to_string()
        } else {
            format!("{:?}", self.to_coeffs(*a))
        }
    }
}

/// A field embedding `F_{p^j} → F_{p^k}` for `j | k`.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: FiniteField,
    target: FiniteField,
    powers: Vec<u32>,
}

impl Embedding {
    pub fn source(&self) -> &FiniteField {
        &self.source
    }

    pub fn target(&self) -> &FiniteField {
        &self.target
    }

    pub fn map(&self, a: u32) -> u32 {
        self.source
            .to_coeffs(a)
            .iter()
            .zip(&self.powers)
            .fold(0, |acc, (&c, &pw)| {
                self.target
                    .add_u(acc, self.target.mul_u(self.target.from_u64(c), pw))
            })
    }
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let (g, x, _) = ext_gcd(a as i128, p as i128);
    debug_assert_eq!(g, 1);
    x.rem_euclid(p as i128) as u64
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `(p, k)` with `q = p^k`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..)
        .take_while(|d| d * d <= q)
        .find(|d| q % d == 0)
        .unwrap_or(q);
    let mut k = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1 && is_prime(p)).then_some((p, k))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomials over Z/p as coefficient vectors, low degree first. Only
// used while building the tables.

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = mul_mod(*r.last().unwrap(), lead_inv, p);
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mul_mod(c, mi, p)) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m, p);
        }
        b = poly_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

/// Rabin's irreducibility test.
fn is_irreducible(m: &[u64], p: u64) -> bool {
    let k = m.len() - 1;
    if k == 1 {
        return true;
    }
    if m[0] == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    let mut frob = Vec::with_capacity(k + 1);
    let mut h = x.clone();
    frob.push(h.clone());
    for _ in 0..k {
        h = poly_powmod(&h, p, m, p);
        frob.push(h.clone());
    }
    if poly_sub(&frob[k], &x, p) != Vec::<u64>::new() {
        return false;
    }
    for r in prime_factors(k as u64) {
        let g = poly_gcd(&poly_sub(&frob[k / r as usize], &x, p), m, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Smallest monic irreducible of degree `k`, comparing coefficient vectors
/// lexicographically from the constant term upward.
pub fn canonical_modulus(p: u64, k: u32) -> Vec<u64> {
    let k = k as usize;
    let total = p.pow(k as u32);
    for n in 0..total {
        let mut m = vec![0u64; k + 1];
        let mut v = n;
        for i in (0..k).rev() {
            m[i] = v % p;
            v /= p;
        }
        m[k] = 1;
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn decode(code: u64, p: u64, k: u32) -> Vec<u64> {
    let mut v = code;
    let mut out: Vec<u64> = (0..k)
        .map(|_| {
            let c = v % p;
            v /= p;
            c
        })
        .collect();
    trim(&mut out);
    out
}

fn encode(coeffs: &[u64], p: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn build_tables(p: u64, k: u32, q: u64, modulus: &[u64]) -> Tables {
    let factors = prime_factors(q - 1);
    let generator = (2..q)
        .map(|c| decode(c, p, k))
        .find(|g| {
            factors
                .iter()
                .all(|&r| poly_powmod(g, (q - 1) / r, modulus, p) != vec![1])
        })
        .expect("multiplicative group is cyclic");
    let qm1 = (q - 1) as usize;
    let mut exp = vec![0u32; 2 * qm1];
    let mut log = vec![NO_LOG; q as usize];
    let mut cur = vec![1u64];
    for i in 0..qm1 {
        let code = encode(&cur, p) as u32;
        exp[i] = code;
        exp[i + qm1] = code;
        log[code as usize] = i as u32;
        cur = poly_mulmod(&cur, &generator, modulus, p);
    }
    let zech = (0..qm1)
        .map(|n| {
            let code = exp[n] as u64;
            let c0 = code % p;
            let bumped = code - c0 + (c0 + 1) % p;
            if bumped == 0 {
                NO_LOG
            } else {
                log[bumped as usize]
            }
        })
        .collect();
    let half = if p == 2 { 0 } else { (qm1 / 2) as u32 };
    Tables {
        exp,
        log,
        zech,
        half,
    }
}
