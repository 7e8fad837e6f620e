//! Arithmetic in GF(p^d) on packed integer codes.
//!
//! An element is stored as the integer whose base-`p` digits are its
//! coefficients in the polynomial basis `1, a, a^2, ...` (least significant
//! digit first), where `a` is a root of the field modulus. Multiplication
//! goes through log/antilog tables over a primitive element, addition
//! through a Zech logarithm table, so every operation is a table lookup.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order we are willing to tabulate.
pub const MAX_ORDER: u64 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

/// A field element as its packed coefficient code.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Scalar(pub u32);

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Description of GF(p^deg): the prime, the degree and a monic modulus
/// `modulus[0] + modulus[1] x + ... + x^deg` (coefficients low to high).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub deg: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    /// Validates primality of `p`, shape and irreducibility of `modulus`.
    pub fn new(p: u32, deg: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if deg == 0 {
            return Err(Error::InvalidField("degree must be positive".into()));
        }
        let order = (p as u64).checked_pow(deg).filter(|&q| q <= MAX_ORDER);
        if order.is_none() {
            return Err(Error::InvalidField(format!(
                "GF({p}^{deg}) exceeds the supported order {MAX_ORDER}"
            )));
        }
        if modulus.len() != deg as usize + 1 || modulus[deg as usize] != 1 {
            return Err(Error::InvalidField(format!(
                "modulus must be monic with {} coefficients",
                deg + 1
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficient out of range".into()));
        }
        if !poly::is_irreducible(&modulus, p) {
            return Err(Error::InvalidField(format!(
                "modulus {modulus:?} is reducible over GF({p})"
            )));
        }
        Ok(FieldSpec { p, deg, modulus })
    }

    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Self> {
        Self::with_default_modulus(p, 1)
    }

    /// GF(p^deg) with the default modulus: the monic irreducible polynomial
    /// whose lower coefficients, read as a base-`p` number, are smallest.
    pub fn with_default_modulus(p: u32, deg: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if deg == 0 {
            return Err(Error::InvalidField("degree must be positive".into()));
        }
        let q = (p as u64)
            .checked_pow(deg)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| Error::InvalidField(format!("GF({p}^{deg}) is too large")))?;
        if deg == 1 {
            return Self::new(p, 1, vec![0, 1]);
        }
        for low in 0..q {
            let mut coeffs = digits(low as u32, p, deg as usize);
            coeffs.push(1);
            if coeffs[0] != 0 && poly::is_irreducible(&coeffs, p) {
                return Self::new(p, deg, coeffs);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn order(&self) -> u32 {
        self.p.pow(self.deg)
    }

    /// Parses `"p"`, `"p^d"` (default modulus) as used on the command line.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::InvalidField(format!("cannot parse field `{text}`"));
        let (p, d) = match text.trim().split_once('^') {
            Some((p, d)) => (p.trim(), d.trim()),
            None => (text.trim(), "1"),
        };
        let p: u32 = p.parse().map_err(|_| bad())?;
        let d: u32 = d.parse().map_err(|_| bad())?;
        Self::with_default_modulus(p, d)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.deg == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{})", self.p, self.deg)
        }
    }
}

struct Tables {
    spec: FieldSpec,
    q: u32,
    /// exp[k] = g^k for k in 0..2(q-1)
    exp: Vec<u32>,
    /// log[c] for c != 0
    log: Vec<u32>,
    /// zech[k] = log(1 + g^k), NO_LOG when that sum is zero
    zech: Vec<u32>,
    neg: Vec<u32>,
}

/// A tabulated finite field. Cheap to clone; compares by its spec.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.spec.hash(state)
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.spec)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.spec)
    }
}

impl Field {
    pub fn new(spec: FieldSpec) -> Self {
        let p = spec.p;
        let deg = spec.deg as usize;
        let q = spec.order();
        let n = (q - 1) as usize;

        let neg: Vec<u32> = (0..q)
            .map(|c| {
                let d: Vec<u32> = digits(c, p, deg).into_iter().map(|x| (p - x) % p).collect();
                undigits(&d, p)
            })
            .collect();

        let g = primitive_element(&spec);
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![NO_LOG; q as usize];
        let mut cur = 1u32;
        for (k, slot) in exp.iter_mut().enumerate().take(n) {
            *slot = cur;
            log[cur as usize] = k as u32;
            cur = poly::mul_codes(cur, g, &spec);
        }
        for k in n..2 * n {
            exp[k] = exp[k - n];
        }

        let zech = (0..n)
            .map(|k| {
                let c = exp[k];
                let low = c % p;
                let s = c - low + (low + 1) % p;
                if s == 0 {
                    NO_LOG
                } else {
                    log[s as usize]
                }
            })
            .collect();

        Field(Arc::new(Tables { spec, q, exp, log, zech, neg }))
    }

    pub fn from_spec(spec: &FieldSpec) -> Self {
        Self::new(spec.clone())
    }

    pub fn gf(p: u32) -> Result<Self> {
        Ok(Self::new(FieldSpec::prime(p)?))
    }

    pub fn gf_pow(p: u32, deg: u32) -> Result<Self> {
        Ok(Self::new(FieldSpec::with_default_modulus(p, deg)?))
    }

    #[inline]
    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.0.q
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.0.spec.p
    }

    pub fn scalar(&self, code: u32) -> Result<Scalar> {
        if code < self.0.q {
            Ok(Scalar(code))
        } else {
            Err(Error::InvalidInput(format!(
                "scalar code {code} outside [0, {})",
                self.0.q
            )))
        }
    }

    /// The image of an integer under Z -> GF(q).
    pub fn from_int(&self, n: i64) -> Scalar {
        Scalar(n.rem_euclid(self.0.spec.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        if self.0.spec.p == 2 {
            return Scalar(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let t = &*self.0;
        let n = t.q - 1;
        let la = t.log[a.0 as usize];
        let lb = t.log[b.0 as usize];
        let k = if lb >= la { lb - la } else { lb + n - la };
        let z = t.zech[k as usize];
        if z == NO_LOG {
            Scalar::ZERO
        } else {
            Scalar(t.exp[(la + z) as usize])
        }
    }

    #[inline]
    pub fn neg(&self, a: Scalar) -> Scalar {
        Scalar(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        if a.0 == 0 || b.0 == 0 {
            return Scalar::ZERO;
        }
        let t = &*self.0;
        Scalar(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Scalar) -> Option<Scalar> {
        if a.0 == 0 {
            return None;
        }
        let t = &*self.0;
        let n = t.q - 1;
        Some(Scalar(t.exp[((n - t.log[a.0 as usize]) % n.max(1)) as usize]))
    }

    pub fn pow(&self, a: Scalar, e: u64) -> Scalar {
        if e == 0 {
            return Scalar::ONE;
        }
        if a.0 == 0 {
            return Scalar::ZERO;
        }
        let t = &*self.0;
        let n = (t.q - 1) as u64;
        Scalar(t.exp[((t.log[a.0 as usize] as u64 * (e % n)) % n) as usize])
    }

    /// All elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = Scalar> {
        (0..self.0.q).map(Scalar)
    }

    /// A field embedding of `self` into `big`: the table sends each code of
    /// `self` to its image. Requires `self.deg` to divide `big.deg`.
    pub fn embedding_into(&self, big: &Field) -> Result<Vec<Scalar>> {
        let (s, b) = (self.spec(), big.spec());
        if s.p != b.p || b.deg % s.deg != 0 {
            return Err(Error::InvalidField(format!("{s} does not embed into {b}")));
        }
        // image of the generator root: any root of our modulus in `big`
        let eval = |x: Scalar| {
            s.modulus.iter().rev().fold(Scalar::ZERO, |acc, &c| {
                big.add(big.mul(acc, x), Scalar(c))
            })
        };
        let root = big
            .elements()
            .find(|&x| eval(x).is_zero())
            .ok_or_else(|| Error::InvalidField(format!("no root of {s} modulus in {b}")))?;
        let mut powers = Vec::with_capacity(s.deg as usize);
        let mut cur = Scalar::ONE;
        for _ in 0..s.deg {
            powers.push(cur);
            cur = big.mul(cur, root);
        }
        Ok(self
            .elements()
            .map(|c| {
                digits(c.0, s.p, s.deg as usize)
                    .iter()
                    .zip(&powers)
                    .fold(Scalar::ZERO, |acc, (&d, &pw)| {
                        big.add(acc, big.mul(big.from_int(d as i64), pw))
                    })
            })
            .collect())
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

fn digits(mut c: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(c % p);
        c /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn primitive_element(spec: &FieldSpec) -> u32 {
    let q = spec.order();
    if q == 2 {
        return 1;
    }
    let n = (q - 1) as u64;
    let factors = prime_factors(n);
    (2..q)
        .find(|&g| {
            factors
                .iter()
                .all(|&l| poly::pow_codes(g, n / l, spec) != 1)
        })
        .expect("the multiplicative group of a finite field is cyclic")
}

/// Dense polynomial arithmetic over GF(p), used only while building tables
/// and validating moduli.
mod poly {
    use super::{digits, undigits, FieldSpec};

    fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64;
        let mut e = p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        trim(out.into_iter().map(|x| x as u32).collect())
    }

    fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut a = trim(a.to_vec());
        let m = trim(m.to_vec());
        let lead_inv = inv_mod(*m.last().unwrap(), p);
        while a.len() >= m.len() {
            let shift = a.len() - m.len();
            let c = (*a.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
            for (i, &mi) in m.iter().enumerate() {
                let t = (c as u64 * mi as u64 % p as u64) as u32;
                a[shift + i] = (a[shift + i] + p - t) % p;
            }
            a = trim(a);
        }
        a
    }

    fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// x^(p^k) mod f
    fn frobenius_power(f: &[u32], p: u32, k: u32) -> Vec<u32> {
        let mut cur = rem(&[0, 1], f, p);
        for _ in 0..k {
            // cur <- cur^p mod f
            let mut acc = vec![1u32];
            let mut base = cur.clone();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = rem(&mul(&acc, &base, p), f, p);
                }
                base = rem(&mul(&base, &base, p), f, p);
                e >>= 1;
            }
            cur = acc;
        }
        cur
    }

    /// Rabin's irreducibility test for a monic polynomial.
    pub(super) fn is_irreducible(f: &[u32], p: u32) -> bool {
        let n = (f.len() - 1) as u32;
        if n == 1 {
            return true;
        }
        let x = vec![0u32, 1];
        if sub(&frobenius_power(f, p, n), &x, p) != rem(&[], f, p) {
            return false;
        }
        super::prime_factors(n as u64).into_iter().all(|r| {
            let h = sub(&frobenius_power(f, p, n / r as u32), &x, p);
            gcd(f, &h, p).len() == 1
        })
    }

    pub(super) fn mul_codes(a: u32, b: u32, spec: &FieldSpec) -> u32 {
        let d = spec.deg as usize;
        let prod = mul(&digits(a, spec.p, d), &digits(b, spec.p, d), spec.p);
        let mut r = rem(&prod, &spec.modulus, spec.p);
        r.resize(d, 0);
        undigits(&r, spec.p)
    }

    pub(super) fn pow_codes(a: u32, mut e: u64, spec: &FieldSpec) -> u32 {
        let mut acc = 1u32;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_codes(acc, base, spec);
            }
            base = mul_codes(base, base, spec);
            e >>= 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_specs() {
        assert!(FieldSpec::new(4, 1, vec![0, 1]).is_err());
        // x^2 + 1 = (x + 1)^2 over GF(2)
        assert!(FieldSpec::new(2, 2, vec![1, 0, 1]).is_err());
        assert!(FieldSpec::new(2, 2, vec![1, 1, 0]).is_err());
        assert!(FieldSpec::new(2, 2, vec![1, 1, 1]).is_ok());
    }

    #[test]
    fn default_gf256_modulus_is_0x11b() {
        let s = FieldSpec::with_default_modulus(2, 8).unwrap();
        assert_eq!(s.modulus, vec![1, 1, 0, 1, 1, 0, 0, 0, 1]);
    }

    #[test]
    fn gf4_multiplication_table() {
        // modulus x^2 + x + 1, a = code 2, a^2 = a + 1 = code 3
        let f = Field::gf_pow(2, 2).unwrap();
        assert_eq!(f.mul(Scalar(2), Scalar(2)), Scalar(3));
        assert_eq!(f.mul(Scalar(2), Scalar(3)), Scalar(1));
        assert_eq!(f.add(Scalar(2), Scalar(3)), Scalar(1));
    }

    #[test]
    fn axioms_hold_exhaustively_on_small_fields() {
        for (p, d) in [(2, 1), (3, 1), (5, 1), (2, 3), (3, 2), (7, 1)] {
            let f = Field::gf_pow(p, d).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), Scalar::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Scalar::ONE);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c)),
                            "{f} distributivity"
                        );
                        assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn addition_matches_digitwise_sum() {
        let f = Field::gf_pow(3, 3).unwrap();
        for a in 0..27u32 {
            for b in 0..27u32 {
                let d: Vec<u32> = digits(a, 3, 3)
                    .iter()
                    .zip(digits(b, 3, 3))
                    .map(|(x, y)| (x + y) % 3)
                    .collect();
                assert_eq!(f.add(Scalar(a), Scalar(b)), Scalar(undigits(&d, 3)));
            }
        }
    }

    #[test]
    fn embedding_is_a_ring_homomorphism() {
        let small = Field::gf_pow(2, 2).unwrap();
        let big = Field::gf_pow(2, 4).unwrap();
        let e = small.embedding_into(&big).unwrap();
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(e[small.add(a, b).0 as usize], big.add(e[a.0 as usize], e[b.0 as usize]));
                assert_eq!(e[small.mul(a, b).0 as usize], big.mul(e[a.0 as usize], e[b.0 as usize]));
            }
        }
        assert!(small.embedding_into(&Field::gf_pow(2, 3).unwrap()).is_err());
    }

    #[test]
    fn parse_field_text() {
        assert_eq!(FieldSpec::parse("3").unwrap().order(), 3);
        assert_eq!(FieldSpec::parse("2^8").unwrap().order(), 256);
        assert!(FieldSpec::parse("6").is_err());
        assert!(FieldSpec::parse("x").is_err());
    }
}
