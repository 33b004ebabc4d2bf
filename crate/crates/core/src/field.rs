//! Galois fields and two-level towers GF(p) ⊂ GF(q) ⊂ GF(qⁿ).
//!
//! Elements are `u32` handles. An element of a degree-`k` extension of a
//! ground field of order `g` is the integer `Σ cᵢ gⁱ` built from its
//! little-endian coefficient vector `(c₀, …, c_{k−1})`, so the ground field
//! sits inside its extension as the handles `0..g` and `0`/`1` are always
//! zero and one.
//!
//! Fields of order at most 256 carry full operation tables. Larger fields
//! reduce polynomials on the fly and invert with the extended Euclidean
//! algorithm, which keeps GF(8⁴) and GF(9⁶) cheap in memory.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Handle of a field element.
pub type Elem = u32;

/// Largest field order accepted by [`FieldTower::new`].
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

const TABLE_LIMIT: u32 = 256;

struct Tables {
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

/// A finite field, either prime or a simple extension of a ground field.
pub struct Field {
    characteristic: u32,
    order: u32,
    degree: usize,
    ground: Option<Arc<Field>>,
    modulus: Vec<Elem>,
    tables: Option<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("order", &self.order)
            .field("degree", &self.degree)
            .field("modulus", &self.modulus)
            .finish()
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power `q` into `(p, k)` with `q = p^k`.
pub fn prime_power(q: u64) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    if rest != 1 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p as u32, k))
}

impl Field {
    /// The prime field GF(p), with the formal modulus `x`.
    pub fn prime(p: u32) -> Result<Arc<Field>> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if p as u64 > MAX_FIELD_ORDER {
            return Err(Error::TooLarge { order: p as u64, limit: MAX_FIELD_ORDER });
        }
        let mut field = Field {
            characteristic: p,
            order: p,
            degree: 1,
            ground: None,
            modulus: vec![0, 1],
            tables: None,
        };
        field.build_tables();
        Ok(Arc::new(field))
    }

    /// The extension `ground[x] / (modulus)`. The modulus is given
    /// little-endian and must be monic and irreducible over `ground`.
    pub fn extension(ground: Arc<Field>, modulus: Vec<Elem>) -> Result<Arc<Field>> {
        if modulus.len() < 2 {
            return Err(Error::InvalidModulus("degree must be at least 1".into()));
        }
        if modulus.iter().any(|&c| c >= ground.order) {
            return Err(Error::InvalidModulus("coefficient outside the ground field".into()));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        let degree = modulus.len() - 1;
        let order = (ground.order as u64)
            .checked_pow(degree as u32)
            .filter(|&o| o <= MAX_FIELD_ORDER)
            .ok_or(Error::TooLarge {
                order: (ground.order as u64).saturating_pow(degree as u32),
                limit: MAX_FIELD_ORDER,
            })?;
        if !poly::is_irreducible(&ground, &modulus) {
            return Err(Error::InvalidModulus(format!(
                "{} is reducible over GF({})",
                poly::describe(&ground, &modulus),
                ground.order
            )));
        }
        let mut field = Field {
            characteristic: ground.characteristic,
            order: order as u32,
            degree,
            ground: Some(ground),
            modulus,
            tables: None,
        };
        field.build_tables();
        Ok(Arc::new(field))
    }

    /// Extension by the lexicographically smallest monic irreducible
    /// polynomial of the given degree, comparing coefficients from the
    /// constant term upwards.
    pub fn extension_lex(ground: Arc<Field>, degree: usize) -> Result<Arc<Field>> {
        let modulus = poly::lex_smallest_irreducible(&ground, degree)?;
        Field::extension(ground, modulus)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    /// Degree over the ground field (1 for a prime field).
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ground(&self) -> Option<&Arc<Field>> {
        self.ground.as_ref()
    }

    pub fn is_prime_field(&self) -> bool {
        self.ground.is_none()
    }

    /// Little-endian monic modulus over the ground field.
    pub fn modulus(&self) -> &[Elem] {
        &self.modulus
    }

    pub fn contains(&self, a: Elem) -> bool {
        a < self.order
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    /// Coefficients over the ground field, little-endian, of length `degree`.
    pub fn coeffs(&self, a: Elem) -> Vec<Elem> {
        match &self.ground {
            None => vec![a],
            Some(g) => {
                let mut out = Vec::with_capacity(self.degree);
                let mut rest = a;
                for _ in 0..self.degree {
                    out.push(rest % g.order);
                    rest /= g.order;
                }
                out
            }
        }
    }

    pub fn from_coeffs(&self, coeffs: &[Elem]) -> Elem {
        match &self.ground {
            None => coeffs.first().copied().unwrap_or(0),
            Some(g) => coeffs.iter().rev().fold(0, |acc, &c| acc * g.order + c),
        }
    }

    /// The class of `x` in `ground[x]/(modulus)`.
    pub fn root(&self) -> Elem {
        match &self.ground {
            None => 0,
            Some(g) if self.degree == 1 => g.neg(self.modulus[0]),
            Some(g) => g.order,
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.add[(a * self.order + b) as usize],
            None => self.slow_add(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.neg[a as usize],
            None => self.slow_neg(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.mul[(a * self.order + b) as usize],
            None => self.slow_mul(a, b),
        }
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero");
        match &self.tables {
            Some(t) => t.inv[a as usize],
            None => self.slow_inv(a),
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Elem) -> u64 {
        assert!(a != 0);
        let group = self.order as u64 - 1;
        let mut ord = group;
        for d in prime_factors(group) {
            while ord.is_multiple_of(d) && self.pow(a, ord / d) == 1 {
                ord /= d;
            }
        }
        ord
    }

    /// Smallest handle generating the multiplicative group.
    pub fn primitive_element(&self) -> Elem {
        (1..self.order)
            .find(|&a| self.mult_order(a) == self.order as u64 - 1)
            .expect("finite fields have primitive elements")
    }

    /// Text form: prime-field elements are decimal integers, extension
    /// elements are bracketed little-endian lists of ground elements.
    pub fn format(&self, a: Elem) -> String {
        match &self.ground {
            None => a.to_string(),
            Some(g) => {
                let parts: Vec<String> = self.coeffs(a).into_iter().map(|c| g.format(c)).collect();
                format!("[{}]", parts.join(","))
            }
        }
    }

    pub fn parse(&self, text: &str) -> Result<Elem> {
        let text = text.trim();
        match &self.ground {
            None => {
                let v: u64 = text
                    .parse()
                    .map_err(|_| Error::Parse(format!("expected an integer mod {}, got {text:?}", self.order)))?;
                if v >= self.order as u64 {
                    return Err(Error::Parse(format!("{v} is out of range for GF({})", self.order)));
                }
                Ok(v as Elem)
            }
            Some(g) => {
                let inner = text
                    .strip_prefix('[')
                    .and_then(|t| t.strip_suffix(']'))
                    .ok_or_else(|| Error::Parse(format!("expected a bracketed coefficient list, got {text:?}")))?;
                let parts = split_top_level(inner)?;
                if parts.len() != self.degree {
                    return Err(Error::Parse(format!(
                        "expected {} coefficients, got {} in {text:?}",
                        self.degree,
                        parts.len()
                    )));
                }
                let coeffs = parts.iter().map(|p| g.parse(p)).collect::<Result<Vec<_>>>()?;
                Ok(self.from_coeffs(&coeffs))
            }
        }
    }

    /// The modulus written as a list of ground-field elements.
    pub fn describe_modulus(&self) -> String {
        match &self.ground {
            None => "[0,1]".to_string(),
            Some(g) => {
                let parts: Vec<String> = self.modulus.iter().map(|&c| g.format(c)).collect();
                format!("[{}]", parts.join(","))
            }
        }
    }

    fn build_tables(&mut self) {
        if self.order > TABLE_LIMIT {
            return;
        }
        let n = self.order;
        let mut add = Vec::with_capacity((n * n) as usize);
        let mut mul = Vec::with_capacity((n * n) as usize);
        for a in 0..n {
            for b in 0..n {
                add.push(self.slow_add(a, b));
                mul.push(self.slow_mul(a, b));
            }
        }
        let neg = (0..n).map(|a| self.slow_neg(a)).collect();
        let inv = (0..n).map(|a| if a == 0 { 0 } else { self.slow_inv(a) }).collect();
        self.tables = Some(Tables { add, mul, neg, inv });
    }

    fn slow_add(&self, a: Elem, b: Elem) -> Elem {
        match &self.ground {
            None => ((a as u64 + b as u64) % self.order as u64) as Elem,
            Some(g) => {
                let (ca, cb) = (self.coeffs(a), self.coeffs(b));
                let sum: Vec<Elem> = ca.iter().zip(&cb).map(|(&x, &y)| g.add(x, y)).collect();
                self.from_coeffs(&sum)
            }
        }
    }

    fn slow_neg(&self, a: Elem) -> Elem {
        match &self.ground {
            None => (self.order - a) % self.order,
            Some(g) => {
                let c: Vec<Elem> = self.coeffs(a).into_iter().map(|x| g.neg(x)).collect();
                self.from_coeffs(&c)
            }
        }
    }

    fn slow_mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.ground {
            None => ((a as u64 * b as u64) % self.order as u64) as Elem,
            Some(g) => {
                let prod = poly::mul(g, &self.coeffs(a), &self.coeffs(b));
                let (_, rem) = poly::divrem(g, &prod, &self.modulus);
                self.from_coeffs(&rem)
            }
        }
    }

    fn slow_inv(&self, a: Elem) -> Elem {
        match &self.ground {
            None => self.slow_pow_prime(a, self.order as u64 - 2),
            Some(g) => {
                let inv = poly::inverse_mod(g, &self.coeffs(a), &self.modulus);
                self.from_coeffs(&inv)
            }
        }
    }

    fn slow_pow_prime(&self, a: Elem, mut e: u64) -> Elem {
        let p = self.order as u64;
        let (mut base, mut acc) = (a as u64 % p, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc as Elem
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
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

/// Splits on commas that are not nested inside brackets.
pub(crate) fn split_top_level(text: &str) -> Result<Vec<&str>> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, ch) in text.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse(format!("unbalanced brackets in {text:?}")));
                }
            }
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced brackets in {text:?}")));
    }
    parts.push(&text[start..]);
    Ok(parts)
}

/// Dense little-endian polynomials over a field.
pub(crate) mod poly {
    use super::{Elem, Field};
    use crate::error::{Error, Result};

    pub fn trim(mut a: Vec<Elem>) -> Vec<Elem> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn mul(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        trim(out)
    }

    fn sub(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let len = a.len().max(b.len());
        let out = (0..len)
            .map(|i| f.sub(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0)))
            .collect();
        trim(out)
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn divrem(f: &Field, a: &[Elem], b: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
        let b = trim(b.to_vec());
        assert!(!b.is_empty(), "division by the zero polynomial");
        let mut rem = trim(a.to_vec());
        if rem.len() < b.len() {
            return (Vec::new(), rem);
        }
        let lead_inv = f.inv(*b.last().unwrap());
        let mut quot = vec![0; rem.len() - b.len() + 1];
        while rem.len() >= b.len() {
            let shift = rem.len() - b.len();
            let c = f.mul(*rem.last().unwrap(), lead_inv);
            quot[shift] = c;
            for (i, &bi) in b.iter().enumerate() {
                rem[shift + i] = f.sub(rem[shift + i], f.mul(c, bi));
            }
            rem = trim(rem);
        }
        (trim(quot), rem)
    }

    /// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
    pub fn inverse_mod(f: &Field, a: &[Elem], m: &[Elem]) -> Vec<Elem> {
        let (mut r0, mut r1) = (trim(m.to_vec()), trim(a.to_vec()));
        let (mut s0, mut s1): (Vec<Elem>, Vec<Elem>) = (Vec::new(), vec![1]);
        assert!(!r1.is_empty(), "inverse of zero");
        while !r1.is_empty() {
            let (q, r) = divrem(f, &r0, &r1);
            let s2 = sub(f, &s0, &mul(f, &q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        assert_eq!(r0.len(), 1, "element not invertible modulo a reducible polynomial");
        let c = f.inv(r0[0]);
        s0.into_iter().map(|x| f.mul(x, c)).collect()
    }

    pub fn eval(f: &Field, a: &[Elem], x: Elem) -> Elem {
        a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Trial division by every monic polynomial of degree at most half.
    pub fn is_irreducible(f: &Field, a: &[Elem]) -> bool {
        let a = trim(a.to_vec());
        let deg = a.len().saturating_sub(1);
        if deg == 0 {
            return false;
        }
        if deg == 1 {
            return true;
        }
        if f.elements().any(|x| eval(f, &a, x) == 0) {
            return false;
        }
        for d in 2..=deg / 2 {
            let count = (f.order() as u64).pow(d as u32);
            for idx in 0..count {
                let mut g: Vec<Elem> = digits(idx, f.order(), d);
                g.push(1);
                if divrem(f, &a, &g).1.is_empty() {
                    return false;
                }
            }
        }
        true
    }

    fn digits(mut idx: u64, base: u32, len: usize) -> Vec<Elem> {
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            out.push((idx % base as u64) as Elem);
            idx /= base as u64;
        }
        out
    }

    /// Monic irreducible of the given degree that is smallest when the
    /// coefficient tuples `(c₀, c₁, …)` are compared lexicographically.
    pub fn lex_smallest_irreducible(f: &Field, degree: usize) -> Result<Vec<Elem>> {
        if degree == 0 {
            return Err(Error::InvalidModulus("degree must be at least 1".into()));
        }
        let count = (f.order() as u64)
            .checked_pow(degree as u32)
            .ok_or(Error::TooLarge { order: u64::MAX, limit: super::MAX_FIELD_ORDER })?;
        for idx in 0..count {
            // c₀ is the most significant digit of the search index
            let mut g = digits(idx, f.order(), degree);
            g.reverse();
            g.push(1);
            if is_irreducible(f, &g) {
                return Ok(g);
            }
        }
        Err(Error::InvalidModulus(format!("no irreducible polynomial of degree {degree}")))
    }

    pub fn describe(f: &Field, a: &[Elem]) -> String {
        let parts: Vec<String> = a.iter().map(|&c| f.format(c)).collect();
        format!("[{}]", parts.join(","))
    }
}

/// GF(p) ⊂ GF(q) ⊂ GF(qⁿ) with q = pᵏ, the top field built directly as a
/// degree-n extension of GF(q).
#[derive(Clone, Debug)]
pub struct FieldTower {
    p: u32,
    k: u32,
    n: u32,
    base: Arc<Field>,
    top: Arc<Field>,
}

impl FieldTower {
    /// Tower with lexicographically smallest moduli at both levels.
    pub fn new(p: u32, k: u32, n: u32) -> Result<Self> {
        Self::build(p, k, n, None)
    }

    /// Tower whose top modulus (over GF(q), little-endian, monic) is given.
    pub fn with_top_modulus(p: u32, k: u32, n: u32, modulus: Vec<Elem>) -> Result<Self> {
        Self::build(p, k, n, Some(modulus))
    }

    /// Tower over GF(q) for a prime power q.
    pub fn for_q(q: u32, n: u32) -> Result<Self> {
        let (p, k) = prime_power(q as u64)?;
        Self::new(p, k, n)
    }

    fn build(p: u32, k: u32, n: u32, top_modulus: Option<Vec<Elem>>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if k == 0 || n == 0 {
            return Err(Error::Precondition("extension degrees must be at least 1".into()));
        }
        let total = (p as u64).checked_pow(k * n).filter(|&o| o <= MAX_FIELD_ORDER);
        if total.is_none() {
            return Err(Error::TooLarge {
                order: (p as u64).saturating_pow(k * n),
                limit: MAX_FIELD_ORDER,
            });
        }
        let prime = Field::prime(p)?;
        let base = if k == 1 { prime } else { Field::extension_lex(prime, k as usize)? };
        let top = match top_modulus {
            Some(m) => {
                if m.len() != n as usize + 1 {
                    return Err(Error::InvalidModulus(format!("top modulus must have degree {n}")));
                }
                Field::extension(base.clone(), m)?
            }
            None => Field::extension_lex(base.clone(), n as usize)?,
        };
        Ok(FieldTower { p, k, n, base, top })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn q(&self) -> u32 {
        self.base.order()
    }

    /// GF(q).
    pub fn base(&self) -> &Arc<Field> {
        &self.base
    }

    /// GF(qⁿ).
    pub fn top(&self) -> &Arc<Field> {
        &self.top
    }

    /// Moduli of GF(q) over GF(p) and of GF(qⁿ) over GF(q), in text form.
    pub fn moduli(&self) -> (String, String) {
        (self.base.describe_modulus(), self.top.describe_modulus())
    }

    /// Coordinates of ξ in the basis {1, x, …, x^{n−1}}.
    pub fn as_base_vector(&self, xi: Elem) -> Result<Vec<Elem>> {
        if !self.top.contains(xi) {
            return Err(Error::ForeignElement { elem: xi as u64, order: self.top.order() as u64 });
        }
        Ok(self.top.coeffs(xi))
    }

    pub fn from_base_vector(&self, v: &[Elem]) -> Elem {
        debug_assert_eq!(v.len(), self.n());
        self.top.from_coeffs(v)
    }

    pub fn in_base(&self, xi: Elem) -> bool {
        xi < self.q()
    }

    pub fn frobenius(&self, xi: Elem) -> Elem {
        self.top.pow(xi, self.q() as u64)
    }

    /// Least m with {1, ξ, …, ξᵐ} linearly dependent over GF(q).
    pub fn degree_over_base(&self, xi: Elem) -> usize {
        let base = &self.base;
        let n = self.n();
        // incremental echelon basis: (pivot column, normalized row)
        let mut rows: Vec<(usize, Vec<Elem>)> = Vec::new();
        let mut power = 1;
        for m in 0..=n {
            let mut v = self.top.coeffs(power);
            for (piv, row) in &rows {
                let c = v[*piv];
                if c != 0 {
                    for (x, &r) in v.iter_mut().zip(row) {
                        *x = base.sub(*x, base.mul(c, r));
                    }
                }
            }
            match v.iter().position(|&c| c != 0) {
                None => return m,
                Some(piv) => {
                    let inv = base.inv(v[piv]);
                    let v: Vec<Elem> = v.into_iter().map(|c| base.mul(c, inv)).collect();
                    rows.push((piv, v));
                }
            }
            power = self.top.mul(power, xi);
        }
        unreachable!("n+1 vectors in an n-dimensional space are dependent")
    }

    /// Elements of GF(qⁿ) whose degree over GF(q) is exactly `h`.
    pub fn elements_of_degree(&self, h: usize) -> Vec<Elem> {
        self.top.elements().filter(|&x| self.degree_over_base(x) == h).collect()
    }

    /// Smallest-handle element of degree exactly `h`; it generates the
    /// intermediate field GF(q^h).
    pub fn generator_of_degree(&self, h: usize) -> Option<Elem> {
        self.top.elements().find(|&x| self.degree_over_base(x) == h)
    }

    /// Representatives of the Frobenius classes {ξ, ξ^q, ξ^{q²}, …} among
    /// the given elements, keeping the smallest handle of each class.
    pub fn frobenius_representatives(&self, elems: &[Elem]) -> Vec<Elem> {
        let mut out = Vec::new();
        for &x in elems {
            let mut y = self.frobenius(x);
            let mut smallest = true;
            while y != x {
                if y < x {
                    smallest = false;
                    break;
                }
                y = self.frobenius(y);
            }
            if smallest {
                out.push(x);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gf4_modulus_and_square_of_root() {
        let t = FieldTower::new(2, 2, 1).unwrap();
        assert_eq!(t.base().modulus(), &[1, 1, 1]);
        let w = t.base().root();
        assert_eq!(t.base().coeffs(t.base().mul(w, w)), vec![1, 1]);
    }

    #[test]
    fn prime_field_has_modulus_x() {
        let t = FieldTower::new(3, 1, 1).unwrap();
        assert!(t.base().is_prime_field());
        assert_eq!(t.base().describe_modulus(), "[0,1]");
        assert_eq!(t.q(), 3);
    }

    #[test]
    fn gf9_lex_modulus_matches_enumeration() {
        // oracle: monic quadratics over GF(3) keyed by (c0, c1), first with no root
        let mut expected = None;
        'outer: for c0 in 0..3u32 {
            for c1 in 0..3u32 {
                if (0..3u32).all(|x| (x * x + c1 * x + c0) % 3 != 0) {
                    expected = Some(vec![c0, c1, 1]);
                    break 'outer;
                }
            }
        }
        let t = FieldTower::new(3, 2, 1).unwrap();
        assert_eq!(Some(t.base().modulus().to_vec()), expected);
        assert_eq!(t.base().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(FieldTower::new(4, 1, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(FieldTower::new(2, 11, 2), Err(Error::TooLarge { .. })));
        assert!(FieldTower::new(2, 2, 10).is_ok());
    }

    #[test]
    fn base_vectors_of_basis_elements() {
        let t = FieldTower::new(2, 2, 4).unwrap();
        assert_eq!(t.as_base_vector(1).unwrap(), vec![1, 0, 0, 0]);
        assert_eq!(t.as_base_vector(t.top().root()).unwrap(), vec![0, 1, 0, 0]);
        assert!(matches!(t.as_base_vector(256), Err(Error::ForeignElement { .. })));
        let t = FieldTower::new(2, 1, 2).unwrap();
        let x = t.top().root();
        assert_eq!(t.as_base_vector(t.top().mul(x, x)).unwrap(), vec![1, 1]);
    }

    #[test]
    fn degrees_follow_the_subfield_lattice() {
        let t = FieldTower::new(2, 2, 4).unwrap();
        let prim = t.top().primitive_element();
        assert_eq!(t.degree_over_base(prim), 4);
        assert_eq!(t.degree_over_base(0), 1);
        assert_eq!(t.degree_over_base(3), 1);
        let counts = [1, 2, 4].map(|h| t.elements_of_degree(h).len());
        assert_eq!(counts, [4, 12, 240]);
        // GF(16) \ GF(4): fixed by the square of Frobenius but not in GF(4)
        for x in t.elements_of_degree(2) {
            assert_eq!(t.frobenius(t.frobenius(x)), x);
            assert!(!t.in_base(x));
        }
    }

    #[test]
    fn frobenius_fixes_exactly_the_base() {
        for (p, k, n) in [(2, 1, 3), (3, 1, 2), (2, 2, 3), (3, 2, 2), (5, 1, 2)] {
            let t = FieldTower::new(p, k, n).unwrap();
            let fixed: Vec<_> = t.top().elements().filter(|&x| t.frobenius(x) == x).collect();
            assert_eq!(fixed, (0..t.q()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn text_form_examples() {
        let t = FieldTower::new(2, 2, 4).unwrap();
        let w = t.base().root();
        assert_eq!(t.base().format(w), "[0,1]");
        assert_eq!(t.base().parse("[0,1]").unwrap(), w);
        assert_eq!(t.top().format(t.top().root()), "[[0,0],[1,0],[0,0],[0,0]]");
        assert!(t.base().parse("[0,1,1]").is_err());
        assert!(t.base().parse("[0,2]").is_err());
        assert!(t.base().parse("0,1").is_err());
    }

    #[test]
    fn large_fields_use_euclid_inverse() {
        let t = FieldTower::new(3, 2, 6).unwrap();
        let top = t.top();
        assert_eq!(top.order(), 531441);
        for a in [1, 2, 17, 9999, 531440] {
            assert_eq!(top.mul(a, top.inv(a)), 1);
        }
    }

    fn towers() -> Vec<FieldTower> {
        [(2, 2, 4), (3, 1, 3), (2, 3, 2), (5, 1, 2), (3, 2, 3)]
            .into_iter()
            .map(|(p, k, n)| FieldTower::new(p, k, n).unwrap())
            .collect()
    }

    proptest! {
        #[test]
        fn field_axioms(idx in 0usize..5, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
            let t = &towers()[idx];
            let f = t.top();
            let (a, b, c) = (a % f.order(), b % f.order(), c % f.order());
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                prop_assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            prop_assert_eq!(t.degree_over_base(a), t.degree_over_base(t.frobenius(a)));
            prop_assert_eq!(t.n() % t.degree_over_base(a), 0);
        }

        #[test]
        fn text_form_round_trips(idx in 0usize..5, a in any::<u32>()) {
            let f = towers()[idx].top().clone();
            let a = a % f.order();
            prop_assert_eq!(f.parse(&f.format(a)).unwrap(), a);
        }
    }

    #[test]
    fn base_vector_map_is_a_linear_bijection() {
        let t = FieldTower::new(2, 2, 3).unwrap();
        let mut seen = std::collections::HashSet::new();
        for x in t.top().elements() {
            let v = t.as_base_vector(x).unwrap();
            assert_eq!(t.from_base_vector(&v), x);
            assert!(seen.insert(v));
        }
        let (x, y) = (37, 51);
        let sum: Vec<_> = t
            .as_base_vector(x)
            .unwrap()
            .iter()
            .zip(t.as_base_vector(y).unwrap())
            .map(|(&a, b)| t.base().add(a, b))
            .collect();
        assert_eq!(t.as_base_vector(t.top().add(x, y)).unwrap(), sum);
    }
}
