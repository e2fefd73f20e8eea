//! Finite fields GF(p^r) with deterministic moduli and explicit embeddings.
//!
//! Elements are encoded as integers `c_0 + c_1 p + ... + c_{r-1} p^{r-1}` where
//! `c_i` are the coordinates in the power basis of `GF(p)[x]/(modulus)`.
//! Small fields carry full addition and multiplication tables; larger ones
//! fall back to digit-wise addition and log/exp multiplication.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order accepted by [`Field::new`] unless a larger cap is given.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 16;

const TABLE_LIMIT: u32 = 256;

/// Serializable description of a finite field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub r: u32,
    /// Monic modulus, ascending degree, length `r + 1`.
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.r)
    }
}

/// Runtime field with arithmetic tables.
pub struct Field {
    spec: FieldSpec,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_tab: Vec<u32>,
    mul_tab: Vec<u32>,
    neg_tab: Vec<u32>,
    inv_tab: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.spec.p, self.spec.r)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}
impl Eq for Field {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Factor a prime power `q = p^r`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while q % p != 0 {
        p += 1;
    }
    let mut r = 0;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        r += 1;
    }
    (rest == 1).then_some((p as u32, r))
}

// ---- dense polynomials over GF(p), ascending coefficients ----

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let d = r.len() - 1;
        let c = (r[d] as u64 * lead_inv as u64 % p as u64) as u32;
        let shift = d - dm;
        for (i, &mi) in m.iter().enumerate() {
            let sub = (c as u64 * mi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

fn digits(mut n: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((n % p as u64) as u32);
        n /= p as u64;
    }
    out
}

/// Irreducibility by trial division with every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut div = digits(low, p, d);
            div.push(1);
            if poly_rem(poly, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lowest monic irreducible of degree `r`, ordered by the integer encoding of
/// its lower coefficients.
fn lowest_irreducible(p: u32, r: u32) -> Vec<u32> {
    if r == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(r);
    for low in 0..count {
        let mut cand = digits(low, p, r as usize);
        cand.push(1);
        if is_irreducible(&cand, p) {
            return cand;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    /// Build `GF(p^r)` with the default size cap.
    pub fn new(p: u32, r: u32) -> Result<Arc<Field>> {
        Self::with_cap(p, r, DEFAULT_FIELD_CAP)
    }

    pub fn with_cap(p: u32, r: u32, cap: u64) -> Result<Arc<Field>> {
        if !is_prime(p as u64) {
            return Err(Error::Field(format!("{p} is not prime")));
        }
        if r == 0 {
            return Err(Error::Field("extension degree must be at least 1".into()));
        }
        let q = (p as u64).checked_pow(r).filter(|&q| q <= cap).ok_or_else(|| {
            Error::CapExceeded(format!("field order {p}^{r} exceeds cap {cap}"))
        })?;
        let modulus = lowest_irreducible(p, r);
        Ok(Arc::new(Self::build(FieldSpec { p, r, modulus }, q as u32)))
    }

    /// Build the field of order `q`.
    pub fn of_order(q: u64) -> Result<Arc<Field>> {
        let (p, r) = prime_power(q).ok_or_else(|| Error::Field(format!("{q} is not a prime power")))?;
        Self::new(p, r)
    }

    /// Rebuild a field from a serialized spec, checking the modulus.
    pub fn from_spec(spec: &FieldSpec) -> Result<Arc<Field>> {
        if !is_prime(spec.p as u64) || spec.r == 0 {
            return Err(Error::Field("invalid characteristic or degree".into()));
        }
        if spec.modulus.len() != spec.r as usize + 1
            || spec.modulus[spec.r as usize] != 1
            || spec.modulus.iter().any(|&c| c >= spec.p)
            || !is_irreducible(&spec.modulus, spec.p)
        {
            return Err(Error::Field("modulus must be monic irreducible of degree r".into()));
        }
        let q = spec.order();
        if q > DEFAULT_FIELD_CAP {
            return Err(Error::CapExceeded(format!("field order {q}")));
        }
        Ok(Arc::new(Self::build(spec.clone(), q as u32)))
    }

    fn build(spec: FieldSpec, q: u32) -> Field {
        let p = spec.p;
        let r = spec.r as usize;
        let mul_slow = |a: u32, b: u32| -> u32 {
            let da = digits(a as u64, p, r);
            let db = digits(b as u64, p, r);
            let mut prod = vec![0u32; 2 * r];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
                }
            }
            let rem = poly_rem(&prod, &spec.modulus, p);
            rem.iter().rev().fold(0u32, |acc, &c| acc * p + c)
        };
        // find a generator of the multiplicative group
        let order = q - 1;
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; q as usize];
        for g in 1..q.max(2) {
            let mut x = 1u32;
            let mut ok = true;
            for (k, slot) in exp.iter_mut().enumerate() {
                if k > 0 && x == 1 {
                    ok = false;
                    break;
                }
                *slot = x;
                x = mul_slow(x, g);
            }
            if ok && (x == 1) {
                break;
            }
        }
        for (k, &e) in exp.iter().enumerate() {
            log[e as usize] = k as u32;
        }
        let mut f = Field {
            spec,
            q,
            exp,
            log,
            add_tab: Vec::new(),
            mul_tab: Vec::new(),
            neg_tab: Vec::new(),
            inv_tab: Vec::new(),
        };
        f.neg_tab = (0..q).map(|a| f.neg_slow(a)).collect();
        f.inv_tab = (0..q).map(|a| if a == 0 { 0 } else { f.inv_slow(a) }).collect();
        if q <= TABLE_LIMIT {
            let n = q as usize;
            let mut add = vec![0; n * n];
            let mut mul = vec![0; n * n];
            for a in 0..q {
                for b in 0..q {
                    add[a as usize * n + b as usize] = f.add_slow(a, b);
                    mul[a as usize * n + b as usize] = f.mul_slow(a, b);
                }
            }
            f.add_tab = add;
            f.mul_tab = mul;
        }
        f
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }
    pub fn p(&self) -> u32 {
        self.spec.p
    }
    pub fn r(&self) -> u32 {
        self.spec.r
    }
    /// Number of elements.
    pub fn q(&self) -> u32 {
        self.q
    }

    fn add_slow(&self, mut a: u32, mut b: u32) -> u32 {
        let p = self.spec.p;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.spec.r {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }
    fn neg_slow(&self, mut a: u32) -> u32 {
        let p = self.spec.p;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.spec.r {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }
    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let k = (self.log[a as usize] + self.log[b as usize]) % (self.q - 1);
        self.exp[k as usize]
    }
    fn inv_slow(&self, a: u32) -> u32 {
        let k = (self.q - 1 - self.log[a as usize]) % (self.q - 1);
        self.exp[k as usize]
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.add_tab.is_empty() {
            self.add_slow(a, b)
        } else {
            self.add_tab[(a * self.q + b) as usize]
        }
    }
    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg_tab[b as usize])
    }
    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg_tab[a as usize]
    }
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.mul_tab.is_empty() {
            self.mul_slow(a, b)
        } else {
            self.mul_tab[(a * self.q + b) as usize]
        }
    }
    /// Inverse; `inv(0)` is reported as an error by [`FieldElem::inv`], here it returns 0.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv_tab[a as usize]
    }
    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut result = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    /// Reduce an integer into the prime subfield.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.spec.p as i64) as u32
    }

    /// The class of `x` in `GF(p)[x]/(modulus)`.
    pub fn generator(&self) -> u32 {
        if self.spec.r == 1 {
            // x mod (x - 0) is 0; use the additive identity as the root of the modulus
            0
        } else {
            self.spec.p
        }
    }

    pub fn coords(&self, a: u32) -> Vec<u32> {
        digits(a as u64, self.spec.p, self.spec.r as usize)
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<u32> {
        if coords.len() != self.spec.r as usize || coords.iter().any(|&c| c >= self.spec.p) {
            return Err(Error::Field(format!("bad coordinates {coords:?} for {self:?}")));
        }
        Ok(coords.iter().rev().fold(0u32, |acc, &c| acc * self.spec.p + c))
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    pub fn elem(self: &Arc<Self>, idx: u32) -> FieldElem {
        FieldElem { owner: Arc::clone(self), idx: idx % self.q }
    }

    /// Evaluate a polynomial with coefficients in GF(p) at `x`.
    fn eval_prime_poly(&self, poly: &[u32], x: u32) -> u32 {
        poly.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }
}

/// An element tied to its field.
#[derive(Clone)]
pub struct FieldElem {
    owner: Arc<Field>,
    idx: u32,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords())
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        *self.owner == *other.owner && self.idx == other.idx
    }
}
impl Eq for FieldElem {}

/// Field operations exposed on [`FieldElem`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Inv,
    Neg,
}

impl FieldElem {
    pub fn owner(&self) -> &Arc<Field> {
        &self.owner
    }
    pub fn index(&self) -> u32 {
        self.idx
    }
    pub fn coords(&self) -> Vec<u32> {
        self.owner.coords(self.idx)
    }
    pub fn is_zero(&self) -> bool {
        self.idx == 0
    }

    fn check(&self, other: &FieldElem) -> Result<()> {
        if *self.owner != *other.owner {
            return Err(Error::Field("field owner mismatch".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.owner.elem(self.owner.add(self.idx, other.idx)))
    }
    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.owner.elem(self.owner.mul(self.idx, other.idx)))
    }
    pub fn neg(&self) -> FieldElem {
        self.owner.elem(self.owner.neg(self.idx))
    }
    pub fn inv(&self) -> Result<FieldElem> {
        if self.idx == 0 {
            return Err(Error::Field("inversion of zero".into()));
        }
        Ok(self.owner.elem(self.owner.inv(self.idx)))
    }

    /// Dispatch form; `b` is ignored for unary operations.
    pub fn arith(&self, b: &FieldElem, op: ArithOp) -> Result<FieldElem> {
        match op {
            ArithOp::Add => self.add(b),
            ArithOp::Mul => self.mul(b),
            ArithOp::Inv => {
                self.check(b)?;
                self.inv()
            }
            ArithOp::Neg => {
                self.check(b)?;
                Ok(self.neg())
            }
        }
    }
}

/// Ring embedding `GF(p^r) -> GF(p^s)` with `r | s`.
#[derive(Clone)]
pub struct FieldEmbedding {
    src: Arc<Field>,
    dst: Arc<Field>,
    table: Vec<u32>,
}

impl fmt::Debug for FieldEmbedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} -> {:?}", self.src, self.dst)
    }
}

impl FieldEmbedding {
    /// Send the generator of `src` to the first root (in index order) of its
    /// modulus inside `dst`.
    pub fn new(src: &Arc<Field>, dst: &Arc<Field>) -> Result<Self> {
        if src.p() != dst.p() {
            return Err(Error::Field("embedding between different characteristics".into()));
        }
        if dst.r() % src.r() != 0 {
            return Err(Error::Field(format!(
                "degree {} does not divide {}",
                src.r(),
                dst.r()
            )));
        }
        let root = dst
            .elements()
            .find(|&x| dst.eval_prime_poly(&src.spec().modulus, x) == 0)
            .ok_or_else(|| Error::Field("no root of the source modulus in target".into()))?;
        let table = src
            .elements()
            .map(|a| {
                let c = src.coords(a);
                c.iter().rev().fold(0, |acc, &ci| dst.add(dst.mul(acc, root), ci))
            })
            .collect();
        Ok(FieldEmbedding { src: Arc::clone(src), dst: Arc::clone(dst), table })
    }

    pub fn src(&self) -> &Arc<Field> {
        &self.src
    }
    pub fn dst(&self) -> &Arc<Field> {
        &self.dst
    }

    #[inline]
    pub fn map(&self, a: u32) -> u32 {
        self.table[a as usize]
    }

    pub fn map_elem(&self, a: &FieldElem) -> Result<FieldElem> {
        if **a.owner() != *self.src {
            return Err(Error::Field("element not in embedding source".into()));
        }
        Ok(self.dst.elem(self.map(a.index())))
    }
}
