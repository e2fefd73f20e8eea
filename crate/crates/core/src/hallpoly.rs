//! Hall numbers across field sizes: conservative extensions, Hom exponents,
//! exact interpolation of Hall polynomials with hold-out certificates, and the
//! divisibility verdicts for Hall numbers of two indecomposables.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::builtin;
use crate::blueprint::Blueprint;
use crate::decomp::decompose;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hall::{hall_mul_basis, Caps, ClassId, HallRoute, Registry};
use crate::homological::ext1_space;
use crate::module::{hom_dim, Module};

pub const DEFAULT_POINTS: [u64; 5] = [2, 3, 5, 7, 9];
pub const DEFAULT_HOLDOUT: [u64; 1] = [11];

/// One algebra instantiated over many finite fields, with a class registry per
/// field and a cache of blueprint instantiations.
pub struct Family {
    algebra: String,
    seed: u64,
    caps: Caps,
    route: HallRoute,
    regs: BTreeMap<u64, Registry>,
    classes: HashMap<(u64, Blueprint), ClassId>,
}

impl Family {
    pub fn new(algebra: &str, seed: u64) -> Result<Family> {
        builtin(algebra, &Field::of_order(2)?)?;
        Ok(Family {
            algebra: algebra.strip_prefix("builtin:").unwrap_or(algebra).to_string(),
            seed,
            caps: Caps::default(),
            route: HallRoute::default(),
            regs: BTreeMap::new(),
            classes: HashMap::new(),
        })
    }

    pub fn with_caps(mut self, caps: Caps) -> Family {
        self.caps = caps;
        for r in self.regs.values_mut() {
            r.caps = caps;
        }
        self
    }

    pub fn with_route(mut self, route: HallRoute) -> Family {
        self.route = route;
        for r in self.regs.values_mut() {
            r.route = route;
        }
        self
    }

    pub fn algebra(&self) -> &str {
        &self.algebra
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn registry(&mut self, q: u64) -> Result<&mut Registry> {
        if !self.regs.contains_key(&q) {
            let alg = builtin(&self.algebra, &Field::of_order(q)?)?;
            let mut reg = Registry::new(&alg, self.seed)?;
            reg.caps = self.caps;
            reg.route = self.route;
            self.regs.insert(q, reg);
        }
        Ok(self.regs.get_mut(&q).unwrap())
    }

    pub fn module(&mut self, b: &Blueprint, q: u64) -> Result<Module> {
        let seed = self.seed;
        let alg = self.registry(q)?.algebra().clone();
        b.instantiate(&alg, seed)
    }

    pub fn class(&mut self, b: &Blueprint, q: u64) -> Result<ClassId> {
        if let Some(&c) = self.classes.get(&(q, b.clone())) {
            return Ok(c);
        }
        let m = self.module(b, q)?;
        let reg = self.registry(q)?;
        let c = reg.class_of(&m)?;
        reg.set_label(c, &b.name);
        self.classes.insert((q, b.clone()), c);
        Ok(c)
    }

    /// `G^m_{x y}` over `GF(q)`.
    pub fn hall_count(&mut self, x: &Blueprint, y: &Blueprint, m: &Blueprint, q: u64) -> Result<i128> {
        let (cx, cy, cm) = (self.class(x, q)?, self.class(y, q)?, self.class(m, q)?);
        let reg = self.registry(q)?;
        Ok(hall_mul_basis(reg, cx, cy)?.coeff(cm))
    }
}

/// Split a prime power into `(p, r)`.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    let f = Field::of_order(q)?;
    Ok((f.p() as u64, f.r()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConservativitySet {
    pub base_q: u64,
    pub residue_degrees: Vec<usize>,
    /// Allowed extension degrees up to the requested bound.
    pub allowed: Vec<u32>,
}

impl ConservativitySet {
    pub fn allows(&self, r: u32) -> bool {
        self.residue_degrees.iter().all(|&d| gcd(d as u64, r as u64) == 1)
    }
}

/// Extension degrees `r` for which `GF(base^r)` keeps every summand's
/// endomorphism residue ring a field: `gcd(d_N, r) = 1` for all summands.
pub fn conservative_degrees(fam: &mut Family, bs: &[Blueprint], base_q: u64, max_r: u32) -> Result<ConservativitySet> {
    let mut degrees = Vec::new();
    let seed = fam.seed();
    for b in bs {
        let m = fam.module(b, base_q)?;
        if m.dim() == 0 {
            continue;
        }
        for s in decompose(&m, seed)?.summands {
            degrees.push(s.residue_degree);
        }
    }
    degrees.sort();
    degrees.dedup();
    let mut set = ConservativitySet { base_q, residue_degrees: degrees, allowed: vec![] };
    set.allowed = (1..=max_r).filter(|&r| set.allows(r)).collect();
    Ok(set)
}

/// `h(m, n)` with `dim Hom(m^E, n^E) = h` over every `E = GF(base^r)`.
pub fn hom_exponent(fam: &mut Family, m: &Blueprint, n: &Blueprint, base_q: u64, degrees: &[u32]) -> Result<usize> {
    if degrees.is_empty() {
        return Err(Error::Precondition("empty degree schedule".into()));
    }
    let mut seen: Vec<(u64, usize)> = Vec::new();
    for &r in degrees {
        let q = base_q.pow(r);
        let (a, b) = (fam.module(m, q)?, fam.module(n, q)?);
        let h = if a.dim() == 0 || b.dim() == 0 { 0 } else { hom_dim(&a, &b)? };
        seen.push((q, h));
    }
    if seen.iter().any(|&(_, h)| h != seen[0].1) {
        return Err(Error::Inconsistent(format!("Hom({}, {}) dimension varies with the field: {seen:?}", m.name, n.name)));
    }
    Ok(seen[0].1)
}

/// `|Hom(m^E, n^E)|` over `E = GF(q)`.
pub fn hom_order(fam: &mut Family, m: &Blueprint, n: &Blueprint, q: u64) -> Result<BigUint> {
    let (a, b) = (fam.module(m, q)?, fam.module(n, q)?);
    let h = if a.dim() == 0 || b.dim() == 0 { 0 } else { hom_dim(&a, &b)? };
    Ok(BigUint::from(q).pow(h as u32))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub type Q = Ratio<i128>;

/// Coefficients (ascending) of the polynomial through the given points.
pub fn lagrange(points: &[(i128, i128)]) -> Vec<Q> {
    // Newton divided differences, then expansion into the monomial basis.
    let n = points.len();
    let xs: Vec<Q> = points.iter().map(|p| Q::from_integer(p.0)).collect();
    let mut dd: Vec<Q> = points.iter().map(|p| Q::from_integer(p.1)).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
        }
    }
    let mut coeffs = vec![Q::zero(); n.max(1)];
    for k in (0..n).rev() {
        // coeffs = coeffs * (x - x_k) + dd[k]
        let mut next = vec![Q::zero(); coeffs.len()];
        for (i, c) in coeffs.iter().enumerate() {
            if i + 1 < next.len() {
                next[i + 1] += *c;
            }
            next[i] -= *c * xs[k];
        }
        next[0] += dd[k];
        coeffs = next;
    }
    while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
        coeffs.pop();
    }
    coeffs
}

fn eval_q(c: &[Q], x: i128) -> Q {
    c.iter().rev().fold(Q::zero(), |acc, a| acc * Q::from_integer(x) + a)
}

pub fn eval_poly(c: &[i128], x: i128) -> i128 {
    c.iter().rev().fold(0, |acc, a| acc * x + a)
}

/// Coefficients in powers of `x − 1`.
pub fn shift_to_one(c: &[i128]) -> Vec<i128> {
    let n = c.len();
    let mut out = vec![0i128; n];
    for (j, &cj) in c.iter().enumerate() {
        let mut binom: i128 = 1;
        for (k, o) in out.iter_mut().enumerate().take(j + 1) {
            *o += cj * binom;
            binom = binom * (j - k) as i128 / (k + 1) as i128;
        }
    }
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HallPolynomial {
    pub coeffs: Vec<i128>,
    pub points: Vec<(u64, i128)>,
    pub holdout: Vec<(u64, i128)>,
    /// Number of leading points used to fix the coefficients.
    pub support: usize,
    pub stabilized: bool,
}

impl HallPolynomial {
    pub fn eval(&self, x: i128) -> i128 {
        eval_poly(&self.coeffs, x)
    }
    pub fn at_one(&self) -> i128 {
        self.coeffs.iter().sum()
    }
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
    pub fn display(&self) -> String {
        poly_string(&self.coeffs)
    }
}

pub fn poly_string(c: &[i128]) -> String {
    let mut terms = Vec::new();
    for (i, &a) in c.iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".into(),
            _ => format!("x^{i}"),
        };
        let t = match (a, mono.is_empty()) {
            (_, true) => a.to_string(),
            (1, false) => mono,
            (-1, false) => format!("-{mono}"),
            _ => format!("{a}{mono}"),
        };
        terms.push(t);
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ").replace("+ -", "- ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FitFailure {
    pub reason: String,
    pub points: Vec<(u64, i128)>,
    pub holdout: Vec<(u64, i128)>,
}

/// Rational polynomial through `points`, found adaptively: interpolate the
/// first `start` points, then add one point at a time until the interpolant
/// reproduces every point and hold-out value exactly.
pub fn fit_rational(
    points: &[(u64, i128)],
    holdout: &[(u64, i128)],
    start: usize,
) -> std::result::Result<(Vec<Q>, usize, bool), FitFailure> {
    let fail = |reason: String| FitFailure { reason, points: points.to_vec(), holdout: holdout.to_vec() };
    if points.is_empty() {
        return Err(fail("no interpolation points".into()));
    }
    let mut xs: Vec<u64> = points.iter().map(|p| p.0).collect();
    xs.sort();
    xs.dedup();
    if xs.len() != points.len() {
        return Err(fail("interpolation points are not distinct".into()));
    }
    let data: Vec<(i128, i128)> = points.iter().map(|&(x, y)| (x as i128, y)).collect();
    let reproduces = |c: &[Q]| points.iter().chain(holdout).all(|&(x, y)| eval_q(c, x as i128) == Q::from_integer(y));
    let mut k = start.clamp(1, data.len());
    loop {
        let coeffs = lagrange(&data[..k]);
        if reproduces(&coeffs) {
            return Ok((coeffs, k, k < data.len()));
        }
        if k == data.len() {
            let (x, y) = points.iter().chain(holdout).find(|&&(x, y)| eval_q(&coeffs, x as i128) != Q::from_integer(y)).copied().unwrap();
            return Err(fail(format!(
                "no polynomial found at this degree bound: {} predicts {} at {x}, counted {y}",
                poly_string_q(&coeffs),
                eval_q(&coeffs, x as i128)
            )));
        }
        k += 1;
    }
}

/// Integer polynomial through `points`; see [`fit_rational`].
pub fn fit(points: &[(u64, i128)], holdout: &[(u64, i128)], start: usize) -> std::result::Result<HallPolynomial, FitFailure> {
    let (coeffs, support, stabilized) = fit_rational(points, holdout, start)?;
    if coeffs.iter().any(|c| !c.is_integer()) {
        return Err(FitFailure {
            reason: format!("interpolant {} has non-integer coefficients", poly_string_q(&coeffs)),
            points: points.to_vec(),
            holdout: holdout.to_vec(),
        });
    }
    let coeffs = coeffs.iter().map(|c| c.to_integer()).collect();
    Ok(HallPolynomial { coeffs, points: points.to_vec(), holdout: holdout.to_vec(), support, stabilized })
}

/// Rational polynomial in readable form.
pub fn poly_string_q(c: &[Q]) -> String {
    let den = c.iter().fold(1i128, |acc, r| {
        let d = *r.denom();
        acc / gcd(acc as u64, d as u64) as i128 * d
    });
    let ints: Vec<i128> = c.iter().map(|r| (r * Q::from_integer(den)).to_integer()).collect();
    if den == 1 {
        poly_string(&ints)
    } else {
        format!("({})/{den}", poly_string(&ints))
    }
}

pub fn eval_rational(c: &[Q], x: i128) -> Q {
    eval_q(c, x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub algebra: String,
    pub triple: [String; 3],
    pub points: Vec<(u64, i128)>,
    pub poly: Option<Vec<i128>>,
    pub poly_at_one: Option<Vec<i128>>,
    pub holdout: Vec<(u64, i128, bool)>,
    pub case: String,
    /// Points dropped because the extension is not conservative.
    pub skipped: Vec<u64>,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl Certificate {
    pub fn certified(&self) -> bool {
        self.status == "certified"
    }
    pub fn polynomial(&self) -> Option<&[i128]> {
        self.poly.as_deref()
    }
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("certificate serializes")
    }
}

/// Which divisibility statement applies to `(x, y, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpecializationCase {
    /// `m ≇ x ⊕ y`: expected `g(1) = 0`.
    NotSplit,
    /// `m ≅ x ⊕ y`, `x ≅ y`: expected `g(1) = 2`.
    SplitEqual,
    /// `m ≅ x ⊕ y`, `x ≇ y`: expected `g(1) = 1`.
    SplitDistinct,
}

impl SpecializationCase {
    pub fn tag(&self) -> &'static str {
        match self {
            SpecializationCase::NotSplit => "non-split",
            SpecializationCase::SplitEqual => "split-equal",
            SpecializationCase::SplitDistinct => "split-distinct",
        }
    }
    pub fn expected(&self) -> i128 {
        match self {
            SpecializationCase::NotSplit => 0,
            SpecializationCase::SplitEqual => 2,
            SpecializationCase::SplitDistinct => 1,
        }
    }
}

/// Classify `(x, y, m)` over `GF(q)`; `None` unless `x` and `y` are indecomposable.
pub fn specialization_case(fam: &mut Family, x: &Blueprint, y: &Blueprint, m: &Blueprint, q: u64) -> Result<Option<SpecializationCase>> {
    let (cx, cy, cm) = (fam.class(x, q)?, fam.class(y, q)?, fam.class(m, q)?);
    let reg = fam.registry(q)?;
    if !reg.class_is_indecomposable(cx) || !reg.class_is_indecomposable(cy) {
        return Ok(None);
    }
    let split = reg.sum_class(cx, cy);
    Ok(Some(if cm != split {
        SpecializationCase::NotSplit
    } else if cx == cy {
        SpecializationCase::SplitEqual
    } else {
        SpecializationCase::SplitDistinct
    }))
}

/// Interpolate `g^m_{x y}` from exact counts at `points` (non-conservative
/// points are skipped) and validate at `holdout`.
pub fn interpolate(
    fam: &mut Family,
    x: &Blueprint,
    y: &Blueprint,
    m: &Blueprint,
    points: &[u64],
    holdout: &[u64],
) -> Result<Certificate> {
    let all = [x.clone(), y.clone(), m.clone()];
    let keep = |qs: &[u64], skipped: &mut Vec<u64>, fam: &mut Family| -> Result<Vec<u64>> {
        let mut out = Vec::new();
        for &q in qs {
            let (p, r) = prime_power(q)?;
            if conservative_degrees(fam, &all, p, 0)?.allows(r) {
                out.push(q);
            } else {
                skipped.push(q);
            }
        }
        Ok(out)
    };
    let mut skipped = Vec::new();
    let pts = keep(points, &mut skipped, fam)?;
    let hold = keep(holdout, &mut skipped, fam)?;
    let case = match pts.first() {
        Some(&q) => specialization_case(fam, x, y, m, q)?.map(|c| c.tag()).unwrap_or("n/a"),
        None => "n/a",
    };
    let mut data = Vec::new();
    for &q in &pts {
        data.push((q, fam.hall_count(x, y, m, q)?));
    }
    let mut hdata = Vec::new();
    for &q in &hold {
        hdata.push((q, fam.hall_count(x, y, m, q)?));
    }
    let start = match pts.first() {
        Some(&q) => {
            let (a, b) = (fam.module(x, q)?, fam.module(y, q)?);
            if a.dim() == 0 || b.dim() == 0 {
                1
            } else {
                ext1_space(&a, &b)?.dim + 1
            }
        }
        None => 1,
    };
    let triple = [x.name.clone(), y.name.clone(), m.name.clone()];
    let base = Certificate {
        algebra: fam.algebra().to_string(),
        triple,
        points: data.clone(),
        poly: None,
        poly_at_one: None,
        holdout: vec![],
        case: case.into(),
        skipped,
        status: "failed".into(),
        failure: None,
    };
    Ok(match fit(&data, &hdata, start) {
        Ok(p) => Certificate {
            poly_at_one: Some(shift_to_one(&p.coeffs)),
            holdout: hdata.iter().map(|&(q, g)| (q, g, p.eval(q as i128) == g)).collect(),
            poly: Some(p.coeffs),
            status: "certified".into(),
            ..base
        },
        Err(f) => Certificate {
            holdout: hdata.iter().map(|&(q, g)| (q, g, false)).collect(),
            failure: Some(f.reason),
            ..base
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecializationVerdict {
    pub triple: [String; 3],
    pub case: SpecializationCase,
    pub g_at_one: i128,
    pub expected: i128,
    pub holds: bool,
    /// A non-split triple whose polynomial does not vanish at 1.
    pub flagged: bool,
    /// `(q, (q − 1) | G − expected)` at every counted point.
    pub divisibility: Vec<(u64, bool)>,
    pub certificate: Certificate,
}

/// Check `g(1)` against the expected value for the triple's case.
pub fn specialization_check(
    fam: &mut Family,
    x: &Blueprint,
    y: &Blueprint,
    m: &Blueprint,
    points: &[u64],
    holdout: &[u64],
) -> Result<SpecializationVerdict> {
    let cert = interpolate(fam, x, y, m, points, holdout)?;
    let q0 = *cert
        .points
        .first()
        .ok_or_else(|| Error::Precondition("no conservative points".into()))?;
    let case = specialization_case(fam, x, y, m, q0.0)?
        .ok_or_else(|| Error::Precondition(format!("{} and {} must be indecomposable", x.name, y.name)))?;
    let poly = cert
        .poly
        .clone()
        .ok_or_else(|| Error::Interpolation(cert.failure.clone().unwrap_or_default()))?;
    let g1: i128 = poly.iter().sum();
    let expected = case.expected();
    let divisibility = cert
        .points
        .iter()
        .copied()
        .chain(cert.holdout.iter().map(|&(q, g, _)| (q, g)))
        .map(|(q, g)| (q, (g - expected) % (q as i128 - 1) == 0))
        .collect();
    Ok(SpecializationVerdict {
        triple: cert.triple.clone(),
        case,
        g_at_one: g1,
        expected,
        holds: g1 == expected,
        flagged: case == SpecializationCase::NotSplit && g1 != 0,
        divisibility,
        certificate: cert,
    })
}
