//! Hall numbers, extension censuses and Ringel-Hall multiplication over one
//! finite field.
//!
//! Two independent routes compute `G^M_{NL}` (the number of submodules
//! `U ⊆ M` with `U ≅ L` and `M/U ≅ N`): enumeration of graded subspaces, and
//! the Riedtmann formula
//! `G^M_{NL} = |Ext¹(N,L)_M| · |Aut M| / (|Aut N| · |Aut L| · |Hom(N,L)|)`
//! fed by a census of middle terms of all extension classes.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::AlgebraTable;
use crate::decomp::{decompose, gl_order, iso_indecomposable, part_of, DecompResult, Part};
use crate::error::{Error, Result};
use crate::homological::ext1_space;
use crate::linalg::{enumerate_subspaces, gaussian_binomial, Mat, Subspace};
use crate::module::{direct_sum_all, hom_dim, Module};

pub type ClassId = usize;

/// The class of the zero module.
pub const ZERO_CLASS: ClassId = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Caps {
    /// Bound on enumerated subspaces (graded route) or cyclic generators.
    pub submodules: u64,
    /// Bound on `q^{dim Ext¹}` for a census.
    pub cocycles: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { submodules: 2_000_000, cocycles: 100_000 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum HallRoute {
    #[default]
    Riedtmann,
    Brute,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Fingerprint {
    dimvec: Vec<usize>,
    end_dim: usize,
    to_anchors: Vec<usize>,
    from_anchors: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct IndecEntry {
    pub module: Module,
    pub end_dim: usize,
    pub residue_degree: usize,
    pub label: Option<String>,
    fingerprint: Fingerprint,
}

/// Isomorphism classes met during a computation over one algebra and field.
///
/// Indecomposables are stored once each; a class is the sorted multiset of
/// its indecomposable summands.
pub struct Registry {
    alg: Arc<AlgebraTable>,
    seed: u64,
    pub caps: Caps,
    pub route: HallRoute,
    anchors: Vec<Module>,
    indecs: Vec<IndecEntry>,
    by_fp: HashMap<Fingerprint, Vec<usize>>,
    classes: Vec<Vec<(usize, usize)>>,
    class_index: HashMap<Vec<(usize, usize)>, ClassId>,
    products: HashMap<(ClassId, ClassId), HallElement>,
    censuses: HashMap<(ClassId, ClassId), ExtCensus>,
    aut_cache: HashMap<ClassId, BigUint>,
}

impl fmt::Debug for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Registry({} indecomposables, {} classes)", self.indecs.len(), self.classes.len())
    }
}

impl Registry {
    /// A registry seeded with the simples, projectives and injectives, labelled
    /// `S1`, `P1'`, `I2`, ...
    pub fn new(alg: &Arc<AlgebraTable>, seed: u64) -> Result<Registry> {
        let simples = crate::module::simples(alg);
        let projectives = crate::module::projectives(alg);
        let mut anchors = simples.clone();
        anchors.extend(projectives.iter().cloned());
        let mut reg = Registry {
            alg: Arc::clone(alg),
            seed,
            caps: Caps::default(),
            route: HallRoute::default(),
            anchors,
            indecs: Vec::new(),
            by_fp: HashMap::new(),
            classes: vec![vec![]],
            class_index: HashMap::from([(vec![], ZERO_CLASS)]),
            products: HashMap::new(),
            censuses: HashMap::new(),
            aut_cache: HashMap::new(),
        };
        let labels = alg.vertex_labels();
        for (tag, mods) in [("S", simples), ("P", projectives), ("I", crate::module::injectives(alg))] {
            for (x, m) in mods.into_iter().enumerate() {
                let id = reg.indec_id(&m, None)?;
                if reg.indecs[id].label.is_none() {
                    reg.indecs[id].label = Some(format!("{tag}{}", labels[x]));
                }
            }
        }
        Ok(reg)
    }

    pub fn algebra(&self) -> &Arc<AlgebraTable> {
        &self.alg
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }
    pub fn q(&self) -> u64 {
        self.alg.field().q() as u64
    }
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }
    pub fn indecomposables(&self) -> &[IndecEntry] {
        &self.indecs
    }

    fn fingerprint(&self, m: &Module, end_dim: usize) -> Result<Fingerprint> {
        Ok(Fingerprint {
            dimvec: m.dim_vector(),
            end_dim,
            to_anchors: self.anchors.iter().map(|a| hom_dim(m, a)).collect::<Result<_>>()?,
            from_anchors: self.anchors.iter().map(|a| hom_dim(a, m)).collect::<Result<_>>()?,
        })
    }

    /// Id of an indecomposable, inserting a new representative on a miss.
    fn indec_id(&mut self, m: &Module, residue: Option<(usize, usize)>) -> Result<usize> {
        let (end_dim, residue_degree) = match residue {
            Some(r) => r,
            None => {
                let d = decompose(m, self.seed)?;
                if !d.is_indecomposable() {
                    return Err(Error::Precondition("expected an indecomposable module".into()));
                }
                (d.summands[0].end_dim, d.summands[0].residue_degree)
            }
        };
        let fp = self.fingerprint(m, end_dim)?;
        if let Some(cands) = self.by_fp.get(&fp) {
            for &c in cands {
                if iso_indecomposable(&self.indecs[c].module, m)? {
                    return Ok(c);
                }
            }
        }
        let id = self.indecs.len();
        self.indecs.push(IndecEntry { module: m.clone(), end_dim, residue_degree, label: None, fingerprint: fp.clone() });
        self.by_fp.entry(fp).or_default().push(id);
        Ok(id)
    }

    /// Class of a module: decompose, then look up each summand.
    pub fn class_of(&mut self, m: &Module) -> Result<ClassId> {
        if m.dim() == 0 {
            return Ok(ZERO_CLASS);
        }
        let d = decompose(m, self.seed)?;
        self.class_of_decomposed(&d)
    }

    pub fn class_of_decomposed(&mut self, d: &DecompResult) -> Result<ClassId> {
        let mut key: BTreeMap<usize, usize> = BTreeMap::new();
        for s in &d.summands {
            let id = self.indec_id(&s.module, Some((s.end_dim, s.residue_degree)))?;
            *key.entry(id).or_default() += s.multiplicity;
        }
        Ok(self.class_from_key(key.into_iter().collect()))
    }

    fn class_from_key(&mut self, key: Vec<(usize, usize)>) -> ClassId {
        if let Some(&c) = self.class_index.get(&key) {
            return c;
        }
        let id = self.classes.len();
        self.classes.push(key.clone());
        self.class_index.insert(key, id);
        id
    }

    /// Class of a direct sum of classes.
    pub fn sum_class(&mut self, a: ClassId, b: ClassId) -> ClassId {
        let mut key: BTreeMap<usize, usize> = self.classes[a].iter().cloned().collect();
        for &(i, k) in &self.classes[b] {
            *key.entry(i).or_default() += k;
        }
        self.class_from_key(key.into_iter().collect())
    }

    /// Summands `(indecomposable id, multiplicity)`.
    pub fn class_key(&self, c: ClassId) -> &[(usize, usize)] {
        &self.classes[c]
    }

    pub fn class_module(&self, c: ClassId) -> Module {
        let mods: Vec<Module> = self.classes[c]
            .iter()
            .flat_map(|&(i, k)| std::iter::repeat(self.indecs[i].module.clone()).take(k))
            .collect();
        if mods.is_empty() {
            Module::zero(&self.alg)
        } else {
            direct_sum_all(&mods).0
        }
    }

    pub fn class_dimvec(&self, c: ClassId) -> Vec<usize> {
        let mut v = vec![0; self.alg.num_vertices()];
        for &(i, k) in &self.classes[c] {
            for (x, d) in self.indecs[i].fingerprint.dimvec.iter().enumerate() {
                v[x] += k * d;
            }
        }
        v
    }

    pub fn class_is_indecomposable(&self, c: ClassId) -> bool {
        self.classes[c].len() == 1 && self.classes[c][0].1 == 1
    }

    /// Class of a single indecomposable id.
    pub fn indec_class(&mut self, i: usize) -> ClassId {
        self.class_from_key(vec![(i, 1)])
    }

    pub fn indec_name(&self, i: usize) -> String {
        match &self.indecs[i].label {
            Some(l) => l.clone(),
            None => format!("[{}]#{i}", self.indecs[i].module.loewy_string()),
        }
    }

    pub fn set_label(&mut self, c: ClassId, label: &str) {
        if self.class_is_indecomposable(c) {
            let i = self.classes[c][0].0;
            if self.indecs[i].label.is_none() {
                self.indecs[i].label = Some(label.to_string());
            }
        }
    }

    pub fn class_name(&self, c: ClassId) -> String {
        if self.classes[c].is_empty() {
            return "0".into();
        }
        self.classes[c]
            .iter()
            .map(|&(i, k)| if k == 1 { self.indec_name(i) } else { format!("{}^{k}", self.indec_name(i)) })
            .collect::<Vec<_>>()
            .join("+")
    }

    /// `|Aut M| = q^{dim End − Σ a_i² d_i} · Π |GL_{a_i}(q^{d_i})|`.
    pub fn aut_order(&mut self, c: ClassId) -> Result<BigUint> {
        if let Some(a) = self.aut_cache.get(&c) {
            return Ok(a.clone());
        }
        let m = self.class_module(c);
        let e = if m.dim() == 0 { 0 } else { hom_dim(&m, &m)? };
        let q = BigUint::from(self.q());
        let mut semisimple = 0;
        let mut out = BigUint::from(1u32);
        for &(i, k) in &self.classes[c] {
            let d = self.indecs[i].residue_degree;
            semisimple += k * k * d;
            out *= gl_order(k, &q.pow(d as u32));
        }
        out *= q.pow((e - semisimple) as u32);
        self.aut_cache.insert(c, out.clone());
        Ok(out)
    }

    pub fn hom_dim(&self, a: ClassId, b: ClassId) -> Result<usize> {
        let (x, y) = (self.class_module(a), self.class_module(b));
        if x.dim() == 0 || y.dim() == 0 {
            return Ok(0);
        }
        hom_dim(&x, &y)
    }
}

/// Element of the Hall algebra over one field: integer combination of classes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HallElement {
    pub terms: BTreeMap<ClassId, i128>,
}

impl HallElement {
    pub fn zero() -> HallElement {
        HallElement::default()
    }
    pub fn basis(c: ClassId) -> HallElement {
        HallElement { terms: BTreeMap::from([(c, 1)]) }
    }
    pub fn one() -> HallElement {
        HallElement::basis(ZERO_CLASS)
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coeff(&self, c: ClassId) -> i128 {
        self.terms.get(&c).copied().unwrap_or(0)
    }
    pub fn add_term(&mut self, c: ClassId, k: i128) {
        let e = self.terms.entry(c).or_insert(0);
        *e += k;
        if *e == 0 {
            self.terms.remove(&c);
        }
    }
    pub fn add(&self, other: &HallElement) -> HallElement {
        let mut out = self.clone();
        for (&c, &k) in &other.terms {
            out.add_term(c, k);
        }
        out
    }
    pub fn scale(&self, k: i128) -> HallElement {
        if k == 0 {
            return HallElement::zero();
        }
        HallElement { terms: self.terms.iter().map(|(&c, &v)| (c, v * k)).collect() }
    }
    pub fn sub(&self, other: &HallElement) -> HallElement {
        self.add(&other.scale(-1))
    }
    /// Homogeneous components by dimension vector.
    pub fn graded(&self, reg: &Registry) -> BTreeMap<Vec<usize>, HallElement> {
        let mut out: BTreeMap<Vec<usize>, HallElement> = BTreeMap::new();
        for (&c, &k) in &self.terms {
            out.entry(reg.class_dimvec(c)).or_default().add_term(c, k);
        }
        out
    }
    pub fn display(&self, reg: &Registry) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(&c, &k)| format!("{k}*u[{}]", reg.class_name(c)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
    pub fn to_json(&self, reg: &Registry, pair: Option<(ClassId, ClassId)>) -> HallProductJson {
        let spec = reg.algebra().field().spec();
        HallProductJson {
            pair: pair.map(|(a, b)| [reg.class_name(a), reg.class_name(b)]),
            terms: self
                .terms
                .iter()
                .map(|(&c, &k)| TermJson { class: reg.class_name(c), coeff: k })
                .collect(),
            field: format!("{}^{}", spec.p, spec.r),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermJson {
    pub class: String,
    pub coeff: i128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HallProductJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<[String; 2]>,
    pub terms: Vec<TermJson>,
    pub field: String,
}

/// Every submodule of `m`, each once: cyclic submodules of all nonzero
/// vectors, closed under sums.
pub fn submodules(m: &Module, cap: u64) -> Result<Vec<Subspace>> {
    let f = m.field();
    let n = m.dim();
    let q = f.q() as u64;
    let count = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(Error::CapExceeded(format!("{count} cyclic generators")));
    }
    let mut seen: HashSet<Mat> = HashSet::new();
    let mut subs: Vec<Subspace> = Vec::new();
    let zero = Subspace::zero(f, n);
    seen.insert(zero.basis().clone());
    subs.push(zero);
    let gens: Vec<&Mat> = m.algebra().rad_generators().iter().map(|&g| m.action(g)).collect();
    let idem: Vec<&Mat> = m.algebra().idempotents().iter().map(|(_, e)| m.action(*e)).collect();
    for code in 1..count as u64 {
        let v = digits(code, q, n);
        // scalar multiples generate the same submodule
        if v.iter().find(|&&x| x != 0) != Some(&1) {
            continue;
        }
        let s = cyclic_closure(f, &v, &idem, &gens);
        if seen.insert(s.basis().clone()) {
            subs.push(s);
        }
    }
    let mut i = 0;
    while i < subs.len() {
        let mut j = 0;
        while j < i {
            let s = subs[i].sum(&subs[j])?;
            if seen.insert(s.basis().clone()) {
                subs.push(s);
            }
            j += 1;
        }
        i += 1;
    }
    Ok(subs)
}

fn cyclic_closure(f: &Arc<crate::field::Field>, v: &[u32], idem: &[&Mat], gens: &[&Mat]) -> Subspace {
    let mut span = Subspace::zero(f, v.len());
    let mut frontier: Vec<Vec<u32>> = idem.iter().map(|e| e.apply(v)).filter(|w| w.iter().any(|&x| x != 0)).collect();
    while let Some(w) = frontier.pop() {
        if span.contains_vec(&w) {
            continue;
        }
        span = span.sum(&Subspace::from_rows(&Mat::from_rows(f, &[w.clone()]))).expect("same ambient");
        for g in gens {
            let u = g.apply(&w);
            if u.iter().any(|&x| x != 0) {
                frontier.push(u);
            }
        }
    }
    span
}

/// Submodules of `m` with dimension vector `dv`, by enumerating products of
/// subspaces of the vertex blocks; each as basis rows in `m` coordinates.
pub fn graded_submodules(m: &Module, dv: &[usize], cap: u64) -> Result<Vec<Mat>> {
    let f = m.field();
    let q = f.q() as u64;
    let nv = m.algebra().num_vertices();
    let mdv = m.dim_vector();
    if dv.iter().zip(&mdv).any(|(a, b)| a > b) {
        return Ok(vec![]);
    }
    let mut total: u128 = 1;
    for x in 0..nv {
        total = total.saturating_mul(gaussian_binomial(mdv[x], dv[x], q));
    }
    if total > cap as u128 {
        return Err(Error::CapExceeded(format!("{total} graded subspaces")));
    }
    let local: Vec<Vec<Subspace>> = (0..nv)
        .map(|x| Ok(enumerate_subspaces(f, mdv[x], dv[x], u64::MAX)?.collect()))
        .collect::<Result<_>>()?;
    // (generator action block, source vertex, target vertex)
    let blocks: Vec<(Mat, usize, usize)> = m
        .algebra()
        .rad_generators()
        .iter()
        .filter_map(|&g| {
            let (t, s) = m.algebra().homogeneity(g)?;
            let a = m.action(g);
            let blk = a.block(m.block(t).start, m.block(s).start, mdv[t], mdv[s]);
            if blk.is_zero() {
                None
            } else {
                Some((blk, s, t))
            }
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; nv];
    'outer: loop {
        let choice: Vec<&Subspace> = (0..nv).map(|x| &local[x][idx[x]]).collect();
        let stable = blocks.iter().all(|(blk, s, t)| {
            let us = choice[*s].basis();
            (0..us.rows()).all(|i| choice[*t].contains_vec(&blk.apply(us.row(i))))
        });
        if stable {
            let mut rows: Vec<Vec<u32>> = Vec::new();
            for x in 0..nv {
                let b = choice[x].basis();
                for i in 0..b.rows() {
                    let mut full = vec![0; m.dim()];
                    full[m.block(x)].copy_from_slice(b.row(i));
                    rows.push(full);
                }
            }
            out.push(if rows.is_empty() { Mat::zeros(f, 0, m.dim()) } else { Mat::from_rows(f, &rows) });
        }
        for x in 0..nv {
            idx[x] += 1;
            if idx[x] < local[x].len() {
                continue 'outer;
            }
            idx[x] = 0;
        }
        break;
    }
    Ok(out)
}

fn digits(mut code: u64, q: u64, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let x = (code % q) as u32;
            code /= q;
            x
        })
        .collect()
}

fn additive(m: &[usize], n: &[usize], l: &[usize]) -> bool {
    m.len() == n.len() && m.iter().zip(n.iter().zip(l)).all(|(a, (b, c))| *a == b + c)
}

/// `G^m_{n,l}` by enumerating submodules of `m` with the dimension vector of `l`.
pub fn hall_number(reg: &mut Registry, m: &Module, n: &Module, l: &Module) -> Result<u64> {
    if !additive(&m.dim_vector(), &n.dim_vector(), &l.dim_vector()) {
        return Ok(0);
    }
    let cl = reg.class_of(l)?;
    let cn = reg.class_of(n)?;
    let mut count = 0;
    for rows in graded_submodules(m, &l.dim_vector(), reg.caps.submodules)? {
        let (u, _) = m.submodule(&rows);
        if reg.class_of(&u)? != cl {
            continue;
        }
        let (quo, _) = m.quotient(&rows);
        if reg.class_of(&quo)? == cn {
            count += 1;
        }
    }
    Ok(count)
}

pub fn hall_number_classes(reg: &mut Registry, m: ClassId, n: ClassId, l: ClassId) -> Result<u64> {
    let (mm, nm, lm) = (reg.class_module(m), reg.class_module(n), reg.class_module(l));
    hall_number(reg, &mm, &nm, &lm)
}

/// Number of extension classes in `Ext¹(n, l)` per middle-term class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtCensus {
    pub n: ClassId,
    pub l: ClassId,
    pub ext_dim: usize,
    pub split: ClassId,
    pub counts: BTreeMap<ClassId, u64>,
}

impl ExtCensus {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// Pushout of `0 -> Ω n -> P_0 -> n -> 0` along each cocycle `Ω n -> l`,
/// classified; scalar multiples of a cocycle share their middle term.
pub fn middle_term_census(reg: &mut Registry, n: ClassId, l: ClassId) -> Result<ExtCensus> {
    if let Some(c) = reg.censuses.get(&(n, l)) {
        return Ok(c.clone());
    }
    let split = reg.sum_class(n, l);
    let nm = reg.class_module(n);
    let lm = reg.class_module(l);
    let q = reg.q();
    if nm.dim() == 0 || lm.dim() == 0 {
        let c = ExtCensus { n, l, ext_dim: 0, split, counts: BTreeMap::from([(split, 1)]) };
        reg.censuses.insert((n, l), c.clone());
        return Ok(c);
    }
    let ext = ext1_space(&nm, &lm)?;
    let e = ext.dim;
    let total = q.checked_pow(e as u32).filter(|&t| t <= reg.caps.cocycles).ok_or_else(|| {
        Error::CapExceeded(format!("census of q^{e} cocycles over GF({q})"))
    })?;
    let mut counts: BTreeMap<ClassId, u64> = BTreeMap::from([(split, 1)]);
    if e > 0 {
        let f = nm.field().clone();
        let p0 = ext.cover.map.src.clone();
        let (sum, incs) = direct_sum_all(&[lm.clone(), p0.clone()]);
        let (inc_l, inc_p) = (&incs[0], &incs[1]);
        let iota_part = inc_p.mul(&ext.omega_inc);
        for code in 1..total {
            let coeffs = digits(code, q, e);
            if coeffs.iter().rev().find(|&&x| x != 0) != Some(&1) {
                continue;
            }
            let mut h = Mat::zeros(&f, lm.dim(), ext.omega.dim());
            for (c, r) in coeffs.iter().zip(&ext.reps) {
                if *c != 0 {
                    h.axpy(*c, r);
                }
            }
            // relations (h(w), −ι(w)) for w in Ω n
            let rel = inc_l.mul(&h).sub(&iota_part);
            let (mid, _) = sum.quotient(&rel.transpose());
            let c = reg.class_of(&mid)?;
            *counts.entry(c).or_default() += q - 1;
        }
    }
    let census = ExtCensus { n, l, ext_dim: e, split, counts };
    debug_assert_eq!(census.total(), total);
    reg.censuses.insert((n, l), census.clone());
    Ok(census)
}

/// Right side of the Riedtmann formula; errors if it is not an integer.
pub fn riedtmann_number(reg: &mut Registry, census: &ExtCensus, m: ClassId) -> Result<u64> {
    let count = census.counts.get(&m).copied().unwrap_or(0);
    if count == 0 {
        return Ok(0);
    }
    let num = BigUint::from(count) * reg.aut_order(m)?;
    let h = reg.hom_dim(census.n, census.l)?;
    let den = reg.aut_order(census.n)? * reg.aut_order(census.l)? * BigUint::from(reg.q()).pow(h as u32);
    if !(&num % &den).is_zero() {
        return Err(Error::Inconsistent(format!(
            "Riedtmann quotient {num}/{den} for {} is not an integer",
            reg.class_name(m)
        )));
    }
    (num / den).to_u64().ok_or_else(|| Error::CapExceeded("Hall number exceeds u64".into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RiedtmannRow {
    pub middle: String,
    pub ext_classes: u64,
    pub formula: u64,
    pub brute: u64,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RiedtmannReport {
    pub n: String,
    pub l: String,
    pub rows: Vec<RiedtmannRow>,
}

impl RiedtmannReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.agree)
    }
}

/// Compare both routes for every middle term of `Ext¹(n, l)`.
pub fn riedtmann_check(reg: &mut Registry, n: ClassId, l: ClassId) -> Result<RiedtmannReport> {
    let census = middle_term_census(reg, n, l)?;
    let mut rows = Vec::new();
    for (&m, &cnt) in &census.counts.clone() {
        let formula = riedtmann_number(reg, &census, m)?;
        let brute = hall_number_classes(reg, m, n, l)?;
        rows.push(RiedtmannRow { middle: reg.class_name(m), ext_classes: cnt, formula, brute, agree: formula == brute });
    }
    Ok(RiedtmannReport { n: reg.class_name(n), l: reg.class_name(l), rows })
}

/// `u_n · u_l = Σ_M G^M_{n l} u_M` with candidates from the census.
pub fn hall_mul_basis(reg: &mut Registry, n: ClassId, l: ClassId) -> Result<HallElement> {
    if n == ZERO_CLASS {
        return Ok(HallElement::basis(l));
    }
    if l == ZERO_CLASS {
        return Ok(HallElement::basis(n));
    }
    if let Some(p) = reg.products.get(&(n, l)) {
        return Ok(p.clone());
    }
    let census = middle_term_census(reg, n, l)?;
    let mut out = HallElement::zero();
    for &m in census.counts.keys() {
        let g = match reg.route {
            HallRoute::Riedtmann => riedtmann_number(reg, &census, m)?,
            HallRoute::Brute => hall_number_classes(reg, m, n, l)?,
        };
        out.add_term(m, g as i128);
    }
    reg.products.insert((n, l), out.clone());
    Ok(out)
}

pub fn hall_mul(reg: &mut Registry, x: &HallElement, y: &HallElement) -> Result<HallElement> {
    let mut out = HallElement::zero();
    for (&a, &ka) in &x.terms {
        for (&b, &kb) in &y.terms {
            out = out.add(&hall_mul_basis(reg, a, b)?.scale(ka * kb));
        }
    }
    Ok(out)
}

/// Product of basis elements left to right.
pub fn hall_mul_seq(reg: &mut Registry, classes: &[ClassId]) -> Result<HallElement> {
    let mut acc = HallElement::one();
    for &c in classes {
        acc = hall_mul(reg, &acc, &HallElement::basis(c))?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangularReport {
    pub m: String,
    pub m0: String,
    pub m01: String,
    pub m1: String,
    /// `G^{M01⊕M1}_{M01, M1}`
    pub inner: i128,
    /// `G^{M}_{M0, M01⊕M1}`
    pub outer: i128,
    /// `u_{M0}·u_{M01}·u_{M1}` equals `u_M`.
    pub identity: bool,
}

impl TriangularReport {
    pub fn passed(&self) -> bool {
        self.identity && self.inner == 1 && self.outer == 1
    }
}

/// Split `m` into its parts over `A_0`, mixed, and `A_1`, and check
/// `u_{M0}·u_{M01}·u_{M1} = u_M`.
pub fn triangular_factor(reg: &mut Registry, m: &Module) -> Result<(ClassId, ClassId, ClassId, TriangularReport)> {
    let cm = reg.class_of(m)?;
    let mut parts: [Vec<(usize, usize)>; 3] = Default::default();
    for &(i, k) in &reg.class_key(cm).to_vec() {
        let p = part_of(&reg.indecs[i].module, reg.seed)?;
        let slot = match p {
            Part::A0 => 0,
            Part::A01 => 1,
            Part::A1 => 2,
        };
        parts[slot].push((i, k));
    }
    let [p0, p01, p1] = parts;
    let (c0, c01, c1) = (reg.class_from_key(p0), reg.class_from_key(p01), reg.class_from_key(p1));
    let inner_el = hall_mul_basis(reg, c01, c1)?;
    let c011 = reg.sum_class(c01, c1);
    let inner = inner_el.coeff(c011);
    let outer_el = hall_mul_basis(reg, c0, c011)?;
    let outer = outer_el.coeff(cm);
    let full = hall_mul(reg, &HallElement::basis(c0), &inner_el)?;
    let identity = full == HallElement::basis(cm);
    let report = TriangularReport {
        m: reg.class_name(cm),
        m0: reg.class_name(c0),
        m01: reg.class_name(c01),
        m1: reg.class_name(c1),
        inner,
        outer,
        identity,
    };
    Ok((c0, c01, c1, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;
    use crate::field::Field;
    use crate::module::{standard_module, StandardKind};

    fn setup(name: &str, q: u64) -> (Arc<AlgebraTable>, Registry) {
        let a = builtin(name, &Field::of_order(q).unwrap()).unwrap();
        let r = Registry::new(&a, 0).unwrap();
        (a, r)
    }

    #[test]
    fn submodules_of_simple_sums() {
        for q in [2u64, 3] {
            let (a, _) = setup("kronecker", q);
            let s = standard_module(&a, StandardKind::Simple, "1").unwrap();
            assert_eq!(submodules(&s, 1 << 20).unwrap().len(), 2);
            let ss = s.direct_sum(&s);
            assert_eq!(submodules(&ss, 1 << 20).unwrap().len() as u64, q + 3);
        }
    }

    #[test]
    fn graded_matches_cyclic_closure() {
        let (a, _) = setup("kronecker-dup", 2);
        let p = standard_module(&a, StandardKind::Projective, "2'").unwrap();
        let s = standard_module(&a, StandardKind::Simple, "1").unwrap();
        let m = p.direct_sum(&s);
        let all = submodules(&m, 1 << 20).unwrap();
        let mut by_dv: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for sub in &all {
            let (u, _) = m.submodule(sub.basis());
            *by_dv.entry(u.dim_vector()).or_default() += 1;
        }
        for (dv, cnt) in by_dv {
            assert_eq!(graded_submodules(&m, &dv, 1 << 20).unwrap().len(), cnt, "{dv:?}");
        }
    }

    #[test]
    fn projective_radical_is_unique() {
        let (a, _) = setup("kronecker", 3);
        let p2 = standard_module(&a, StandardKind::Projective, "2").unwrap();
        assert_eq!(graded_submodules(&p2, &[2, 0], 1 << 20).unwrap().len(), 1);
    }

    #[test]
    fn small_hall_numbers() {
        for q in [2u64, 3] {
            let (a, mut reg) = setup("kronecker-dup", q);
            let s = standard_module(&a, StandardKind::Simple, "1").unwrap();
            let z = Module::zero(&a);
            let ss = s.direct_sum(&s);
            assert_eq!(hall_number(&mut reg, &ss, &s, &s).unwrap(), q + 1);
            assert_eq!(hall_number(&mut reg, &s, &s, &z).unwrap(), 1);
            assert_eq!(hall_number(&mut reg, &s, &z, &s).unwrap(), 1);
            let p = standard_module(&a, StandardKind::Projective, "1'").unwrap();
            let top = standard_module(&a, StandardKind::Simple, "1'").unwrap();
            let rad = p.radical().0;
            assert_eq!(hall_number(&mut reg, &p, &top, &rad).unwrap(), 1);
        }
    }

    #[test]
    fn kronecker_census() {
        for q in [2u64, 3] {
            let (a, mut reg) = setup("kronecker", q);
            let s1 = reg.class_of(&standard_module(&a, StandardKind::Simple, "1").unwrap()).unwrap();
            let s2 = reg.class_of(&standard_module(&a, StandardKind::Simple, "2").unwrap()).unwrap();
            let c = middle_term_census(&mut reg, s2, s1).unwrap();
            assert_eq!(c.ext_dim, 2);
            assert_eq!(c.total(), q * q);
            assert_eq!(c.counts.len() as u64, q + 2);
            assert_eq!(c.counts[&c.split], 1);
            assert!(c.counts.iter().filter(|(&k, _)| k != c.split).all(|(_, &v)| v == q - 1));
            let rep = riedtmann_check(&mut reg, s2, s1).unwrap();
            assert!(rep.passed());
            assert!(rep.rows.iter().all(|r| r.formula == 1));
        }
    }

    #[test]
    fn kronecker_products() {
        let (a, mut reg) = setup("kronecker", 2);
        let s1 = reg.class_of(&standard_module(&a, StandardKind::Simple, "1").unwrap()).unwrap();
        let s2 = reg.class_of(&standard_module(&a, StandardKind::Simple, "2").unwrap()).unwrap();
        let p = hall_mul_basis(&mut reg, s1, s2).unwrap();
        let split = reg.sum_class(s1, s2);
        assert_eq!(p, HallElement::basis(split));
        let p = hall_mul_basis(&mut reg, s2, s1).unwrap();
        assert_eq!(p.terms.len(), 4);
        assert!(p.terms.values().all(|&k| k == 1));
        let one = HallElement::one();
        let x = HallElement::basis(s2);
        assert_eq!(hall_mul(&mut reg, &one, &x).unwrap(), x);
        assert_eq!(hall_mul(&mut reg, &x, &one).unwrap(), x);
    }

    #[test]
    fn routes_agree_on_products() {
        let (a, mut reg) = setup("kronecker-dup", 2);
        let s2 = reg.class_of(&standard_module(&a, StandardKind::Simple, "2").unwrap()).unwrap();
        let s1p = reg.class_of(&standard_module(&a, StandardKind::Simple, "1'").unwrap()).unwrap();
        let i1 = reg.class_of(&standard_module(&a, StandardKind::Projective, "1'").unwrap().radical().0).unwrap();
        let x = hall_mul_basis(&mut reg, s1p, i1).unwrap();
        reg.route = HallRoute::Brute;
        reg.products.clear();
        let y = hall_mul_basis(&mut reg, s1p, i1).unwrap();
        assert_eq!(x, y);
        let z = hall_mul_basis(&mut reg, s2, s2).unwrap();
        assert_eq!(z.terms.values().copied().collect::<Vec<_>>(), vec![3]);
    }

    #[test]
    fn registry_distinguishes_points() {
        let (a, mut reg) = setup("kronecker", 2);
        let f = a.field().clone();
        let (ia, ib) = (a.label_index("a").unwrap(), a.label_index("b").unwrap());
        let mut ids = HashSet::new();
        for (x, y) in [(1, 0), (0, 1), (1, 1)] {
            let mut ma = Mat::zeros(&f, 2, 2);
            ma.set(0, 1, x);
            let mut mb = Mat::zeros(&f, 2, 2);
            mb.set(0, 1, y);
            let m = Module::from_generator_actions(&a, &[1, 1], &[(ia, ma), (ib, mb)]).unwrap();
            ids.insert(reg.class_of(&m).unwrap());
            // stable on repeat and under adding zero
            let z = Module::zero(&a);
            assert!(ids.contains(&reg.class_of(&m.direct_sum(&z)).unwrap()));
        }
        assert_eq!(ids.len(), 3);
    }

    #[test]
    fn triangular_on_mixed_module() {
        let (a, mut reg) = setup("kronecker-dup", 2);
        let m = standard_module(&a, StandardKind::Simple, "1")
            .unwrap()
            .direct_sum(&standard_module(&a, StandardKind::Projective, "1'").unwrap())
            .direct_sum(&standard_module(&a, StandardKind::Simple, "2'").unwrap());
        let (_, _, _, rep) = triangular_factor(&mut reg, &m).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let z = Module::zero(&a);
        let (c0, c01, c1, rep) = triangular_factor(&mut reg, &z).unwrap();
        assert_eq!((c0, c01, c1), (ZERO_CLASS, ZERO_CLASS, ZERO_CLASS));
        assert!(rep.passed());
    }
}
