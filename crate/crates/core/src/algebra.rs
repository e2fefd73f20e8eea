//! Finite-dimensional algebras given by structure constants.
//!
//! Path algebras of acyclic quivers, the duplicated algebra
//! `[[A, 0], [DA, A]]`, opposite algebras and law checking.
//!
//! Convention for the duplicated algebra: an element is a triple
//! `(a0, f, a1)` with `a0, a1 ∈ A` and `f ∈ DA`, multiplied as
//! `(a0, f, a1)(b0, g, b1) = (a0 b0, a0·g + f·b1, a1 b1)` where
//! `(a·g)(x) = g(x a)` and `(f·b)(x) = f(b x)`. Under left modules the copy
//! `a0` carries the plain projectives (the unprimed vertices) and the
//! projective-injectives have their top at a primed vertex and their socle
//! at an unprimed one.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertices: &[&str], arrows: &[(&str, usize, usize)]) -> Quiver {
        Quiver {
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            arrows: arrows
                .iter()
                .map(|&(n, s, t)| Arrow { name: n.to_string(), source: s, target: t })
                .collect(),
        }
    }

    pub fn is_acyclic(&self) -> bool {
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.target] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for a in self.arrows.iter().filter(|a| a.source == v) {
                indeg[a.target] -= 1;
                if indeg[a.target] == 0 {
                    stack.push(a.target);
                }
            }
        }
        seen == n
    }

    /// Same vertices, every arrow reversed.
    pub fn reversed(&self) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow { name: a.name.clone(), source: a.target, target: a.source })
                .collect(),
        }
    }
}

/// Null-root data of an affine quiver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TameRootData {
    pub delta: Vec<u32>,
    pub m: u32,
}

impl TameRootData {
    pub fn new(delta: Vec<u32>) -> TameRootData {
        let m = delta.iter().sum();
        TameRootData { delta, m }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Table,
    Path,
    Duplicated,
}

/// Which copy of the base algebra a vertex belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Copy01 {
    Zero,
    One,
}

/// Sparse product of two basis elements: `(k, coeff)` pairs.
pub type Product = Vec<(usize, u32)>;

pub struct AlgebraTable {
    field: Arc<Field>,
    kind: AlgebraKind,
    labels: Vec<String>,
    mult: Vec<Product>,
    unit: Vec<u32>,
    /// `(vertex label, basis index)`.
    idempotents: Vec<(String, usize)>,
    copies: Vec<Copy01>,
    root_data: Option<TameRootData>,
    base: Option<Arc<AlgebraTable>>,
    // derived
    homog: Vec<Option<(usize, usize)>>,
    radical: Vec<usize>,
    rad_generators: Vec<usize>,
}

impl fmt::Debug for AlgebraTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraTable({:?}, dim {}, {} vertices over {:?})", self.kind, self.dim(), self.num_vertices(), self.field)
    }
}

impl PartialEq for AlgebraTable {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field
            && self.labels == other.labels
            && self.mult == other.mult
            && self.idempotents == other.idempotents
    }
}

impl AlgebraTable {
    /// Assemble a table. Products are given row-major over basis pairs.
    pub fn new(
        field: &Arc<Field>,
        kind: AlgebraKind,
        labels: Vec<String>,
        mult: Vec<Product>,
        idempotents: Vec<(String, usize)>,
    ) -> Result<AlgebraTable> {
        let dim = labels.len();
        if mult.len() != dim * dim {
            return Err(Error::Algebra(format!("expected {} products, got {}", dim * dim, mult.len())));
        }
        if mult.iter().flatten().any(|&(k, c)| k >= dim || c >= field.q()) {
            return Err(Error::Algebra("structure constant out of range".into()));
        }
        if idempotents.iter().any(|(_, i)| *i >= dim) {
            return Err(Error::Algebra("idempotent index out of range".into()));
        }
        let mut unit = vec![0; dim];
        for (_, i) in &idempotents {
            unit[*i] = field.add(unit[*i], 1);
        }
        let copies = vec![Copy01::Zero; idempotents.len()];
        let mut a = AlgebraTable {
            field: Arc::clone(field),
            kind,
            labels,
            mult: mult.into_iter().map(normalize_product).collect(),
            unit,
            idempotents,
            copies,
            root_data: None,
            base: None,
            homog: Vec::new(),
            radical: Vec::new(),
            rad_generators: Vec::new(),
        };
        a.derive();
        Ok(a)
    }

    fn derive(&mut self) {
        let dim = self.dim();
        let idem: Vec<usize> = self.idempotents.iter().map(|(_, i)| *i).collect();
        self.homog = (0..dim)
            .map(|b| {
                for (t, &et) in idem.iter().enumerate() {
                    let left = self.mul_vec(&self.basis_vec(et), &self.basis_vec(b));
                    if left != self.basis_vec(b) {
                        continue;
                    }
                    for (s, &es) in idem.iter().enumerate() {
                        let both = self.mul_vec(&left, &self.basis_vec(es));
                        if both == self.basis_vec(b) {
                            return Some((t, s));
                        }
                    }
                }
                None
            })
            .collect();
        self.radical = (0..dim).filter(|b| !idem.contains(b)).collect();
        // radical elements whose images span rad / rad^2
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for &x in &self.radical {
            for &y in &self.radical {
                let p = self.mul_basis_vec(x, y);
                if p.iter().any(|&c| c != 0) {
                    rows.push(p);
                }
            }
        }
        let f = Arc::clone(&self.field);
        let mut span = crate::linalg::Subspace::zero(&f, dim);
        if !rows.is_empty() {
            span = crate::linalg::Subspace::from_rows(&crate::linalg::Mat::from_rows(&f, &rows));
        }
        let mut gens = Vec::new();
        for &x in &self.radical {
            let v = self.basis_vec(x);
            if !span.contains_vec(&v) {
                gens.push(x);
                let m = span.basis().vstack(&crate::linalg::Mat::from_rows(&f, &[v]));
                span = crate::linalg::Subspace::from_rows(&m);
            }
        }
        self.rad_generators = gens;
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }
    pub fn dim(&self) -> usize {
        self.labels.len()
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn unit(&self) -> &[u32] {
        &self.unit
    }
    pub fn idempotents(&self) -> &[(String, usize)] {
        &self.idempotents
    }
    pub fn num_vertices(&self) -> usize {
        self.idempotents.len()
    }
    pub fn vertex_labels(&self) -> Vec<String> {
        self.idempotents.iter().map(|(l, _)| l.clone()).collect()
    }
    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.idempotents.iter().position(|(l, _)| l == label)
    }
    pub fn idempotent_basis(&self, vertex: usize) -> usize {
        self.idempotents[vertex].1
    }
    pub fn copies(&self) -> &[Copy01] {
        &self.copies
    }
    pub fn root_data(&self) -> Option<&TameRootData> {
        self.root_data.as_ref()
    }
    /// The algebra this one was duplicated from.
    pub fn base(&self) -> Option<&Arc<AlgebraTable>> {
        self.base.as_ref()
    }
    /// `Some((target, source))` when `e_t b e_s = b`.
    pub fn homogeneity(&self, b: usize) -> Option<(usize, usize)> {
        self.homog[b]
    }
    pub fn is_homogeneous(&self) -> bool {
        self.homog.iter().all(|h| h.is_some())
    }
    /// Non-idempotent basis elements; they span the radical for the algebras built here.
    pub fn radical_basis(&self) -> &[usize] {
        &self.radical
    }
    /// Radical basis elements whose classes span `rad / rad^2`.
    pub fn rad_generators(&self) -> &[usize] {
        &self.rad_generators
    }
    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn product(&self, i: usize, j: usize) -> &Product {
        &self.mult[i * self.dim() + j]
    }

    pub fn basis_vec(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    pub fn mul_basis_vec(&self, i: usize, j: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim()];
        for &(k, c) in self.product(i, j) {
            v[k] = self.field.add(v[k], c);
        }
        v
    }

    /// Product of two coordinate vectors.
    pub fn mul_vec(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let f = &self.field;
        let mut out = vec![0; self.dim()];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let c = f.mul(xi, yj);
                for &(k, s) in self.product(i, j) {
                    out[k] = f.add(out[k], f.mul(c, s));
                }
            }
        }
        out
    }

    /// Matrix of left multiplication by basis element `i` on column coordinates.
    pub fn left_mult_matrix(&self, i: usize) -> crate::linalg::Mat {
        let n = self.dim();
        let mut m = crate::linalg::Mat::zeros(&self.field, n, n);
        for j in 0..n {
            for &(k, c) in self.product(i, j) {
                m.set(k, j, self.field.add(m.get(k, j), c));
            }
        }
        m
    }

    /// Matrix of right multiplication by basis element `i` (x ↦ x b_i) on column coordinates.
    pub fn right_mult_matrix(&self, i: usize) -> crate::linalg::Mat {
        let n = self.dim();
        let mut m = crate::linalg::Mat::zeros(&self.field, n, n);
        for j in 0..n {
            for &(k, c) in self.product(j, i) {
                m.set(k, j, self.field.add(m.get(k, j), c));
            }
        }
        m
    }

    /// `mult(i, j) = a.mult(j, i)`.
    pub fn opposite(&self) -> AlgebraTable {
        let n = self.dim();
        let mut mult = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                mult.push(self.product(j, i).clone());
            }
        }
        let mut a = AlgebraTable::new(
            &self.field,
            AlgebraKind::Table,
            self.labels.clone(),
            mult,
            self.idempotents.clone(),
        )
        .expect("opposite of a valid table is valid");
        a.copies = self.copies.clone();
        a.root_data = self.root_data.clone();
        a
    }

    /// The same table with structure constants mapped through a field embedding.
    pub fn base_change(&self, emb: &crate::field::FieldEmbedding) -> Result<AlgebraTable> {
        if **emb.src() != *self.field {
            return Err(Error::Field("embedding source is not the algebra field".into()));
        }
        let mult = self
            .mult
            .iter()
            .map(|p| p.iter().map(|&(k, c)| (k, emb.map(c))).collect())
            .collect();
        let mut a = AlgebraTable::new(emb.dst(), self.kind, self.labels.clone(), mult, self.idempotents.clone())?;
        a.copies = self.copies.clone();
        a.root_data = self.root_data.clone();
        if let Some(b) = &self.base {
            a.base = Some(Arc::new(b.base_change(emb)?));
        }
        Ok(a)
    }

    /// Check associativity, the unit law and the idempotent laws.
    ///
    /// Exhaustive over basis triples up to dimension 64; beyond that a fixed
    /// stride sample of triples is checked.
    pub fn validate_laws(&self) -> ValidationReport {
        let n = self.dim();
        let mut report = ValidationReport::default();
        let stride = if n <= 64 { 1 } else { 7 };
        let mut t = 0usize;
        for i in 0..n {
            for j in 0..n {
                let ij = self.mul_basis_vec(i, j);
                for k in 0..n {
                    t += 1;
                    if t % stride != 0 {
                        continue;
                    }
                    let left = self.mul_vec(&ij, &self.basis_vec(k));
                    let right = self.mul_vec(&self.basis_vec(i), &self.mul_basis_vec(j, k));
                    if left != right {
                        report.associativity.push((i, j, k));
                    }
                }
            }
        }
        for i in 0..n {
            let b = self.basis_vec(i);
            if self.mul_vec(&self.unit, &b) != b || self.mul_vec(&b, &self.unit) != b {
                report.unit.push(i);
            }
        }
        for (a, (_, ea)) in self.idempotents.iter().enumerate() {
            for (b, (_, eb)) in self.idempotents.iter().enumerate() {
                let p = self.mul_basis_vec(*ea, *eb);
                let expect = if a == b { self.basis_vec(*ea) } else { vec![0; n] };
                if p != expect {
                    report.idempotents.push(format!("e{a} e{b}"));
                }
            }
        }
        report
    }

    pub fn to_json(&self) -> AlgebraJson {
        AlgebraJson {
            kind: self.kind,
            field: self.field.spec().clone(),
            labels: self.labels.clone(),
            mult: self.mult.iter().map(|p| p.iter().map(|&(k, c)| [k as u32, c]).collect()).collect(),
            idempotents: self.idempotents.iter().map(|(l, i)| IdempotentJson { vertex: l.clone(), index: *i }).collect(),
            copies: Some(self.copies.clone()),
            root_data: self.root_data.clone(),
        }
    }

    pub fn from_json(json: &AlgebraJson) -> Result<AlgebraTable> {
        let field = Field::from_spec(&json.field)?;
        let mult = json
            .mult
            .iter()
            .map(|p| p.iter().map(|&[k, c]| (k as usize, c)).collect())
            .collect();
        let idem = json.idempotents.iter().map(|i| (i.vertex.clone(), i.index)).collect();
        let mut a = AlgebraTable::new(&field, json.kind, json.labels.clone(), mult, idem)?;
        if let Some(c) = &json.copies {
            if c.len() != a.num_vertices() {
                return Err(Error::Algebra("copies list does not match vertices".into()));
            }
            a.copies = c.clone();
        }
        a.root_data = json.root_data.clone();
        Ok(a)
    }
}

fn normalize_product(p: Product) -> Product {
    let mut p: Vec<(usize, u32)> = p.into_iter().filter(|&(_, c)| c != 0).collect();
    p.sort();
    p
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub associativity: Vec<(usize, usize, usize)>,
    pub unit: Vec<usize>,
    pub idempotents: Vec<String>,
    pub primitivity: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.associativity.is_empty() && self.unit.is_empty() && self.idempotents.is_empty() && self.primitivity.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdempotentJson {
    pub vertex: String,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub kind: AlgebraKind,
    pub field: FieldSpec,
    pub labels: Vec<String>,
    pub mult: Vec<Vec<[u32; 2]>>,
    pub idempotents: Vec<IdempotentJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub copies: Option<Vec<Copy01>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_data: Option<TameRootData>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Path {
    source: usize,
    target: usize,
    /// Arrows in traversal order.
    arrows: Vec<usize>,
}

/// Path algebra: basis = all paths, `p·q` = "q then p" when composable.
pub fn path_algebra(quiver: &Quiver, field: &Arc<Field>) -> Result<AlgebraTable> {
    if !quiver.is_acyclic() {
        return Err(Error::Algebra("quiver has an oriented cycle".into()));
    }
    {
        let mut seen = std::collections::HashSet::new();
        if !quiver.vertices.iter().all(|v| seen.insert(v)) {
            return Err(Error::Algebra("duplicate vertex labels".into()));
        }
    }
    let nv = quiver.vertices.len();
    let mut paths: Vec<Path> = (0..nv).map(|v| Path { source: v, target: v, arrows: vec![] }).collect();
    let mut frontier: Vec<Path> = quiver
        .arrows
        .iter()
        .enumerate()
        .map(|(i, a)| Path { source: a.source, target: a.target, arrows: vec![i] })
        .collect();
    while !frontier.is_empty() {
        paths.extend(frontier.iter().cloned());
        let mut next = Vec::new();
        for p in &frontier {
            for (i, a) in quiver.arrows.iter().enumerate() {
                if a.source == p.target {
                    let mut arrows = p.arrows.clone();
                    arrows.push(i);
                    next.push(Path { source: p.source, target: a.target, arrows });
                }
            }
        }
        frontier = next;
    }
    let labels: Vec<String> = paths
        .iter()
        .map(|p| {
            if p.arrows.is_empty() {
                format!("e{}", quiver.vertices[p.source])
            } else {
                p.arrows.iter().rev().map(|&a| quiver.arrows[a].name.clone()).collect::<Vec<_>>().join("*")
            }
        })
        .collect();
    let n = paths.len();
    let mut mult = Vec::with_capacity(n * n);
    for p in &paths {
        for q in &paths {
            // p·q: first q, then p
            if q.target != p.source {
                mult.push(vec![]);
                continue;
            }
            let mut arrows = q.arrows.clone();
            arrows.extend_from_slice(&p.arrows);
            let composite = Path { source: q.source, target: p.target, arrows };
            let k = paths.iter().position(|x| *x == composite).expect("paths are closed under composition");
            mult.push(vec![(k, 1)]);
        }
    }
    let idem = (0..nv).map(|v| (quiver.vertices[v].clone(), v)).collect();
    AlgebraTable::new(field, AlgebraKind::Path, labels, mult, idem)
}

/// The duplicated algebra of `a`; basis = unprimed copy, primed copy, dual basis of `DA`.
pub fn duplicated(a: &Arc<AlgebraTable>) -> Result<AlgebraTable> {
    let report = a.validate_laws();
    if !report.passed() {
        return Err(Error::Algebra(format!("input fails validation: {report:?}")));
    }
    let n = a.dim();
    let f = a.field();
    let zero_off = 0;
    let one_off = n;
    let d_off = 2 * n;
    let mut labels = Vec::with_capacity(3 * n);
    labels.extend(a.labels().iter().cloned());
    labels.extend(a.labels().iter().map(|l| format!("{l}'")));
    labels.extend(a.labels().iter().map(|l| format!("D({l})")));
    let mut mult = vec![Vec::new(); 9 * n * n];
    let idx = |i: usize, j: usize| i * 3 * n + j;
    for i in 0..n {
        for j in 0..n {
            mult[idx(zero_off + i, zero_off + j)] = a.product(i, j).iter().map(|&(k, c)| (zero_off + k, c)).collect();
            mult[idx(one_off + i, one_off + j)] = a.product(i, j).iter().map(|&(k, c)| (one_off + k, c)).collect();
        }
    }
    // u · p* = Σ_w c_{w,u}^p w*   and   p* · u = Σ_w c_{u,w}^p w*
    for u in 0..n {
        for p in 0..n {
            let mut left: Vec<(usize, u32)> = Vec::new();
            let mut right: Vec<(usize, u32)> = Vec::new();
            for w in 0..n {
                for &(k, c) in a.product(w, u) {
                    if k == p {
                        left.push((d_off + w, c));
                    }
                }
                for &(k, c) in a.product(u, w) {
                    if k == p {
                        right.push((d_off + w, c));
                    }
                }
            }
            mult[idx(zero_off + u, d_off + p)] = left;
            mult[idx(d_off + p, one_off + u)] = right;
        }
    }
    let mut idem: Vec<(String, usize)> = a.idempotents().iter().map(|(l, i)| (l.clone(), zero_off + i)).collect();
    idem.extend(a.idempotents().iter().map(|(l, i)| (format!("{l}'"), one_off + i)));
    let mut out = AlgebraTable::new(f, AlgebraKind::Duplicated, labels, mult, idem)?;
    let nv = a.num_vertices();
    out.copies = (0..2 * nv).map(|v| if v < nv { Copy01::Zero } else { Copy01::One }).collect();
    out.root_data = a.root_data.clone();
    out.base = Some(Arc::clone(a));
    Ok(out)
}

/// Names accepted by [`builtin`].
pub const BUILTINS: &[&str] = &["kronecker", "d4tilde", "kronecker-dup", "d4tilde-dup"];

pub fn kronecker_quiver() -> Quiver {
    Quiver::new(&["1", "2"], &[("a", 1, 0), ("b", 1, 0)])
}

pub fn d4tilde_quiver() -> Quiver {
    Quiver::new(
        &["1", "2", "3", "4", "5"],
        &[("a2", 1, 0), ("a3", 2, 0), ("a4", 3, 0), ("a5", 4, 0)],
    )
}

/// Builtin algebras over `field`.
pub fn builtin(name: &str, field: &Arc<Field>) -> Result<Arc<AlgebraTable>> {
    let name = name.strip_prefix("builtin:").unwrap_or(name);
    let (quiver, delta) = match name {
        "kronecker" | "kronecker-dup" => (kronecker_quiver(), vec![1, 1]),
        "d4tilde" | "d4tilde-dup" => (d4tilde_quiver(), vec![2, 1, 1, 1, 1]),
        _ => return Err(Error::Algebra(format!("unknown builtin algebra {name}"))),
    };
    let mut a = path_algebra(&quiver, field)?;
    a.root_data = Some(TameRootData::new(delta));
    let a = Arc::new(a);
    if name.ends_with("-dup") {
        Ok(Arc::new(duplicated(&a)?))
    } else {
        Ok(a)
    }
}
