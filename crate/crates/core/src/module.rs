//! Left modules over an [`AlgebraTable`], stored by one action matrix per
//! algebra basis element.
//!
//! Every module is kept in a vertex-adapted basis: the basis is split into
//! consecutive blocks, one per vertex, and each idempotent acts as the
//! projection onto its block. Module maps computed here are block diagonal.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraTable;
use crate::error::{Error, Result};
use crate::field::{Field, FieldEmbedding};
use crate::linalg::{Mat, MatJson, Subspace};

#[derive(Clone)]
pub struct Module {
    alg: Arc<AlgebraTable>,
    actions: Vec<Mat>,
    /// Block offsets, one more entry than there are vertices.
    offsets: Vec<usize>,
}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Module(dimvec {:?}, loewy {})", self.dim_vector(), self.loewy_string())
    }
}

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.alg, &other.alg) && self.offsets == other.offsets && self.actions == other.actions
    }
}

pub fn same_algebra(a: &Arc<AlgebraTable>, b: &Arc<AlgebraTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StandardKind {
    Simple,
    Projective,
    Injective,
}

/// A module homomorphism `src -> dst` as a `dst.dim × src.dim` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ModMap {
    pub src: Module,
    pub dst: Module,
    pub matrix: Mat,
}

impl ModMap {
    pub fn new(src: Module, dst: Module, matrix: Mat) -> Result<ModMap> {
        if !is_hom(&src, &dst, &matrix)? {
            return Err(Error::Module("matrix does not intertwine the actions".into()));
        }
        Ok(ModMap { src, dst, matrix })
    }

    pub fn is_injective(&self) -> bool {
        self.matrix.rank() == self.src.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.matrix.rank() == self.dst.dim()
    }
}

fn require_homogeneous(alg: &AlgebraTable) -> Result<()> {
    if !alg.is_homogeneous() {
        return Err(Error::Algebra("modules need a basis of vertex-homogeneous elements".into()));
    }
    Ok(())
}

impl Module {
    /// Validate the actions and move to a vertex-adapted basis.
    pub fn new(alg: &Arc<AlgebraTable>, actions: Vec<Mat>) -> Result<Module> {
        require_homogeneous(alg)?;
        let n = actions.first().map(|m| m.rows()).unwrap_or(0);
        if actions.len() != alg.dim() {
            return Err(Error::Module(format!("expected {} action matrices, got {}", alg.dim(), actions.len())));
        }
        if actions.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::Dimension("action matrices must be square of equal size".into()));
        }
        if actions.iter().any(|m| **m.field() != **alg.field()) {
            return Err(Error::Field("action matrices over the wrong field".into()));
        }
        check_morphism(alg, &actions)?;
        adapt(alg, actions)
    }

    /// Trusted constructor for already adapted data.
    pub(crate) fn from_adapted(alg: &Arc<AlgebraTable>, actions: Vec<Mat>, offsets: Vec<usize>) -> Module {
        debug_assert_eq!(offsets.len(), alg.num_vertices() + 1);
        Module { alg: Arc::clone(alg), actions, offsets }
    }

    pub fn zero(alg: &Arc<AlgebraTable>) -> Module {
        let f = alg.field();
        Module {
            alg: Arc::clone(alg),
            actions: vec![Mat::zeros(f, 0, 0); alg.dim()],
            offsets: vec![0; alg.num_vertices() + 1],
        }
    }

    /// Build a module from a dimension vector and the actions of the radical
    /// generators (matrices in the adapted basis); all other actions are
    /// derived from words in the generators and the result is validated.
    pub fn from_generator_actions(
        alg: &Arc<AlgebraTable>,
        dimvec: &[usize],
        gens: &[(usize, Mat)],
    ) -> Result<Module> {
        require_homogeneous(alg)?;
        let nv = alg.num_vertices();
        if dimvec.len() != nv {
            return Err(Error::Dimension(format!("dimension vector needs {nv} entries")));
        }
        let f = alg.field();
        let mut offsets = vec![0];
        for &d in dimvec {
            offsets.push(offsets.last().unwrap() + d);
        }
        let n = offsets[nv];
        let mut gen_mats: Vec<Option<Mat>> = vec![None; alg.dim()];
        for (b, m) in gens {
            if !alg.rad_generators().contains(b) {
                return Err(Error::Module(format!("{} is not a generator", alg.labels()[*b])));
            }
            if m.rows() != n || m.cols() != n {
                return Err(Error::Dimension(format!("generator {} needs a {n}x{n} matrix", alg.labels()[*b])));
            }
            gen_mats[*b] = Some(m.clone());
        }
        for (v, (_, e)) in alg.idempotents().iter().enumerate() {
            let mut m = Mat::zeros(f, n, n);
            for i in offsets[v]..offsets[v + 1] {
                m.set(i, i, 1);
            }
            gen_mats[*e] = Some(m);
        }
        for &g in alg.rad_generators() {
            if gen_mats[g].is_none() {
                gen_mats[g] = Some(Mat::zeros(f, n, n));
            }
        }
        let words = generator_words(alg);
        // action of each word, then solve for each basis element
        let word_mats: Vec<Mat> = words
            .iter()
            .map(|(_, w)| {
                let mut m = Mat::identity(f, n);
                for &g in w.iter().rev() {
                    m = gen_mats[g].as_ref().unwrap().mul(&m);
                }
                m
            })
            .collect();
        let word_vecs = Mat::from_rows(f, &words.iter().map(|(v, _)| v.clone()).collect::<Vec<_>>());
        let mut actions = Vec::with_capacity(alg.dim());
        for b in 0..alg.dim() {
            let coeffs = word_vecs
                .transpose()
                .solve(&alg.basis_vec(b))
                .ok_or_else(|| Error::Algebra("generators do not span the algebra".into()))?;
            let mut m = Mat::zeros(f, n, n);
            for (c, wm) in coeffs.iter().zip(&word_mats) {
                if *c != 0 {
                    m.axpy(*c, wm);
                }
            }
            actions.push(m);
        }
        check_morphism(alg, &actions)?;
        Ok(Module::from_adapted(alg, actions, offsets))
    }

    pub fn algebra(&self) -> &Arc<AlgebraTable> {
        &self.alg
    }
    pub fn field(&self) -> &Arc<Field> {
        self.alg.field()
    }
    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }
    /// Composition length; every simple of the algebras used here is one-dimensional.
    pub fn length(&self) -> usize {
        self.dim()
    }
    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }
    pub fn action(&self, b: usize) -> &Mat {
        &self.actions[b]
    }
    pub fn actions(&self) -> &[Mat] {
        &self.actions
    }
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }
    pub fn block(&self, v: usize) -> std::ops::Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }
    pub fn vertex_of(&self, i: usize) -> usize {
        (0..self.alg.num_vertices()).find(|&v| self.block(v).contains(&i)).expect("index in range")
    }
    pub fn dim_vector(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }
    pub fn support(&self) -> Vec<usize> {
        self.dim_vector().iter().enumerate().filter(|(_, &d)| d > 0).map(|(v, _)| v).collect()
    }

    fn rad_gen_actions(&self) -> impl Iterator<Item = &Mat> {
        self.alg.rad_generators().iter().map(move |&g| &self.actions[g])
    }

    /// Whether the row span of `rows` is stable under every action.
    pub fn is_stable(&self, rows: &Mat) -> bool {
        let w = Subspace::from_rows(rows);
        self.actions.iter().all(|a| {
            (0..w.dim()).all(|i| w.contains_vec(&a.apply(w.basis().row(i))))
        })
    }

    /// Submodule spanned by the rows of `rows` (assumed stable) with its inclusion.
    pub fn submodule(&self, rows: &Mat) -> (Module, Mat) {
        let f = self.field();
        let nv = self.alg.num_vertices();
        let mut basis_rows: Vec<Vec<u32>> = Vec::new();
        let mut offsets = vec![0];
        for v in 0..nv {
            let blk = self.block(v);
            let local = rows.select_cols(&blk.clone().collect::<Vec<_>>());
            let (r, piv) = local.rref();
            for i in 0..piv.len() {
                let mut full = vec![0; self.dim()];
                full[blk.start..blk.end].copy_from_slice(r.row(i));
                basis_rows.push(full);
            }
            offsets.push(basis_rows.len());
        }
        let k = basis_rows.len();
        let w = if k > 0 { Mat::from_rows(f, &basis_rows) } else { Mat::zeros(f, 0, self.dim()) };
        let (wr, pivots) = w.rref();
        debug_assert_eq!(wr, w);
        let inc = w.transpose();
        let mut sel = Mat::zeros(f, k, self.dim());
        for (i, &p) in pivots.iter().enumerate() {
            sel.set(i, p, 1);
        }
        let actions = self.actions.iter().map(|a| sel.mul(&a.mul(&inc))).collect();
        (Module::from_adapted(&self.alg, actions, offsets), inc)
    }

    /// Quotient by the row span of `rows` (assumed stable) with its projection.
    pub fn quotient(&self, rows: &Mat) -> (Module, Mat) {
        let f = self.field();
        let (sub, inc) = self.submodule(rows);
        let w = if sub.dim() > 0 { Subspace::from_rows(&inc.transpose()) } else { Subspace::zero(f, self.dim()) };
        let q = w.quotient_map();
        let free = w.complement_coords();
        let mut s = Mat::zeros(f, self.dim(), free.len());
        for (j, &c) in free.iter().enumerate() {
            s.set(c, j, 1);
        }
        let nv = self.alg.num_vertices();
        let mut offsets = vec![0];
        for v in 0..nv {
            let cnt = free.iter().filter(|&&c| self.block(v).contains(&c)).count();
            offsets.push(offsets.last().unwrap() + cnt);
        }
        let actions = self.actions.iter().map(|a| q.mul(&a.mul(&s))).collect();
        (Module::from_adapted(&self.alg, actions, offsets), q)
    }

    pub fn direct_sum(&self, other: &Module) -> Module {
        direct_sum_all(&[self.clone(), other.clone()]).0
    }

    /// `M^k`.
    pub fn power(&self, k: usize) -> Module {
        direct_sum_all(&vec![self.clone(); k]).0
    }

    /// Radical `rad(A)·M` as rows.
    pub fn radical_rows(&self) -> Mat {
        let f = self.field();
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for a in self.rad_gen_actions() {
            for j in 0..self.dim() {
                let c = a.col_vec(j);
                if c.iter().any(|&x| x != 0) {
                    rows.push(c);
                }
            }
        }
        if rows.is_empty() {
            Mat::zeros(f, 0, self.dim())
        } else {
            Subspace::from_rows(&Mat::from_rows(f, &rows)).basis().clone()
        }
    }

    /// Socle `{m : rad(A) m = 0}` as rows.
    pub fn socle_rows(&self) -> Mat {
        let f = self.field();
        let mut stacked = Mat::zeros(f, 0, self.dim());
        for a in self.rad_gen_actions() {
            stacked = stacked.vstack(a);
        }
        stacked.kernel()
    }

    pub fn radical(&self) -> (Module, Mat) {
        self.submodule(&self.radical_rows())
    }

    pub fn socle(&self) -> (Module, Mat) {
        self.submodule(&self.socle_rows())
    }

    pub fn top(&self) -> (Module, Mat) {
        self.quotient(&self.radical_rows())
    }

    /// Dimension vectors of the radical layers, top first.
    pub fn loewy_layers(&self) -> Vec<Vec<usize>> {
        let f = self.field();
        let mut layers = Vec::new();
        let mut cur = Mat::identity(f, self.dim());
        let mut cur_dims = self.dim_vector();
        while cur.rows() > 0 {
            let mut rows: Vec<Vec<u32>> = Vec::new();
            for a in self.rad_gen_actions() {
                for i in 0..cur.rows() {
                    let v = a.apply(cur.row(i));
                    if v.iter().any(|&x| x != 0) {
                        rows.push(v);
                    }
                }
            }
            let next = if rows.is_empty() {
                Mat::zeros(f, 0, self.dim())
            } else {
                Subspace::from_rows(&Mat::from_rows(f, &rows)).basis().clone()
            };
            let next_dims = self.block_dims(&next);
            layers.push(cur_dims.iter().zip(&next_dims).map(|(a, b)| a - b).collect());
            cur = next;
            cur_dims = next_dims;
        }
        layers
    }

    fn block_dims(&self, rows: &Mat) -> Vec<usize> {
        let (_, piv) = rows.rref();
        (0..self.alg.num_vertices())
            .map(|v| piv.iter().filter(|&&p| self.block(v).contains(&p)).count())
            .collect()
    }

    /// Loewy series like `1'/22/1`.
    pub fn loewy_string(&self) -> String {
        if self.dim() == 0 {
            return "0".into();
        }
        let labels = self.alg.vertex_labels();
        self.loewy_layers()
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .enumerate()
                    .map(|(v, &m)| labels[v].repeat(m))
                    .collect::<String>()
            })
            .collect::<Vec<_>>()
            .join("/")
    }

    /// Entrywise image of the actions under a field embedding.
    pub fn base_change(&self, emb: &FieldEmbedding) -> Result<Module> {
        let alg = Arc::new(self.alg.base_change(emb)?);
        self.base_change_to(emb, &alg)
    }

    /// As [`Module::base_change`], onto a given extended algebra.
    pub fn base_change_to(&self, emb: &FieldEmbedding, alg: &Arc<AlgebraTable>) -> Result<Module> {
        if **emb.src() != **self.field() || **emb.dst() != **alg.field() {
            return Err(Error::Field("embedding does not match module and target algebra".into()));
        }
        let actions = self.actions.iter().map(|a| map_mat(emb, a)).collect();
        Ok(Module::from_adapted(alg, actions, self.offsets.clone()))
    }

    /// Apply a block-diagonal change of basis `t` (new basis = columns of `t`).
    pub fn conjugate(&self, t: &Mat) -> Result<Module> {
        let inv = t.inverse().ok_or_else(|| Error::Module("basis change is singular".into()))?;
        let actions = self.actions.iter().map(|a| inv.mul(&a.mul(t))).collect();
        Ok(Module::from_adapted(&self.alg, actions, self.offsets.clone()))
    }

    pub fn to_json(&self, algebra_ref: &str) -> ModuleJson {
        ModuleJson {
            algebra: algebra_ref.to_string(),
            dim: self.dim(),
            actions: self.actions.iter().map(|a| a.to_json()).collect(),
        }
    }

    pub fn from_json(alg: &Arc<AlgebraTable>, json: &ModuleJson) -> Result<Module> {
        let f = alg.field();
        let actions = json.actions.iter().map(|m| Mat::from_json(f, m)).collect::<Result<Vec<_>>>()?;
        if actions.iter().any(|m| m.rows() != json.dim) {
            return Err(Error::Dimension("action size differs from dim".into()));
        }
        Module::new(alg, actions)
    }
}

pub fn map_mat(emb: &FieldEmbedding, a: &Mat) -> Mat {
    let data = a.data().iter().map(|&x| emb.map(x)).collect();
    Mat::from_data(emb.dst(), a.rows(), a.cols(), data)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub algebra: String,
    pub dim: usize,
    pub actions: Vec<MatJson>,
}

/// Unit acts as identity and products act as products of actions.
fn check_morphism(alg: &AlgebraTable, actions: &[Mat]) -> Result<()> {
    let f = alg.field();
    let n = actions.first().map(|m| m.rows()).unwrap_or(0);
    let mut unit = Mat::zeros(f, n, n);
    for (b, &c) in alg.unit().iter().enumerate() {
        if c != 0 {
            unit.axpy(c, &actions[b]);
        }
    }
    if unit != Mat::identity(f, n) {
        return Err(Error::Module("unit does not act as the identity".into()));
    }
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            let lhs = actions[i].mul(&actions[j]);
            let mut rhs = Mat::zeros(f, n, n);
            for &(k, c) in alg.product(i, j) {
                rhs.axpy(c, &actions[k]);
            }
            if lhs != rhs {
                return Err(Error::Module(format!(
                    "action of {}·{} is not the product of actions",
                    alg.labels()[i],
                    alg.labels()[j]
                )));
            }
        }
    }
    Ok(())
}

fn adapt(alg: &Arc<AlgebraTable>, actions: Vec<Mat>) -> Result<Module> {
    let f = alg.field();
    let n = actions.first().map(|m| m.rows()).unwrap_or(0);
    let mut cols: Vec<Vec<u32>> = Vec::new();
    let mut offsets = vec![0];
    for (_, e) in alg.idempotents() {
        let img = Subspace::from_rows(&actions[*e].transpose());
        for i in 0..img.dim() {
            cols.push(img.basis().row_vec(i));
        }
        offsets.push(cols.len());
    }
    if cols.len() != n {
        return Err(Error::Module("idempotent images do not add up to the module".into()));
    }
    if n == 0 {
        return Ok(Module::from_adapted(alg, actions, offsets));
    }
    let t = Mat::from_rows(f, &cols).transpose();
    let inv = t.inverse().ok_or_else(|| Error::Module("idempotent images are not independent".into()))?;
    let actions = actions.iter().map(|a| inv.mul(&a.mul(&t))).collect();
    Ok(Module::from_adapted(alg, actions, offsets))
}

/// Words in the generators whose values span the algebra: `(value, word)`;
/// a word `[g1, g2, ...]` stands for the product `g1·g2·...`.
pub fn generator_words(alg: &AlgebraTable) -> Vec<(Vec<u32>, Vec<usize>)> {
    let f = alg.field();
    let mut out: Vec<(Vec<u32>, Vec<usize>)> = Vec::new();
    let mut span = Subspace::zero(f, alg.dim());
    let mut frontier: Vec<(Vec<u32>, Vec<usize>)> = alg
        .idempotents()
        .iter()
        .map(|(_, e)| (alg.basis_vec(*e), vec![*e]))
        .collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (v, w) in frontier {
            if span.contains_vec(&v) {
                continue;
            }
            span = span.sum(&Subspace::from_rows(&Mat::from_rows(f, &[v.clone()]))).expect("same ambient");
            for &g in alg.rad_generators() {
                let p = alg.mul_vec(&alg.basis_vec(g), &v);
                if p.iter().any(|&c| c != 0) {
                    let mut w2 = vec![g];
                    w2.extend_from_slice(&w);
                    next.push((p, w2));
                }
            }
            out.push((v, w));
        }
        frontier = next;
    }
    out
}

/// Direct sum with the inclusion of each summand.
pub fn direct_sum_all(mods: &[Module]) -> (Module, Vec<Mat>) {
    assert!(!mods.is_empty(), "direct sum of nothing needs an algebra");
    let alg = Arc::clone(mods[0].algebra());
    let f = alg.field();
    let nv = alg.num_vertices();
    // position of (summand, local index) in the sum
    let mut pos: Vec<Vec<usize>> = mods.iter().map(|m| vec![0; m.dim()]).collect();
    let mut offsets = vec![0];
    let mut next = 0;
    for v in 0..nv {
        for (s, m) in mods.iter().enumerate() {
            for i in m.block(v) {
                pos[s][i] = next;
                next += 1;
            }
        }
        offsets.push(next);
    }
    let n = next;
    let mut actions = vec![Mat::zeros(f, n, n); alg.dim()];
    for (s, m) in mods.iter().enumerate() {
        for (b, a) in m.actions().iter().enumerate() {
            for i in 0..m.dim() {
                for j in 0..m.dim() {
                    let x = a.get(i, j);
                    if x != 0 {
                        actions[b].set(pos[s][i], pos[s][j], x);
                    }
                }
            }
        }
    }
    let incs = mods
        .iter()
        .enumerate()
        .map(|(s, m)| {
            let mut inc = Mat::zeros(f, n, m.dim());
            for i in 0..m.dim() {
                inc.set(pos[s][i], i, 1);
            }
            inc
        })
        .collect();
    (Module::from_adapted(&alg, actions, offsets), incs)
}

/// Whether `f` (a `n.dim × m.dim` matrix) is a module map `m -> n`.
pub fn is_hom(m: &Module, n: &Module, f: &Mat) -> Result<bool> {
    if !same_algebra(m.algebra(), n.algebra()) {
        return Err(Error::Module("modules over different algebras".into()));
    }
    if f.rows() != n.dim() || f.cols() != m.dim() {
        return Err(Error::Dimension("map has the wrong shape".into()));
    }
    Ok((0..m.algebra().dim()).all(|b| f.mul(m.action(b)) == n.action(b).mul(f)))
}

/// Variable layout of block-diagonal maps `m -> n`.
struct HomLayout {
    /// per vertex: offset into the variable vector
    var_off: Vec<usize>,
    nvars: usize,
}

impl HomLayout {
    fn new(m: &Module, n: &Module) -> HomLayout {
        let mut var_off = vec![0];
        for v in 0..m.algebra().num_vertices() {
            let sz = m.block(v).len() * n.block(v).len();
            var_off.push(var_off.last().unwrap() + sz);
        }
        let nvars = *var_off.last().unwrap();
        HomLayout { var_off, nvars }
    }

    fn var(&self, m: &Module, v: usize, i: usize, k: usize) -> usize {
        self.var_off[v] + i * m.block(v).len() + k
    }

    fn to_mat(&self, m: &Module, n: &Module, x: &[u32]) -> Mat {
        let mut f = Mat::zeros(m.field(), n.dim(), m.dim());
        for v in 0..m.algebra().num_vertices() {
            for (i, gi) in n.block(v).enumerate() {
                for (k, gk) in m.block(v).enumerate() {
                    f.set(gi, gk, x[self.var(m, v, i, k)]);
                }
            }
        }
        f
    }

    fn from_mat(&self, m: &Module, n: &Module, f: &Mat) -> Vec<u32> {
        let mut x = vec![0; self.nvars];
        for v in 0..m.algebra().num_vertices() {
            for (i, gi) in n.block(v).enumerate() {
                for (k, gk) in m.block(v).enumerate() {
                    x[self.var(m, v, i, k)] = f.get(gi, gk);
                }
            }
        }
        x
    }
}

/// The intertwining system in the block variables.
fn hom_system(m: &Module, n: &Module, layout: &HomLayout) -> Mat {
    let alg = m.algebra();
    let fld = m.field();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for &g in alg.rad_generators() {
        let (t, s) = alg.homogeneity(g).expect("homogeneous algebra");
        let mg = m.action(g);
        let ng = n.action(g);
        // f_t Mg[t,s] - Ng[t,s] f_s = 0, entry (i in N_t, j in M_s)
        for (i, gi) in n.block(t).enumerate() {
            for (j, gj) in m.block(s).enumerate() {
                let mut row = vec![0u32; layout.nvars];
                for (k, gk) in m.block(t).enumerate() {
                    let c = mg.get(gk, gj);
                    if c != 0 {
                        let idx = layout.var(m, t, i, k);
                        row[idx] = fld.add(row[idx], c);
                    }
                }
                for (l, gl) in n.block(s).enumerate() {
                    let c = ng.get(gi, gl);
                    if c != 0 {
                        let idx = layout.var(m, s, l, j);
                        row[idx] = fld.sub(row[idx], c);
                    }
                }
                if row.iter().any(|&x| x != 0) {
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        Mat::zeros(fld, 0, layout.nvars)
    } else {
        Mat::from_rows(fld, &rows)
    }
}

/// A basis of `Hom(m, n)`, each map a `n.dim × m.dim` matrix.
pub fn hom_space(m: &Module, n: &Module) -> Result<Vec<Mat>> {
    Ok(HomSpace::new(m, n)?.basis)
}

pub fn hom_dim(m: &Module, n: &Module) -> Result<usize> {
    if !same_algebra(m.algebra(), n.algebra()) {
        return Err(Error::Module("modules over different algebras".into()));
    }
    let layout = HomLayout::new(m, n);
    if layout.nvars == 0 {
        return Ok(0);
    }
    Ok(layout.nvars - hom_system(m, n, &layout).rank())
}

/// `Hom(m, n)` with coordinates: its basis is in reduced echelon form over
/// the block variables, so coordinates are read off at pivot variables.
pub struct HomSpace {
    pub src: Module,
    pub dst: Module,
    pub basis: Vec<Mat>,
    layout: HomLayout,
    pivots: Vec<usize>,
}

impl HomSpace {
    pub fn new(m: &Module, n: &Module) -> Result<HomSpace> {
        if !same_algebra(m.algebra(), n.algebra()) {
            return Err(Error::Module("modules over different algebras".into()));
        }
        let layout = HomLayout::new(m, n);
        let sys = hom_system(m, n, &layout);
        let ker = Subspace::from_rows(&sys.kernel());
        let basis = (0..ker.dim()).map(|i| layout.to_mat(m, n, ker.basis().row(i))).collect();
        Ok(HomSpace { src: m.clone(), dst: n.clone(), basis, layout, pivots: ker.pivots().to_vec() })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a map known to lie in the space.
    pub fn coords(&self, f: &Mat) -> Vec<u32> {
        let x = self.layout.from_mat(&self.src, &self.dst, f);
        self.pivots.iter().map(|&p| x[p]).collect()
    }

    pub fn combine(&self, coeffs: &[u32]) -> Mat {
        let fld = self.src.field();
        let mut out = Mat::zeros(fld, self.dst.dim(), self.src.dim());
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if *c != 0 {
                out.axpy(*c, b);
            }
        }
        out
    }
}

/// `S_x`, `P_x` or `I_x` at the vertex labelled `vertex`.
pub fn standard_module(alg: &Arc<AlgebraTable>, kind: StandardKind, vertex: &str) -> Result<Module> {
    let x = alg
        .vertex_index(vertex)
        .ok_or_else(|| Error::Module(format!("unknown vertex {vertex}")))?;
    standard_module_at(alg, kind, x)
}

pub fn standard_module_at(alg: &Arc<AlgebraTable>, kind: StandardKind, x: usize) -> Result<Module> {
    require_homogeneous(alg)?;
    match kind {
        StandardKind::Projective => Ok(projective(alg, x)),
        StandardKind::Injective => Ok(injective(alg, x)),
        StandardKind::Simple => Ok(projective(alg, x).top().0),
    }
}

/// `A e_x`: basis elements `b` with `b e_x = b`, acted on by left multiplication.
fn projective(alg: &Arc<AlgebraTable>, x: usize) -> Module {
    let f = alg.field();
    let basis = projective_basis(alg, x);
    from_basis_action(alg, &basis, |b, p| alg.product(b, p).clone(), |p| alg.homogeneity(p).unwrap().0, f)
}

/// `D(e_x A)`: dual basis `p*` of `p` with `e_x p = p`; `(b·p*)(w) = p*(w b)`.
fn injective(alg: &Arc<AlgebraTable>, x: usize) -> Module {
    let f = alg.field();
    let basis = injective_basis(alg, x);
    let coeff_of = |w: usize, b: usize, p: usize| -> u32 {
        alg.product(w, b).iter().filter(|(k, _)| *k == p).map(|&(_, c)| c).fold(0, |a, c| f.add(a, c))
    };
    // b·p* = Σ_w c_{w,b}^p w*
    from_basis_action(
        alg,
        &basis,
        |b, p| basis.iter().map(|&w| (w, coeff_of(w, b, p))).filter(|&(_, c)| c != 0).collect(),
        |p| alg.homogeneity(p).unwrap().1,
        f,
    )
}

/// Algebra basis elements indexing the basis of `P_x`, in module basis order.
pub fn projective_basis(alg: &AlgebraTable, x: usize) -> Vec<usize> {
    let mut b: Vec<usize> = (0..alg.dim()).filter(|&b| alg.homogeneity(b).unwrap().1 == x).collect();
    b.sort_by_key(|&p| (alg.homogeneity(p).unwrap().0, p));
    b
}

/// Algebra basis elements `p` whose duals `p*` form the basis of `I_x`, in module basis order.
pub fn injective_basis(alg: &AlgebraTable, x: usize) -> Vec<usize> {
    let mut b: Vec<usize> = (0..alg.dim()).filter(|&b| alg.homogeneity(b).unwrap().0 == x).collect();
    b.sort_by_key(|&p| (alg.homogeneity(p).unwrap().1, p));
    b
}

fn from_basis_action(
    alg: &Arc<AlgebraTable>,
    basis: &[usize],
    act: impl Fn(usize, usize) -> Vec<(usize, u32)>,
    vertex: impl Fn(usize) -> usize,
    f: &Arc<Field>,
) -> Module {
    let nv = alg.num_vertices();
    let mut order: Vec<usize> = basis.to_vec();
    order.sort_by_key(|&p| (vertex(p), p));
    let n = order.len();
    let pos = |k: usize| order.iter().position(|&p| p == k);
    let mut actions = Vec::with_capacity(alg.dim());
    for b in 0..alg.dim() {
        let mut m = Mat::zeros(f, n, n);
        for (j, &p) in order.iter().enumerate() {
            for (k, c) in act(b, p) {
                let i = pos(k).expect("closed under the action");
                m.set(i, j, f.add(m.get(i, j), c));
            }
        }
        actions.push(m);
    }
    let mut offsets = vec![0];
    for v in 0..nv {
        offsets.push(offsets.last().unwrap() + order.iter().filter(|&&p| vertex(p) == v).count());
    }
    Module::from_adapted(alg, actions, offsets)
}

/// All indecomposable projectives, in vertex order.
pub fn projectives(alg: &Arc<AlgebraTable>) -> Vec<Module> {
    (0..alg.num_vertices()).map(|x| projective(alg, x)).collect()
}

pub fn injectives(alg: &Arc<AlgebraTable>) -> Vec<Module> {
    (0..alg.num_vertices()).map(|x| injective(alg, x)).collect()
}

pub fn simples(alg: &Arc<AlgebraTable>) -> Vec<Module> {
    (0..alg.num_vertices()).map(|x| projective(alg, x).top().0).collect()
}

/// Cokernel of `f: m -> n` with its projection.
pub fn cokernel(n: &Module, f: &Mat) -> (Module, Mat) {
    let rows = f.transpose();
    n.quotient(&rows)
}

/// Kernel of `f: m -> n` with its inclusion.
pub fn kernel(m: &Module, f: &Mat) -> (Module, Mat) {
    m.submodule(&f.kernel())
}

/// Image of `f: m -> n` as a submodule of `n`.
pub fn image(n: &Module, f: &Mat) -> (Module, Mat) {
    n.submodule(&f.transpose())
}
