//! Projective covers, injective envelopes, syzygies, Ext dimensions and the
//! Auslander-Reiten translate.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::AlgebraTable;
use crate::decomp::{decompose, is_isomorphic, part_of, Part};
use crate::error::{Error, Result};
use crate::linalg::{Mat, Subspace};
use crate::module::{
    direct_sum_all, hom_dim, injective_basis, projective_basis, standard_module_at, HomSpace, ModMap, Module,
    StandardKind,
};

/// `P(m) -> m` together with the vertex of each indecomposable summand of `P(m)`.
#[derive(Clone, Debug)]
pub struct Cover {
    pub map: ModMap,
    pub vertices: Vec<usize>,
    /// Inclusion of each summand `P_x` into the cover.
    pub inclusions: Vec<Mat>,
}

/// `m -> E(m)`.
#[derive(Clone, Debug)]
pub struct Envelope {
    pub map: ModMap,
    pub vertices: Vec<usize>,
    pub inclusions: Vec<Mat>,
}

fn sum_or_zero(alg: &Arc<AlgebraTable>, mods: &[Module]) -> (Module, Vec<Mat>) {
    if mods.is_empty() {
        (Module::zero(alg), vec![])
    } else {
        direct_sum_all(mods)
    }
}

/// Minimal projective cover: lifts of a basis of `top m`.
pub fn projective_cover(m: &Module) -> Cover {
    let alg = Arc::clone(m.algebra());
    let f = m.field();
    let rad = Subspace::from_rows(&m.radical_rows());
    let lifts = rad.complement_coords();
    let vertices: Vec<usize> = lifts.iter().map(|&c| m.vertex_of(c)).collect();
    let ps: Vec<Module> =
        vertices.iter().map(|&x| standard_module_at(&alg, StandardKind::Projective, x).unwrap()).collect();
    let (p, incs) = sum_or_zero(&alg, &ps);
    let mut map = Mat::zeros(f, m.dim(), p.dim());
    for ((&c, &x), inc) in lifts.iter().zip(&vertices).zip(&incs) {
        let basis = projective_basis(&alg, x);
        let mut local = Mat::zeros(f, m.dim(), basis.len());
        for (j, &b) in basis.iter().enumerate() {
            let col = m.action(b).col_vec(c);
            for (i, v) in col.into_iter().enumerate() {
                local.set(i, j, v);
            }
        }
        map = map.add(&local.mul(&inc.transpose()));
    }
    Cover { map: ModMap { src: p, dst: m.clone(), matrix: map }, vertices, inclusions: incs }
}

/// Minimal injective envelope: coordinate functionals dual to a socle basis.
pub fn injective_envelope(m: &Module) -> Envelope {
    let alg = Arc::clone(m.algebra());
    let f = m.field();
    let (soc, soc_inc) = m.socle();
    let mut vertices = Vec::new();
    // per vertex: functionals on the block dual to the socle vectors there
    let mut functionals: Vec<(usize, Vec<u32>)> = Vec::new();
    for x in 0..alg.num_vertices() {
        let blk = m.block(x);
        let sb = soc.block(x);
        if sb.is_empty() {
            continue;
        }
        let local: Vec<Vec<u32>> = sb.clone().map(|j| soc_inc.col_vec(j)[blk.clone()].to_vec()).collect();
        let s = Subspace::from_rows(&Mat::from_rows(f, &local));
        let mut basis = local.clone();
        for c in s.complement_coords() {
            let mut e = vec![0; blk.len()];
            e[c] = 1;
            basis.push(e);
        }
        let inv = Mat::from_rows(f, &basis).transpose().inverse().expect("completed basis");
        for k in 0..local.len() {
            let mut phi = vec![0; m.dim()];
            phi[blk.clone()].copy_from_slice(inv.row(k));
            functionals.push((x, phi));
            vertices.push(x);
        }
    }
    let is: Vec<Module> =
        vertices.iter().map(|&x| standard_module_at(&alg, StandardKind::Injective, x).unwrap()).collect();
    let (e, incs) = sum_or_zero(&alg, &is);
    let mut map = Mat::zeros(f, e.dim(), m.dim());
    for ((x, phi), inc) in functionals.iter().zip(&incs) {
        let basis = injective_basis(&alg, *x);
        let mut local = Mat::zeros(f, basis.len(), m.dim());
        let phim = Mat::from_rows(f, &[phi.clone()]);
        for (i, &p) in basis.iter().enumerate() {
            // coefficient at p* is φ(p·m)
            let row = phim.mul(m.action(p));
            for j in 0..m.dim() {
                local.set(i, j, row.get(0, j));
            }
        }
        map = map.add(&inc.mul(&local));
    }
    Envelope { map: ModMap { src: m.clone(), dst: e, matrix: map }, vertices, inclusions: incs }
}

/// Indecomposable `m` is projective iff it has a simple top `S_x` and `dim m = dim P_x`.
pub fn is_projective_indecomposable(m: &Module) -> bool {
    let rad = Subspace::from_rows(&m.radical_rows());
    if m.dim() - rad.dim() != 1 {
        return false;
    }
    let x = m.vertex_of(rad.complement_coords()[0]);
    projective_basis(m.algebra(), x).len() == m.dim()
}

pub fn is_injective_indecomposable(m: &Module) -> bool {
    let soc = m.socle().0;
    if soc.dim() != 1 {
        return false;
    }
    let x = soc.support()[0];
    injective_basis(m.algebra(), x).len() == m.dim()
}

/// Rebuild `m` without indecomposable summands satisfying `drop`.
pub fn strip_summands(m: &Module, seed: u64, drop: impl Fn(&Module) -> bool) -> Result<Module> {
    if m.dim() == 0 {
        return Ok(m.clone());
    }
    let d = decompose(m, seed)?;
    let keep: Vec<Module> = d
        .pieces()
        .filter(|(_, x, _)| !drop(x))
        .map(|(_, x, _)| x.clone())
        .collect();
    if keep.len() == d.num_summands() {
        return Ok(m.clone());
    }
    Ok(sum_or_zero(m.algebra(), &keep).0)
}

/// `Ω m` with its inclusion into the cover (projective summands kept).
pub fn syzygy_raw(m: &Module) -> (Module, Mat, Cover) {
    let cover = projective_cover(m);
    let (k, inc) = crate::module::kernel(&cover.map.src, &cover.map.matrix);
    (k, inc, cover)
}

/// `Ω^{-1} m` with its projection from the envelope (injective summands kept).
pub fn cosyzygy_raw(m: &Module) -> (Module, Mat, Envelope) {
    let env = injective_envelope(m);
    let (c, proj) = crate::module::cokernel(&env.map.dst, &env.map.matrix);
    (c, proj, env)
}

/// `Ω^i m` for `i > 0`, `Ω^{-i}` cosyzygies for `i < 0`, stripping projective
/// (resp. injective) summands after each step.
pub fn syzygy(m: &Module, i: i32, seed: u64) -> Result<Module> {
    if !(-4..=4).contains(&i) {
        return Err(Error::Precondition(format!("syzygy index {i} outside [-4, 4]")));
    }
    let mut cur = m.clone();
    for _ in 0..i.unsigned_abs() {
        cur = if i > 0 {
            strip_summands(&syzygy_raw(&cur).0, seed, is_projective_indecomposable)?
        } else {
            strip_summands(&cosyzygy_raw(&cur).0, seed, is_injective_indecomposable)?
        };
    }
    Ok(cur)
}

/// Ext¹ presented as `Hom(Ω n, l)` modulo restrictions of `Hom(P_0, l)`.
pub struct ExtSpace {
    pub dim: usize,
    pub omega: Module,
    /// `Ω n -> P_0`.
    pub omega_inc: Mat,
    pub cover: Cover,
    pub target: Module,
    /// Coset representatives in `Hom(Ω n, l)`, one per basis vector of Ext¹.
    pub reps: Vec<Mat>,
}

pub fn ext1_space(n: &Module, l: &Module) -> Result<ExtSpace> {
    let (omega, inc, cover) = syzygy_raw(n);
    let hom_ol = HomSpace::new(&omega, l)?;
    let hom_pl = HomSpace::new(&cover.map.src, l)?;
    let f = n.field();
    let restricted: Vec<Vec<u32>> = hom_pl.basis.iter().map(|h| hom_ol.coords(&h.mul(&inc))).collect();
    let r = if restricted.is_empty() || hom_ol.dim() == 0 {
        Subspace::zero(f, hom_ol.dim())
    } else {
        Subspace::from_rows(&Mat::from_rows(f, &restricted))
    };
    let reps: Vec<Mat> = r
        .complement_coords()
        .into_iter()
        .map(|c| {
            let mut e = vec![0; hom_ol.dim()];
            e[c] = 1;
            hom_ol.combine(&e)
        })
        .collect();
    Ok(ExtSpace { dim: reps.len(), omega, omega_inc: inc, cover, target: l.clone(), reps })
}

/// `dim Ext^i(n, l)` for `0 ≤ i ≤ 4` by dimension shifting along minimal projective resolutions.
pub fn ext_dim(i: usize, n: &Module, l: &Module) -> Result<usize> {
    if i > 4 {
        return Err(Error::Precondition(format!("Ext degree {i} outside [0, 4]")));
    }
    if i == 0 {
        return hom_dim(n, l);
    }
    let mut cur = n.clone();
    for _ in 1..i {
        cur = syzygy_raw(&cur).0;
        if cur.dim() == 0 {
            return Ok(0);
        }
    }
    let (omega, _, cover) = syzygy_raw(&cur);
    let d = hom_dim(&omega, l)? + hom_dim(&cur, l)?;
    Ok(d - hom_dim(&cover.map.src, l)?)
}

/// Exceptional: `Ext^i(m, m) = 0` for `i = 1, 2, 3`; a nonzero `Ext^4` is reported
/// as an inconsistency since the global dimension is at most 3.
pub fn is_exceptional(m: &Module, seed: u64) -> Result<bool> {
    if !crate::decomp::is_indecomposable(m, seed)? {
        return Err(Error::Precondition("is_exceptional needs an indecomposable module".into()));
    }
    let mut exceptional = true;
    for i in 1..=3 {
        if ext_dim(i, m, m)? != 0 {
            exceptional = false;
            break;
        }
    }
    let e4 = ext_dim(4, m, m)?;
    if e4 != 0 {
        return Err(Error::Inconsistent(format!("Ext^4(M, M) has dimension {e4}")));
    }
    Ok(exceptional)
}

/// Matrix of `ν(a): I_s -> I_t`, `φ ↦ φ(a·)`, for `a ∈ e_s A e_t` given by coordinates.
fn nakayama_map(alg: &AlgebraTable, a: &[u32], s: usize, t: usize) -> Mat {
    let f = alg.field();
    let src = injective_basis(alg, s);
    let dst = injective_basis(alg, t);
    let mut m = Mat::zeros(f, dst.len(), src.len());
    for (j, &p) in src.iter().enumerate() {
        for (i, &w) in dst.iter().enumerate() {
            // coefficient of p in a·w
            let mut c = 0;
            for (b, &ab) in a.iter().enumerate() {
                if ab == 0 {
                    continue;
                }
                for &(k, v) in alg.product(b, w) {
                    if k == p {
                        c = f.add(c, f.mul(ab, v));
                    }
                }
            }
            m.set(i, j, c);
        }
    }
    m
}

/// Matrix of `P_s -> P_t`, `v ↦ v·a`, for `a ∈ e_s A e_t`.
fn right_mult_map(alg: &AlgebraTable, a: &[u32], s: usize, t: usize) -> Mat {
    let f = alg.field();
    let src = projective_basis(alg, s);
    let dst = projective_basis(alg, t);
    let mut m = Mat::zeros(f, dst.len(), src.len());
    for (j, &p) in src.iter().enumerate() {
        let v = alg.mul_vec(&alg.basis_vec(p), a);
        for (i, &w) in dst.iter().enumerate() {
            m.set(i, j, v[w]);
        }
    }
    m
}

/// Auslander-Reiten translate `τ m = ker(ν f)` for a minimal presentation `P_1 -f-> P_0 -> m`.
pub fn tau(m: &Module) -> Result<Module> {
    let alg = Arc::clone(m.algebra());
    let f = m.field();
    let (omega, inc, cover0) = syzygy_raw(m);
    if omega.dim() == 0 {
        return Ok(Module::zero(&alg));
    }
    let cover1 = projective_cover(&omega);
    let pres = inc.mul(&cover1.map.matrix); // P_1 -> P_0
    let inj1: Vec<Module> = cover1
        .vertices
        .iter()
        .map(|&y| standard_module_at(&alg, StandardKind::Injective, y).unwrap())
        .collect();
    let inj0: Vec<Module> = cover0
        .vertices
        .iter()
        .map(|&x| standard_module_at(&alg, StandardKind::Injective, x).unwrap())
        .collect();
    let (n1, n1inc) = sum_or_zero(&alg, &inj1);
    let (n0, n0inc) = sum_or_zero(&alg, &inj0);
    let mut nu = Mat::zeros(f, n0.dim(), n1.dim());
    for (k, &y) in cover1.vertices.iter().enumerate() {
        // image of the idempotent generator e_y of the k-th summand
        let pb = projective_basis(&alg, y);
        let pos = pb.iter().position(|&b| b == alg.idempotent_basis(y)).unwrap();
        let gen = cover1.inclusions[k].col_vec(pos);
        let img = pres.apply(&gen);
        for (j, &x) in cover0.vertices.iter().enumerate() {
            let comp = cover0.inclusions[j].transpose().apply(&img);
            let mut a = vec![0; alg.dim()];
            for (c, &b) in comp.iter().zip(projective_basis(&alg, x).iter()) {
                a[b] = *c;
            }
            if a.iter().all(|&c| c == 0) {
                continue;
            }
            let block = nakayama_map(&alg, &a, y, x);
            nu = nu.add(&n0inc[j].mul(&block.mul(&n1inc[k].transpose())));
        }
    }
    Ok(crate::module::kernel(&n1, &nu).0)
}

/// Inverse translate `τ⁻ m = coker(ν⁻ g)` for a minimal copresentation `m -> I_0 -g-> I_1`.
pub fn tau_inv(m: &Module) -> Result<Module> {
    let alg = Arc::clone(m.algebra());
    let f = m.field();
    let (cos, proj, env0) = cosyzygy_raw(m);
    if cos.dim() == 0 {
        return Ok(Module::zero(&alg));
    }
    let env1 = injective_envelope(&cos);
    let copres = env1.map.matrix.mul(&proj); // I_0 -> I_1
    let proj0: Vec<Module> = env0
        .vertices
        .iter()
        .map(|&x| standard_module_at(&alg, StandardKind::Projective, x).unwrap())
        .collect();
    let proj1: Vec<Module> = env1
        .vertices
        .iter()
        .map(|&y| standard_module_at(&alg, StandardKind::Projective, y).unwrap())
        .collect();
    let (p0, p0inc) = sum_or_zero(&alg, &proj0);
    let (p1, p1inc) = sum_or_zero(&alg, &proj1);
    let mut map = Mat::zeros(f, p1.dim(), p0.dim());
    for (j, &s) in env0.vertices.iter().enumerate() {
        for (k, &t) in env1.vertices.iter().enumerate() {
            let block = env1.inclusions[k].transpose().mul(&copres.mul(&env0.inclusions[j]));
            if block.is_zero() {
                continue;
            }
            let a = recover_element(&alg, &block, s, t)?;
            let pm = right_mult_map(&alg, &a, s, t);
            map = map.add(&p1inc[k].mul(&pm.mul(&p0inc[j].transpose())));
        }
    }
    Ok(crate::module::cokernel(&p1, &map).0)
}

/// The `a ∈ e_s A e_t` with `ν(a) = block`.
fn recover_element(alg: &AlgebraTable, block: &Mat, s: usize, t: usize) -> Result<Vec<u32>> {
    let f = alg.field();
    let cands: Vec<usize> = (0..alg.dim()).filter(|&b| alg.homogeneity(b) == Some((s, t))).collect();
    let cols: Vec<Vec<u32>> = cands
        .iter()
        .map(|&b| nakayama_map(alg, &alg.basis_vec(b), s, t).data().to_vec())
        .collect();
    if cols.is_empty() {
        return Err(Error::Inconsistent("injective map without a matching algebra element".into()));
    }
    let sys = Mat::from_rows(f, &cols).transpose();
    let x = sys
        .solve(block.data())
        .ok_or_else(|| Error::Inconsistent("injective map is not induced by an algebra element".into()))?;
    let mut a = vec![0; alg.dim()];
    for (c, &b) in x.iter().zip(&cands) {
        a[b] = *c;
    }
    Ok(a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Component {
    P0,
    R0,
    X0,
    R01,
    X1,
    R1,
    I1,
    Unknown,
}

/// Best-effort location in the Auslander-Reiten quiver from at most `cap`
/// steps of `τ` and `τ⁻`: a return to `m` means a tube, reaching a
/// projective (resp. injective) means the corresponding boundary part.
pub fn classify_component(m: &Module, cap: usize, seed: u64) -> Result<Component> {
    let part = part_of(m, seed)?;
    let proj = is_projective_indecomposable(m);
    let inj = is_injective_indecomposable(m);
    let mut reaches_proj = proj;
    let mut reaches_inj = inj;
    let mut periodic = false;
    let mut cur = m.clone();
    for _ in 0..cap {
        if is_projective_indecomposable(&cur) {
            reaches_proj = true;
            break;
        }
        cur = tau(&cur)?;
        if cur.dim() == 0 {
            reaches_proj = true;
            break;
        }
        if is_isomorphic(&cur, m, seed)? {
            periodic = true;
            break;
        }
    }
    if !periodic {
        let mut cur = m.clone();
        for _ in 0..cap {
            if is_injective_indecomposable(&cur) {
                reaches_inj = true;
                break;
            }
            cur = tau_inv(&cur)?;
            if cur.dim() == 0 {
                reaches_inj = true;
                break;
            }
        }
    }
    Ok(match (periodic, part) {
        (true, Part::A0) => Component::R0,
        (true, Part::A01) => Component::R01,
        (true, Part::A1) => Component::R1,
        (false, Part::A0) if reaches_proj => Component::P0,
        (false, Part::A0) if reaches_inj => Component::X0,
        (false, Part::A1) if reaches_inj && !reaches_proj => Component::I1,
        (false, Part::A1) if reaches_proj => Component::X1,
        (false, Part::A01) if reaches_proj => Component::X0,
        (false, Part::A01) if reaches_inj => Component::X1,
        _ => Component::Unknown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;
    use crate::decomp::is_indecomposable;
    use crate::field::Field;
    use crate::module::{is_hom, standard_module};

    fn alg(name: &str, q: u64) -> Arc<AlgebraTable> {
        builtin(name, &Field::of_order(q).unwrap()).unwrap()
    }

    fn kron11(a: &Arc<AlgebraTable>, x: u32, y: u32) -> Module {
        let f = a.field();
        let (ia, ib) = (a.label_index("a").unwrap(), a.label_index("b").unwrap());
        let mut ma = Mat::zeros(f, 2, 2);
        ma.set(0, 1, x);
        let mut mb = Mat::zeros(f, 2, 2);
        mb.set(0, 1, y);
        Module::from_generator_actions(a, &[1, 1], &[(ia, ma), (ib, mb)]).unwrap()
    }

    #[test]
    fn covers_and_envelopes_are_maps() {
        let a = alg("kronecker-dup", 3);
        let s2 = standard_module(&a, StandardKind::Simple, "2").unwrap();
        let c = projective_cover(&s2);
        assert!(is_hom(&c.map.src, &c.map.dst, &c.map.matrix).unwrap());
        assert!(c.map.is_surjective());
        let e = injective_envelope(&s2);
        assert!(is_hom(&e.map.src, &e.map.dst, &e.map.matrix).unwrap());
        assert!(e.map.is_injective());
    }

    #[test]
    fn cover_of_projective_is_identity_sized() {
        let a = alg("kronecker-dup", 2);
        for x in 0..a.num_vertices() {
            let p = standard_module_at(&a, StandardKind::Projective, x).unwrap();
            let c = projective_cover(&p);
            assert_eq!(c.map.src.dim(), p.dim());
            assert_eq!(syzygy(&p, 1, 0).unwrap().dim(), 0);
        }
    }

    #[test]
    fn kronecker_simple_cover_kernel() {
        let a = alg("kronecker", 2);
        let s2 = standard_module(&a, StandardKind::Simple, "2").unwrap();
        assert_eq!(syzygy_raw(&s2).0.dim_vector(), vec![2, 0]);
    }

    #[test]
    fn envelope_of_simple_in_dup() {
        let a = alg("kronecker-dup", 2);
        let s1 = standard_module(&a, StandardKind::Simple, "1").unwrap();
        let env = injective_envelope(&s1);
        assert_eq!(env.vertices, vec![0]);
        assert_eq!(env.map.dst.loewy_string(), "1'/22/1");
        let c = syzygy(&s1, -1, 0).unwrap();
        assert_eq!(c.dim(), 3);
        assert!(is_indecomposable(&c, 0).unwrap());
        assert_eq!(part_of(&c, 0).unwrap(), Part::A01);
    }

    #[test]
    fn ext_dims_kronecker() {
        let a = alg("kronecker", 3);
        let s1 = standard_module(&a, StandardKind::Simple, "1").unwrap();
        let s2 = standard_module(&a, StandardKind::Simple, "2").unwrap();
        assert_eq!(ext_dim(1, &s2, &s1).unwrap(), 2);
        assert_eq!(ext_dim(1, &s1, &s2).unwrap(), 0);
        assert_eq!(ext1_space(&s2, &s1).unwrap().reps.len(), 2);
        let p2 = standard_module(&a, StandardKind::Projective, "2").unwrap();
        for i in 1..=4 {
            assert_eq!(ext_dim(i, &p2, &s1).unwrap(), 0);
        }
    }

    #[test]
    fn tau_on_kronecker() {
        let a = alg("kronecker", 2);
        let p1 = standard_module(&a, StandardKind::Projective, "1").unwrap();
        assert_eq!(tau(&p1).unwrap().dim(), 0);
        let t = tau_inv(&p1).unwrap();
        assert_eq!(t.dim_vector(), vec![3, 2]);
        assert!(is_indecomposable(&t, 0).unwrap());
        assert!(ext_dim(1, &t, &p1).unwrap() > 0);
        let back = tau(&t).unwrap();
        assert!(is_isomorphic(&back, &p1, 0).unwrap());
        // regular modules of dimension (1,1) are τ-periodic with period one
        let m = kron11(&a, 1, 1);
        assert!(is_isomorphic(&tau(&m).unwrap(), &m, 0).unwrap());
    }

    #[test]
    fn tau_round_trip_dup() {
        let a = alg("kronecker-dup", 2);
        let s1 = standard_module(&a, StandardKind::Simple, "1").unwrap();
        let c = syzygy(&s1, -1, 0).unwrap();
        let t = tau(&c).unwrap();
        assert!(is_indecomposable(&t, 0).unwrap());
        assert!(is_isomorphic(&tau_inv(&t).unwrap(), &c, 0).unwrap());
    }

    #[test]
    fn exceptional() {
        let a = alg("kronecker", 2);
        let s1 = standard_module(&a, StandardKind::Simple, "1").unwrap();
        assert!(is_exceptional(&s1, 0).unwrap());
        assert!(!is_exceptional(&kron11(&a, 1, 0), 0).unwrap());
        let d = alg("kronecker-dup", 2);
        for x in 2..4 {
            let p = standard_module_at(&d, StandardKind::Projective, x).unwrap();
            assert!(is_exceptional(&p, 0).unwrap());
        }
    }

    #[test]
    fn components() {
        let a = alg("kronecker-dup", 2);
        let s1 = standard_module(&a, StandardKind::Simple, "1").unwrap();
        assert_eq!(classify_component(&s1, 4, 0).unwrap(), Component::P0);
        let f = a.field();
        let (ia, ib) = (a.label_index("a").unwrap(), a.label_index("b").unwrap());
        let mut ma = Mat::zeros(f, 2, 2);
        ma.set(0, 1, 1);
        let m = Module::from_generator_actions(&a, &[1, 1, 0, 0], &[(ia, ma), (ib, Mat::zeros(f, 2, 2))]).unwrap();
        assert_eq!(classify_component(&m, 4, 0).unwrap(), Component::R0);
        assert_eq!(classify_component(&m, 0, 0).unwrap(), Component::Unknown);
    }
}
