//! Krull-Schmidt decomposition, isomorphism testing and automorphism group
//! orders.
//!
//! Splitting uses the Fitting decomposition of `π(g)` where `π` is a prime
//! factor of the minimal polynomial of an endomorphism `g` with at least two
//! distinct prime factors. A summand is declared indecomposable only with a
//! certificate: either an algebra map from its endomorphism ring onto a
//! finite field with nilpotent kernel, or exhaustive enumeration.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::Copy01;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::fpoly::{self, Poly};
use crate::linalg::{Mat, Subspace};
use crate::module::{direct_sum_all, hom_dim, HomSpace, Module};

/// `q^{dim End}` bound for exhaustive locality checks.
pub const LOCALITY_ENUM_CAP: u64 = 1 << 16;

const RANDOM_CANDIDATES: usize = 12;

#[derive(Clone, Debug)]
pub struct Summand {
    pub module: Module,
    pub multiplicity: usize,
    pub end_dim: usize,
    /// `dim End / rad End` over the ground field.
    pub residue_degree: usize,
    /// Inclusion of each copy into the decomposed module.
    pub inclusions: Vec<Mat>,
}

#[derive(Clone, Debug)]
pub struct DecompResult {
    pub summands: Vec<Summand>,
}

impl DecompResult {
    pub fn is_indecomposable(&self) -> bool {
        self.summands.len() == 1 && self.summands[0].multiplicity == 1
    }

    pub fn num_summands(&self) -> usize {
        self.summands.iter().map(|s| s.multiplicity).sum()
    }

    /// Every copy in order: class index, copy module, inclusion.
    pub fn pieces(&self) -> impl Iterator<Item = (usize, &Module, &Mat)> {
        self.summands
            .iter()
            .enumerate()
            .flat_map(|(c, s)| s.inclusions.iter().map(move |inc| (c, &s.module, inc)))
    }

    /// Isomorphism from the direct sum of the pieces (in [`DecompResult::pieces`] order)
    /// onto the decomposed module.
    pub fn witness(&self) -> Option<Mat> {
        let mods: Vec<Module> = self.pieces().map(|(_, m, _)| m.clone()).collect();
        if mods.is_empty() {
            return None;
        }
        let (sum, incs) = direct_sum_all(&mods);
        let f = sum.field();
        let total = self.pieces().next().map(|(_, _, inc)| inc.rows()).unwrap_or(0);
        let mut w = Mat::zeros(f, total, sum.dim());
        for ((_, _, inc), sinc) in self.pieces().zip(&incs) {
            // projection from the sum onto this piece is the transpose of its 0/1 inclusion
            w = w.add(&inc.mul(&sinc.transpose()));
        }
        Some(w)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Locality {
    Local { residue_degree: usize },
    /// A non-invertible, non-nilpotent endomorphism.
    Split(#[serde(skip)] Mat),
}

/// Decompose `m` into indecomposables grouped by isomorphism class.
pub fn decompose(m: &Module, seed: u64) -> Result<DecompResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = m.field().clone();
    let mut pieces: Vec<(Module, Mat, usize, usize)> = Vec::new();
    let mut stack = vec![(m.clone(), Mat::identity(&f, m.dim()))];
    while let Some((x, inc)) = stack.pop() {
        if x.dim() == 0 {
            continue;
        }
        let end = HomSpace::new(&x, &x)?;
        match locality(&x, &end, &mut rng)? {
            Locality::Local { residue_degree } => pieces.push((x, inc, end.dim(), residue_degree)),
            Locality::Split(h) => {
                let hp = h.pow(x.dim() as u64);
                let (k, kinc) = x.submodule(&hp.kernel());
                let (i, iinc) = x.submodule(&hp.transpose());
                debug_assert!(k.dim() > 0 && i.dim() > 0 && k.dim() + i.dim() == x.dim());
                stack.push((i, inc.mul(&iinc)));
                stack.push((k, inc.mul(&kinc)));
            }
        }
    }
    // deterministic order: by dimension vector, then discovery order
    pieces.sort_by(|a, b| a.0.dim_vector().cmp(&b.0.dim_vector()));
    let mut summands: Vec<Summand> = Vec::new();
    for (x, inc, end_dim, d) in pieces {
        let mut placed = false;
        for s in summands.iter_mut() {
            if s.end_dim == end_dim && iso_indecomposable(&s.module, &x)? {
                s.multiplicity += 1;
                s.inclusions.push(inc.clone());
                placed = true;
                break;
            }
        }
        if !placed {
            summands.push(Summand { module: x, multiplicity: 1, end_dim, residue_degree: d, inclusions: vec![inc] });
        }
    }
    Ok(DecompResult { summands })
}

pub fn is_indecomposable(m: &Module, seed: u64) -> Result<bool> {
    if m.dim() == 0 {
        return Ok(false);
    }
    let end = HomSpace::new(m, m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(matches!(locality(m, &end, &mut rng)?, Locality::Local { .. }))
}

/// Decide whether `End(m)` is local, or produce a splitting endomorphism.
pub fn locality<R: Rng>(m: &Module, end: &HomSpace, rng: &mut R) -> Result<Locality> {
    let f = m.field().clone();
    let e = end.dim();
    if e == 1 {
        return Ok(Locality::Local { residue_degree: 1 });
    }
    let mut candidates: Vec<Mat> = end.basis.clone();
    for _ in 0..RANDOM_CANDIDATES {
        let coeffs: Vec<u32> = (0..e).map(|_| rng.gen_range(0..f.q())).collect();
        candidates.push(end.combine(&coeffs));
    }
    let mut best: Option<(Mat, Poly)> = None;
    for g in &candidates {
        let mu = fpoly::min_poly(g);
        let factors = fpoly::prime_factors(&f, &mu, rng);
        if factors.len() >= 2 {
            return Ok(Locality::Split(fpoly::eval_mat(&factors[0], g)));
        }
        let pi = factors.into_iter().next().expect("nonzero module");
        if best.as_ref().map_or(true, |(_, p)| p.len() < pi.len()) {
            best = Some((g.clone(), pi));
        }
    }
    let (g, pi) = best.unwrap();
    if let Some(d) = residue_certificate(&f, end, &g, &pi) {
        return Ok(Locality::Local { residue_degree: d });
    }
    enumerate_locality(m, end)
}

/// Try to build `φ: End → GF(q)[x]/(π)` with `φ(b) = r(x)` where `b − r(g)` is nilpotent;
/// returns `dim End/ker φ` when `φ` is multiplicative with nilpotent kernel.
fn residue_certificate(f: &Field, end: &HomSpace, g: &Mat, pi: &Poly) -> Option<usize> {
    let d = pi.len() - 1;
    let q = f.q() as u64;
    if q.checked_pow(d as u32).map_or(true, |t| t > LOCALITY_ENUM_CAP) {
        return None;
    }
    let n = g.rows();
    // powers of g for evaluating r(g)
    let mut gp = vec![Mat::identity(g.field(), n)];
    for i in 1..d {
        gp.push(gp[i - 1].mul(g));
    }
    let polys: Vec<Poly> = all_polys(f, d);
    let mut phi: Vec<Poly> = Vec::with_capacity(end.dim());
    for b in &end.basis {
        let mut found: Option<Poly> = None;
        for r in &polys {
            let mut t = b.clone();
            for (i, &c) in r.iter().enumerate() {
                if c != 0 {
                    t.axpy(f.neg(c), &gp[i]);
                }
            }
            if t.is_nilpotent() {
                if found.is_some() {
                    return None;
                }
                found = Some(r.clone());
            }
        }
        phi.push(found?);
    }
    let apply = |coords: &[u32]| -> Poly {
        let mut acc: Poly = vec![];
        for (c, p) in coords.iter().zip(&phi) {
            if *c != 0 {
                acc = fpoly::add(f, &acc, &fpoly::scale(f, p, *c));
            }
        }
        acc
    };
    let id = Mat::identity(g.field(), n);
    if apply(&end.coords(&id)) != vec![1] {
        return None;
    }
    for (i, bi) in end.basis.iter().enumerate() {
        for (j, bj) in end.basis.iter().enumerate() {
            let lhs = apply(&end.coords(&bi.mul(bj)));
            let rhs = fpoly::mulmod(f, &phi[i], &phi[j], pi);
            if lhs != rhs {
                return None;
            }
        }
    }
    // kernel of φ as a subspace of coordinates
    let e = end.dim();
    let fld = g.field();
    let mut phimat = Mat::zeros(fld, d, e);
    for (k, p) in phi.iter().enumerate() {
        for (i, &c) in p.iter().enumerate() {
            phimat.set(i, k, c);
        }
    }
    let rank = phimat.rank();
    let ker = phimat.kernel();
    let jbasis: Vec<Mat> = (0..ker.rows()).map(|i| end.combine(ker.row(i))).collect();
    if !ideal_is_nilpotent(end, &jbasis) {
        return None;
    }
    Some(rank)
}

fn all_polys(f: &Field, d: usize) -> Vec<Poly> {
    let q = f.q() as u64;
    let total = q.pow(d as u32);
    (0..total)
        .map(|mut code| {
            let p: Poly = (0..d)
                .map(|_| {
                    let c = (code % q) as u32;
                    code /= q;
                    c
                })
                .collect();
            fpoly::trim(p)
        })
        .collect()
}

/// `J^k` shrinks to zero.
fn ideal_is_nilpotent(end: &HomSpace, j: &[Mat]) -> bool {
    let fld = end.src.field().clone();
    let e = end.dim();
    let mut cur: Vec<Mat> = j.to_vec();
    let mut last_dim = usize::MAX;
    while !cur.is_empty() {
        let rows: Vec<Vec<u32>> = cur.iter().map(|m| end.coords(m)).collect();
        let span = Subspace::from_rows(&Mat::from_rows(&fld, &rows));
        if span.dim() == 0 {
            return true;
        }
        if span.dim() >= last_dim {
            return false;
        }
        last_dim = span.dim();
        let basis: Vec<Mat> = (0..span.dim()).map(|i| end.combine(span.basis().row(i))).collect();
        cur = Vec::new();
        for a in j {
            for b in &basis {
                let p = a.mul(b);
                if !p.is_zero() {
                    cur.push(p);
                }
            }
        }
        let _ = e;
    }
    true
}

fn enumerate_locality(m: &Module, end: &HomSpace) -> Result<Locality> {
    let f = m.field();
    let q = f.q() as u64;
    let e = end.dim();
    let total = q.checked_pow(e as u32).filter(|&t| t <= LOCALITY_ENUM_CAP).ok_or_else(|| {
        Error::Undecided(format!("locality of an endomorphism ring of dimension {e} over GF({q})"))
    })?;
    let mut non_units = 0u64;
    for code in 0..total {
        let x = end.combine(&digits(code, q, e));
        if x.is_invertible() {
            continue;
        }
        if !x.is_nilpotent() {
            return Ok(Locality::Split(x));
        }
        non_units += 1;
    }
    // local: the non-units form the radical, a subspace of size q^{dim J}
    let dim_j = (0..=e).find(|&k| q.pow(k as u32) == non_units).expect("radical is a subspace");
    Ok(Locality::Local { residue_degree: e - dim_j })
}

fn digits(mut code: u64, q: u64, e: usize) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let c = (code % q) as u32;
            code /= q;
            c
        })
        .collect()
}

/// Isomorphism of two indecomposables: some composite of Hom basis elements is invertible.
pub fn iso_indecomposable(a: &Module, b: &Module) -> Result<bool> {
    if a.dim_vector() != b.dim_vector() {
        return Ok(false);
    }
    let ab = HomSpace::new(a, b)?;
    if ab.dim() == 0 {
        return Ok(false);
    }
    let ba = HomSpace::new(b, a)?;
    for g in &ba.basis {
        for f in &ab.basis {
            if g.mul(f).is_invertible() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Isomorphism test: invariants first, then matching of indecomposable summands.
pub fn is_isomorphic(m: &Module, n: &Module, seed: u64) -> Result<bool> {
    if m.dim_vector() != n.dim_vector() {
        return Ok(false);
    }
    let e = hom_dim(m, m)?;
    if hom_dim(n, n)? != e || hom_dim(m, n)? != e || hom_dim(n, m)? != e {
        return Ok(false);
    }
    let dm = decompose(m, seed)?;
    let dn = decompose(n, seed)?;
    matching(&dm, &dn)
}

fn matching(dm: &DecompResult, dn: &DecompResult) -> Result<bool> {
    if dm.summands.len() != dn.summands.len() {
        return Ok(false);
    }
    let mut used = vec![false; dn.summands.len()];
    for s in &dm.summands {
        let mut hit = false;
        for (j, t) in dn.summands.iter().enumerate() {
            if !used[j] && s.multiplicity == t.multiplicity && s.end_dim == t.end_dim && iso_indecomposable(&s.module, &t.module)? {
                used[j] = true;
                hit = true;
                break;
            }
        }
        if !hit {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn gl_order(a: usize, big_q: &BigUint) -> BigUint {
    let qa = big_q.pow(a as u32);
    (0..a).fold(BigUint::from(1u32), |acc, i| acc * (&qa - big_q.pow(i as u32)))
}

/// `|Aut m| = q^{dim rad End} · Π |GL_{a_i}(q^{d_i})|`.
pub fn aut_order(m: &Module, seed: u64) -> Result<BigUint> {
    if m.dim() == 0 {
        return Ok(BigUint::from(1u32));
    }
    let d = decompose(m, seed)?;
    let e = hom_dim(m, m)?;
    let q = BigUint::from(m.field().q());
    let semisimple: usize = d.summands.iter().map(|s| s.multiplicity * s.multiplicity * s.residue_degree).sum();
    let mut out = q.pow((e - semisimple) as u32);
    for s in &d.summands {
        out *= gl_order(s.multiplicity, &q.pow(s.residue_degree as u32));
    }
    Ok(out)
}

/// Units of `End(m)` counted one by one; `None` beyond `cap` elements.
pub fn aut_order_enumerated(m: &Module, cap: u64) -> Result<Option<u64>> {
    let end = HomSpace::new(m, m)?;
    let q = m.field().q() as u64;
    let Some(total) = q.checked_pow(end.dim() as u32).filter(|&t| t <= cap) else {
        return Ok(None);
    };
    let mut units = 0;
    for code in 0..total {
        if end.combine(&digits(code, q, end.dim())).is_invertible() {
            units += 1;
        }
    }
    Ok(Some(units))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Part {
    A0,
    A01,
    A1,
}

/// Which copy of the base algebra the composition factors of an indecomposable come from.
pub fn part_of(m: &Module, seed: u64) -> Result<Part> {
    if !is_indecomposable(m, seed)? {
        return Err(Error::Precondition("part_of needs an indecomposable module".into()));
    }
    let copies = m.algebra().copies();
    let sup = m.support();
    let zero = sup.iter().any(|&v| copies[v] == Copy01::Zero);
    let one = sup.iter().any(|&v| copies[v] == Copy01::One);
    Ok(match (zero, one) {
        (true, false) => Part::A0,
        (false, true) => Part::A1,
        _ => Part::A01,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;
    use crate::module::{standard_module, StandardKind};
    use std::sync::Arc;

    fn alg(name: &str, q: u64) -> Arc<crate::algebra::AlgebraTable> {
        builtin(name, &Field::of_order(q).unwrap()).unwrap()
    }

    /// Kronecker module with `a = x`, `b = y` on one-dimensional spaces.
    fn kron11(a: &Arc<crate::algebra::AlgebraTable>, x: u32, y: u32) -> Module {
        let f = a.field();
        let ia = a.label_index("a").unwrap();
        let ib = a.label_index("b").unwrap();
        let mut ma = Mat::zeros(f, 2, 2);
        ma.set(0, 1, x);
        let mut mb = Mat::zeros(f, 2, 2);
        mb.set(0, 1, y);
        Module::from_generator_actions(a, &[1, 1], &[(ia, ma), (ib, mb)]).unwrap()
    }

    #[test]
    fn simple_sum_splits() {
        let a = alg("kronecker", 3);
        let s1 = standard_module(&a, StandardKind::Simple, "1").unwrap();
        let s2 = standard_module(&a, StandardKind::Simple, "2").unwrap();
        let d = decompose(&s1.direct_sum(&s2), 0).unwrap();
        assert_eq!(d.summands.len(), 2);
        let d = decompose(&s1.direct_sum(&s1), 0).unwrap();
        assert_eq!(d.summands.len(), 1);
        assert_eq!(d.summands[0].multiplicity, 2);
        let w = d.witness().unwrap();
        assert!(w.is_invertible());
    }

    #[test]
    fn projective_injective_is_local() {
        let a = alg("kronecker-dup", 2);
        let p = standard_module(&a, StandardKind::Projective, "1'").unwrap();
        let d = decompose(&p, 7).unwrap();
        assert!(d.is_indecomposable());
        let end = HomSpace::new(&p, &p).unwrap();
        assert!(matches!(enumerate_locality(&p, &end).unwrap(), Locality::Local { residue_degree: 1 }));
    }

    #[test]
    fn kronecker_points_are_distinct() {
        let a = alg("kronecker", 2);
        let m = kron11(&a, 1, 0);
        let n = kron11(&a, 0, 1);
        assert!(!is_isomorphic(&m, &n, 0).unwrap());
        assert!(is_isomorphic(&m, &m, 0).unwrap());
        // brute force over Hom(m, n)
        let h = HomSpace::new(&m, &n).unwrap();
        let q = 2u64;
        for code in 0..q.pow(h.dim() as u32) {
            assert!(!h.combine(&digits(code, q, h.dim())).is_invertible());
        }
    }

    #[test]
    fn aut_orders() {
        for q in [2u64, 3, 4] {
            let a = alg("kronecker", q);
            let s = standard_module(&a, StandardKind::Simple, "1").unwrap();
            assert_eq!(aut_order(&s, 0).unwrap(), BigUint::from(q - 1));
            let ss = s.direct_sum(&s);
            assert_eq!(aut_order(&ss, 0).unwrap(), BigUint::from((q * q - 1) * (q * q - q)));
            assert_eq!(aut_order(&Module::zero(&a), 0).unwrap(), BigUint::from(1u32));
            let p2 = standard_module(&a, StandardKind::Projective, "2").unwrap();
            let m = p2.direct_sum(&s).direct_sum(&s);
            let e = aut_order_enumerated(&m, 1 << 20).unwrap().unwrap();
            assert_eq!(aut_order(&m, 1).unwrap(), BigUint::from(e));
        }
    }

    #[test]
    fn residue_degree_two_over_gf2() {
        // Kronecker module (2,2) with a = I, b = companion of x^2+x+1
        let a = alg("kronecker", 2);
        let f = a.field();
        let ia = a.label_index("a").unwrap();
        let ib = a.label_index("b").unwrap();
        let mut ma = Mat::zeros(f, 4, 4);
        ma.set(0, 2, 1);
        ma.set(1, 3, 1);
        let mut mb = Mat::zeros(f, 4, 4);
        mb.set(0, 3, 1);
        mb.set(1, 2, 1);
        mb.set(1, 3, 1);
        let m = Module::from_generator_actions(&a, &[2, 2], &[(ia, ma), (ib, mb)]).unwrap();
        let d = decompose(&m, 0).unwrap();
        assert!(d.is_indecomposable());
        assert_eq!(d.summands[0].residue_degree, 2);
        assert_eq!(aut_order(&m, 0).unwrap(), BigUint::from(3u32));
        // over GF(4) it splits into two non-isomorphic points
        let f4 = Field::of_order(4).unwrap();
        let emb = crate::field::FieldEmbedding::new(f, &f4).unwrap();
        let m4 = m.base_change(&emb).unwrap();
        let d4 = decompose(&m4, 0).unwrap();
        assert_eq!(d4.summands.len(), 2);
        assert!(d4.summands.iter().all(|s| s.multiplicity == 1 && s.module.dim_vector() == vec![1, 1]));
    }

    #[test]
    fn seeds_agree() {
        let a = alg("kronecker-dup", 3);
        let p = standard_module(&a, StandardKind::Projective, "2'").unwrap();
        let s = standard_module(&a, StandardKind::Simple, "1").unwrap();
        let m = p.direct_sum(&s).direct_sum(&p);
        let d1 = decompose(&m, 1).unwrap();
        let d2 = decompose(&m, 99).unwrap();
        assert!(matching(&d1, &d2).unwrap());
        assert_eq!(d1.num_summands(), 3);
    }

    #[test]
    fn parts() {
        let a = alg("kronecker-dup", 2);
        let s1 = standard_module(&a, StandardKind::Simple, "1").unwrap();
        let s2p = standard_module(&a, StandardKind::Simple, "2'").unwrap();
        let p1p = standard_module(&a, StandardKind::Projective, "1'").unwrap();
        assert_eq!(part_of(&s1, 0).unwrap(), Part::A0);
        assert_eq!(part_of(&s2p, 0).unwrap(), Part::A1);
        assert_eq!(part_of(&p1p, 0).unwrap(), Part::A01);
        assert!(part_of(&s1.direct_sum(&s2p), 0).is_err());
    }
}
