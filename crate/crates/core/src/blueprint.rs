//! Field-independent module recipes.
//!
//! A blueprint is a constructor tree that can be instantiated over any finite
//! field: standard modules, syzygies, AR translates, radical/top/socle layers,
//! direct sums and raw integer matrices reduced mod `p`.
//!
//! Text form: `S1`, `P1'`, `I2`, `rad(P1')`, `top(X)`, `soc(X)`, `qsoc(X)`
//! (quotient by the socle), `syz(-1,S1)`, `tau(1,X)`, `S1+S1`, `0`; other
//! identifiers resolve against a list of named blueprints.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraTable;
use crate::error::{Error, Result};
use crate::homological::{syzygy, tau, tau_inv};
use crate::linalg::Mat;
use crate::module::{direct_sum_all, standard_module, Module, StandardKind};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum Recipe {
    Zero,
    Simple { vertex: String },
    Projective { vertex: String },
    Injective { vertex: String },
    Syzygy { shift: i32, of: Box<Recipe> },
    Tau { shift: i32, of: Box<Recipe> },
    Rad { of: Box<Recipe> },
    Top { of: Box<Recipe> },
    Soc { of: Box<Recipe> },
    QuotBySoc { of: Box<Recipe> },
    DirectSum { parts: Vec<Recipe> },
    /// Integer matrices for arrows, each `dim(target) x dim(source)`.
    Raw { name: String, dimvec: Vec<usize>, arrows: Vec<RawArrow> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RawArrow {
    pub arrow: String,
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Blueprint {
    pub name: String,
    pub recipe: Recipe,
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipe::Zero => write!(f, "0"),
            Recipe::Simple { vertex } => write!(f, "S{vertex}"),
            Recipe::Projective { vertex } => write!(f, "P{vertex}"),
            Recipe::Injective { vertex } => write!(f, "I{vertex}"),
            Recipe::Syzygy { shift, of } => write!(f, "syz({shift},{of})"),
            Recipe::Tau { shift, of } => write!(f, "tau({shift},{of})"),
            Recipe::Rad { of } => write!(f, "rad({of})"),
            Recipe::Top { of } => write!(f, "top({of})"),
            Recipe::Soc { of } => write!(f, "soc({of})"),
            Recipe::QuotBySoc { of } => write!(f, "qsoc({of})"),
            Recipe::DirectSum { parts } => {
                let s: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", s.join("+"))
            }
            Recipe::Raw { name, .. } => write!(f, "{name}"),
        }
    }
}

impl Blueprint {
    pub fn new(name: &str, recipe: Recipe) -> Blueprint {
        Blueprint { name: name.to_string(), recipe }
    }

    /// Parse the text form; the blueprint is named by its input.
    pub fn parse(s: &str) -> Result<Blueprint> {
        Self::parse_with(s, &[])
    }

    pub fn parse_with(s: &str, named: &[Blueprint]) -> Result<Blueprint> {
        let mut p = Parser { s: s.as_bytes(), pos: 0, named };
        let recipe = p.sum()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(Error::Parse(format!("trailing input at {} in {s:?}", p.pos)));
        }
        Ok(Blueprint { name: s.trim().to_string(), recipe })
    }

    pub fn simple(v: &str) -> Blueprint {
        Blueprint::new(&format!("S{v}"), Recipe::Simple { vertex: v.into() })
    }
    pub fn projective(v: &str) -> Blueprint {
        Blueprint::new(&format!("P{v}"), Recipe::Projective { vertex: v.into() })
    }
    pub fn injective(v: &str) -> Blueprint {
        Blueprint::new(&format!("I{v}"), Recipe::Injective { vertex: v.into() })
    }
    pub fn raw(name: &str, dimvec: &[usize], arrows: &[(&str, Vec<Vec<i64>>)]) -> Blueprint {
        Blueprint::new(
            name,
            Recipe::Raw {
                name: name.into(),
                dimvec: dimvec.to_vec(),
                arrows: arrows.iter().map(|(a, m)| RawArrow { arrow: a.to_string(), matrix: m.clone() }).collect(),
            },
        )
    }
    pub fn sum(parts: &[&Blueprint]) -> Blueprint {
        let name = parts.iter().map(|b| b.name.as_str()).collect::<Vec<_>>().join("+");
        Blueprint::new(&name, Recipe::DirectSum { parts: parts.iter().map(|b| b.recipe.clone()).collect() })
    }

    pub fn instantiate(&self, alg: &Arc<AlgebraTable>, seed: u64) -> Result<Module> {
        self.recipe.instantiate(alg, seed)
    }
}

impl Recipe {
    pub fn instantiate(&self, alg: &Arc<AlgebraTable>, seed: u64) -> Result<Module> {
        let std = |kind, v: &str| standard_module(alg, kind, v).map_err(|e| Error::Blueprint(e.to_string()));
        Ok(match self {
            Recipe::Zero => Module::zero(alg),
            Recipe::Simple { vertex } => std(StandardKind::Simple, vertex)?,
            Recipe::Projective { vertex } => std(StandardKind::Projective, vertex)?,
            Recipe::Injective { vertex } => std(StandardKind::Injective, vertex)?,
            Recipe::Syzygy { shift, of } => syzygy(&of.instantiate(alg, seed)?, *shift, seed)?,
            Recipe::Tau { shift, of } => {
                let mut m = of.instantiate(alg, seed)?;
                for _ in 0..shift.unsigned_abs() {
                    m = if *shift > 0 { tau(&m)? } else { tau_inv(&m)? };
                }
                if m.dim() == 0 {
                    return Err(Error::Blueprint(format!("{self} vanishes")));
                }
                m
            }
            Recipe::Rad { of } => of.instantiate(alg, seed)?.radical().0,
            Recipe::Top { of } => of.instantiate(alg, seed)?.top().0,
            Recipe::Soc { of } => of.instantiate(alg, seed)?.socle().0,
            Recipe::QuotBySoc { of } => {
                let m = of.instantiate(alg, seed)?;
                m.quotient(&m.socle_rows()).0
            }
            Recipe::DirectSum { parts } => {
                let mods: Vec<Module> = parts.iter().map(|p| p.instantiate(alg, seed)).collect::<Result<_>>()?;
                let nonzero: Vec<Module> = mods.into_iter().filter(|m| m.dim() > 0).collect();
                if nonzero.is_empty() {
                    Module::zero(alg)
                } else {
                    direct_sum_all(&nonzero).0
                }
            }
            Recipe::Raw { dimvec, arrows, .. } => raw_module(alg, dimvec, arrows)?,
        })
    }
}

fn raw_module(alg: &Arc<AlgebraTable>, dimvec: &[usize], arrows: &[RawArrow]) -> Result<Module> {
    let f = alg.field();
    if dimvec.len() != alg.num_vertices() {
        return Err(Error::Blueprint(format!("dimension vector needs {} entries", alg.num_vertices())));
    }
    let n: usize = dimvec.iter().sum();
    let offsets: Vec<usize> = std::iter::once(0)
        .chain(dimvec.iter().scan(0, |acc, d| {
            *acc += d;
            Some(*acc)
        }))
        .collect();
    let mut gens = Vec::new();
    for ra in arrows {
        let b = alg
            .label_index(&ra.arrow)
            .ok_or_else(|| Error::Blueprint(format!("unknown arrow {}", ra.arrow)))?;
        let (t, s) = alg
            .homogeneity(b)
            .ok_or_else(|| Error::Blueprint(format!("{} is not homogeneous", ra.arrow)))?;
        if ra.matrix.len() != dimvec[t] || ra.matrix.iter().any(|r| r.len() != dimvec[s]) {
            return Err(Error::Blueprint(format!("matrix for {} must be {}x{}", ra.arrow, dimvec[t], dimvec[s])));
        }
        let mut m = Mat::zeros(f, n, n);
        if !ra.matrix.is_empty() {
            m.paste(offsets[t], offsets[s], &Mat::from_ints(f, &ra.matrix));
        }
        gens.push((b, m));
    }
    Module::from_generator_actions(alg, dimvec, &gens).map_err(|e| Error::Blueprint(e.to_string()))
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    named: &'a [Blueprint],
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{}' at {}", c as char, self.pos)))
        }
    }

    fn sum(&mut self) -> Result<Recipe> {
        let mut parts = vec![self.term()?];
        while self.eat(b'+') {
            parts.push(self.term()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Recipe::DirectSum { parts } })
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() {
            let c = self.s[self.pos];
            if c.is_ascii_alphanumeric() || c == b'\'' || c == b'_' || c == b'#' {
                self.pos += 1;
            } else {
                break;
            }
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }

    fn int(&mut self) -> Result<i32> {
        self.skip_ws();
        let start = self.pos;
        if self.s.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("expected an integer at {start}")))
    }

    fn term(&mut self) -> Result<Recipe> {
        let id = self.ident();
        if id.is_empty() {
            return Err(Error::Parse(format!("expected a module at {}", self.pos)));
        }
        if self.eat(b'(') {
            let r = match id.as_str() {
                "syz" | "tau" => {
                    let shift = self.int()?;
                    self.expect(b',')?;
                    let of = Box::new(self.sum()?);
                    if id == "syz" {
                        Recipe::Syzygy { shift, of }
                    } else {
                        Recipe::Tau { shift, of }
                    }
                }
                "rad" => Recipe::Rad { of: Box::new(self.sum()?) },
                "top" => Recipe::Top { of: Box::new(self.sum()?) },
                "soc" => Recipe::Soc { of: Box::new(self.sum()?) },
                "qsoc" => Recipe::QuotBySoc { of: Box::new(self.sum()?) },
                other => return Err(Error::Parse(format!("unknown constructor {other}"))),
            };
            self.expect(b')')?;
            return Ok(r);
        }
        if id == "0" {
            return Ok(Recipe::Zero);
        }
        if let Some(b) = self.named.iter().find(|b| b.name == id) {
            return Ok(b.recipe.clone());
        }
        let (head, vertex) = id.split_at(1);
        if vertex.is_empty() {
            return Err(Error::Parse(format!("missing vertex in {id}")));
        }
        let vertex = vertex.to_string();
        match head {
            "S" => Ok(Recipe::Simple { vertex }),
            "P" => Ok(Recipe::Projective { vertex }),
            "I" => Ok(Recipe::Injective { vertex }),
            _ => Err(Error::Parse(format!("unknown module {id}"))),
        }
    }
}

/// Named blueprints for the builtin algebras: standard modules, layers of the
/// projective-injectives and a few regular modules with integer matrices.
pub fn catalog(algebra: &str) -> Result<Vec<Blueprint>> {
    let name = algebra.strip_prefix("builtin:").unwrap_or(algebra);
    let p = |s: &str| Blueprint::parse(s).expect("catalog entry parses");
    let kron_point = |name: &str, a: i64, b: i64, primed: bool, dup: bool| {
        let (x, y) = if primed { ("a'", "b'") } else { ("a", "b") };
        let dv = match (dup, primed) {
            (false, _) => vec![1, 1],
            (true, false) => vec![1, 1, 0, 0],
            (true, true) => vec![0, 0, 1, 1],
        };
        Blueprint::raw(name, &dv, &[(x, vec![vec![a]]), (y, vec![vec![b]])])
    };
    Ok(match name {
        "kronecker" => vec![
            p("S1"),
            p("S2"),
            p("P2"),
            p("I1"),
            kron_point("M0", 1, 0, false, false),
            kron_point("Minf", 0, 1, false, false),
        ],
        "kronecker-dup" => vec![
            p("S1"),
            p("S2"),
            p("S1'"),
            p("S2'"),
            p("P2"),
            p("rad(P1')"),
            p("P1'"),
            p("P2'"),
            p("rad(P2')"),
            p("qsoc(P1')"),
            p("qsoc(P2')"),
            kron_point("M0", 1, 0, false, true),
            kron_point("Minf", 0, 1, false, true),
            kron_point("M0'", 1, 0, true, true),
            kron_point("Minf'", 0, 1, true, true),
        ],
        "d4tilde" | "d4tilde-dup" => {
            let dup = name.ends_with("dup");
            let mut v = vec![p("S1"), p("S2"), p("S3"), p("S4"), p("S5")];
            if dup {
                for i in 1..=5 {
                    v.push(p(&format!("P{i}'")));
                }
            }
            v.push(d4_tube_module(dup));
            v
        }
        other => return Err(Error::Blueprint(format!("no catalog for {other}"))),
    })
}

/// Regular D̃4 module of dimension vector `(2,1,1,1,1)` with arm images the
/// lines `(1,0), (0,1), (1,1), (1,1)`: indecomposable over every field, of
/// length 6 and lying in a tube.
pub fn d4_tube_module(dup: bool) -> Blueprint {
    let mut dv = vec![2, 1, 1, 1, 1];
    if dup {
        dv.extend([0; 5]);
    }
    Blueprint::raw(
        "T6",
        &dv,
        &[
            ("a2", vec![vec![1], vec![0]]),
            ("a3", vec![vec![0], vec![1]]),
            ("a4", vec![vec![1], vec![1]]),
            ("a5", vec![vec![1], vec![1]]),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;
    use crate::decomp::{is_indecomposable, is_isomorphic};
    use crate::field::{Field, FieldEmbedding};

    #[test]
    fn parse_round_trip() {
        for s in ["S1", "P1'", "rad(P1')", "syz(-1,S1)", "S1+S1", "tau(2,qsoc(P2'))", "0"] {
            let b = Blueprint::parse(s).unwrap();
            assert_eq!(b.recipe.to_string(), s);
            assert_eq!(Blueprint::parse(&b.recipe.to_string()).unwrap().recipe, b.recipe);
        }
        assert!(Blueprint::parse("X1").is_err());
        assert!(Blueprint::parse("rad(S1").is_err());
        assert!(Blueprint::parse("S1+").is_err());
        let named = catalog("kronecker").unwrap();
        let b = Blueprint::parse_with("M0+S1", &named).unwrap();
        assert!(matches!(b.recipe, Recipe::DirectSum { .. }));
    }

    #[test]
    fn json_round_trip() {
        for b in catalog("kronecker-dup").unwrap() {
            let s = serde_json::to_string(&b).unwrap();
            assert_eq!(serde_json::from_str::<Blueprint>(&s).unwrap(), b);
        }
    }

    #[test]
    fn catalog_entries_are_indecomposable() {
        for name in ["kronecker", "kronecker-dup", "d4tilde-dup"] {
            for q in [2u64, 3] {
                let a = builtin(name, &Field::of_order(q).unwrap()).unwrap();
                for b in catalog(name).unwrap() {
                    let m = b.instantiate(&a, 0).unwrap();
                    assert!(is_indecomposable(&m, 0).unwrap(), "{name} {} over {q}", b.name);
                }
            }
        }
    }

    #[test]
    fn simple_over_gf5() {
        let a = builtin("kronecker", &Field::of_order(5).unwrap()).unwrap();
        assert_eq!(Blueprint::parse("S1").unwrap().instantiate(&a, 0).unwrap().dim(), 1);
    }

    #[test]
    fn raw_jordan_pair_is_regular_indecomposable() {
        let b = Blueprint::raw("J", &[2, 2], &[("a", vec![vec![1, 0], vec![0, 1]]), ("b", vec![vec![0, 1], vec![0, 0]])]);
        for q in [2u64, 3, 4, 5] {
            let a = builtin("kronecker", &Field::of_order(q).unwrap()).unwrap();
            let m = b.instantiate(&a, 0).unwrap();
            assert!(is_indecomposable(&m, 0).unwrap());
        }
    }

    #[test]
    fn tower_coherence() {
        let k = Field::of_order(2).unwrap();
        let e = Field::of_order(4).unwrap();
        let ak = builtin("kronecker-dup", &k).unwrap();
        let ae = builtin("kronecker-dup", &e).unwrap();
        let emb = FieldEmbedding::new(&k, &e).unwrap();
        for b in catalog("kronecker-dup").unwrap() {
            let direct = b.instantiate(&ae, 0).unwrap();
            let changed = b.instantiate(&ak, 0).unwrap().base_change_to(&emb, &ae).unwrap();
            assert!(is_isomorphic(&direct, &changed, 0).unwrap(), "{}", b.name);
        }
    }

    #[test]
    fn bad_raw_shapes_are_rejected() {
        let a = builtin("kronecker", &Field::of_order(2).unwrap()).unwrap();
        let b = Blueprint::raw("bad", &[1, 1], &[("a", vec![vec![1, 1]])]);
        assert!(matches!(b.instantiate(&a, 0), Err(Error::Blueprint(_))));
        let b = Blueprint::raw("bad", &[1, 1], &[("z", vec![vec![1]])]);
        assert!(b.instantiate(&a, 0).is_err());
        assert!(Blueprint::parse("tau(1,P1)").unwrap().instantiate(&a, 0).is_err());
    }
}
