use std::sync::Arc;

use proptest::prelude::*;

use hallforge::algebra::builtin;
use hallforge::blueprint::{catalog, Blueprint};
use hallforge::field::Field;
use hallforge::hall::{hall_mul_basis, middle_term_census, riedtmann_check, Registry};
use hallforge::hallpoly::{fit, lagrange, Q};
use hallforge::linalg::Mat;
use hallforge::module::Module;

const ORDERS: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

fn field() -> impl Strategy<Value = Arc<Field>> {
    prop::sample::select(ORDERS.to_vec()).prop_map(|q| Field::of_order(q).unwrap())
}

proptest! {
    #[test]
    fn field_axioms(f in field(), a in 0u32..81, b in 0u32..81, c in 0u32..81) {
        let q = f.q();
        let (a, b, c) = (a % q, b % q, c % q);
        prop_assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        prop_assert_eq!(f.pow(a, q as u64), a);
    }

    #[test]
    fn rank_nullity(f in field(), rows in 1usize..6, cols in 1usize..6, seed in any::<u64>()) {
        let q = f.q() as u64;
        let data: Vec<u32> = (0..rows * cols).map(|i| ((seed >> (i % 60)) ^ (i as u64 * 2654435761)) % q).map(|x| x as u32).collect();
        let m = Mat::from_data(&f, rows, cols, data);
        let k = m.kernel();
        // kernel basis comes back as rows
        prop_assert_eq!(m.rank() + k.rows(), cols);
        prop_assert!(m.mul(&k.transpose()).is_zero());
        let (r, _) = m.rref();
        prop_assert_eq!(r.rref().0, r);
    }

    #[test]
    fn interpolation_recovers_integer_polynomials(coeffs in prop::collection::vec(-20i128..20, 1..5)) {
        let eval = |x: i128| coeffs.iter().rev().fold(0i128, |acc, &c| acc * x + c);
        let pts: Vec<(u64, i128)> = [2u64, 3, 5, 7, 9].iter().map(|&q| (q, eval(q as i128))).collect();
        let hold = [(11u64, eval(11))];
        let p = fit(&pts, &hold, 1).unwrap();
        let mut want = coeffs.clone();
        while want.len() > 1 && *want.last().unwrap() == 0 {
            want.pop();
        }
        prop_assert_eq!(&p.coeffs, &want);
        let exact: Vec<(i128, i128)> = pts.iter().map(|&(q, g)| (q as i128, g)).collect();
        let l = lagrange(&exact);
        prop_assert!(l.iter().all(|c| c.is_integer()));
        prop_assert_eq!(l.iter().skip(want.len()).all(|c| *c == Q::from_integer(0)), true);
    }
}

fn catalog_modules(alg: &Arc<hallforge::algebra::AlgebraTable>, name: &str) -> Vec<(String, Module)> {
    catalog(name).unwrap().into_iter().map(|b| (b.name.clone(), b.instantiate(alg, 0).unwrap())).collect()
}

/// Invertible block-diagonal matrix built from unitriangular blocks and a
/// nonzero diagonal.
fn random_basis_change(m: &Module, seed: u64) -> Mat {
    let f = m.field().clone();
    let q = f.q() as u64;
    let n = m.dim();
    let mut t = Mat::zeros(&f, n, n);
    let mut s = seed | 1;
    let mut next = || {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        s
    };
    for v in 0..m.offsets().len().saturating_sub(1) {
        let r = m.block(v);
        for i in r.clone() {
            t.set(i, i, 1 + (next() % (q - 1)) as u32);
            for j in (i + 1)..r.end {
                t.set(i, j, (next() % q) as u32);
            }
        }
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn classes_are_stable_under_basis_change(i in 0usize..15, j in 0usize..15, q in prop::sample::select(vec![2u64, 3]), seed in any::<u64>()) {
        let alg = builtin("kronecker-dup", &Field::of_order(q).unwrap()).unwrap();
        let mods = catalog_modules(&alg, "kronecker-dup");
        let (i, j) = (i % mods.len(), j % mods.len());
        let m = mods[i].1.direct_sum(&mods[j].1);
        let t = random_basis_change(&m, seed);
        let mut reg = Registry::new(&alg, 0).unwrap();
        let c = reg.class_of(&m).unwrap();
        prop_assert_eq!(reg.class_of(&m.conjugate(&t).unwrap()).unwrap(), c);
        let (ci, cj) = (reg.class_of(&mods[i].1).unwrap(), reg.class_of(&mods[j].1).unwrap());
        prop_assert_eq!(reg.sum_class(ci, cj), c);
    }

    #[test]
    fn products_are_graded_and_cross_checked(i in 0usize..15, j in 0usize..15, q in prop::sample::select(vec![2u64, 3])) {
        let alg = builtin("kronecker-dup", &Field::of_order(q).unwrap()).unwrap();
        let mods = catalog_modules(&alg, "kronecker-dup");
        let (i, j) = (i % mods.len(), j % mods.len());
        prop_assume!(mods[i].1.dim() + mods[j].1.dim() <= 6);
        let mut reg = Registry::new(&alg, 0).unwrap();
        let (ci, cj) = (reg.class_of(&mods[i].1).unwrap(), reg.class_of(&mods[j].1).unwrap());
        let want: Vec<usize> = reg.class_dimvec(ci).iter().zip(reg.class_dimvec(cj)).map(|(a, b)| a + b).collect();
        let prod = hall_mul_basis(&mut reg, ci, cj).unwrap();
        for &c in prod.terms.keys() {
            prop_assert_eq!(reg.class_dimvec(c), want.clone());
        }
        let census = middle_term_census(&mut reg, ci, cj).unwrap();
        prop_assert_eq!(census.total(), q.pow(census.ext_dim as u32));
        let rep = riedtmann_check(&mut reg, ci, cj).unwrap();
        prop_assert!(rep.passed(), "{:?}", rep);
    }
}

#[test]
fn blueprint_text_round_trips() {
    for name in ["kronecker", "kronecker-dup", "d4tilde-dup"] {
        for b in catalog(name).unwrap() {
            if matches!(b.recipe, hallforge::blueprint::Recipe::Raw { .. }) {
                continue;
            }
            let again = Blueprint::parse(&b.recipe.to_string()).unwrap();
            assert_eq!(again.recipe, b.recipe);
        }
    }
}
