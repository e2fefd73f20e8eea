//! Univariate polynomials over a finite field: arithmetic, factorization of
//! squarefree polynomials, minimal polynomials of matrices.
//!
//! Coefficients are stored low degree first; the zero polynomial is empty.

use std::sync::Arc;

use rand::Rng;

use crate::field::Field;
use crate::linalg::Mat;

pub type Poly = Vec<u32>;

pub fn trim(mut p: Poly) -> Poly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

pub fn deg(p: &[u32]) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn add(f: &Field, a: &[u32], b: &[u32]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| f.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

pub fn sub(f: &Field, a: &[u32], b: &[u32]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| f.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

pub fn mul(f: &Field, a: &[u32], b: &[u32]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
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

pub fn scale(f: &Field, a: &[u32], c: u32) -> Poly {
    trim(a.iter().map(|&x| f.mul(x, c)).collect())
}

pub fn monic(f: &Field, a: &[u32]) -> Poly {
    match a.last() {
        None => vec![],
        Some(&lead) => scale(f, a, f.inv(lead)),
    }
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem(f: &Field, a: &[u32], b: &[u32]) -> (Poly, Poly) {
    let db = deg(b).expect("division by zero polynomial");
    let mut r = a.to_vec();
    if r.len() <= db {
        return (vec![], trim(r));
    }
    let inv = f.inv(b[db]);
    let mut q = vec![0; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = f.mul(r[i], inv);
        if c == 0 {
            continue;
        }
        q[i - db] = c;
        for (j, &bj) in b.iter().enumerate() {
            let k = i - db + j;
            r[k] = f.sub(r[k], f.mul(c, bj));
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

pub fn rem(f: &Field, a: &[u32], b: &[u32]) -> Poly {
    divrem(f, a, b).1
}

/// Monic gcd.
pub fn gcd(f: &Field, a: &[u32], b: &[u32]) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

pub fn mulmod(f: &Field, a: &[u32], b: &[u32], m: &[u32]) -> Poly {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod(f: &Field, base: &[u32], mut e: u64, m: &[u32]) -> Poly {
    let mut result = rem(f, &[1], m);
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(f, &result, &b, m);
        }
        b = mulmod(f, &b, &b, m);
        e >>= 1;
    }
    result
}

pub fn derivative(f: &Field, a: &[u32]) -> Poly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.from_int(i as i64)))
            .collect(),
    )
}

/// `a(x) = b(x^p)` ↦ `b^{1/p}` with coefficients mapped through the inverse Frobenius.
fn pth_root(f: &Field, a: &[u32]) -> Poly {
    let p = f.p() as usize;
    let e = (f.q() / f.p()) as u64; // c^{q/p} is the p-th root of c
    trim(a.iter().step_by(p).map(|&c| f.pow(c, e)).collect())
}

/// Product of the distinct monic irreducible factors.
pub fn radical(f: &Field, a: &[u32]) -> Poly {
    let a = monic(f, a);
    if deg(&a).unwrap_or(0) == 0 {
        return if a.is_empty() { vec![] } else { vec![1] };
    }
    let d = derivative(f, &a);
    if d.is_empty() {
        return radical(f, &pth_root(f, &a));
    }
    let g = gcd(f, &a, &d);
    let r1 = divrem(f, &a, &g).0;
    if deg(&g) == Some(0) {
        return monic(f, &r1);
    }
    let r2 = radical(f, &g);
    let c = gcd(f, &r1, &r2);
    monic(f, &divrem(f, &mul(f, &r1, &r2), &c).0)
}

/// `x^{q^k} mod m`, by `k` Frobenius steps from `x`.
fn frobenius_x(f: &Field, m: &[u32], k: usize) -> Poly {
    let mut h = rem(f, &[0, 1], m);
    for _ in 0..k {
        h = powmod(f, &h, f.q() as u64, m);
    }
    h
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// `(k, product of its irreducible factors of degree k)`.
pub fn distinct_degree(f: &Field, a: &[u32]) -> Vec<(usize, Poly)> {
    let mut out = Vec::new();
    let mut rest = monic(f, a);
    let mut h = vec![0, 1];
    let mut k = 0;
    while deg(&rest).unwrap_or(0) > 0 {
        k += 1;
        if 2 * k > deg(&rest).unwrap() {
            let d = deg(&rest).unwrap();
            out.push((d, rest));
            break;
        }
        h = powmod(f, &h, f.q() as u64, &rest);
        let g = gcd(f, &rest, &sub(f, &h, &[0, 1]));
        if deg(&g).unwrap_or(0) > 0 {
            rest = divrem(f, &rest, &g).0;
            h = rem(f, &h, &rest);
            out.push((k, g));
        }
    }
    out
}

/// Split a product of distinct irreducibles of common degree `k` into its factors.
pub fn equal_degree<R: Rng>(f: &Field, a: &[u32], k: usize, rng: &mut R) -> Vec<Poly> {
    let a = monic(f, a);
    let n = deg(&a).unwrap_or(0);
    if n <= k {
        return if n == 0 { vec![] } else { vec![a] };
    }
    let q = f.q() as u64;
    loop {
        let r: Poly = trim((0..n).map(|_| rng.gen_range(0..f.q())).collect());
        if deg(&r).unwrap_or(0) == 0 {
            continue;
        }
        let g0 = gcd(f, &a, &r);
        if deg(&g0).unwrap_or(0) > 0 && g0.len() < a.len() {
            return split_on(f, &a, &g0, k, rng);
        }
        let t = if f.p() == 2 {
            // absolute trace r + r^2 + ... + r^{2^{rk-1}}
            let steps = f.r() as usize * k;
            let mut acc = vec![];
            let mut cur = rem(f, &r, &a);
            for _ in 0..steps {
                acc = add(f, &acc, &cur);
                cur = mulmod(f, &cur, &cur, &a);
            }
            acc
        } else {
            // r^{(q^k-1)/2} = (r^{1+q+...+q^{k-1}})^{(q-1)/2}
            let mut norm = rem(f, &[1], &a);
            let mut cur = rem(f, &r, &a);
            for _ in 0..k {
                norm = mulmod(f, &norm, &cur, &a);
                cur = powmod(f, &cur, q, &a);
            }
            sub(f, &powmod(f, &norm, (q - 1) / 2, &a), &[1])
        };
        let g = gcd(f, &a, &t);
        if deg(&g).unwrap_or(0) > 0 && g.len() < a.len() {
            return split_on(f, &a, &g, k, rng);
        }
    }
}

fn split_on<R: Rng>(f: &Field, a: &[u32], g: &[u32], k: usize, rng: &mut R) -> Vec<Poly> {
    let other = divrem(f, a, g).0;
    let mut out = equal_degree(f, g, k, rng);
    out.extend(equal_degree(f, &other, k, rng));
    out
}

/// Monic irreducible factors of the radical of `a`, sorted.
pub fn prime_factors<R: Rng>(f: &Field, a: &[u32], rng: &mut R) -> Vec<Poly> {
    let rad = radical(f, a);
    let mut out = Vec::new();
    for (k, part) in distinct_degree(f, &rad) {
        out.extend(equal_degree(f, &part, k, rng));
    }
    out.sort();
    out
}

pub fn is_irreducible(f: &Field, a: &[u32]) -> bool {
    let a = monic(f, a);
    let Some(n) = deg(&a) else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    if radical(f, &a) != a {
        return false;
    }
    // Rabin: x^{q^n} = x mod a, and gcd(x^{q^{n/l}} - x, a) = 1 for primes l | n
    if frobenius_x(f, &a, n) != rem(f, &[0, 1], &a) {
        return false;
    }
    let mut m = n;
    let mut l = 2;
    while m > 1 {
        if m % l == 0 {
            let h = frobenius_x(f, &a, n / l);
            if deg(&gcd(f, &a, &sub(f, &h, &[0, 1]))).unwrap_or(0) > 0 {
                return false;
            }
            while m % l == 0 {
                m /= l;
            }
        }
        l += 1;
    }
    true
}

/// `p(g)` by Horner.
pub fn eval_mat(p: &[u32], g: &Mat) -> Mat {
    let fld = Arc::clone(g.field());
    let n = g.rows();
    let mut acc = Mat::zeros(&fld, n, n);
    for &c in p.iter().rev() {
        acc = acc.mul(g);
        for i in 0..n {
            acc.set(i, i, fld.add(acc.get(i, i), c));
        }
    }
    acc
}

/// Evaluate in `K[x]/(m)` given coefficients.
pub fn eval_mod(f: &Field, p: &[u32], x: &[u32], m: &[u32]) -> Poly {
    let mut acc: Poly = vec![];
    for &c in p.iter().rev() {
        acc = add(f, &mulmod(f, &acc, x, m), &[c]);
    }
    rem(f, &acc, m)
}

/// Minimal polynomial of a square matrix (monic).
pub fn min_poly(g: &Mat) -> Poly {
    let fld = Arc::clone(g.field());
    let f = &*fld;
    let n = g.rows();
    // incremental echelon form of flattened powers, tracking combinations
    let mut rows: Vec<(usize, Vec<u32>, Poly)> = Vec::new();
    let mut power = Mat::identity(&fld, n);
    for k in 0..=n {
        let mut v = power.data().to_vec();
        let mut comb: Poly = vec![0; k + 1];
        comb[k] = 1;
        for (piv, r, c) in &rows {
            let factor = v[*piv];
            if factor != 0 {
                let neg = f.neg(factor);
                for (a, &b) in v.iter_mut().zip(r.iter()) {
                    *a = f.add(*a, f.mul(neg, b));
                }
                for (i, &ci) in c.iter().enumerate() {
                    comb[i] = f.add(comb[i], f.mul(neg, ci));
                }
            }
        }
        match v.iter().position(|&x| x != 0) {
            None => return monic(f, &trim(comb)),
            Some(piv) => {
                let inv = f.inv(v[piv]);
                let v: Vec<u32> = v.iter().map(|&x| f.mul(x, inv)).collect();
                let comb: Poly = comb.iter().map(|&x| f.mul(x, inv)).collect();
                // keep earlier rows reduced at the new pivot
                for (_, r, c) in rows.iter_mut() {
                    let factor = r[piv];
                    if factor != 0 {
                        let neg = f.neg(factor);
                        for (a, &b) in r.iter_mut().zip(v.iter()) {
                            *a = f.add(*a, f.mul(neg, b));
                        }
                        c.resize(comb.len().max(c.len()), 0);
                        for (i, &ci) in comb.iter().enumerate() {
                            c[i] = f.add(c[i], f.mul(neg, ci));
                        }
                    }
                }
                rows.push((piv, v, comb));
            }
        }
        power = power.mul(g);
    }
    unreachable!("Cayley-Hamilton bounds the degree by n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn brute_irreducible(f: &Field, a: &[u32]) -> bool {
        // no monic factor of degree 1..=deg/2
        let n = deg(a).unwrap();
        let q = f.q();
        for d in 1..=n / 2 {
            let total = (q as u64).pow(d as u32);
            for code in 0..total {
                let mut c = code;
                let mut p: Poly = (0..d).map(|_| { let x = (c % q as u64) as u32; c /= q as u64; x }).collect();
                p.push(1);
                if rem(f, a, &p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_matches_trial_division() {
        for q in [2u64, 3, 4, 5] {
            let f = Field::of_order(q).unwrap();
            for n in 1..=4usize {
                let total = q.pow(n as u32);
                for code in 0..total {
                    let mut c = code;
                    let mut p: Poly = (0..n).map(|_| { let x = (c % q) as u32; c /= q; x }).collect();
                    p.push(1);
                    assert_eq!(is_irreducible(&f, &p), brute_irreducible(&f, &p), "q={q} p={p:?}");
                }
            }
        }
    }

    #[test]
    fn factor_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for q in [2u64, 3, 4, 7] {
            let f = Field::of_order(q).unwrap();
            // (x)(x+1)(x^2+x+c) with an irreducible quadratic
            let quad = (0..f.q())
                .map(|c| vec![c, 1, 1])
                .chain((0..f.q()).map(|c| vec![c, 0, 1]))
                .find(|p| is_irreducible(&f, p))
                .unwrap();
            let a = mul(&f, &mul(&f, &[0, 1], &[1, 1]), &quad);
            let sq = mul(&f, &a, &[0, 1]);
            let mut expect = vec![vec![0, 1], vec![1, 1], quad.clone()];
            expect.sort();
            assert_eq!(prime_factors(&f, &sq, &mut rng), expect, "q={q}");
        }
    }

    #[test]
    fn radical_of_pth_power() {
        let f = Field::of_order(3).unwrap();
        // (x+1)^3 = x^3 + 1 in char 3
        assert_eq!(radical(&f, &[1, 0, 0, 1]), vec![1, 1]);
        let f4 = Field::of_order(4).unwrap();
        // (x^2+x+1)^2 over GF(4) is x^4 + x^2 + 1
        let r = radical(&f4, &[1, 0, 1, 0, 1]);
        assert_eq!(mul(&f4, &r, &r), vec![1, 0, 1, 0, 1]);
    }

    #[test]
    fn min_poly_of_companion_and_jordan() {
        let f = Field::of_order(5).unwrap();
        let companion = Mat::from_ints(&f, &[vec![0, 0, 2], vec![1, 0, 0], vec![0, 1, 3]]);
        // x^3 - 3x^2 - 2
        assert_eq!(min_poly(&companion), vec![f.from_int(-2), 0, f.from_int(-3), 1]);
        let jordan = Mat::from_ints(&f, &[vec![2, 1, 0], vec![0, 2, 0], vec![0, 0, 2]]);
        assert_eq!(min_poly(&jordan), mul(&f, &[f.from_int(-2), 1], &[f.from_int(-2), 1]));
        assert!(eval_mat(&min_poly(&jordan), &jordan).is_zero());
    }
}
