//! Random CDGAs and a dense brute-force cohomology oracle, shared by the
//! property suites and the acceptance run.

#![allow(dead_code)]

use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::Rng;
use sullivan::algebra::{Cdga, Derivation, FreeCga, Generator, Monomial, Polynomial};
use sullivan::cohomology::cohomology;
use sullivan::fixtures::fixture;
use sullivan::formality::derivation_slice;
use sullivan::models::{bigraded_model, complete_seeded};
use sullivan::Q;

fn small(rng: &mut impl Rng) -> Q {
    Q::from_integer(rng.gen_range(-3i64..=3).into())
}

/// A random combination of degree-`n` monomials in the generators `allowed`.
pub fn random_element(
    rng: &mut impl Rng,
    alg: &FreeCga,
    n: u32,
    allowed: impl Fn(usize) -> bool,
) -> Polynomial<Q> {
    let mut p = Polynomial::zero();
    for m in alg.basis_where(n, 0..=u32::MAX, allowed).unwrap() {
        if rng.gen_bool(0.6) {
            p.add_term(m, small(rng));
        }
    }
    p
}

/// At most three generators of degree 2 to 6. Each `d(x)` is a random
/// polynomial in earlier generators; a few draws are tried and `d(x) = 0`
/// is kept when none squares to zero.
pub fn random_cdga(rng: &mut impl Rng, cap: u32) -> Cdga<Q> {
    let n = rng.gen_range(1..=3);
    let mut degrees: Vec<u32> = (0..n).map(|_| rng.gen_range(2..=6)).collect();
    degrees.sort_unstable();
    let gens = degrees
        .iter()
        .enumerate()
        .map(|(k, &d)| Generator::new(format!("x{k}"), d))
        .collect();
    let alg = FreeCga::new(gens, cap).unwrap();
    let mut d = Derivation::new(1, 0);
    for (g, &deg) in degrees.iter().enumerate() {
        for _ in 0..3 {
            let v = random_element(rng, &alg, deg + 1, |h| h < g);
            let trial = d.clone().with(g, v);
            let c = Cdga::new(alg.clone(), trial.clone());
            if c.d(&c.d_gen(g)).is_zero() {
                d = trial;
                break;
            }
        }
    }
    Cdga::new(alg, d)
}

/// Monomials of degree `n`, enumerated from exponent vectors.
fn monomials(alg: &FreeCga, n: u32) -> Vec<Monomial> {
    fn go(alg: &FreeCga, g: usize, left: u32, acc: Polynomial<Q>, out: &mut Vec<Monomial>) {
        if g == alg.len() {
            if left == 0 {
                out.push(acc.iter().next().unwrap().0.clone());
            }
            return;
        }
        let deg = alg.generator(g).degree;
        let max = if alg.is_odd(g) { 1 } else { left / deg };
        for e in 0..=max.min(left / deg) {
            let t = alg.mul(&acc, &alg.pow(&Polynomial::generator(g), e));
            go(alg, g + 1, left - e * deg, t, out);
        }
    }
    let mut out = Vec::new();
    go(alg, 0, n, Polynomial::one(), &mut out);
    out
}

/// Rank by Gaussian elimination on dense rows.
pub fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = &row[c] / &pivot[c];
                for (x, y) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *x -= y * &f;
                }
            }
        }
        r += 1;
    }
    r
}

/// Rank of `d : A^n → A^{n+1}`.
fn d_rank(c: &Cdga<Q>, n: u32) -> usize {
    let source = monomials(&c.algebra, n);
    let target = monomials(&c.algebra, n + 1);
    let index: HashMap<&Monomial, usize> = target.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let rows = source
        .iter()
        .map(|m| {
            let mut row = vec![Q::zero(); target.len()];
            for (t, x) in c.d(&Polynomial::term(m.clone(), Q::one())).iter() {
                row[index[t]] = x.clone();
            }
            row
        })
        .collect();
    rank(rows)
}

/// `dim H^n` as `dim A^n − rank d^n − rank d^{n−1}`.
pub fn dense_betti(c: &Cdga<Q>, n: u32) -> usize {
    let below = if n == 0 { 0 } else { d_rank(c, n - 1) };
    monomials(&c.algebra, n).len() - d_rank(c, n) - below
}

/// Compares the engine with the dense oracle in every degree through `cap`.
pub fn cohomology_agrees(c: &Cdga<Q>, cap: u32) -> Result<(), String> {
    for n in 0..=cap {
        let engine = cohomology(c, n).map_err(|e| e.to_string())?.0;
        let oracle = dense_betti(c, n);
        if engine != oracle {
            return Err(format!("H^{n}: engine {engine}, oracle {oracle}"));
        }
    }
    Ok(())
}

/// Graded commutativity of a random pair and the Leibniz rule for a random
/// derivation, in a random free algebra.
pub fn koszul_and_leibniz(rng: &mut impl Rng) -> Result<(), String> {
    let n = rng.gen_range(2..=4);
    let gens = (0..n)
        .map(|k| Generator::new(format!("g{k}"), rng.gen_range(2..=5)))
        .collect();
    let alg = FreeCga::new(gens, 20).unwrap();
    let (i, j) = (rng.gen_range(2..=7), rng.gen_range(2..=7));
    let p = random_element(rng, &alg, i, |_| true);
    let q = random_element(rng, &alg, j, |_| true);
    let pq = alg.mul(&p, &q);
    let qp = alg.mul(&q, &p);
    let sign = if (i * j) % 2 == 1 {
        -Q::one()
    } else {
        Q::one()
    };
    if pq != qp.scaled(&sign) {
        return Err(format!(
            "pq = {}, qp = {}",
            alg.format(&pq),
            alg.format(&qp)
        ));
    }

    let k: i32 = rng.gen_range(-2..=2);
    let mut theta = Derivation::new(k, 0);
    for g in 0..n {
        let target = alg.generator(g).degree as i32 + k;
        if target >= 0 {
            theta.set(g, random_element(rng, &alg, target as u32, |_| true));
        }
    }
    let lhs = alg.apply_unchecked(&theta, &pq);
    let sign = if (k * i as i32).rem_euclid(2) == 1 {
        -Q::one()
    } else {
        Q::one()
    };
    let mut rhs = alg.mul(&alg.apply_unchecked(&theta, &p), &q);
    rhs.add_scaled(&sign, &alg.mul(&p, &alg.apply_unchecked(&theta, &q)));
    if lhs != rhs {
        return Err(format!(
            "θ(pq) = {}, Leibniz gives {}",
            alg.format(&lhs),
            alg.format(&rhs)
        ));
    }
    Ok(())
}

/// Bigraded models used for derivation slices.
pub fn slice_models() -> Vec<(&'static str, FreeCga, Derivation<Q>)> {
    let mut out = Vec::new();
    for name in ["s2", "s4", "product_s3_s2", "example31"] {
        let doc = fixture(name).unwrap().load().unwrap();
        let (_, p) = doc.cohomology(8).unwrap();
        let m = bigraded_model(&p.algebra, 7).unwrap();
        out.push((name, m.algebra, m.d));
    }
    let gens = vec![
        Generator::with_lower("a", 2, 0),
        Generator::with_lower("b", 2, 0),
        Generator::with_lower("alpha", 3, 1),
        Generator::with_lower("beta", 3, 1),
        Generator::with_lower("gamma", 3, 1),
    ];
    let alg = FreeCga::new(gens, 11).unwrap();
    let (a, b) = (Polynomial::generator(0), Polynomial::generator(1));
    let d = Derivation::new(1, 1)
        .with(2, alg.mul(&a, &a))
        .with(3, alg.mul(&a, &b))
        .with(4, alg.mul(&b, &b));
    let m = complete_seeded(alg, d, 8).unwrap();
    out.push(("s2 ∨ s2", m.algebra, m.d));
    out
}

/// `𝒟² = 0` between `Der_p^q`, `Der_{p+1}^{q+1}` and `Der_{p+2}^{q+2}`.
pub fn slice_square(
    alg: &FreeCga,
    d: &Derivation<Q>,
    p: u32,
    q: i32,
    top: u32,
) -> Result<(), String> {
    let a = derivation_slice(alg, d, p, q, top);
    let b = derivation_slice(alg, d, p + 1, q + 1, top);
    if a.target != b.source {
        return Err(format!("bases of Der_{}^{} disagree", p + 1, q + 1));
    }
    let prod = b.matrix().mul(&a.matrix());
    for r in 0..prod.rows() {
        for c in 0..prod.cols() {
            if !prod.get(r, c).is_zero() {
                return Err(format!("𝒟² has entry {} at ({r}, {c})", prod.get(r, c)));
            }
        }
    }
    Ok(())
}
