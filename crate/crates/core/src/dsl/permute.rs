use std::collections::BTreeMap;

use super::{AlgebraDocument, Fibration, GeneratorDecl, Section};
use crate::algebra::{FreeCga, Generator, Monomial, Polynomial};
use crate::scalar::Scalar;

fn algebra(decls: &[GeneratorDecl]) -> FreeCga {
    let gens = decls
        .iter()
        .map(|g| Generator::with_lower(g.name.clone(), g.degree, g.lower.unwrap_or(0)))
        .collect();
    FreeCga::new(gens, 0).expect("document generators are valid")
}

/// Rewrites `p` under new generator positions, reapplying Koszul signs.
fn relabel<F: Scalar>(p: &Polynomial<F>, to: &FreeCga, map: &[usize]) -> Polynomial<F> {
    let mut out = Polynomial::zero();
    for (m, c) in p.iter() {
        let mut t = Polynomial::constant(c.clone());
        for &(g, e) in m.factors() {
            t = to.mul(
                &t,
                &Polynomial::term(Monomial::power(map[g as usize], e), F::one()),
            );
        }
        out += &t;
    }
    out
}

fn inverse(order: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        inv[old] = new;
    }
    inv
}

fn section<F: Scalar>(s: &Section<F>, order: &[usize]) -> (Section<F>, Vec<usize>) {
    let map = inverse(order);
    let generators: Vec<GeneratorDecl> = order.iter().map(|&k| s.generators[k].clone()).collect();
    let alg = algebra(&generators);
    let differential = s
        .differential
        .iter()
        .map(|(g, v)| (map[*g], relabel(v, &alg, &map)))
        .collect();
    (
        Section {
            generators,
            differential,
            complete: s.complete,
        },
        map,
    )
}

impl<F: Scalar> AlgebraDocument<F> {
    /// The same document with generators declared in another order:
    /// position `k` of `order` names the old position of the new `k`th
    /// fiber (or only) generator, and likewise `base_order` for the base.
    pub fn permuted(&self, order: &[usize], base_order: &[usize]) -> Self {
        let (main, map) = section(&self.section, order);
        let fibration = self.fibration.as_ref().map(|f| {
            let (base, base_map) = section(&f.base, base_order);
            let nb = base_map.len();
            let total_map: Vec<usize> = base_map
                .iter()
                .copied()
                .chain(map.iter().map(|&h| h + nb))
                .collect();
            let mut all = base.generators.clone();
            all.extend(main.generators.iter().cloned());
            let total = algebra(&all);
            let fiber = algebra(&main.generators);
            let base_alg = algebra(&base.generators);
            let moved = |m: &BTreeMap<usize, Polynomial<F>>, alg: &FreeCga, values: &[usize]| {
                m.iter()
                    .map(|(x, v)| (map[*x], relabel(v, alg, values)))
                    .collect()
            };
            Fibration {
                twist: moved(&f.twist, &total, &total_map),
                theta: moved(&f.theta, &fiber, &map),
                via: relabel(&f.via, &base_alg, &base_map),
                base,
            }
        });
        AlgebraDocument {
            name: self.name.clone(),
            section: main,
            fibration,
            warnings: self.warnings.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;
    use crate::Q;

    #[test]
    fn reversing_odd_generators_keeps_the_element() {
        let doc: AlgebraDocument<Q> = parse(
            "generator x : degree 3\ngenerator y : degree 3\ngenerator z : degree 5\nd z = x*y",
        )
        .unwrap();
        let p = doc.permuted(&[1, 0, 2], &[]);
        let expected: AlgebraDocument<Q> = parse(
            "generator y : degree 3\ngenerator x : degree 3\ngenerator z : degree 5\nd z = x*y",
        )
        .unwrap();
        assert_eq!(p, expected);
        assert_eq!(p.to_string(), "algebra unnamed\ngenerator y : degree 3\ngenerator x : degree 3\ngenerator z : degree 5\nd z = -y*x\n");
    }
}
