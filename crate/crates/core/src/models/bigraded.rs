use std::collections::BTreeMap;

use crate::algebra::{Cdga, Derivation, FreeCga, Generator, LowerGrading, Monomial, Polynomial};
use crate::cohomology::{sparse, to_sparse, GradedAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, Insert};
use crate::scalar::Scalar;
use crate::Q;

/// The augmentation `ρ: ΛV_0 → H`, given on lower-degree-zero generators.
#[derive(Clone, Debug, PartialEq)]
pub struct Augmentation<F = Q> {
    pub target: GradedAlgebra<F>,
    /// Coordinates of `ρ(v)` in `H^{|v|}`; generators of positive lower
    /// degree map to zero and are absent.
    pub values: BTreeMap<usize, Vec<F>>,
}

impl<F: Scalar> Augmentation<F> {
    /// `ρ(m)`, or `None` when the degree is beyond the target's cap.
    pub fn eval_monomial(&self, alg: &FreeCga, m: &Monomial) -> Option<Vec<F>> {
        let n = alg.monomial_degree(m);
        if n > self.target.cap() {
            return None;
        }
        let mut deg = 0;
        let mut acc = self.target.unit();
        for &(g, e) in m.factors() {
            let gen = alg.generator(g as usize);
            let Some(v) = self.values.get(&(g as usize)).filter(|_| gen.lower == 0) else {
                return Some(vec![F::zero(); self.target.dim(n)]);
            };
            for _ in 0..e {
                acc = self.target.product(deg, &acc, gen.degree, v)?;
                deg += gen.degree;
            }
        }
        Some(acc)
    }

    pub fn eval(&self, alg: &FreeCga, p: &Polynomial<F>, n: u32) -> Option<Vec<F>> {
        let mut out = vec![F::zero(); self.target.dim(n)];
        for (m, c) in p.iter() {
            let v = self.eval_monomial(alg, m)?;
            for (o, x) in out.iter_mut().zip(&v) {
                *o = o.add_ref(&c.mul_ref(x));
            }
        }
        Some(out)
    }
}

/// A bigraded model `(ΛV, d)` with `V = ⊕ V_p`, `d(V_p) ⊂ (ΛV)_{p-1}`,
/// `H_{>0}(ΛV, d) = 0` and `H_0(ΛV, d) ≅ H` via `ρ`.
///
/// Generators are complete through degree `top`, so the resolution
/// properties hold through degree `top + 1`. Without an augmentation the
/// model is a completion of declared seeds, and `H` is `H_0` by definition.
#[derive(Clone, Debug, PartialEq)]
pub struct BigradedModel<F = Q> {
    pub algebra: FreeCga,
    pub d: Derivation<F>,
    pub rho: Option<Augmentation<F>>,
    pub top: u32,
    /// Leading generators that belong to a base and were not built here.
    pub fixed: usize,
}

/// Resolves a graded algebra: generators through degree `top`, which
/// requires `h` through degree `top + 1`.
pub fn bigraded_model<F: Scalar>(h: &GradedAlgebra<F>, top: u32) -> Result<BigradedModel<F>> {
    let alg = FreeCga::new(Vec::new(), top + 1)?;
    let mut m = BigradedModel {
        algebra: alg,
        d: Derivation::new(1, 1),
        rho: Some(Augmentation {
            target: h.clone(),
            values: BTreeMap::new(),
        }),
        top: 1,
        fixed: 0,
    };
    m.extend(top)?;
    Ok(m)
}

/// Completes declared lower-degree-0 and -1 generators (and any declared
/// higher ones) to a bigraded model through degree `top`, taking `H` to be
/// `H_0` of the seeds.
pub fn complete_seeded<F: Scalar>(
    alg: FreeCga,
    d: Derivation<F>,
    top: u32,
) -> Result<BigradedModel<F>> {
    let mut m = BigradedModel {
        algebra: alg,
        d,
        rho: None,
        top: 1,
        fixed: 0,
    };
    m.extend(top)?;
    Ok(m)
}

/// Extends a bigraded model of the source of `phi` to a relative model
/// `ΛZ ⊗ ΛX` resolving `target`. `phi` gives, for each lower-degree-zero
/// base generator, the coordinates of its image in `target`.
pub fn relative_bigraded_model<F: Scalar>(
    base: &BigradedModel<F>,
    target: &GradedAlgebra<F>,
    phi: BTreeMap<usize, Vec<F>>,
    top: u32,
) -> Result<BigradedModel<F>> {
    if base.top < top {
        return Err(Error::CapTooSmall {
            cap: base.top,
            reason: format!("base model is complete only through degree {}", base.top),
        });
    }
    let mut alg = base.algebra.clone();
    alg.set_cap(alg.cap().max(top + 1));
    let mut m = BigradedModel {
        algebra: alg,
        d: base.d.clone(),
        rho: Some(Augmentation {
            target: target.clone(),
            values: phi,
        }),
        top: 1,
        fixed: base.algebra.len(),
    };
    m.extend(top)?;
    Ok(m)
}

/// Dimension of `H_p^n(ΛV, d)`, where `d` lowers lower degree by one.
pub fn lower_homology_dim<F: Scalar>(alg: &FreeCga, d: &Derivation<F>, n: u32, p: u32) -> usize {
    let basis = alg.basis_unchecked(n, p..=p, |_| true);
    let mut ker: Echelon<Monomial, F> = Echelon::new();
    let mut cycles = Vec::new();
    for (k, m) in basis.iter().enumerate() {
        let dm = alg.apply_unchecked(d, &Polynomial::term(m.clone(), F::one()));
        if let Insert::Dependent(rel) = ker.insert_indexed(sparse(&dm), k) {
            cycles.push(
                rel.into_iter()
                    .map(|(j, x)| (basis[j].clone(), x))
                    .collect::<Polynomial<F>>(),
            );
        }
    }
    let mut bnd: Echelon<Monomial, F> = Echelon::new();
    if n > 0 {
        for m in alg.basis_unchecked(n - 1, p + 1..=p + 1, |_| true) {
            bnd.insert_untagged(sparse(
                &alg.apply_unchecked(d, &Polynomial::term(m, F::one())),
            ));
        }
    }
    cycles
        .into_iter()
        .filter(|z| bnd.insert_untagged(sparse(z)))
        .count()
}

impl<F: Scalar> BigradedModel<F> {
    pub fn as_cdga(&self) -> Cdga<F> {
        Cdga::new(self.algebra.clone(), self.d.clone())
    }

    /// Number of generators per `(degree, lower degree)`.
    pub fn generator_counts(&self) -> BTreeMap<(u32, u32), usize> {
        let mut out = BTreeMap::new();
        for g in self.algebra.generators() {
            *out.entry((g.degree, g.lower)).or_insert(0) += 1;
        }
        out
    }

    /// Adds generators through degree `top`.
    pub fn extend(&mut self, top: u32) -> Result<()> {
        if let Some(rho) = &self.rho {
            if rho.target.cap() < top + 1 {
                return Err(Error::CapTooSmall {
                    cap: rho.target.cap(),
                    reason: format!(
                        "resolving through degree {top} needs the algebra through degree {}",
                        top + 1
                    ),
                });
            }
        }
        let cap = self.algebra.cap().max(top + 1);
        self.algebra.set_cap(cap);
        for n in (self.top + 1)..=top {
            self.step(n)?;
            self.top = n;
        }
        self.top = self.top.max(top);
        Ok(())
    }

    fn add_generator(&mut self, n: u32, p: u32, dv: Polynomial<F>) -> Result<usize> {
        let k = self
            .algebra
            .generators()
            .iter()
            .filter(|g| g.degree == n && g.lower == p)
            .count();
        let name = self.algebra.fresh_name(&format!("v{p}_{n}_{k}"));
        let i = self
            .algebra
            .push_generator(Generator::with_lower(name, n, p))?;
        self.d.set(i, dv);
        Ok(i)
    }

    fn step(&mut self, n: u32) -> Result<()> {
        if self.rho.is_some() {
            self.kill_cokernel(n)?;
            self.kill_relations(n)?;
        }
        for p in 2..=n {
            let basis = self.algebra.basis_unchecked(n + 1, p - 1..=p - 1, |_| true);
            if basis.is_empty() {
                continue;
            }
            let cycles = self.kernel_of_d(&basis);
            let boundaries = self.algebra.basis_unchecked(n, p..=p, |_| true);
            self.kill(n, p, boundaries, cycles)?;
        }
        Ok(())
    }

    fn kernel_of_d(&self, basis: &[Monomial]) -> Vec<Polynomial<F>> {
        let mut ech: Echelon<Monomial, F> = Echelon::new();
        let mut out = Vec::new();
        for (k, m) in basis.iter().enumerate() {
            let dm = self
                .algebra
                .apply_unchecked(&self.d, &Polynomial::term(m.clone(), F::one()));
            if let Insert::Dependent(rel) = ech.insert_indexed(sparse(&dm), k) {
                out.push(
                    rel.into_iter()
                        .map(|(j, x)| (basis[j].clone(), x))
                        .collect(),
                );
            }
        }
        out
    }

    /// Adds generators of degree `n` and lower degree `p` killing the
    /// cycles not already hit by `d` of the given boundary monomials.
    fn kill(
        &mut self,
        n: u32,
        p: u32,
        boundaries: Vec<Monomial>,
        cycles: Vec<Polynomial<F>>,
    ) -> Result<()> {
        let mut ech: Echelon<Monomial, F> = Echelon::new();
        for m in boundaries {
            let dm = self
                .algebra
                .apply_unchecked(&self.d, &Polynomial::term(m, F::one()));
            ech.insert_untagged(sparse(&dm));
        }
        for z in cycles {
            if ech.insert_untagged(sparse(&z)) {
                self.add_generator(n, p, z)?;
            }
        }
        Ok(())
    }

    /// `V_0^n`: classes of `H^n` not reached by `ρ` on decomposables.
    fn kill_cokernel(&mut self, n: u32) -> Result<()> {
        let rho = self.rho.as_ref().expect("augmented model");
        let dim = rho.target.dim(n);
        if dim == 0 {
            return Ok(());
        }
        let mut ech: Echelon<usize, F> = Echelon::new();
        for m in self.algebra.basis_unchecked(n, 0..=0, |_| true) {
            let v = rho
                .eval_monomial(&self.algebra, &m)
                .ok_or_else(|| cap_error(rho, n))?;
            ech.insert_untagged(to_sparse(&v));
        }
        let mut new = Vec::new();
        for k in 0..dim {
            let e = rho.target.basis_vector(n, k);
            if ech.insert_untagged(to_sparse(&e)) {
                new.push(e);
            }
        }
        for e in new {
            let i = self.add_generator(n, 0, Polynomial::zero())?;
            self.rho
                .as_mut()
                .expect("augmented model")
                .values
                .insert(i, e);
        }
        Ok(())
    }

    /// `V_1^n`: relations in degree `n + 1`, i.e. the kernel of `ρ` on
    /// `(ΛV_0)^{n+1}` modulo what `d((ΛV)_1)` already kills.
    fn kill_relations(&mut self, n: u32) -> Result<()> {
        let rho = self.rho.as_ref().expect("augmented model");
        let basis = self.algebra.basis_unchecked(n + 1, 0..=0, |_| true);
        let mut ech: Echelon<usize, F> = Echelon::new();
        let mut relations = Vec::new();
        for (k, m) in basis.iter().enumerate() {
            let v = rho
                .eval_monomial(&self.algebra, m)
                .ok_or_else(|| cap_error(rho, n + 1))?;
            if let Insert::Dependent(rel) = ech.insert_indexed(to_sparse(&v), k) {
                relations.push(
                    rel.into_iter()
                        .map(|(j, x)| (basis[j].clone(), x))
                        .collect(),
                );
            }
        }
        let boundaries = self.algebra.basis_unchecked(n, 1..=1, |_| true);
        self.kill(n, 1, boundaries, relations)
    }

    /// Checks the defining properties through degree `upto`: bigraded
    /// differential, `ρ ∘ d = 0`, `H_{>0} = 0`, and `ρ` an isomorphism on
    /// `H_0` when an augmentation is present.
    pub fn check(&self, upto: u32) -> Result<()> {
        let mut c = self.as_cdga();
        c.algebra.set_cap(c.algebra.cap().max(upto + 2));
        c.check_differential(LowerGrading::Bigraded)
            .map_err(|v| v.into_error(&self.algebra))?;
        for n in 0..=upto {
            for p in 1..=n {
                let h = lower_homology_dim(&self.algebra, &self.d, n, p);
                if h != 0 {
                    return Err(Error::Invariant(format!("H_{p}^{n} has dimension {h}")));
                }
            }
        }
        let Some(rho) = &self.rho else { return Ok(()) };
        for (i, g) in self.algebra.generators().iter().enumerate() {
            if g.lower == 1 && g.degree < upto {
                let v = rho.eval(&self.algebra, &self.d.value(i), g.degree + 1);
                if v.is_some_and(|v| v.iter().any(|x| !x.is_zero())) {
                    return Err(Error::Invariant(format!("ρ(d {}) ≠ 0", g.name)));
                }
            }
        }
        for n in 0..=upto.min(rho.target.cap()) {
            let h0 = lower_homology_dim(&self.algebra, &self.d, n, 0);
            let mut ech: Echelon<usize, F> = Echelon::new();
            for m in self.algebra.basis_unchecked(n, 0..=0, |_| true) {
                if let Some(v) = rho.eval_monomial(&self.algebra, &m) {
                    ech.insert_untagged(to_sparse(&v));
                }
            }
            if h0 != rho.target.dim(n) || ech.rank() != rho.target.dim(n) {
                return Err(Error::Invariant(format!(
                    "ρ is not an isomorphism in degree {n}: H_0 has dimension {h0}, target {}",
                    rho.target.dim(n)
                )));
            }
        }
        Ok(())
    }
}

fn cap_error<F: Scalar>(rho: &Augmentation<F>, n: u32) -> Error {
    Error::CapTooSmall {
        cap: rho.target.cap(),
        reason: format!("a relation in degree {n} lies beyond the algebra's truncation"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::presentation;

    fn s2_cohomology(cap: u32) -> GradedAlgebra<Q> {
        let alg = FreeCga::new(
            vec![Generator::new("a", 2), Generator::new("alpha", 3)],
            cap + 1,
        )
        .unwrap();
        let a2 = alg.pow(&Polynomial::generator(0), 2);
        presentation(&Cdga::new(alg, Derivation::new(1, 0).with(1, a2)), cap)
            .unwrap()
            .algebra
    }

    #[test]
    fn sphere_model_has_one_relation() {
        let m = bigraded_model(&s2_cohomology(13), 12).unwrap();
        assert_eq!(
            m.generator_counts(),
            BTreeMap::from([((2, 0), 1), ((3, 1), 1)])
        );
        assert_eq!(m.algebra.format(&m.d.value(1)), "v0_2_0^2");
        m.check(12).unwrap();
    }

    #[test]
    fn free_odd_generator_needs_no_relations() {
        let alg = FreeCga::new(vec![Generator::new("x", 3)], 12).unwrap();
        let h = presentation(&Cdga::<Q>::zero_differential(alg), 11)
            .unwrap()
            .algebra;
        let m = bigraded_model(&h, 10).unwrap();
        assert_eq!(m.generator_counts(), BTreeMap::from([((3, 0), 1)]));
    }

    #[test]
    fn small_cap_reported() {
        let h = s2_cohomology(4);
        assert!(matches!(
            bigraded_model(&h, 4),
            Err(Error::CapTooSmall { .. })
        ));
    }
}
