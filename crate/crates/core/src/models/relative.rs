use std::collections::BTreeMap;

use super::bigraded::{bigraded_model, relative_bigraded_model};
use super::filtered::{has_lower_grading, lift, restrict_lifted, FilteredModel, LiftSeed};
use crate::algebra::{AlgebraMap, Cdga, Derivation, FreeCga, LowerGrading, Polynomial};
use crate::cohomology::presentation;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::Q;

/// A relative filtered model `(ΛZ, D) → (ΛZ ⊗ ΛX, D')` of a map of CDGAs.
///
/// The first `base_len` generators of `total` span `Z`, and `D'` agrees
/// with the base differential on them.
#[derive(Clone, Debug, PartialEq)]
pub struct RelativeModel<F = Q> {
    pub base: FilteredModel<F>,
    pub total: FilteredModel<F>,
    pub base_len: usize,
}

/// The sub-CDGA on the first `base_len` generators, if the differential
/// keeps them closed.
pub fn base_part<F: Scalar>(total: &Cdga<F>, base_len: usize) -> Result<Cdga<F>> {
    let alg = &total.algebra;
    let (base, _) = alg.restrict(|g| g < base_len);
    let mut d = Derivation::new(1, total.differential.lower_shift);
    for g in 0..base_len {
        let v = total.d_gen(g);
        if v.iter().any(|(m, _)| m.generators().any(|h| h >= base_len)) {
            return Err(Error::Precondition(format!(
                "the differential of base generator {} leaves the base",
                alg.generator(g).name
            )));
        }
        d.set(g, v);
    }
    Ok(Cdga::new(base, d))
}

/// The quotient by the ideal generated by the first `base_len` generators.
pub fn fiber_part<F: Scalar>(total: &Cdga<F>, base_len: usize) -> Cdga<F> {
    let alg = &total.algebra;
    let (fiber, map) = alg.restrict(|g| g >= base_len);
    let mut d = Derivation::new(1, total.differential.lower_shift);
    for (g, ng) in map.iter().enumerate() {
        let Some(ng) = *ng else { continue };
        let v = total
            .d_gen(g)
            .filter(|m| m.generators().all(|h| h >= base_len))
            .remap(|h| map[h].expect("base generators filtered out"));
        d.set(ng, v);
    }
    Cdga::new(fiber, d)
}

impl<F: Scalar> RelativeModel<F> {
    /// Reads a relative filtered model off a total CDGA whose generators
    /// carry lower degrees, with the base on the first `base_len`.
    pub fn from_total(total: &Cdga<F>, base_len: usize, top: u32) -> Result<Self> {
        let base = base_part(total, base_len)?;
        let m = RelativeModel {
            base: FilteredModel::from_cdga(&base, top)?,
            total: FilteredModel::from_cdga(total, top)?,
            base_len,
        };
        m.check()?;
        Ok(m)
    }

    /// Builds the relative filtered model of the inclusion of the first
    /// `base_len` generators of `total`: a filtered model of the base, the
    /// relative bigraded model of the induced map on cohomology, and a lift
    /// of the latter to `total` extending the base.
    pub fn build(total: &Cdga<F>, base_len: usize, top: u32) -> Result<Self> {
        const MAX_SLACK: u32 = 4;
        let mut last = None;
        for slack in 0..=MAX_SLACK {
            match Self::build_with_slack(total, base_len, top, slack) {
                Err(e @ Error::LiftFailed(_)) => last = Some(e),
                other => return other,
            }
        }
        Err(last.expect("at least one attempt"))
    }

    fn build_with_slack(total: &Cdga<F>, base_len: usize, top: u32, slack: u32) -> Result<Self> {
        let resolve = top + 1 + slack;
        let mut total = total.clone();
        total.algebra.set_cap(total.cap().max(resolve + 2));
        let base = base_part(&total, base_len)?;
        let pres_b = presentation(&base, resolve + 1)?;
        let pres_e = presentation(&total, resolve + 1)?;
        let bg_b = bigraded_model(&pres_b.algebra, resolve)?;
        let rho_b = bg_b.rho.as_ref().expect("augmented model");

        let base_image = |g: usize| {
            let n = bg_b.algebra.generator(g).degree;
            rho_b
                .values
                .get(&g)
                .map(|c| pres_b.realize(n, c))
                .unwrap_or_default()
        };
        let seed = LiftSeed {
            fixed: 0,
            lifted: Vec::new(),
            big_d: Derivation::new(1, 1),
            pi: AlgebraMap::default(),
        };
        let (d_b, pi_b, lifted_b) = lift(&bg_b.algebra, &bg_b.d, seed, &base, base_image, top)?;
        let base_model = restrict_lifted(
            &bg_b.algebra,
            &bg_b.d,
            &d_b,
            &pi_b,
            &lifted_b,
            base.clone(),
            top,
        );

        let mut phi = BTreeMap::new();
        for (g, coords) in &rho_b.values {
            let n = bg_b.algebra.generator(*g).degree;
            let rep = pres_b.realize(n, coords);
            let image = pres_e.degree(n).classify(&rep).ok_or_else(|| {
                Error::Invariant("the base inclusion does not preserve cocycles".into())
            })?;
            phi.insert(*g, image);
        }
        let rbg = relative_bigraded_model(&bg_b, &pres_e.algebra, phi, resolve)?;
        let rho = rbg.rho.as_ref().expect("augmented model");
        let fixed = bg_b.algebra.len();
        let image = |g: usize| {
            let n = rbg.algebra.generator(g).degree;
            rho.values
                .get(&g)
                .map(|c| pres_e.realize(n, c))
                .unwrap_or_default()
        };
        let seed = LiftSeed {
            fixed,
            lifted: lifted_b.clone(),
            big_d: d_b,
            pi: pi_b,
        };
        let (big_d, pi, lifted) = lift(&rbg.algebra, &rbg.d, seed, &total, image, top)?;
        let total_model = restrict_lifted(&rbg.algebra, &rbg.d, &big_d, &pi, &lifted, total, top);
        let base_len = base_model.algebra.len();
        let m = RelativeModel {
            base: base_model,
            total: total_model,
            base_len,
        };
        m.check()?;
        Ok(m)
    }

    /// A relative filtered model valid through `top`, read off the lower
    /// grading when the total CDGA declares one and built otherwise.
    pub fn of(total: &Cdga<F>, base_len: usize, top: u32) -> Result<Self> {
        if has_lower_grading(&total.algebra) {
            Self::from_total(total, base_len, top)
        } else {
            Self::build(total, base_len, top)
        }
    }

    /// `(ΛX, D'')`: the total model modulo the ideal of `Z`, with the lower
    /// grading inherited.
    pub fn fiber_model(&self) -> Cdga<F> {
        fiber_part(&self.total.as_cdga(), self.base_len)
    }

    /// `(ΛX, d'')`, the fiber of the relative bigraded differential.
    pub fn fiber_bigraded(&self) -> Cdga<F> {
        fiber_part(
            &Cdga::new(self.total.algebra.clone(), self.total.d.clone()),
            self.base_len,
        )
    }

    /// `true` when `D'' = d''`.
    pub fn fiber_undeformed(&self) -> bool {
        self.fiber_model().differential == self.fiber_bigraded().differential
    }

    /// Checks the total and base models and that `D'` restricts to the
    /// base differential on `ΛZ ⊗ 1`.
    pub fn check(&self) -> Result<()> {
        self.base.check()?;
        self.total.check()?;
        for g in self.base.domain() {
            if g >= self.base_len || self.total.big_d.value(g) != self.base.big_d.value(g) {
                return Err(Error::Invariant(format!(
                    "D' does not restrict to the base differential on {}",
                    self.base.algebra.generator(g).name
                )));
            }
        }
        let fiber = self.fiber_model();
        if fiber.check_differential(LowerGrading::Filtered).is_err() {
            return Err(Error::Invariant(
                "the fiber differential does not respect the lower grading".into(),
            ));
        }
        Ok(())
    }

    /// Generators of `X`, as indices into the total algebra.
    pub fn fiber_generators(&self) -> impl Iterator<Item = usize> + '_ {
        self.base_len..self.total.algebra.len()
    }

    pub fn total_algebra(&self) -> &FreeCga {
        &self.total.algebra
    }

    /// Sets every base generator to zero in `p`.
    pub fn kill_base(&self, p: &Polynomial<F>) -> Polynomial<F> {
        p.filter(|m| m.generators().all(|h| h >= self.base_len))
    }
}
