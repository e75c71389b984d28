use std::collections::BTreeMap;

use super::bigraded::{bigraded_model, lower_homology_dim, BigradedModel};
use crate::algebra::{AlgebraMap, Cdga, Derivation, FreeCga, LowerGrading, Monomial, Polynomial};
use crate::cohomology::{induced_map, presentation, Presentation};
use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::scalar::Scalar;
use crate::Q;

/// A filtered model `(ΛV, D) → A` with `D = d + d_2 + d_3 + …`.
///
/// `d` is the bigraded differential and each `d_i` lowers the lower
/// degree by exactly `i`. `D` and `π` are defined on the generators of
/// degree at most `valid_through`; the algebra may carry a few generators
/// one degree higher so that those values make sense.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredModel<F = Q> {
    pub algebra: FreeCga,
    pub d: Derivation<F>,
    pub big_d: Derivation<F>,
    pub pi: AlgebraMap<F>,
    pub target: Cdga<F>,
    pub valid_through: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Model(Monomial),
    Target(Monomial),
}

enum Column {
    Model(Monomial),
    Target(Monomial),
}

/// The columns of the joint system for generators of one bidegree.
struct Block<F> {
    columns: Vec<Column>,
    echelon: Echelon<Key, F>,
}

fn keyed<F: Scalar>(model: Polynomial<F>, target: Polynomial<F>) -> BTreeMap<Key, F> {
    let mut out = BTreeMap::new();
    for (m, c) in model.into_terms() {
        out.insert(Key::Model(m), c);
    }
    for (m, c) in target.into_terms() {
        out.insert(Key::Target(m), c);
    }
    out
}

/// The pieces a lift starts from: generators below `fixed` already carry
/// `D` and `π` where `lifted` says so (all of them when it is empty).
pub(crate) struct LiftSeed<F> {
    pub fixed: usize,
    pub lifted: Vec<bool>,
    pub big_d: Derivation<F>,
    pub pi: AlgebraMap<F>,
}

/// Extends `D` and `π` over the generators of a bigraded model.
///
/// Generators are handled by lower degree, then degree. For `v ∈ V_p^n`
/// one linear system finds `ξ ∈ (ΛV)_{≤p-2}^{n+1}` and `a ∈ A^n` with
/// `D(dv + ξ) = 0` and `π(dv + ξ) = d_A a`; then `Dv = dv + ξ`, `πv = a`.
/// A generator above `top` that cannot be lifted is dropped; one at or
/// below `top` is an error. Returns which generators were lifted.
pub(crate) fn lift<F: Scalar>(
    alg: &FreeCga,
    d: &Derivation<F>,
    seed: LiftSeed<F>,
    target: &Cdga<F>,
    v0_image: impl Fn(usize) -> Polynomial<F>,
    top: u32,
) -> Result<(Derivation<F>, AlgebraMap<F>, Vec<bool>)> {
    let LiftSeed {
        fixed,
        lifted: prefix,
        mut big_d,
        mut pi,
    } = seed;
    let mut lifted = vec![false; alg.len()];
    for (g, x) in lifted[..fixed].iter_mut().enumerate() {
        *x = prefix.get(g).copied().unwrap_or(true);
    }
    let mut order: Vec<usize> = (fixed..alg.len()).collect();
    order.sort_by_key(|&g| (alg.generator(g).lower, alg.generator(g).degree, g));
    let mut blocks: BTreeMap<(u32, u32), Block<F>> = BTreeMap::new();
    let tgt = &target.algebra;
    for g in order {
        let gen = alg.generator(g);
        let (p, n) = (gen.lower, gen.degree);
        let fail = |reason: &str| -> Result<()> {
            if n <= top {
                Err(Error::LiftFailed(format!("{}: {reason}", gen.name)))
            } else {
                Ok(())
            }
        };
        let dv = d.value(g);
        if dv.iter().any(|(m, _)| m.generators().any(|h| !lifted[h])) {
            fail("its differential involves a generator that could not be lifted")?;
            continue;
        }
        if p == 0 {
            pi.set(g, v0_image(g));
            lifted[g] = true;
            continue;
        }
        let block = blocks.entry((p, n)).or_insert_with(|| {
            let mut columns = Vec::new();
            let mut echelon = Echelon::new();
            if p >= 2 {
                for m in alg.basis_unchecked(n + 1, 0..=p - 2, |h| lifted[h]) {
                    let mp = Polynomial::term(m.clone(), F::one());
                    let v = keyed(alg.apply_unchecked(&big_d, &mp), pi.apply(alg, tgt, &mp));
                    echelon.insert_indexed(v, columns.len());
                    columns.push(Column::Model(m));
                }
            }
            for b in tgt.basis_unchecked(n, 0..=u32::MAX, |_| true) {
                let db = target.d(&Polynomial::term(b.clone(), F::one()));
                echelon.insert_indexed(keyed(Polynomial::zero(), db), columns.len());
                columns.push(Column::Target(b));
            }
            Block { columns, echelon }
        });
        let rhs = keyed(alg.apply_unchecked(&big_d, &dv), pi.apply(alg, tgt, &dv));
        let Some(combo) = block.echelon.solve(rhs) else {
            fail("no correction term solves the lifting equations")?;
            continue;
        };
        let mut value = dv;
        let mut image = Polynomial::zero();
        for (k, c) in combo {
            match &block.columns[k] {
                Column::Model(m) => value.add_term(m.clone(), -c),
                Column::Target(b) => image.add_term(b.clone(), c),
            }
        }
        big_d.set(g, value);
        pi.set(g, image);
        lifted[g] = true;
    }
    Ok((big_d, pi, lifted))
}

/// Lifts a bigraded model of `H(c)` to a filtered model of `c`; the model
/// is valid through degree `top`.
pub fn filtered_model_from<F: Scalar>(
    c: &Cdga<F>,
    pres: &Presentation<F>,
    bg: &BigradedModel<F>,
    top: u32,
) -> Result<FilteredModel<F>> {
    let rho = bg
        .rho
        .as_ref()
        .ok_or_else(|| Error::Precondition("the bigraded model has no augmentation".into()))?;
    let seed = LiftSeed {
        fixed: 0,
        lifted: Vec::new(),
        big_d: Derivation::new(1, 1),
        pi: AlgebraMap::default(),
    };
    let image = |g: usize| {
        let n = bg.algebra.generator(g).degree;
        rho.values
            .get(&g)
            .map(|coords| pres.realize(n, coords))
            .unwrap_or_default()
    };
    let (big_d, pi, lifted) = lift(&bg.algebra, &bg.d, seed, c, image, top)?;
    Ok(restrict_lifted(
        &bg.algebra,
        &bg.d,
        &big_d,
        &pi,
        &lifted,
        c.clone(),
        top,
    ))
}

pub(crate) fn restrict_lifted<F: Scalar>(
    alg: &FreeCga,
    d: &Derivation<F>,
    big_d: &Derivation<F>,
    pi: &AlgebraMap<F>,
    lifted: &[bool],
    target: Cdga<F>,
    top: u32,
) -> FilteredModel<F> {
    let (algebra, map) = alg.restrict(|g| lifted[g]);
    let remap = |h: usize| map[h].expect("lifted values only involve lifted generators");
    let mut out = FilteredModel {
        algebra,
        d: Derivation::new(1, 1),
        big_d: Derivation::new(1, 1),
        pi: AlgebraMap::default(),
        target,
        valid_through: top,
    };
    for (g, ng) in map.iter().enumerate() {
        let Some(ng) = *ng else { continue };
        out.d.set(ng, d.value(g).remap(remap));
        out.big_d.set(ng, big_d.value(g).remap(remap));
        out.pi.set(ng, pi.image(g));
    }
    out.restricted(top)
}

/// Builds a filtered model of `c` valid through degree `top`, resolving
/// `H(c)` a little further when a lift needs generators beyond `top`.
///
/// The computation reads `c` a few degrees past `top`; its cap is raised
/// as needed.
pub fn filtered_model<F: Scalar>(c: &Cdga<F>, top: u32) -> Result<FilteredModel<F>> {
    const MAX_SLACK: u32 = 4;
    let mut last = None;
    for slack in 0..=MAX_SLACK {
        let resolve = top + 1 + slack;
        let mut c = c.clone();
        c.algebra.set_cap(c.cap().max(resolve + 2));
        let pres = presentation(&c, resolve + 1)?;
        let bg = bigraded_model(&pres.algebra, resolve)?;
        match filtered_model_from(&c, &pres, &bg, top) {
            Ok(m) => return Ok(m),
            Err(e @ Error::LiftFailed(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

impl<F: Scalar> FilteredModel<F> {
    /// Treats a CDGA whose generators carry lower degrees as a filtered
    /// model of itself: `d` is the part of the differential lowering the
    /// lower degree by one and `π` is the identity.
    ///
    /// Requires the differential to lower the lower degree by at least one
    /// and `H_{>0}(ΛV, d) = 0` through degree `top + 1`.
    pub fn from_cdga(c: &Cdga<F>, top: u32) -> Result<Self> {
        if c.cap() < top + 2 {
            return Err(Error::CapTooSmall {
                cap: c.cap(),
                reason: format!(
                    "checking the lower grading through degree {} needs degree {}",
                    top + 1,
                    top + 2
                ),
            });
        }
        c.check_differential(LowerGrading::Filtered)
            .map_err(|v| v.into_error(&c.algebra))?;
        let d = c.linear_lower_part();
        for n in 0..=top + 1 {
            for p in 1..=n {
                if lower_homology_dim(&c.algebra, &d, n, p) != 0 {
                    return Err(Error::Precondition(format!(
                        "the lower grading is not a bigraded model: H_{p}^{n} ≠ 0"
                    )));
                }
            }
        }
        let m = FilteredModel {
            algebra: c.algebra.clone(),
            d,
            big_d: c.differential.clone(),
            pi: AlgebraMap::identity(&c.algebra),
            target: c.clone(),
            valid_through: top,
        };
        Ok(m.restricted(top))
    }

    /// Keeps the generators of degree at most `top + 1` and the values of
    /// `D`, `d` and `π` on those of degree at most `top`.
    pub fn restricted(&self, top: u32) -> Self {
        let alg = &self.algebra;
        let (algebra, map) = alg.restrict(|g| alg.generator(g).degree <= top + 1);
        let remap =
            |h: usize| map[h].expect("values of low generators only involve low generators");
        let mut out = FilteredModel {
            algebra,
            d: Derivation::new(1, 1),
            big_d: Derivation::new(1, 1),
            pi: AlgebraMap::default(),
            target: self.target.clone(),
            valid_through: top.min(self.valid_through),
        };
        for (g, ng) in map.iter().enumerate() {
            let Some(ng) = *ng else { continue };
            if alg.generator(g).degree <= out.valid_through {
                out.d.set(ng, self.d.value(g).remap(remap));
                out.big_d.set(ng, self.big_d.value(g).remap(remap));
                out.pi.set(ng, self.pi.image(g));
            }
        }
        out
    }

    /// Generators on which `D` is defined.
    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.algebra.len()).filter(|&g| self.algebra.generator(g).degree <= self.valid_through)
    }

    /// The part of `D - d` lowering the lower degree by exactly `i`.
    pub fn deformation(&self, i: u32) -> Derivation<F> {
        let mut out = Derivation::new(1, i as i32);
        for g in self.domain() {
            let p = self.algebra.generator(g).lower;
            if p >= i {
                out.set(g, self.algebra.lower_part(&self.big_d.value(g), p - i));
            }
        }
        out
    }

    /// The nonzero deformation differentials, by stage.
    pub fn deformations(&self) -> Vec<(u32, Derivation<F>)> {
        let top = self
            .domain()
            .map(|g| self.algebra.generator(g).lower)
            .max()
            .unwrap_or(0);
        (2..=top)
            .map(|i| (i, self.deformation(i)))
            .filter(|(_, di)| !di.vanishes())
            .collect()
    }

    /// `(ΛV, D)` as a CDGA.
    pub fn as_cdga(&self) -> Cdga<F> {
        Cdga::new(self.algebra.clone(), self.big_d.clone())
    }

    /// Checks `D² = 0`, the shape of `D - d`, that `d` is bigraded with
    /// `d² = 0`, and `π ∘ D = d_A ∘ π`, on the generators where all of
    /// these are defined.
    pub fn check(&self) -> Result<()> {
        let alg = &self.algebra;
        for g in self.domain() {
            let gen = alg.generator(g);
            let dg = self.d.value(g);
            let big = self.big_d.value(g);
            if dg
                .iter()
                .any(|(m, _)| alg.monomial_lower(m) + 1 != gen.lower)
            {
                return Err(Error::Inhomogeneous {
                    generator: gen.name.clone(),
                    reason: "d does not lower the lower degree by one".into(),
                });
            }
            let rest = big.clone() - dg.clone();
            if rest
                .iter()
                .any(|(m, _)| alg.monomial_lower(m) + 2 > gen.lower)
            {
                return Err(Error::Inhomogeneous {
                    generator: gen.name.clone(),
                    reason: "D - d does not lower the lower degree by at least two".into(),
                });
            }
            let lhs = self.pi.apply(alg, &self.target.algebra, &big);
            let rhs = self.target.d(&self.pi.image(g));
            if lhs != rhs {
                return Err(Error::NotChainMap(gen.name.clone()));
            }
            if gen.degree + 1 > self.valid_through {
                continue;
            }
            for (delta, name) in [(&self.big_d, "D"), (&self.d, "d")] {
                let sq = alg.apply_unchecked(
                    delta,
                    &alg.apply_unchecked(delta, &Polynomial::generator(g)),
                );
                if !sq.is_zero() {
                    return Err(Error::NotADifferential {
                        generator: format!("{} ({name})", gen.name),
                        residue: alg.format(&sq),
                    });
                }
            }
        }
        Ok(())
    }

    /// Checks that `π` induces isomorphisms on cohomology through `upto`.
    pub fn check_quasi_iso(&self, upto: u32) -> Result<()> {
        if upto + 1 > self.valid_through {
            return Err(Error::CapTooSmall {
                cap: self.valid_through,
                reason: format!(
                    "cohomology through degree {upto} needs the model through degree {}",
                    upto + 1
                ),
            });
        }
        let alg = &self.algebra;
        let (source_alg, map) = alg.restrict(|g| alg.generator(g).degree <= upto + 1);
        let source_alg = source_alg.with_cap(upto + 1);
        let remap = |h: usize| map[h].expect("degree bound");
        let mut d = Derivation::new(1, 0);
        let mut pi = AlgebraMap::default();
        for (g, ng) in map.iter().enumerate() {
            let Some(ng) = *ng else { continue };
            if alg.generator(g).degree <= upto {
                d.set(ng, self.big_d.value(g).remap(remap));
            }
            pi.set(ng, self.pi.image(g));
        }
        let source = Cdga::new(source_alg, d);
        let mut target = self.target.clone();
        target.algebra.set_cap(target.algebra.cap().max(upto + 1));
        let m = induced_map(&source, &target, &pi, upto)?;
        for (n, mat) in m.matrices.iter().enumerate() {
            let (s, t) = (m.source.dim(n as u32), m.target.dim(n as u32));
            if s != t || mat.rank() != s {
                return Err(Error::Invariant(format!(
                    "π is not a quasi-isomorphism in degree {n}: dimensions {s} → {t}, rank {}",
                    mat.rank()
                )));
            }
        }
        Ok(())
    }

    /// Number of generators per `(degree, lower degree)`.
    pub fn generator_counts(&self) -> BTreeMap<(u32, u32), usize> {
        let mut out = BTreeMap::new();
        for g in self.domain() {
            let gen = self.algebra.generator(g);
            *out.entry((gen.degree, gen.lower)).or_insert(0) += 1;
        }
        out
    }
}

/// `true` when some generator carries a positive lower degree.
pub fn has_lower_grading(alg: &FreeCga) -> bool {
    alg.generators().iter().any(|g| g.lower > 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Generator;

    fn heisenberg(cap: u32) -> Cdga<Q> {
        let alg = FreeCga::new(
            vec![
                Generator::new("x", 3),
                Generator::new("y", 3),
                Generator::new("z", 5),
            ],
            cap,
        )
        .unwrap();
        let xy = alg.mul(&Polynomial::generator(0), &Polynomial::generator(1));
        Cdga::new(alg, Derivation::new(1, 0).with(2, xy))
    }

    #[test]
    fn zero_differential_gives_undeformed_model() {
        let alg = FreeCga::new(vec![Generator::new("a", 2), Generator::new("x", 3)], 12).unwrap();
        let c = Cdga::<Q>::zero_differential(alg);
        let m = filtered_model(&c, 8).unwrap();
        assert_eq!(m.big_d, m.d);
        assert!(m.deformations().is_empty());
        m.check().unwrap();
    }

    #[test]
    fn heisenberg_needs_a_deformation() {
        let m = filtered_model(&heisenberg(18), 12).unwrap();
        m.check().unwrap();
        assert!(!m.deformations().is_empty());
        m.check_quasi_iso(11).unwrap();
    }

    #[test]
    fn sphere_model_is_its_own_filtered_model() {
        let mut alg =
            FreeCga::new(vec![Generator::new("a", 2), Generator::new("alpha", 3)], 10).unwrap();
        alg.set_lower(1, 1);
        let a2 = alg.pow(&Polynomial::generator(0), 2);
        let c = Cdga::<Q>::new(alg, Derivation::new(1, 0).with(1, a2));
        let m = FilteredModel::from_cdga(&c, 8).unwrap();
        assert!(m.deformations().is_empty());
        m.check().unwrap();
    }
}
