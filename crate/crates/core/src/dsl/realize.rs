use super::{AlgebraDocument, Section};
use crate::algebra::{Cdga, Derivation, FreeCga, Generator, LowerGrading, Polynomial};
use crate::cohomology::{bigraded_presentation, presentation, sparse, Presentation};
use crate::error::{Error, Result};
use crate::formality::ModelSource;
use crate::linalg::Echelon;
use crate::models::{complete_seeded, has_lower_grading};
use crate::scalar::Scalar;

fn section_algebra<F: Scalar>(s: &Section<F>, cap: u32) -> Result<(FreeCga, Derivation<F>)> {
    let gens = s
        .generators
        .iter()
        .map(|g| Generator::with_lower(g.name.clone(), g.degree, g.lower.unwrap_or(0)))
        .collect();
    let alg = FreeCga::new(gens, cap)?;
    let mut d = Derivation::new(1, 1);
    for (g, v) in &s.differential {
        d.set(*g, v.clone());
    }
    Ok((alg, d))
}

/// The section as a CDGA with cap `top + 2`, completed through `top + 1`
/// when it asks for completion.
fn realize_section<F: Scalar>(s: &Section<F>, top: u32) -> Result<Cdga<F>> {
    let (alg, d) = section_algebra(s, top + 2)?;
    if !s.complete {
        return Ok(Cdga::new(alg, d));
    }
    let m = complete_seeded(alg, d, top + 1)?;
    let mut c = m.as_cdga();
    c.algebra.set_cap(c.cap().max(top + 2));
    Ok(c)
}

/// Extends `theta` from the generators it is given on to every generator
/// of `alg` of degree at most `top`, so that `dθ = (−1)^q θd` with `q` the
/// degree of `theta`.
///
/// Generators are handled by increasing lower degree, then degree. Declared
/// generators keep their values (zero if absent) and are only checked;
/// the rest get a solution of lower degree `p − s`, where `s` is the lower
/// shift of `theta`, or zero when the equation is homogeneous.
pub fn extend_theta<F: Scalar>(
    alg: &FreeCga,
    d: &Derivation<F>,
    theta: &Derivation<F>,
    declared: usize,
    top: u32,
) -> Result<Derivation<F>> {
    let q = theta.degree;
    let s = theta.lower_shift;
    let sign = if q.rem_euclid(2) == 0 {
        F::one()
    } else {
        -F::one()
    };
    let mut out = theta.clone();
    let mut order: Vec<usize> = (0..alg.len())
        .filter(|&g| alg.generator(g).degree <= top)
        .collect();
    order.sort_by_key(|&g| (alg.generator(g).lower, alg.generator(g).degree, g));
    for g in order {
        let gen = alg.generator(g);
        let rhs = alg.apply_unchecked(&out, &d.value(g)).scaled(&sign);
        if g < declared {
            let lhs = alg.apply_unchecked(d, &out.value(g));
            if lhs != rhs {
                return Err(Error::Precondition(format!(
                    "theta is not compatible with d on `{}`: dθ = {}, (−1)^q θd = {}",
                    gen.name,
                    alg.format(&lhs),
                    alg.format(&rhs)
                )));
            }
            continue;
        }
        if rhs.is_zero() {
            continue;
        }
        let n = gen.degree as i64 + q as i64;
        let p = gen.lower as i64 - s as i64;
        let found = if n < 0 || p < 0 {
            None
        } else {
            let basis = alg.basis_where(n as u32, p as u32..=p as u32, |_| true)?;
            let mut ech: Echelon<_, F> = Echelon::new();
            for (k, m) in basis.iter().enumerate() {
                let dm = alg.apply_unchecked(d, &Polynomial::term(m.clone(), F::one()));
                ech.insert_indexed(sparse(&dm), k);
            }
            ech.solve(sparse(&rhs)).map(|combo| {
                let mut v = Polynomial::zero();
                for (k, c) in combo {
                    v.add_term(basis[k].clone(), c);
                }
                v
            })
        };
        match found {
            Some(v) => out.set(g, v),
            None => {
                return Err(Error::Precondition(format!(
                    "theta does not extend over `{}`: {} is not a boundary",
                    gen.name,
                    alg.format(&rhs)
                )))
            }
        }
    }
    Ok(out)
}

impl<F: Scalar> AlgebraDocument<F> {
    /// Parses and realizes once, so that completion and the extension of
    /// `theta` are known to succeed at the declared degrees.
    pub fn load(text: &str) -> Result<Self> {
        super::parse(text)?.validated()
    }

    /// [`AlgebraDocument::load`] for the JSON form.
    pub fn load_json(text: &str) -> Result<Self> {
        super::json::from_json(text)?.validated()
    }

    fn validated(self) -> Result<Self> {
        self.realize(self.max_generator_degree().max(2) + 1)?;
        Ok(self)
    }

    /// Cohomology through `top`, with the CDGA its representatives live
    /// in. A completed document is read off its seeds: completion adds no
    /// generators of lower degree 0 or 1, so `H_0` is already determined.
    pub fn cohomology(&self, top: u32) -> Result<(Cdga<F>, Presentation<F>)> {
        if self.fibration.is_none() && self.section.complete {
            let (alg, d) = section_algebra(&self.section, top + 2)?;
            let seeds = Cdga::new(alg, d);
            if seeds.check_differential(LowerGrading::Bigraded).is_ok() {
                let p = bigraded_presentation(&seeds.algebra, &seeds.differential, top)?;
                return Ok((seeds, p));
            }
        }
        let c = self.realize(top)?;
        let p = if has_lower_grading(&c.algebra)
            && c.check_differential(LowerGrading::Bigraded).is_ok()
        {
            bigraded_presentation(&c.algebra, &c.differential, top)?
        } else {
            presentation(&c, top)?
        };
        Ok((c, p))
    }

    pub fn max_generator_degree(&self) -> u32 {
        self.declared().map(|g| g.degree).max().unwrap_or(0)
    }

    /// The document as a CDGA with cap `top + 2`, agreeing with the
    /// document's model through degree `top + 1`. Base generators come
    /// first in a fibration.
    pub fn realize(&self, top: u32) -> Result<Cdga<F>> {
        let Some(fib) = &self.fibration else {
            let c = realize_section(&self.section, top)?;
            check(&c)?;
            return Ok(c);
        };
        let (base_alg, base_d) = section_algebra(&fib.base, top + 2)?;
        let fiber = realize_section(&self.section, top)?;
        let declared = self.section.generators.len();

        let q = 1 - base_alg.degree_of(&fib.via).unwrap_or(1) as i32;
        let shift = fib
            .theta
            .iter()
            .flat_map(|(x, v)| v.iter().map(move |(m, _)| (*x, m)))
            .map(|(x, m)| {
                fiber.algebra.generator(x).lower as i32 - fiber.algebra.monomial_lower(m) as i32
            })
            .next()
            .unwrap_or(0);
        let mut theta = Derivation::new(q, shift);
        for (x, v) in &fib.theta {
            theta.set(*x, v.clone());
        }
        let theta = if fib.via.is_zero() {
            theta
        } else {
            extend_theta(
                &fiber.algebra,
                &fiber.differential,
                &theta,
                declared,
                top + 1,
            )?
        };

        let base_len = base_alg.len();
        let mut gens: Vec<Generator> = base_alg.generators().to_vec();
        gens.extend(fiber.algebra.generators().iter().cloned());
        let alg = FreeCga::new(gens, top + 2)?;
        let mut d = Derivation::new(1, 1);
        for (g, v) in base_d.values() {
            d.set(*g, v.clone());
        }
        let up = |h: usize| h + base_len;
        for x in 0..fiber.algebra.len() {
            let mut v = fiber.differential.value(x).remap(up);
            if let Some(t) = fib.twist.get(&x) {
                v += t;
            }
            if let Some(t) = theta.get(x) {
                v += &alg.mul(&fib.via, &t.remap(up));
            }
            d.set(up(x), v);
        }
        let c = Cdga::new(alg, d);
        check(&c)?;
        Ok(c)
    }
}

fn check<F: Scalar>(c: &Cdga<F>) -> Result<()> {
    let grading = if has_lower_grading(&c.algebra) {
        LowerGrading::Filtered
    } else {
        LowerGrading::Ignored
    };
    c.check_differential(grading)
        .map_err(|v| v.into_error(&c.algebra))
}

impl<F: Scalar> ModelSource<F> for AlgebraDocument<F> {
    fn realize(&self, top: u32) -> Result<Cdga<F>> {
        AlgebraDocument::realize(self, top)
    }

    fn min_generator_degree(&self) -> u32 {
        self.declared().map(|g| g.degree).min().unwrap_or(2)
    }
}
