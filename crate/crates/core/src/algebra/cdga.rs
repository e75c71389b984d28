use std::collections::BTreeMap;

use super::derivation::Derivation;
use super::free_cga::FreeCga;
use super::polynomial::Polynomial;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::Q;

/// How strictly a differential must respect the lower grading.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LowerGrading {
    /// No condition on lower degrees.
    Ignored,
    /// Every generator value drops lower degree by exactly one.
    Bigraded,
    /// Every term of every value drops lower degree by at least one.
    Filtered,
}

/// A free CDGA `(ΛV, d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cdga<F = Q> {
    pub algebra: FreeCga,
    pub differential: Derivation<F>,
}

/// The first failure found by [`Cdga::check_differential`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation<F = Q> {
    NotClosed {
        generator: String,
        residue: Polynomial<F>,
    },
    WrongDegree {
        generator: String,
        expected: u32,
    },
    LowerShift {
        generator: String,
    },
}

impl<F: Scalar> Violation<F> {
    pub fn into_error(self, alg: &FreeCga) -> Error {
        match self {
            Violation::NotClosed { generator, residue } => Error::NotADifferential {
                generator,
                residue: alg.format(&residue),
            },
            Violation::WrongDegree {
                generator,
                expected,
            } => Error::Inhomogeneous {
                generator,
                reason: format!("differential is not homogeneous of degree {expected}"),
            },
            Violation::LowerShift { generator } => Error::Inhomogeneous {
                generator,
                reason: "differential does not respect the lower grading".to_string(),
            },
        }
    }
}

impl<F: Scalar> Cdga<F> {
    pub fn new(algebra: FreeCga, differential: Derivation<F>) -> Self {
        Cdga {
            algebra,
            differential,
        }
    }

    /// The algebra with zero differential.
    pub fn zero_differential(algebra: FreeCga) -> Self {
        Cdga::new(algebra, Derivation::new(1, 1))
    }

    pub fn d(&self, p: &Polynomial<F>) -> Polynomial<F> {
        self.algebra.apply_unchecked(&self.differential, p)
    }

    pub fn d_checked(&self, p: &Polynomial<F>) -> Result<Polynomial<F>> {
        self.algebra.apply(&self.differential, p)
    }

    pub fn d_gen(&self, g: usize) -> Polynomial<F> {
        self.differential.value(g)
    }

    pub fn cap(&self) -> u32 {
        self.algebra.cap()
    }

    /// Verifies `d² = 0` and homogeneity on every generator whose `d²`
    /// lies within the cap, in generator order.
    pub fn check_differential(
        &self,
        grading: LowerGrading,
    ) -> std::result::Result<(), Violation<F>> {
        let alg = &self.algebra;
        for (i, g) in alg.generators().iter().enumerate() {
            if g.degree + 2 > alg.cap() {
                continue;
            }
            let dg = self.d_gen(i);
            let residue = self.d(&dg);
            if !residue.is_zero() {
                return Err(Violation::NotClosed {
                    generator: g.name.clone(),
                    residue,
                });
            }
            if dg
                .iter()
                .any(|(m, _)| alg.monomial_degree(m) != g.degree + 1)
            {
                return Err(Violation::WrongDegree {
                    generator: g.name.clone(),
                    expected: g.degree + 1,
                });
            }
            let ok = dg.iter().all(|(m, _)| {
                let l = alg.monomial_lower(m) as i64;
                let p = g.lower as i64;
                match grading {
                    LowerGrading::Ignored => true,
                    LowerGrading::Bigraded => l == p - 1,
                    LowerGrading::Filtered => l < p,
                }
            });
            if !ok {
                return Err(Violation::LowerShift {
                    generator: g.name.clone(),
                });
            }
        }
        Ok(())
    }

    /// The sub-CDGA on generators of degree at most `top`, if it is closed
    /// under the differential.
    pub fn truncate(&self, top: u32) -> Option<Cdga<F>> {
        let keep = |i: usize| self.algebra.generator(i).degree <= top;
        let (alg, map) = self.algebra.restrict(keep);
        let mut d = Derivation::new(self.differential.degree, self.differential.lower_shift);
        for (g, v) in self.differential.values() {
            let Some(ng) = map[*g] else { continue };
            if v.iter()
                .any(|(m, _)| m.generators().any(|h| map[h].is_none()))
            {
                return None;
            }
            d.set(ng, v.remap(|h| map[h].expect("checked above")));
        }
        Some(Cdga::new(alg, d))
    }

    /// The lower-shift-one part of the differential, `d` of `D = d + d_2 + …`.
    pub fn linear_lower_part(&self) -> Derivation<F> {
        let alg = &self.algebra;
        let mut d = Derivation::new(1, 1);
        for (g, v) in self.differential.values() {
            let p = alg.generator(*g).lower;
            if p >= 1 {
                d.set(*g, alg.lower_part(v, p - 1));
            }
        }
        d
    }
}

/// An algebra map between free algebras, given on generators.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraMap<F = Q> {
    pub images: BTreeMap<usize, Polynomial<F>>,
}

impl<F: Scalar> Default for AlgebraMap<F> {
    fn default() -> Self {
        AlgebraMap {
            images: BTreeMap::new(),
        }
    }
}

impl<F: Scalar> AlgebraMap<F> {
    pub fn identity(alg: &FreeCga) -> Self {
        AlgebraMap {
            images: (0..alg.len())
                .map(|g| (g, Polynomial::generator(g)))
                .collect(),
        }
    }

    pub fn image(&self, g: usize) -> Polynomial<F> {
        self.images.get(&g).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, g: usize, p: Polynomial<F>) {
        self.images.insert(g, p);
    }

    pub fn apply(&self, source: &FreeCga, target: &FreeCga, p: &Polynomial<F>) -> Polynomial<F> {
        source.substitute(target, p, |g| self.image(g))
    }

    /// Checks `φ ∘ d = d ∘ φ` on every source generator.
    pub fn check_chain_map(&self, source: &Cdga<F>, target: &Cdga<F>) -> Result<()> {
        for (g, gen) in source.algebra.generators().iter().enumerate() {
            let lhs = self.apply(&source.algebra, &target.algebra, &source.d_gen(g));
            let rhs = target.d(&self.image(g));
            if lhs != rhs {
                return Err(Error::NotChainMap(gen.name.clone()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Generator;

    #[test]
    fn swapped_differential_is_rejected_at_the_first_generator() {
        let alg = FreeCga::new(vec![Generator::new("x", 2), Generator::new("y", 3)], 10).unwrap();
        let d = Derivation::new(1, 0)
            .with(0, Polynomial::generator(1))
            .with(1, Polynomial::generator(0));
        let c = Cdga::<Q>::new(alg, d);
        match c.check_differential(LowerGrading::Ignored) {
            Err(Violation::NotClosed { generator, residue }) => {
                assert_eq!(generator, "x");
                assert_eq!(residue, Polynomial::generator(0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn truncation_keeps_closed_subalgebras() {
        let alg = FreeCga::new(vec![Generator::new("a", 2), Generator::new("x", 3)], 10).unwrap();
        let a2 = alg.pow(&Polynomial::<Q>::generator(0), 2);
        let c = Cdga::new(alg, Derivation::new(1, 0).with(1, a2));
        assert_eq!(c.truncate(2).unwrap().algebra.len(), 1);
        assert!(c.truncate(3).is_some());
    }
}
