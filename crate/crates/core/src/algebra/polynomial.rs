use std::collections::btree_map::{self, BTreeMap};
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use super::monomial::Monomial;
use crate::scalar::Scalar;
use crate::Q;

/// A finite linear combination of monomials with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial<F = Q> {
    terms: BTreeMap<Monomial, F>,
}

impl<F> Default for Polynomial<F> {
    fn default() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }
}

impl<F: Scalar> Polynomial<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(Monomial::one(), F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: F) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn generator(index: usize) -> Self {
        Self::term(Monomial::generator(index), F::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, F)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, F> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, F> {
        self.terms
    }

    pub fn iter(&self) -> btree_map::Iter<'_, Monomial, F> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add_ref(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &F, other: &Polynomial<F>) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(m.clone(), c.mul_ref(x));
        }
    }

    pub fn scaled(&self, c: &F) -> Polynomial<F> {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x.mul_ref(c)))
                .collect(),
        }
    }

    /// Keeps only the terms whose monomial satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Polynomial<F> {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Relabels generators through a strictly increasing map.
    pub fn remap(&self, map: impl Fn(usize) -> usize + Copy) -> Polynomial<F> {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.remap(map), c.clone()))
                .collect(),
        }
    }
}

impl<F: Scalar> AddAssign<&Polynomial<F>> for Polynomial<F> {
    fn add_assign(&mut self, rhs: &Polynomial<F>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<F: Scalar> SubAssign<&Polynomial<F>> for Polynomial<F> {
    fn sub_assign(&mut self, rhs: &Polynomial<F>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl<F: Scalar> Add for Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(mut self, rhs: Polynomial<F>) -> Polynomial<F> {
        self += &rhs;
        self
    }
}

impl<F: Scalar> Sub for Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(mut self, rhs: Polynomial<F>) -> Polynomial<F> {
        self -= &rhs;
        self
    }
}

impl<F: Scalar> Neg for Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        Polynomial {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<F: Scalar> FromIterator<(Monomial, F)> for Polynomial<F> {
    fn from_iter<I: IntoIterator<Item = (Monomial, F)>>(iter: I) -> Self {
        Self::from_terms(iter)
    }
}
