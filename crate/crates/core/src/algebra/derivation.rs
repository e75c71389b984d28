use std::collections::BTreeMap;

use super::free_cga::FreeCga;
use super::monomial::{multiply_monomials, Monomial};
use super::polynomial::Polynomial;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::Q;

/// A derivation of a free algebra, determined by its values on generators.
///
/// `degree` is the shift `q` of total degree; `lower_shift` is the amount
/// `p` by which lower degree drops. Generators without an entry map to 0.
/// Values may live in a larger algebra than the domain (a module over it),
/// as long as both share a generator numbering.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation<F = Q> {
    pub degree: i32,
    pub lower_shift: i32,
    values: BTreeMap<usize, Polynomial<F>>,
}

impl<F: Scalar> Derivation<F> {
    pub fn new(degree: i32, lower_shift: i32) -> Self {
        Derivation {
            degree,
            lower_shift,
            values: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, g: usize, value: Polynomial<F>) {
        if value.is_zero() {
            self.values.remove(&g);
        } else {
            self.values.insert(g, value);
        }
    }

    pub fn with(mut self, g: usize, value: Polynomial<F>) -> Self {
        self.set(g, value);
        self
    }

    pub fn get(&self, g: usize) -> Option<&Polynomial<F>> {
        self.values.get(&g)
    }

    pub fn value(&self, g: usize) -> Polynomial<F> {
        self.values.get(&g).cloned().unwrap_or_default()
    }

    pub fn values(&self) -> &BTreeMap<usize, Polynomial<F>> {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn add_scaled(&mut self, c: &F, other: &Derivation<F>) {
        for (g, v) in &other.values {
            let mut cur = self.value(*g);
            cur.add_scaled(c, v);
            self.set(*g, cur);
        }
    }

    pub fn scaled(&self, c: &F) -> Derivation<F> {
        let mut out = Derivation::new(self.degree, self.lower_shift);
        for (g, v) in &self.values {
            out.set(*g, v.scaled(c));
        }
        out
    }

    /// Keeps the values on generators accepted by `keep`.
    pub fn restricted(&self, keep: impl Fn(usize) -> bool) -> Derivation<F> {
        Derivation {
            degree: self.degree,
            lower_shift: self.lower_shift,
            values: self
                .values
                .iter()
                .filter(|(g, _)| keep(**g))
                .map(|(g, v)| (*g, v.clone()))
                .collect(),
        }
    }

    /// Relabels generators (keys and values) through an increasing map.
    pub fn remap(&self, map: impl Fn(usize) -> usize + Copy) -> Derivation<F> {
        Derivation {
            degree: self.degree,
            lower_shift: self.lower_shift,
            values: self
                .values
                .iter()
                .map(|(g, v)| (map(*g), v.remap(map)))
                .collect(),
        }
    }
}

impl FreeCga {
    /// Applies a derivation with the graded Leibniz rule, rejecting results
    /// whose degree would exceed the cap.
    pub fn apply<F: Scalar>(
        &self,
        theta: &Derivation<F>,
        p: &Polynomial<F>,
    ) -> Result<Polynomial<F>> {
        if let Some((m, _)) = p
            .iter()
            .find(|(m, _)| m.generators().any(|g| g >= self.len()))
        {
            let g = m
                .generators()
                .find(|&g| g >= self.len())
                .unwrap_or_default();
            return Err(Error::ForeignGenerator(g));
        }
        let top = self.max_degree(p) as i64 + theta.degree as i64;
        if !p.is_zero() && top > self.cap() as i64 {
            return Err(Error::DegreeOverCap {
                requested: top.max(0) as u32,
                cap: self.cap(),
            });
        }
        Ok(self.apply_unchecked(theta, p))
    }

    /// Applies a derivation without cap or membership checks.
    pub fn apply_unchecked<F: Scalar>(
        &self,
        theta: &Derivation<F>,
        p: &Polynomial<F>,
    ) -> Polynomial<F> {
        let mut out = Polynomial::zero();
        for (m, c) in p.iter() {
            self.apply_monomial_into(theta, m, c, &mut out);
        }
        out
    }

    /// Adds `c * theta(m)` into `out`.
    pub fn apply_monomial_into<F: Scalar>(
        &self,
        theta: &Derivation<F>,
        m: &Monomial,
        c: &F,
        out: &mut Polynomial<F>,
    ) {
        let odd_shift = theta.degree.rem_euclid(2) == 1;
        let odd = self.parities();
        let mut prefix_odd = false;
        for j in 0..m.factors().len() {
            let (g, e) = m.factors()[j];
            if let Some(value) = theta.get(g as usize) {
                let (prefix, _, suffix) = m.split_at_factor(j);
                let mut rest = Vec::with_capacity(suffix.factors().len() + 1);
                if e > 1 {
                    rest.push((g, e - 1));
                }
                rest.extend_from_slice(suffix.factors());
                let rest = Monomial::from_sorted(rest);
                let mut coef = c.mul_ref(&F::from_i64(e as i64));
                if odd_shift && prefix_odd {
                    coef = -coef;
                }
                for (t, tc) in value.iter() {
                    let Some((pt, n1)) = multiply_monomials(&prefix, t, odd) else {
                        continue;
                    };
                    let Some((full, n2)) = multiply_monomials(&pt, &rest, odd) else {
                        continue;
                    };
                    let v = coef.mul_ref(tc);
                    out.add_term(full, if n1 != n2 { -v } else { v });
                }
            }
            if odd[g as usize] {
                prefix_odd = !prefix_odd;
            }
        }
    }

    /// The graded commutator `[delta, theta] = delta theta - (-1)^{|delta||theta|} theta delta`,
    /// evaluated on the generators in `domain`.
    pub fn bracket<F: Scalar>(
        &self,
        delta: &Derivation<F>,
        theta: &Derivation<F>,
        domain: impl IntoIterator<Item = usize>,
    ) -> Derivation<F> {
        let sign_negative = (delta.degree * theta.degree).rem_euclid(2) == 0;
        let mut out = Derivation::new(
            delta.degree + theta.degree,
            delta.lower_shift + theta.lower_shift,
        );
        for g in domain {
            let mut v = self.apply_unchecked(delta, &theta.value(g));
            let w = self.apply_unchecked(theta, &delta.value(g));
            if sign_negative {
                v -= &w;
            } else {
                v += &w;
            }
            out.set(g, v);
        }
        out
    }

    /// Checked bracket: both derivations must be defined on this algebra.
    pub fn derivation_bracket<F: Scalar>(
        &self,
        delta: &Derivation<F>,
        theta: &Derivation<F>,
    ) -> Result<Derivation<F>> {
        for d in [delta, theta] {
            if let Some(g) = d.values().keys().find(|&&g| g >= self.len()) {
                return Err(Error::IncompatibleDerivations(format!(
                    "value on generator index {g} outside an algebra of {} generators",
                    self.len()
                )));
            }
        }
        Ok(self.bracket(delta, theta, 0..self.len()))
    }

    /// `exp(s * mu)(p)` for a degree-zero derivation `mu` that strictly
    /// lowers lower degree, so that the series is finite.
    pub fn exp_apply<F: Scalar>(
        &self,
        mu: &Derivation<F>,
        p: &Polynomial<F>,
        negate: bool,
    ) -> Polynomial<F> {
        debug_assert_eq!(mu.degree, 0);
        debug_assert!(mu.lower_shift > 0);
        let mut out = p.clone();
        let mut term = p.clone();
        let mut k = 1i64;
        loop {
            term = self.apply_unchecked(mu, &term);
            if term.is_zero() {
                break;
            }
            let mut scale = F::one().div_ref(&F::from_i64(k));
            if negate {
                scale = -scale;
            }
            term = term.scaled(&scale);
            out += &term;
            k += 1;
        }
        out
    }

    /// Applies the algebra map sending generator `g` to `images(g)`.
    pub fn substitute<F: Scalar>(
        &self,
        target: &FreeCga,
        p: &Polynomial<F>,
        images: impl Fn(usize) -> Polynomial<F>,
    ) -> Polynomial<F> {
        let mut out = Polynomial::zero();
        let mut cache: BTreeMap<usize, Polynomial<F>> = BTreeMap::new();
        for (m, c) in p.iter() {
            let mut prod = Polynomial::constant(c.clone());
            for &(g, e) in m.factors() {
                let img = cache
                    .entry(g as usize)
                    .or_insert_with(|| images(g as usize));
                for _ in 0..e {
                    prod = target.mul(&prod, img);
                }
                if prod.is_zero() {
                    break;
                }
            }
            out += &prod;
        }
        out
    }
}

impl<F: Scalar> Derivation<F> {
    /// `true` when every stored value is zero.
    pub fn vanishes(&self) -> bool {
        self.values.values().all(|v| v.is_zero())
    }
}

impl<F: Scalar> std::ops::Add for Derivation<F> {
    type Output = Derivation<F>;
    fn add(mut self, rhs: Derivation<F>) -> Derivation<F> {
        self.add_scaled(&F::one(), &rhs);
        self
    }
}
