use std::collections::HashMap;
use std::ops::RangeInclusive;

use super::monomial::{multiply_monomials, Monomial};
use super::polynomial::Polynomial;
use crate::error::{Error, Result};
use crate::scalar::{format_rational, Scalar};

/// A generator of a free graded-commutative algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    /// Lower degree of a bigraded model; zero for plain algebras.
    pub lower: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Generator {
            name: name.into(),
            degree,
            lower: 0,
        }
    }

    pub fn with_lower(name: impl Into<String>, degree: u32, lower: u32) -> Self {
        Generator {
            name: name.into(),
            degree,
            lower,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// The free graded-commutative algebra on an ordered list of generators,
/// with a mandatory degree cap.
///
/// Generator order is declaration order; monomials are sorted by it. Basis
/// requests above the cap are rejected rather than truncated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeCga {
    gens: Vec<Generator>,
    odd: Vec<bool>,
    by_name: HashMap<String, usize>,
    cap: u32,
}

impl FreeCga {
    pub fn new(gens: Vec<Generator>, cap: u32) -> Result<Self> {
        let mut alg = FreeCga {
            gens: Vec::new(),
            odd: Vec::new(),
            by_name: HashMap::new(),
            cap,
        };
        for g in gens {
            alg.push_generator(g)?;
        }
        Ok(alg)
    }

    pub fn push_generator(&mut self, g: Generator) -> Result<usize> {
        if g.degree < 2 {
            return Err(Error::DegreeTooSmall {
                name: g.name,
                degree: g.degree,
            });
        }
        if self.by_name.contains_key(&g.name) {
            return Err(Error::DuplicateGenerator(g.name));
        }
        let i = self.gens.len();
        self.by_name.insert(g.name.clone(), i);
        self.odd.push(g.is_odd());
        self.gens.push(g);
        Ok(i)
    }

    /// A name based on `stem` that is not yet taken.
    pub fn fresh_name(&self, stem: &str) -> String {
        let mut name = stem.to_string();
        while self.by_name.contains_key(&name) {
            name.push('\'');
        }
        name
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn set_cap(&mut self, cap: u32) {
        self.cap = cap;
    }

    pub fn with_cap(mut self, cap: u32) -> Self {
        self.cap = cap;
        self
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn parities(&self) -> &[bool] {
        &self.odd
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.odd[i]
    }

    pub fn max_generator_degree(&self) -> u32 {
        self.gens.iter().map(|g| g.degree).max().unwrap_or(0)
    }

    pub fn set_lower(&mut self, i: usize, lower: u32) {
        self.gens[i].lower = lower;
    }

    /// Restricts to the generators selected by `keep`, returning the new
    /// algebra and the old-to-new index map.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> (FreeCga, Vec<Option<usize>>) {
        let mut map = vec![None; self.len()];
        let mut gens = Vec::new();
        for (i, g) in self.gens.iter().enumerate() {
            if keep(i) {
                map[i] = Some(gens.len());
                gens.push(g.clone());
            }
        }
        let alg = FreeCga::new(gens, self.cap).expect("sub-list of a valid algebra is valid");
        (alg, map)
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.weighted_sum(|g| self.gens[g].degree)
    }

    pub fn monomial_lower(&self, m: &Monomial) -> u32 {
        m.weighted_sum(|g| self.gens[g].lower)
    }

    pub fn is_odd_monomial(&self, m: &Monomial) -> bool {
        m.factors()
            .iter()
            .filter(|f| self.odd[f.0 as usize])
            .count()
            % 2
            == 1
    }

    /// The common degree of all terms, `None` for zero or inhomogeneous input.
    pub fn degree_of<F: Scalar>(&self, p: &Polynomial<F>) -> Option<u32> {
        let mut it = p.iter().map(|(m, _)| self.monomial_degree(m));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn max_degree<F: Scalar>(&self, p: &Polynomial<F>) -> u32 {
        p.iter()
            .map(|(m, _)| self.monomial_degree(m))
            .max()
            .unwrap_or(0)
    }

    /// The range of lower degrees appearing in `p`.
    pub fn lower_range<F: Scalar>(&self, p: &Polynomial<F>) -> Option<(u32, u32)> {
        let mut it = p.iter().map(|(m, _)| self.monomial_lower(m));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), l| (lo.min(l), hi.max(l))))
    }

    /// The part of `p` of lower degree exactly `lower`.
    pub fn lower_part<F: Scalar>(&self, p: &Polynomial<F>, lower: u32) -> Polynomial<F> {
        p.filter(|m| self.monomial_lower(m) == lower)
    }

    fn check_membership<F: Scalar>(&self, p: &Polynomial<F>) -> Result<()> {
        for (m, _) in p.iter() {
            if let Some(g) = m.generators().find(|&g| g >= self.len()) {
                return Err(Error::ForeignGenerator(g));
            }
        }
        Ok(())
    }

    /// The graded-commutative product, rejecting generators foreign to
    /// this algebra.
    pub fn multiply<F: Scalar>(
        &self,
        p: &Polynomial<F>,
        q: &Polynomial<F>,
    ) -> Result<Polynomial<F>> {
        self.check_membership(p)?;
        self.check_membership(q)?;
        Ok(self.mul(p, q))
    }

    /// The product without membership checks.
    pub fn mul<F: Scalar>(&self, p: &Polynomial<F>, q: &Polynomial<F>) -> Polynomial<F> {
        let mut out = Polynomial::zero();
        for (a, x) in p.iter() {
            for (b, y) in q.iter() {
                if let Some((m, neg)) = multiply_monomials(a, b, &self.odd) {
                    let c = x.mul_ref(y);
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// Product of a monomial with a polynomial on the left.
    pub fn mul_monomial_left<F: Scalar>(
        &self,
        m: &Monomial,
        c: &F,
        q: &Polynomial<F>,
    ) -> Polynomial<F> {
        let mut out = Polynomial::zero();
        for (b, y) in q.iter() {
            if let Some((prod, neg)) = multiply_monomials(m, b, &self.odd) {
                let v = c.mul_ref(y);
                out.add_term(prod, if neg { -v } else { v });
            }
        }
        out
    }

    pub fn pow<F: Scalar>(&self, p: &Polynomial<F>, e: u32) -> Polynomial<F> {
        let mut out = Polynomial::one();
        for _ in 0..e {
            out = self.mul(&out, p);
        }
        out
    }

    /// Monomials of total degree `n` whose lower degree is at most
    /// `max_lower`, in descending lexicographic order of exponent vectors.
    pub fn monomial_basis(&self, n: u32, max_lower: Option<u32>) -> Result<Vec<Monomial>> {
        self.basis_where(n, 0..=max_lower.unwrap_or(u32::MAX), |_| true)
    }

    /// Monomials of degree `n`, lower degree in `lower`, using only
    /// generators accepted by `allowed`.
    pub fn basis_where(
        &self,
        n: u32,
        lower: RangeInclusive<u32>,
        allowed: impl Fn(usize) -> bool,
    ) -> Result<Vec<Monomial>> {
        if n > self.cap {
            return Err(Error::DegreeOverCap {
                requested: n,
                cap: self.cap,
            });
        }
        Ok(self.basis_unchecked(n, lower, allowed))
    }

    pub(crate) fn basis_unchecked(
        &self,
        n: u32,
        lower: RangeInclusive<u32>,
        allowed: impl Fn(usize) -> bool,
    ) -> Vec<Monomial> {
        let cand: Vec<usize> = (0..self.len())
            .filter(|&i| self.gens[i].degree <= n && allowed(i))
            .collect();
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.enumerate(&cand, 0, n, 0, &lower, &mut cur, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate(
        &self,
        cand: &[usize],
        start: usize,
        remaining: u32,
        low: u32,
        lower: &RangeInclusive<u32>,
        cur: &mut Vec<(u32, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        if remaining == 0 {
            if lower.contains(&low) {
                out.push(Monomial::from_sorted(cur.clone()));
            }
            return;
        }
        for (k, &i) in cand.iter().enumerate().skip(start) {
            let g = &self.gens[i];
            if g.degree > remaining {
                continue;
            }
            let max_e = if g.is_odd() { 1 } else { remaining / g.degree };
            for e in (1..=max_e).rev() {
                let l = low + e * g.lower;
                if l > *lower.end() {
                    continue;
                }
                cur.push((i as u32, e));
                self.enumerate(cand, k + 1, remaining - e * g.degree, l, lower, cur, out);
                cur.pop();
            }
        }
    }

    /// Renders a monomial as `a^2*b`.
    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        m.factors()
            .iter()
            .map(|&(g, e)| {
                let name = &self.gens[g as usize].name;
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Renders a polynomial in the input syntax, e.g. `a*b - 1/2*u^2`.
    pub fn format<F: Scalar>(&self, p: &Polynomial<F>) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        let mut terms: Vec<_> = p.iter().collect();
        terms.sort_by(|a, b| b.0.lex_cmp(a.0));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = format_rational(c).starts_with('-');
            let abs = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.format_monomial(m);
            if abs.is_one() {
                s.push_str(&mono);
            } else if m.is_one() {
                s.push_str(&format_rational(&abs));
            } else {
                s.push_str(&format!("{}*{}", format_rational(&abs), mono));
            }
        }
        s
    }
}
