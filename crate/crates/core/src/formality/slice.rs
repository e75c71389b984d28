use std::collections::BTreeMap;

use crate::algebra::{Derivation, FreeCga, Monomial, Polynomial};
use crate::linalg::{Echelon, ScalarMatrix, SparseVec};
use crate::scalar::Scalar;
use crate::Q;

/// A basis element of a derivation slice: the generator and the monomial
/// it is sent to.
pub type SliceBasis = (usize, Monomial);

/// Which generators a slice is built over.
///
/// Derivations are defined on `unknowns` of degree at most `top + reach`,
/// and `𝒟θ` is recorded on `rows` of degree at most `top`. The value on
/// `v` is a polynomial in the generators `h` with `values(v, h)`.
pub(crate) struct Shape<'a> {
    pub top: u32,
    pub reach: u32,
    pub unknowns: &'a dyn Fn(usize) -> bool,
    pub rows: &'a dyn Fn(usize) -> bool,
    pub values: &'a dyn Fn(usize, usize) -> bool,
}

impl Shape<'_> {
    pub fn full(top: u32) -> Shape<'static> {
        Shape {
            top,
            reach: 0,
            unknowns: &|_| true,
            rows: &|_| true,
            values: &|_, _| true,
        }
    }
}

/// `Der_p^q` of a bigraded algebra restricted to generators of degree at
/// most `top`, with the matrix of `𝒟θ = [d, θ]` into `Der_{p+1}^{q+1}`.
#[derive(Clone, Debug)]
pub struct DerivationSlice<F = Q> {
    pub p: u32,
    pub q: i32,
    pub top: u32,
    pub source: Vec<SliceBasis>,
    pub target: Vec<SliceBasis>,
    columns: Vec<SparseVec<SliceBasis, F>>,
}

fn basis_of(
    alg: &FreeCga,
    p: u32,
    q: i32,
    top: u32,
    gens: &dyn Fn(usize) -> bool,
    values: &dyn Fn(usize, usize) -> bool,
) -> Vec<SliceBasis> {
    let mut out = Vec::new();
    for g in 0..alg.len() {
        let gen = alg.generator(g);
        if !gens(g) || gen.degree > top || gen.lower < p {
            continue;
        }
        let degree = gen.degree as i64 + q as i64;
        if degree < 0 {
            continue;
        }
        let lower = gen.lower - p;
        for m in alg.basis_unchecked(degree as u32, lower..=lower, |h| values(g, h)) {
            out.push((g, m));
        }
    }
    out
}

/// For every generator, the row generators whose differential involves it.
fn users<F: Scalar>(alg: &FreeCga, d: &Derivation<F>, shape: &Shape) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); alg.len()];
    for u in 0..alg.len() {
        if !(shape.rows)(u) || alg.generator(u).degree > shape.top {
            continue;
        }
        let mut seen: Vec<usize> = d
            .value(u)
            .iter()
            .flat_map(|(m, _)| m.generators())
            .collect();
        seen.sort_unstable();
        seen.dedup();
        for v in seen {
            out[v].push(u);
        }
    }
    out
}

/// `[d, θ]` on the given rows, keyed by `(row, monomial)`.
pub(crate) fn bracket_on_rows<F: Scalar>(
    alg: &FreeCga,
    d: &Derivation<F>,
    theta: &Derivation<F>,
    rows: impl IntoIterator<Item = usize>,
) -> SparseVec<SliceBasis, F> {
    let mut out = BTreeMap::new();
    for (u, v) in alg.bracket(d, theta, rows).values() {
        for (m, c) in v.iter() {
            out.insert((*u, m.clone()), c.clone());
        }
    }
    out
}

/// A derivation as a vector keyed by `(generator, monomial)`, on `rows`.
pub(crate) fn as_vector<F: Scalar>(
    theta: &Derivation<F>,
    rows: impl Fn(usize) -> bool,
) -> SparseVec<SliceBasis, F> {
    let mut out = BTreeMap::new();
    for (u, v) in theta.values() {
        if rows(*u) {
            for (m, c) in v.iter() {
                out.insert((*u, m.clone()), c.clone());
            }
        }
    }
    out
}

pub(crate) fn slice_with<F: Scalar>(
    alg: &FreeCga,
    d: &Derivation<F>,
    p: u32,
    q: i32,
    shape: &Shape,
) -> DerivationSlice<F> {
    let source = basis_of(
        alg,
        p,
        q,
        shape.top + shape.reach,
        shape.unknowns,
        shape.values,
    );
    let target = basis_of(alg, p + 1, q + 1, shape.top, shape.rows, shape.values);
    let users = users(alg, d, shape);
    let columns = source
        .iter()
        .map(|(v, m)| {
            let theta =
                Derivation::new(q, p as i32).with(*v, Polynomial::term(m.clone(), F::one()));
            let mut rows = users[*v].clone();
            if (shape.rows)(*v) && !rows.contains(v) {
                rows.push(*v);
            }
            bracket_on_rows(alg, d, &theta, rows)
        })
        .collect();
    DerivationSlice {
        p,
        q,
        top: shape.top,
        source,
        target,
        columns,
    }
}

/// The slice `Der_p^q` on generators of degree at most `top`.
pub fn derivation_slice<F: Scalar>(
    alg: &FreeCga,
    d: &Derivation<F>,
    p: u32,
    q: i32,
    top: u32,
) -> DerivationSlice<F> {
    slice_with(alg, d, p, q, &Shape::full(top))
}

impl<F: Scalar> DerivationSlice<F> {
    /// The derivation with the given coordinates in the source basis.
    pub fn derivation(&self, coords: impl IntoIterator<Item = (usize, F)>) -> Derivation<F> {
        let mut values: BTreeMap<usize, Polynomial<F>> = BTreeMap::new();
        for (k, c) in coords {
            let (g, m) = &self.source[k];
            values.entry(*g).or_default().add_term(m.clone(), c);
        }
        let mut out = Derivation::new(self.q, self.p as i32);
        for (g, v) in values {
            out.set(g, v);
        }
        out
    }

    /// `𝒟` applied to the `k`-th basis derivation.
    pub fn image(&self, k: usize) -> &SparseVec<SliceBasis, F> {
        &self.columns[k]
    }

    /// The dense matrix of `𝒟`, rows indexed by `target`.
    pub fn matrix(&self) -> ScalarMatrix<F> {
        let index: BTreeMap<&SliceBasis, usize> = self
            .target
            .iter()
            .enumerate()
            .map(|(i, b)| (b, i))
            .collect();
        let cols: Vec<Vec<F>> = self
            .columns
            .iter()
            .map(|col| {
                let mut v = vec![F::zero(); self.target.len()];
                for (key, c) in col {
                    let i = index[key];
                    v[i] = c.clone();
                }
                v
            })
            .collect();
        ScalarMatrix::from_columns(self.target.len(), &cols)
    }

    /// Coordinates of `theta` in the target basis, or `None` if it has a
    /// component outside the slice.
    pub fn target_coordinates(&self, theta: &SparseVec<SliceBasis, F>) -> Option<Vec<F>> {
        let index: BTreeMap<&SliceBasis, usize> = self
            .target
            .iter()
            .enumerate()
            .map(|(i, b)| (b, i))
            .collect();
        let mut v = vec![F::zero(); self.target.len()];
        for (key, c) in theta {
            v[*index.get(key)?] = c.clone();
        }
        Some(v)
    }

    /// A preimage of `theta` under `𝒟`, if one exists.
    pub fn solve(&self, theta: &SparseVec<SliceBasis, F>) -> Option<Derivation<F>> {
        if theta.is_empty() {
            return Some(Derivation::new(self.q, self.p as i32));
        }
        let mut ech: Echelon<SliceBasis, F> = Echelon::new();
        for (k, col) in self.columns.iter().enumerate() {
            ech.insert_indexed(col.clone(), k);
        }
        ech.solve(theta.clone()).map(|combo| self.derivation(combo))
    }
}
