use std::collections::BTreeMap;

use crate::linalg::{Echelon, Insert};
use crate::scalar::Scalar;
use crate::Q;

/// A connected graded-commutative algebra truncated at a degree cap,
/// stored as degreewise bases and structure constants.
///
/// Elements of degree `n` are coordinate vectors over `labels(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedAlgebra<F = Q> {
    cap: u32,
    labels: Vec<Vec<String>>,
    /// `products[(i, j)][a * dim(j) + b]` is the product of basis class `a`
    /// in degree `i` with basis class `b` in degree `j`.
    products: BTreeMap<(u32, u32), Vec<Vec<F>>>,
    generators: Vec<(u32, usize)>,
}

impl<F: Scalar> GradedAlgebra<F> {
    /// Builds the algebra from bases and products in positive degrees. The
    /// unit spans degree zero; missing product entries are zero.
    pub fn new(
        cap: u32,
        mut labels: Vec<Vec<String>>,
        products: BTreeMap<(u32, u32), Vec<Vec<F>>>,
    ) -> Self {
        labels.resize(cap as usize + 1, Vec::new());
        if labels[0].is_empty() {
            labels[0] = vec!["1".to_string()];
        }
        let mut h = GradedAlgebra {
            cap,
            labels,
            products,
            generators: Vec::new(),
        };
        h.generators = h.indecomposables();
        h
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn dim(&self, n: u32) -> usize {
        self.labels.get(n as usize).map_or(0, Vec::len)
    }

    pub fn labels(&self, n: u32) -> &[String] {
        self.labels.get(n as usize).map_or(&[], Vec::as_slice)
    }

    pub fn betti(&self) -> Vec<usize> {
        (0..=self.cap).map(|n| self.dim(n)).collect()
    }

    pub fn top_degree(&self) -> u32 {
        (0..=self.cap).rev().find(|&n| self.dim(n) > 0).unwrap_or(0)
    }

    /// Indecomposable basis classes, as `(degree, index)`.
    pub fn generators(&self) -> &[(u32, usize)] {
        &self.generators
    }

    pub fn max_generator_degree(&self) -> u32 {
        self.generators.iter().map(|g| g.0).max().unwrap_or(0)
    }

    pub fn unit(&self) -> Vec<F> {
        vec![F::one()]
    }

    pub fn basis_vector(&self, n: u32, k: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim(n)];
        v[k] = F::one();
        v
    }

    /// The product of basis classes, `None` beyond the cap.
    pub fn basis_product(&self, i: u32, a: usize, j: u32, b: usize) -> Option<Vec<F>> {
        if i + j > self.cap {
            return None;
        }
        if i == 0 {
            return Some(self.basis_vector(j, b));
        }
        if j == 0 {
            return Some(self.basis_vector(i, a));
        }
        let dim = self.dim(i + j);
        Some(
            self.products
                .get(&(i, j))
                .and_then(|t| t.get(a * self.dim(j) + b))
                .cloned()
                .unwrap_or_else(|| vec![F::zero(); dim]),
        )
    }

    /// The product of two homogeneous elements, `None` beyond the cap.
    pub fn product(&self, i: u32, x: &[F], j: u32, y: &[F]) -> Option<Vec<F>> {
        if i + j > self.cap {
            return None;
        }
        let mut out = vec![F::zero(); self.dim(i + j)];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let c = xa.mul_ref(yb);
                let p = self.basis_product(i, a, j, b)?;
                for (o, v) in out.iter_mut().zip(&p) {
                    if !v.is_zero() {
                        *o = o.add_ref(&c.mul_ref(v));
                    }
                }
            }
        }
        Some(out)
    }

    fn indecomposables(&self) -> Vec<(u32, usize)> {
        let mut gens = Vec::new();
        for n in 1..=self.cap {
            let dim = self.dim(n);
            if dim == 0 {
                continue;
            }
            let mut ech: Echelon<usize, F> = Echelon::new();
            for i in 1..n {
                let j = n - i;
                for a in 0..self.dim(i) {
                    for b in 0..self.dim(j) {
                        let p = self.basis_product(i, a, j, b).unwrap_or_default();
                        ech.insert_untagged(to_sparse(&p));
                    }
                }
            }
            for k in 0..dim {
                let e = to_sparse(&self.basis_vector(n, k));
                if let Insert::Independent = ech.insert(e, Default::default()) {
                    gens.push((n, k));
                }
            }
        }
        gens
    }

    /// Checks graded commutativity on all basis pairs within the cap.
    pub fn check_commutative(&self) -> Result<(), String> {
        for i in 1..=self.cap {
            for j in 1..=self.cap - i {
                for a in 0..self.dim(i) {
                    for b in 0..self.dim(j) {
                        let ab = self.basis_product(i, a, j, b).unwrap_or_default();
                        let mut ba = self.basis_product(j, b, i, a).unwrap_or_default();
                        if (i * j) % 2 == 1 {
                            ba = ba.into_iter().map(|x| -x).collect();
                        }
                        if ab != ba {
                            return Err(format!("classes ({i},{a}) and ({j},{b}) do not commute"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks associativity on all basis triples within the cap.
    pub fn check_associative(&self) -> Result<(), String> {
        for i in 1..=self.cap {
            for j in 1..=self.cap - i {
                for k in 1..=self.cap - i - j {
                    for a in 0..self.dim(i) {
                        for b in 0..self.dim(j) {
                            for c in 0..self.dim(k) {
                                let ab = self.basis_product(i, a, j, b).unwrap_or_default();
                                let left = self
                                    .product(i + j, &ab, k, &self.basis_vector(k, c))
                                    .unwrap_or_default();
                                let bc = self.basis_product(j, b, k, c).unwrap_or_default();
                                let right = self
                                    .product(i, &self.basis_vector(i, a), j + k, &bc)
                                    .unwrap_or_default();
                                if left != right {
                                    return Err(format!(
                                        "triple ({i},{a}), ({j},{b}), ({k},{c}) is not associative"
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn products(&self) -> &BTreeMap<(u32, u32), Vec<Vec<F>>> {
        &self.products
    }
}

pub(crate) fn to_sparse<F: Scalar>(v: &[F]) -> BTreeMap<usize, F> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub(crate) fn to_dense<F: Scalar>(v: &BTreeMap<usize, F>, len: usize) -> Vec<F> {
    let mut out = vec![F::zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}
