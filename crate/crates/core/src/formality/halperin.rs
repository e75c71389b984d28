use crate::algebra::{FreeCga, Generator, Monomial};
use crate::cohomology::{to_sparse, GradedAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, Insert, ScalarMatrix};
use crate::scalar::Scalar;
use crate::Q;

/// The derivations of `H` of one negative degree.
#[derive(Clone, Debug, PartialEq)]
pub struct NegativeDegree<F = Q> {
    pub q: i32,
    /// Each basis derivation lists, per indecomposable, the coordinates of
    /// its image in `H^{|v| + q}`.
    pub basis: Vec<Vec<Vec<F>>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NegativeDerivationReport<F = Q> {
    pub algebra: GradedAlgebra<F>,
    /// Indecomposable basis classes, as `(degree, index)`.
    pub generators: Vec<(u32, usize)>,
    pub degrees: Vec<NegativeDegree<F>>,
    /// No nonzero negative-degree derivation in any scanned degree.
    pub halperin: bool,
}

/// `H` presented as a quotient of the free algebra on its indecomposables.
struct Quotient<'a, F: Scalar> {
    h: &'a GradedAlgebra<F>,
    free: FreeCga,
    gens: Vec<(u32, usize)>,
}

impl<'a, F: Scalar> Quotient<'a, F> {
    fn new(h: &'a GradedAlgebra<F>, cap: u32) -> Result<Self> {
        let gens = h.generators().to_vec();
        let names = gens
            .iter()
            .map(|&(n, k)| Generator::new(format!("h{n}_{k}"), n))
            .collect();
        Ok(Quotient {
            h,
            free: FreeCga::new(names, cap)?,
            gens,
        })
    }

    /// Product in `H`, zero past the cap.
    fn mul(&self, i: u32, x: &[F], j: u32, y: &[F]) -> Vec<F> {
        self.h
            .product(i, x, j, y)
            .unwrap_or_else(|| vec![F::zero(); self.h.dim(i + j)])
    }

    /// The generator sequence of a monomial, in order.
    fn word(m: &Monomial) -> Vec<usize> {
        m.factors()
            .iter()
            .flat_map(|&(g, e)| std::iter::repeat_n(g as usize, e as usize))
            .collect()
    }

    fn rho_word(&self, w: &[usize]) -> (u32, Vec<F>) {
        let mut deg = 0;
        let mut acc = self.h.unit();
        for &g in w {
            let (n, k) = self.gens[g];
            acc = self.mul(deg, &acc, n, &self.h.basis_vector(n, k));
            deg += n;
        }
        (deg, acc)
    }

    /// `θ̃(m)` for the derivation sending generator `g` to `value` and
    /// every other generator to zero.
    fn extend(&self, m: &Monomial, q: i32, g: usize, value: &[F]) -> Vec<F> {
        let w = Self::word(m);
        let total = self.free.monomial_degree(m) as i32 + q;
        let mut out = vec![
            F::zero();
            if total < 0 {
                0
            } else {
                self.h.dim(total as u32)
            }
        ];
        for s in 0..w.len() {
            if w[s] != g {
                continue;
            }
            let (dp, prefix) = self.rho_word(&w[..s]);
            let (ds, suffix) = self.rho_word(&w[s + 1..]);
            let vd = (self.gens[g].0 as i32 + q) as u32;
            let left = self.mul(dp, &prefix, vd, value);
            let mut term = self.mul(dp + vd, &left, ds, &suffix);
            if (q * dp as i32).rem_euclid(2) == 1 {
                term = term.into_iter().map(|x| -x).collect();
            }
            for (o, t) in out.iter_mut().zip(term) {
                *o = o.add_ref(&t);
            }
        }
        out
    }
}

/// Scans `q = -1, …, -max(max generator degree, floor)` for derivations of
/// `H` of degree `q`. `H` is taken to vanish above its cap.
pub fn negative_derivations<F: Scalar>(
    h: &GradedAlgebra<F>,
    floor: u32,
) -> Result<NegativeDerivationReport<F>> {
    let depth = h.max_generator_degree().max(floor);
    let quotient = Quotient::new(h, h.cap() + depth)?;
    let free = &quotient.free;

    // Relations of H: the kernel of ρ degree by degree.
    let mut relations: Vec<(u32, Vec<(Monomial, F)>)> = Vec::new();
    for n in 2..=free.cap() {
        let basis = free.monomial_basis(n, None)?;
        let mut ech: Echelon<usize, F> = Echelon::new();
        for (idx, m) in basis.iter().enumerate() {
            let (_, v) = quotient.rho_word(&Quotient::<F>::word(m));
            if let Insert::Dependent(rel) = ech.insert_indexed(to_sparse(&v), idx) {
                relations.push((
                    n,
                    rel.into_iter()
                        .map(|(j, c)| (basis[j].clone(), c))
                        .collect(),
                ));
            }
        }
    }

    let mut degrees = Vec::new();
    for depth_q in 1..=depth {
        let q = -(depth_q as i32);
        let unknowns: Vec<(usize, usize)> = quotient
            .gens
            .iter()
            .enumerate()
            .filter(|(_, (n, _))| *n as i32 + q >= 0)
            .flat_map(|(g, &(n, _))| (0..h.dim((n as i32 + q) as u32)).map(move |k| (g, k)))
            .collect();
        let mut rows: Vec<Vec<F>> = Vec::new();
        for (n, rel) in &relations {
            let target = *n as i32 + q;
            if target < 0 || target as u32 > h.cap() || h.dim(target as u32) == 0 {
                continue;
            }
            let cols: Vec<Vec<F>> = unknowns
                .iter()
                .map(|&(g, k)| {
                    let vd = (quotient.gens[g].0 as i32 + q) as u32;
                    let value = h.basis_vector(vd, k);
                    let mut acc = vec![F::zero(); h.dim(target as u32)];
                    for (m, c) in rel {
                        for (a, x) in acc.iter_mut().zip(quotient.extend(m, q, g, &value)) {
                            *a = a.add_ref(&c.mul_ref(&x));
                        }
                    }
                    acc
                })
                .collect();
            for r in 0..h.dim(target as u32) {
                rows.push(cols.iter().map(|col| col[r].clone()).collect());
            }
        }
        let kernel = if unknowns.is_empty() {
            Vec::new()
        } else if rows.is_empty() {
            (0..unknowns.len())
                .map(|i| {
                    (0..unknowns.len())
                        .map(|j| if i == j { F::one() } else { F::zero() })
                        .collect()
                })
                .collect()
        } else {
            ScalarMatrix::from_rows(rows)
                .ok_or_else(|| Error::Invariant("ragged constraint matrix".into()))?
                .kernel_basis()
        };
        let basis = kernel
            .into_iter()
            .map(|v| {
                quotient
                    .gens
                    .iter()
                    .enumerate()
                    .map(|(g, &(n, _))| {
                        let dim = if n as i32 + q < 0 {
                            0
                        } else {
                            h.dim((n as i32 + q) as u32)
                        };
                        let mut out = vec![F::zero(); dim];
                        for (x, &(ug, k)) in v.iter().zip(&unknowns) {
                            if ug == g {
                                out[k] = x.clone();
                            }
                        }
                        out
                    })
                    .collect()
            })
            .collect();
        degrees.push(NegativeDegree { q, basis });
    }
    let halperin = degrees.iter().all(|d| d.basis.is_empty());
    Ok(NegativeDerivationReport {
        algebra: h.clone(),
        generators: quotient.gens.clone(),
        degrees,
        halperin,
    })
}

impl<F: Scalar> NegativeDerivationReport<F> {
    /// Extends a derivation given on indecomposables to every basis class of
    /// `H`: `out[n][k]` is the image of class `k` of degree `n`.
    pub fn extend(&self, q: i32, theta: &[Vec<F>]) -> Result<Vec<Vec<Vec<F>>>> {
        let h = &self.algebra;
        let quotient = Quotient::new(h, h.cap())?;
        let mut out = Vec::new();
        for n in 0..=h.cap() {
            let target = n as i32 + q;
            let tdim = if target < 0 { 0 } else { h.dim(target as u32) };
            if n == 0 {
                out.push(vec![vec![F::zero(); tdim]; h.dim(0)]);
                continue;
            }
            let basis = quotient.free.monomial_basis(n, None)?;
            let mut ech: Echelon<usize, F> = Echelon::new();
            for (idx, m) in basis.iter().enumerate() {
                let (_, v) = quotient.rho_word(&Quotient::<F>::word(m));
                ech.insert_indexed(to_sparse(&v), idx);
            }
            let mut classes = Vec::new();
            for k in 0..h.dim(n) {
                let combo = ech.solve(to_sparse(&h.basis_vector(n, k))).ok_or_else(|| {
                    Error::Invariant(format!("class {k} in degree {n} is not reached"))
                })?;
                let mut acc = vec![F::zero(); tdim];
                for (idx, c) in combo {
                    for (g, value) in theta.iter().enumerate() {
                        if value.is_empty() {
                            continue;
                        }
                        for (a, x) in acc
                            .iter_mut()
                            .zip(quotient.extend(&basis[idx], q, g, value))
                        {
                            *a = a.add_ref(&c.mul_ref(&x));
                        }
                    }
                }
                classes.push(acc);
            }
            out.push(classes);
        }
        Ok(out)
    }

    /// Checks that every reported derivation kills the unit and satisfies
    /// the Leibniz rule on all pairs of basis classes within the cap.
    pub fn check(&self) -> Result<()> {
        let h = &self.algebra;
        for nd in &self.degrees {
            let q = nd.q;
            for theta in &nd.basis {
                let ext = self.extend(q, theta)?;
                for i in 1..=h.cap() {
                    for j in 1..=h.cap() - i {
                        let t = (i + j) as i32 + q;
                        if t < 0 {
                            continue;
                        }
                        for a in 0..h.dim(i) {
                            for b in 0..h.dim(j) {
                                let xy = h.basis_product(i, a, j, b).unwrap_or_default();
                                let mut lhs = vec![F::zero(); h.dim(t as u32)];
                                for (c, img) in xy.iter().zip(&ext[(i + j) as usize]) {
                                    for (l, x) in lhs.iter_mut().zip(img) {
                                        *l = l.add_ref(&c.mul_ref(x));
                                    }
                                }
                                let ti = &ext[i as usize][a];
                                let tj = &ext[j as usize][b];
                                let mut rhs = if i as i32 + q >= 0 {
                                    h.product((i as i32 + q) as u32, ti, j, &h.basis_vector(j, b))
                                        .unwrap_or_else(|| vec![F::zero(); h.dim(t as u32)])
                                } else {
                                    vec![F::zero(); h.dim(t as u32)]
                                };
                                if j as i32 + q >= 0 {
                                    let mut r = h
                                        .product(
                                            i,
                                            &h.basis_vector(i, a),
                                            (j as i32 + q) as u32,
                                            tj,
                                        )
                                        .unwrap_or_else(|| vec![F::zero(); h.dim(t as u32)]);
                                    if (q * i as i32).rem_euclid(2) == 1 {
                                        r = r.into_iter().map(|x| -x).collect();
                                    }
                                    for (x, y) in rhs.iter_mut().zip(r) {
                                        *x = x.add_ref(&y);
                                    }
                                }
                                if lhs != rhs {
                                    return Err(Error::Invariant(format!(
                                        "degree {q} derivation breaks Leibniz on ({i},{a})·({j},{b})"
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
