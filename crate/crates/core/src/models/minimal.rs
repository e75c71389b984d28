use crate::algebra::{AlgebraMap, Cdga, Derivation, FreeCga, Generator, Monomial, Polynomial};
use crate::cohomology::{cocycles, cohomology_degree, is_exact, sparse, to_sparse, Exactness};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, Insert};
use crate::scalar::Scalar;
use crate::Q;

/// A minimal Sullivan algebra with a quasi-isomorphism to a CDGA, valid
/// through degree `top`.
#[derive(Clone, Debug, PartialEq)]
pub struct MinimalModel<F = Q> {
    pub cdga: Cdga<F>,
    pub phi: AlgebraMap<F>,
    pub top: u32,
}

/// Builds the minimal model of `c` through degree `top`, degree by degree:
/// first generators hitting the cokernel of `H^n(φ)`, then generators
/// killing the kernel of `H^{n+1}(φ)`.
pub fn minimal_model<F: Scalar>(c: &Cdga<F>, top: u32) -> Result<MinimalModel<F>> {
    let mut c = c.clone();
    c.algebra.set_cap(c.cap().max(top + 2));
    let mut m = Cdga::new(FreeCga::new(Vec::new(), top + 1)?, Derivation::new(1, 0));
    let mut phi = AlgebraMap::default();
    for n in 2..=top {
        let hn = cohomology_degree(&c, n)?;
        let mut reached: Echelon<usize, F> = Echelon::new();
        for z in cocycles(&m, n)? {
            let coords = hn
                .classify(&phi.apply(&m.algebra, &c.algebra, &z))
                .ok_or_else(|| {
                    Error::Invariant("φ does not commute with the differentials".into())
                })?;
            reached.insert_untagged(to_sparse(&coords));
        }
        for (k, rep) in hn.representatives().iter().enumerate() {
            let mut e = vec![F::zero(); hn.dim()];
            e[k] = F::one();
            if reached.insert_untagged(to_sparse(&e)) {
                let g = push(&mut m, n, Polynomial::zero())?;
                phi.set(g, rep.clone());
            }
        }

        let hn1 = cohomology_degree(&c, n + 1)?;
        let zs = cocycles(&m, n + 1)?;
        let mut images: Echelon<usize, F> = Echelon::new();
        let mut kernel = Vec::new();
        for (k, z) in zs.iter().enumerate() {
            let coords = hn1
                .classify(&phi.apply(&m.algebra, &c.algebra, z))
                .ok_or_else(|| {
                    Error::Invariant("φ does not commute with the differentials".into())
                })?;
            if let Insert::Dependent(rel) = images.insert_indexed(to_sparse(&coords), k) {
                let mut w = Polynomial::zero();
                for (j, x) in rel {
                    w.add_scaled(&x, &zs[j]);
                }
                kernel.push(w);
            }
        }
        let mut boundaries: Echelon<Monomial, F> = Echelon::new();
        for b in m.algebra.monomial_basis(n, None)? {
            boundaries.insert_untagged(sparse(&m.d(&Polynomial::term(b, F::one()))));
        }
        for z in kernel {
            if !boundaries.insert_untagged(sparse(&z)) {
                continue;
            }
            let image = phi.apply(&m.algebra, &c.algebra, &z);
            let Exactness::Exact(primitive) = is_exact(&c, &image)? else {
                return Err(Error::Invariant(
                    "a kernel class is not exact in the target".into(),
                ));
            };
            let g = push(&mut m, n, z)?;
            phi.set(g, primitive);
        }
    }
    Ok(MinimalModel { cdga: m, phi, top })
}

fn push<F: Scalar>(m: &mut Cdga<F>, n: u32, dv: Polynomial<F>) -> Result<usize> {
    let k = m
        .algebra
        .generators()
        .iter()
        .filter(|g| g.degree == n)
        .count();
    let name = m.algebra.fresh_name(&format!("m{n}_{k}"));
    let g = m.algebra.push_generator(Generator::new(name, n))?;
    m.differential.set(g, dv);
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::cohomology;

    #[test]
    fn sphere_model_is_already_minimal() {
        let alg =
            FreeCga::new(vec![Generator::new("a", 2), Generator::new("alpha", 3)], 12).unwrap();
        let a2 = alg.pow(&Polynomial::generator(0), 2);
        let c = Cdga::<Q>::new(alg, Derivation::new(1, 0).with(1, a2));
        let m = minimal_model(&c, 9).unwrap();
        let degrees: Vec<u32> = m
            .cdga
            .algebra
            .generators()
            .iter()
            .map(|g| g.degree)
            .collect();
        assert_eq!(degrees, [2, 3]);
    }

    #[test]
    fn contractible_pair_is_eliminated() {
        let alg = FreeCga::new(
            vec![
                Generator::new("a", 2),
                Generator::new("xi", 4),
                Generator::new("eta", 5),
            ],
            12,
        )
        .unwrap();
        let c = Cdga::<Q>::new(alg, Derivation::new(1, 0).with(1, Polynomial::generator(2)));
        let m = minimal_model(&c, 8).unwrap();
        assert!(m.cdga.algebra.generators().iter().all(|g| g.degree == 2));
        for n in 0..=7 {
            assert_eq!(
                cohomology(&m.cdga, n).unwrap().0,
                cohomology(&c, n).unwrap().0
            );
        }
    }
}
