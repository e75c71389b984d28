use std::collections::BTreeMap;

use super::graded_algebra::{to_dense, GradedAlgebra};
use crate::algebra::{AlgebraMap, Cdga, Derivation, FreeCga, Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, Insert, ScalarMatrix, SparseVec};
use crate::scalar::Scalar;
use crate::Q;

/// A cohomology class with its coordinates and a representative cocycle.
#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyClass<F = Q> {
    pub degree: u32,
    pub coordinates: Vec<F>,
    pub representative: Polynomial<F>,
}

/// Cohomology in one degree: representatives of a basis and the data to
/// express any cocycle in that basis.
#[derive(Clone, Debug)]
pub struct DegreeCohomology<F = Q> {
    pub degree: u32,
    representatives: Vec<Polynomial<F>>,
    /// Boundaries (untagged) followed by the representatives (tagged by
    /// their index).
    echelon: Echelon<Monomial, F>,
    /// Only the lower-degree-zero part of an element is classified.
    lower_zero: Option<FreeCga>,
}

pub(crate) fn sparse<F: Scalar>(p: &Polynomial<F>) -> SparseVec<Monomial, F> {
    p.terms().clone()
}

impl<F: Scalar> DegreeCohomology<F> {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> &[Polynomial<F>] {
        &self.representatives
    }

    /// Coordinates of the class of `z`, or `None` if `z` is not a cocycle
    /// of this degree.
    pub fn classify(&self, z: &Polynomial<F>) -> Option<Vec<F>> {
        let z = match &self.lower_zero {
            Some(alg) => alg.lower_part(z, 0),
            None => z.clone(),
        };
        let combo = self.echelon.solve(sparse(&z))?;
        Some(to_dense(&combo, self.dim()))
    }

    pub fn is_boundary(&self, z: &Polynomial<F>) -> bool {
        self.classify(z)
            .is_some_and(|c| c.iter().all(num_traits::Zero::is_zero))
    }
}

fn require_within_cap(alg: &FreeCga, n: u32) -> Result<()> {
    if n > alg.cap() {
        return Err(Error::DegreeOverCap {
            requested: n,
            cap: alg.cap(),
        });
    }
    Ok(())
}

/// A basis of the closed elements of degree `n`.
pub fn cocycles<F: Scalar>(c: &Cdga<F>, n: u32) -> Result<Vec<Polynomial<F>>> {
    let basis = c.algebra.monomial_basis(n, None)?;
    Ok(kernel_of(c, &basis))
}

fn kernel_of<F: Scalar>(c: &Cdga<F>, basis: &[Monomial]) -> Vec<Polynomial<F>> {
    let mut ech: Echelon<Monomial, F> = Echelon::new();
    let mut out = Vec::new();
    for (k, m) in basis.iter().enumerate() {
        let dm = c.d(&Polynomial::term(m.clone(), F::one()));
        if let Insert::Dependent(rel) = ech.insert_indexed(sparse(&dm), k) {
            out.push(
                rel.into_iter()
                    .map(|(j, x)| (basis[j].clone(), x))
                    .collect(),
            );
        }
    }
    out
}

/// Cohomology in degree `n`; needs `n + 1` within the cap.
pub fn cohomology_degree<F: Scalar>(c: &Cdga<F>, n: u32) -> Result<DegreeCohomology<F>> {
    require_within_cap(&c.algebra, n + 1)?;
    let cycles = cocycles(c, n)?;
    let mut ech: Echelon<Monomial, F> = Echelon::new();
    if n > 0 {
        for m in c.algebra.monomial_basis(n - 1, None)? {
            ech.insert_untagged(sparse(&c.d(&Polynomial::term(m, F::one()))));
        }
    }
    let mut reps = Vec::new();
    for z in cycles {
        if ech.insert_indexed(sparse(&z), reps.len()) == Insert::Independent {
            reps.push(z);
        }
    }
    Ok(DegreeCohomology {
        degree: n,
        representatives: reps,
        echelon: ech,
        lower_zero: None,
    })
}

/// The dimension of `H^n` and a basis of classes.
pub fn cohomology<F: Scalar>(c: &Cdga<F>, n: u32) -> Result<(usize, Vec<CohomologyClass<F>>)> {
    let h = cohomology_degree(c, n)?;
    let classes = h
        .representatives()
        .iter()
        .enumerate()
        .map(|(k, z)| {
            let mut coordinates = vec![F::zero(); h.dim()];
            coordinates[k] = F::one();
            CohomologyClass {
                degree: n,
                coordinates,
                representative: z.clone(),
            }
        })
        .collect();
    Ok((h.dim(), classes))
}

/// Result of [`is_exact`].
#[derive(Clone, Debug, PartialEq)]
pub enum Exactness<F = Q> {
    Exact(Polynomial<F>),
    NotExact,
}

/// Finds a primitive of a closed element, if one exists.
pub fn is_exact<F: Scalar>(c: &Cdga<F>, z: &Polynomial<F>) -> Result<Exactness<F>> {
    if z.is_zero() {
        return Ok(Exactness::Exact(Polynomial::zero()));
    }
    let n = c.algebra.degree_of(z).ok_or_else(|| Error::Inhomogeneous {
        generator: c.algebra.format(z),
        reason: "element is not homogeneous".to_string(),
    })?;
    require_within_cap(&c.algebra, n)?;
    if !c.d(z).is_zero() {
        return Err(Error::NotClosed);
    }
    if n == 0 {
        return Ok(Exactness::NotExact);
    }
    let basis = c.algebra.monomial_basis(n - 1, None)?;
    let mut ech: Echelon<Monomial, F> = Echelon::new();
    for (k, m) in basis.iter().enumerate() {
        ech.insert_indexed(sparse(&c.d(&Polynomial::term(m.clone(), F::one()))), k);
    }
    Ok(match ech.solve(sparse(z)) {
        Some(combo) => Exactness::Exact(
            combo
                .into_iter()
                .map(|(j, x)| (basis[j].clone(), x))
                .collect(),
        ),
        None => Exactness::NotExact,
    })
}

/// `H(A)` through some degree: the abstract algebra together with the
/// representatives that realize it in `A`.
#[derive(Clone, Debug)]
pub struct Presentation<F = Q> {
    pub algebra: GradedAlgebra<F>,
    pub degrees: Vec<DegreeCohomology<F>>,
}

impl<F: Scalar> Presentation<F> {
    pub fn degree(&self, n: u32) -> &DegreeCohomology<F> {
        &self.degrees[n as usize]
    }

    /// A cocycle representing the class with the given coordinates.
    pub fn realize(&self, n: u32, coords: &[F]) -> Polynomial<F> {
        let mut out = Polynomial::zero();
        for (z, c) in self.degree(n).representatives().iter().zip(coords) {
            out.add_scaled(c, z);
        }
        out
    }

    pub fn top(&self) -> u32 {
        self.algebra.cap()
    }
}

fn assemble<F: Scalar>(
    alg: &FreeCga,
    top: u32,
    degrees: Vec<DegreeCohomology<F>>,
) -> Result<Presentation<F>> {
    let labels: Vec<Vec<String>> = degrees
        .iter()
        .map(|h| {
            h.representatives()
                .iter()
                .map(|z| format!("[{}]", alg.format(z)))
                .collect()
        })
        .collect();
    let mut products = BTreeMap::new();
    for i in 1..=top {
        for j in 1..=top - i {
            let (hi, hj, hij) = (
                &degrees[i as usize],
                &degrees[j as usize],
                &degrees[(i + j) as usize],
            );
            if hi.dim() == 0 || hj.dim() == 0 || hij.dim() == 0 {
                continue;
            }
            let mut table = Vec::with_capacity(hi.dim() * hj.dim());
            for a in hi.representatives() {
                for b in hj.representatives() {
                    let ab = alg.mul(a, b);
                    let coords = hij.classify(&ab).ok_or_else(|| {
                        Error::Invariant(format!(
                            "product of cocycles {} and {} is not a cocycle",
                            alg.format(a),
                            alg.format(b)
                        ))
                    })?;
                    table.push(coords);
                }
            }
            products.insert((i, j), table);
        }
    }
    Ok(Presentation {
        algebra: GradedAlgebra::new(top, labels, products),
        degrees,
    })
}

/// The cohomology algebra through degree `top`; needs `top + 1` within the cap.
pub fn presentation<F: Scalar>(c: &Cdga<F>, top: u32) -> Result<Presentation<F>> {
    require_within_cap(&c.algebra, top + 1)?;
    let degrees = (0..=top)
        .map(|n| cohomology_degree(c, n))
        .collect::<Result<Vec<_>>>()?;
    assemble(&c.algebra, top, degrees)
}

/// Cohomology of a bigraded algebra `(ΛX, d)` with `H_{>0} = 0`, read off
/// as `ΛX_0 / d((ΛX)_1)` through degree `top`.
///
/// Only generators of lower degree 0 and 1 are touched, so this is cheap
/// even when the full resolution is large. Classification looks at the
/// lower-degree-zero part of a cocycle, which determines its class.
pub fn bigraded_presentation<F: Scalar>(
    alg: &FreeCga,
    d: &Derivation<F>,
    top: u32,
) -> Result<Presentation<F>> {
    require_within_cap(alg, top)?;
    let mut degrees = Vec::new();
    for n in 0..=top {
        let mut ech: Echelon<Monomial, F> = Echelon::new();
        let below = if n == 0 {
            Vec::new()
        } else {
            alg.basis_where(n - 1, 1..=1, |_| true)?
        };
        for m in below {
            let dm = alg.apply_unchecked(d, &Polynomial::term(m, F::one()));
            ech.insert_untagged(sparse(&dm));
        }
        let mut reps = Vec::new();
        for m in alg.basis_where(n, 0..=0, |_| true)? {
            let z = Polynomial::term(m, F::one());
            if ech.insert_indexed(sparse(&z), reps.len()) == Insert::Independent {
                reps.push(z);
            }
        }
        degrees.push(DegreeCohomology {
            degree: n,
            representatives: reps,
            echelon: ech,
            lower_zero: Some(alg.clone()),
        });
    }
    assemble(alg, top, degrees)
}

/// A map of cohomology algebras, one matrix per degree.
#[derive(Clone, Debug)]
pub struct AlgebraMorphismOnCohomology<F: Scalar = Q> {
    pub source: GradedAlgebra<F>,
    pub target: GradedAlgebra<F>,
    /// `matrices[n]` has `dim target^n` rows and `dim source^n` columns.
    pub matrices: Vec<ScalarMatrix<F>>,
}

/// The map induced on cohomology by a chain map, through degree `top`.
pub fn induced_map<F: Scalar>(
    source: &Cdga<F>,
    target: &Cdga<F>,
    phi: &AlgebraMap<F>,
    top: u32,
) -> Result<AlgebraMorphismOnCohomology<F>> {
    phi.check_chain_map(source, target)?;
    let hs = presentation(source, top)?;
    let ht = presentation(target, top)?;
    let mut matrices = Vec::new();
    for n in 0..=top {
        let cols = hs
            .degree(n)
            .representatives()
            .iter()
            .map(|z| {
                let img = phi.apply(&source.algebra, &target.algebra, z);
                ht.degree(n)
                    .classify(&img)
                    .ok_or_else(|| Error::Invariant("image of a cocycle is not closed".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        matrices.push(ScalarMatrix::from_columns(ht.degree(n).dim(), &cols));
    }
    Ok(AlgebraMorphismOnCohomology {
        source: hs.algebra,
        target: ht.algebra,
        matrices,
    })
}

/// Outcome of [`surjective_up_to`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Surjectivity {
    Surjective,
    FailsAt(u32),
}

/// Compares ranks degree by degree through `cap`.
pub fn surjective_up_to<F: Scalar>(m: &AlgebraMorphismOnCohomology<F>, cap: u32) -> Surjectivity {
    for (n, mat) in m.matrices.iter().enumerate().take(cap as usize + 1) {
        if mat.rank() < m.target.dim(n as u32) {
            return Surjectivity::FailsAt(n as u32);
        }
    }
    Surjectivity::Surjective
}
