use super::slice::{as_vector, bracket_on_rows, slice_with, Shape};
use crate::algebra::{Derivation, Polynomial};
use crate::error::{Error, Result};
use crate::models::FilteredModel;
use crate::scalar::Scalar;
use crate::Q;

#[derive(Clone, Debug, PartialEq)]
pub enum ObstructionStatus<F = Q> {
    Zero,
    /// `[d, μ] = d_i` for the carried `μ ∈ Der_{i-1}^0`.
    Exact(Derivation<F>),
    NonExact,
}

/// The class of `d_i` in the derivation complex of `(ΛV, d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionClass<F = Q> {
    pub stage: u32,
    pub representative: Derivation<F>,
    pub status: ObstructionStatus<F>,
    /// Generators of degree at most this carry rows of the solve.
    pub rows_through: u32,
}

impl<F: Scalar> ObstructionClass<F> {
    pub fn is_exact(&self) -> bool {
        !matches!(self.status, ObstructionStatus::NonExact)
    }
}

/// Generators of `m` on which `[d, θ]` is fully determined when `d` and the
/// model are known through `m.valid_through`.
fn rows(m: &FilteredModel<impl Scalar>, slack: u32) -> impl Fn(usize) -> bool + '_ {
    move |g| m.algebra.generator(g).degree + slack <= m.valid_through
}

/// Checks `[d, d_i] = 0`, then looks for `μ ∈ Der_{i-1}^0` with
/// `[d, μ] = d_i` on every generator where `D` is defined. The unknown `μ`
/// ranges over one degree more than that, which is all the rows see.
pub fn obstruction<F: Scalar>(m: &FilteredModel<F>, i: u32) -> Result<ObstructionClass<F>> {
    if i < 2 {
        return Err(Error::Precondition(format!(
            "obstruction stages start at 2, not {i}"
        )));
    }
    for j in 2..i {
        if !m.deformation(j).vanishes() {
            return Err(Error::Precondition(format!(
                "d_{j} is nonzero; gauge it away before stage {i}"
            )));
        }
    }
    let alg = &m.algebra;
    let di = m.deformation(i);
    let closed_rows: Vec<usize> = (0..alg.len()).filter(|&g| rows(m, 1)(g)).collect();
    let closure = bracket_on_rows(alg, &m.d, &di, closed_rows);
    if !closure.is_empty() {
        return Err(Error::Invariant(format!(
            "d_{i} is not closed in the derivation complex"
        )));
    }
    let rows_through = m.valid_through;
    let mut class = ObstructionClass {
        stage: i,
        representative: di.clone(),
        status: ObstructionStatus::Zero,
        rows_through,
    };
    if di.vanishes() {
        return Ok(class);
    }
    let shape = Shape {
        top: rows_through,
        reach: 1,
        unknowns: &|_| true,
        rows: &|_| true,
        values: &|_, _| true,
    };
    let slice = slice_with(alg, &m.d, i - 1, 0, &shape);
    let rhs = as_vector(&di, rows(m, 0));
    class.status = match slice.solve(&rhs) {
        Some(mu) => {
            verify_witness(m, &di, &mu)?;
            ObstructionStatus::Exact(mu)
        }
        None => ObstructionStatus::NonExact,
    };
    Ok(class)
}

fn verify_witness<F: Scalar>(
    m: &FilteredModel<F>,
    di: &Derivation<F>,
    mu: &Derivation<F>,
) -> Result<()> {
    let alg = &m.algebra;
    let domain: Vec<usize> = (0..alg.len()).filter(|&g| rows(m, 0)(g)).collect();
    let lhs = bracket_on_rows(alg, &m.d, mu, domain);
    if lhs != as_vector(di, rows(m, 0)) {
        return Err(Error::WitnessRejected(format!(
            "[d, μ] differs from d_{}",
            di.lower_shift
        )));
    }
    Ok(())
}

/// Conjugates `D` by `exp(μ)`: `D' = e^μ D e^{-μ}` and `π' = π e^{-μ}`.
/// With `[d, μ] = d_i` this kills the stage-`i` deformation.
pub fn gauge_normalize<F: Scalar>(
    m: &FilteredModel<F>,
    i: u32,
    mu: &Derivation<F>,
) -> Result<FilteredModel<F>> {
    if mu.degree != 0 || mu.lower_shift != i as i32 - 1 {
        return Err(Error::WitnessRejected(format!(
            "expected a derivation of bidegree ({}, 0), got ({}, {})",
            i - 1,
            mu.lower_shift,
            mu.degree
        )));
    }
    verify_witness(m, &m.deformation(i), mu)?;
    let alg = &m.algebra;
    let mut out = m.clone();
    for g in m.domain() {
        let inv = alg.exp_apply(mu, &Polynomial::generator(g), true);
        let dg = alg.apply_unchecked(&m.big_d, &inv);
        out.big_d.set(g, alg.exp_apply(mu, &dg, false));
        out.pi.set(
            g,
            alg.substitute(&m.target.algebra, &inv, |h| m.pi.image(h)),
        );
    }
    out.check()?;
    for j in 2..=i {
        if !out.deformation(j).vanishes() {
            return Err(Error::Invariant(format!(
                "gauge at stage {i} left d_{j} nonzero"
            )));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Cdga, FreeCga, Generator};

    /// `x, y` in degree 3 and `z` in degree 5 with `dz = xy`.
    fn heisenberg() -> Cdga<Q> {
        let alg = FreeCga::new(
            vec![
                Generator::new("x", 3),
                Generator::new("y", 3),
                Generator::new("z", 5),
            ],
            16,
        )
        .unwrap();
        let xy = alg.mul(&Polynomial::generator(0), &Polynomial::generator(1));
        Cdga::new(alg, Derivation::new(1, 0).with(2, xy))
    }

    #[test]
    fn early_stage_must_vanish_first() {
        let m = crate::models::filtered_model(&heisenberg(), 12).unwrap();
        let (i, _) = m.deformations()[0];
        if let Err(e) = obstruction(&m, i + 1) {
            assert!(matches!(e, Error::Precondition(_)));
        } else {
            panic!("stage {} accepted before stage {i} vanished", i + 1);
        }
    }

    #[test]
    fn heisenberg_obstruction_is_not_exact() {
        let m = crate::models::filtered_model(&heisenberg(), 12).unwrap();
        let (i, _) = m.deformations()[0];
        assert_eq!(i, 2);
        let o = obstruction(&m, 2).unwrap();
        assert_eq!(o.status, ObstructionStatus::NonExact);
    }

    /// The bigraded model of `S² ∨ S²` through degree 8.
    fn wedge() -> FilteredModel<Q> {
        let gens = vec![
            Generator::with_lower("a", 2, 0),
            Generator::with_lower("b", 2, 0),
            Generator::with_lower("alpha", 3, 1),
            Generator::with_lower("beta", 3, 1),
            Generator::with_lower("gamma", 3, 1),
        ];
        let alg = FreeCga::new(gens, 11).unwrap();
        let (a, b) = (Polynomial::generator(0), Polynomial::generator(1));
        let d = Derivation::new(1, 1)
            .with(2, alg.mul(&a, &a))
            .with(3, alg.mul(&a, &b))
            .with(4, alg.mul(&b, &b));
        let bg = crate::models::complete_seeded(alg, d, 8).unwrap();
        FilteredModel::from_cdga(&bg.as_cdga(), 7).unwrap()
    }

    #[test]
    fn conjugated_differential_is_gauged_back() {
        let m0 = wedge();
        let alg = &m0.algebra;
        let (p, mu) = (1..=3)
            .find_map(|p| {
                let s =
                    super::super::slice::derivation_slice(alg, &m0.d, p, 0, m0.valid_through + 1);
                let mu = s.derivation(
                    (0..s.source.len()).map(|k| (k, Q::from_integer((k as i64 + 1).into()))),
                );
                let dmu = bracket_on_rows(alg, &m0.d, &mu, m0.domain());
                (!dmu.is_empty()).then_some((p, mu))
            })
            .expect("some slice carries a non-closed derivation");
        let mut twisted = m0.clone();
        for g in m0.domain() {
            let inv = alg.exp_apply(&mu, &Polynomial::generator(g), true);
            let dg = alg.apply_unchecked(&m0.big_d, &inv);
            twisted.big_d.set(g, alg.exp_apply(&mu, &dg, false));
            twisted
                .pi
                .set(g, alg.substitute(alg, &inv, |h| m0.pi.image(h)));
        }
        twisted.check().unwrap();
        let (i, _) = twisted.deformations()[0];
        assert_eq!(i, p + 1);
        let o = obstruction(&twisted, i).unwrap();
        let ObstructionStatus::Exact(w) = o.status else {
            panic!("a conjugated differential has an exact obstruction");
        };
        let g = gauge_normalize(&twisted, i, &w).unwrap();
        assert!(g.deformation(i).vanishes());
    }

    #[test]
    fn bad_witness_is_rejected() {
        let m = crate::models::filtered_model(&heisenberg(), 10).unwrap();
        let mu = Derivation::new(0, 1);
        assert!(matches!(
            gauge_normalize(&m, 2, &mu),
            Err(Error::WitnessRejected(_))
        ));
    }
}
