use super::decide::ModelSource;
use super::halperin::negative_derivations;
use super::obstruction::{obstruction, ObstructionStatus};
use super::slice::{as_vector, bracket_on_rows, slice_with, Shape};
use super::tncz::{fiber_cohomology, tncz_analyze};
use crate::algebra::{Derivation, FreeCga};
use crate::error::{Error, Result};
use crate::models::RelativeModel;
use crate::scalar::Scalar;
use crate::Q;

/// Comparison of a base deformation with its image among derivations
/// `ΛZ → ΛZ ⊗ ΛX`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplayReport<F = Q> {
    pub stage: u32,
    /// Degree through which everything was computed.
    pub top: u32,
    /// `d_i` of the base filtered model.
    pub base_deformation: Derivation<F>,
    /// `j'(d_i') = j(d_i)`: the total deformation restricted to `ΛZ ⊗ 1`
    /// is the base deformation.
    pub j_matches: bool,
    /// `j(d_i)` in `Der(ΛZ, ΛZ ⊗ ΛX)`.
    pub upstairs: ObstructionStatus<F>,
    /// `d_i` in `Der(ΛZ, ΛZ)`.
    pub downstairs: ObstructionStatus<F>,
    /// Whether an upstairs witness with `X` set to zero is a witness
    /// downstairs; `None` without an upstairs witness.
    pub pulled_back: Option<bool>,
    /// The stage-`i` obstruction of the total model, when earlier stages
    /// vanish there.
    pub total: Option<ObstructionStatus<F>>,
    /// Generators of the relative model, base first.
    pub algebra: FreeCga,
}

impl<F: Scalar> ReplayReport<F> {
    /// Exactness upstairs implies exactness downstairs.
    pub fn injectivity_consistent(&self) -> bool {
        let up = !matches!(self.upstairs, ObstructionStatus::NonExact);
        let down = !matches!(self.downstairs, ObstructionStatus::NonExact);
        !up || (down && self.pulled_back != Some(false))
    }
}

fn solve_status<F: Scalar>(found: Option<Derivation<F>>, rhs_zero: bool) -> ObstructionStatus<F> {
    match found {
        _ if rhs_zero => ObstructionStatus::Zero,
        Some(mu) => ObstructionStatus::Exact(mu),
        None => ObstructionStatus::NonExact,
    }
}

/// Replays the comparison of `d_i` on the base with its image in the
/// derivations from the base into the total model, for a fibration whose
/// base is the first `base_len` generators of `source`.
///
/// Requires the fiber cohomology to have no negative-degree derivations
/// and the fibration to be TNCZ. Runs through one degree past the top
/// base generator, or `cap` if smaller.
pub fn module_derivation_replay<F: Scalar>(
    source: &dyn ModelSource<F>,
    base_len: usize,
    i: u32,
    cap: u32,
) -> Result<ReplayReport<F>> {
    if i < 2 {
        return Err(Error::Precondition(format!("stages start at 2, not {i}")));
    }
    let probe = source.realize(cap.min(2 * source.min_generator_degree()))?;
    let z_top = (0..base_len)
        .map(|g| probe.algebra.generator(g).degree)
        .max()
        .unwrap_or(0);
    let top = cap.min(z_top + 1);
    let c = source.realize(top)?;

    let (_, fiber) = fiber_cohomology(&c, base_len, top)?;
    if !negative_derivations(&fiber.algebra, 0)?.halperin {
        return Err(Error::Precondition(
            "the fiber cohomology has negative-degree derivations".into(),
        ));
    }
    let tncz = tncz_analyze(&c, base_len, top)?;
    if !tncz.is_tncz() {
        return Err(Error::Precondition(format!(
            "the fibration is not TNCZ: {:?}",
            tncz.result
        )));
    }

    let r = RelativeModel::of(&c, base_len, top)?;
    let (alg, d) = (&r.total.algebra, &r.total.d);
    let t = r.total.valid_through;
    let base_di = r.base.deformation(i);
    let total_di = r.total.deformation(i);
    let in_z = |g: usize| g < base_len && alg.generator(g).degree <= t;
    let j_matches = (0..base_len)
        .filter(|&g| in_z(g))
        .all(|g| total_di.value(g) == base_di.value(g));

    let rhs = as_vector(&base_di, in_z);
    let solve = |values: &dyn Fn(usize, usize) -> bool| {
        let shape = Shape {
            top: t,
            reach: 1,
            unknowns: &|g| g < base_len,
            rows: &|g| g < base_len,
            values,
        };
        slice_with(alg, d, i - 1, 0, &shape).solve(&rhs)
    };
    let upstairs = solve_status(solve(&|_, _| true), rhs.is_empty());
    let downstairs = solve_status(solve(&|_, h| h < base_len), rhs.is_empty());

    let pulled_back = match &upstairs {
        ObstructionStatus::Exact(mu) => {
            let mut bar = Derivation::new(mu.degree, mu.lower_shift);
            for (g, v) in mu.values() {
                bar.set(*g, v.filter(|m| m.generators().all(|h| h < base_len)));
            }
            let rows: Vec<usize> = (0..base_len).filter(|&g| in_z(g)).collect();
            Some(bracket_on_rows(alg, d, &bar, rows) == rhs)
        }
        _ => None,
    };

    let earlier_vanish = (2..i).all(|j| r.total.deformation(j).vanishes());
    let total = if earlier_vanish {
        Some(obstruction(&r.total, i)?.status)
    } else {
        None
    };
    Ok(ReplayReport {
        stage: i,
        top: t,
        base_deformation: base_di,
        j_matches,
        upstairs,
        downstairs,
        pulled_back,
        total,
        algebra: alg.clone(),
    })
}
