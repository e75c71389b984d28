use super::obstruction::{gauge_normalize, obstruction, ObstructionClass, ObstructionStatus};
use crate::algebra::{Cdga, Derivation};
use crate::error::Result;
use crate::models::{filtered_model, has_lower_grading, FilteredModel};
use crate::scalar::Scalar;
use crate::Q;

/// Anything that can hand out a CDGA realized through a given degree.
pub trait ModelSource<F: Scalar = Q> {
    /// A CDGA whose cap is at least `top + 2` and which agrees with the
    /// source through degree `top + 1`.
    fn realize(&self, top: u32) -> Result<Cdga<F>>;

    /// The smallest generator degree, used to pick the first cap tried.
    fn min_generator_degree(&self) -> u32;
}

impl<F: Scalar> ModelSource<F> for Cdga<F> {
    fn realize(&self, top: u32) -> Result<Cdga<F>> {
        let mut c = self.clone();
        c.algebra.set_cap(c.cap().max(top + 2));
        Ok(c)
    }

    fn min_generator_degree(&self) -> u32 {
        self.algebra
            .generators()
            .iter()
            .map(|g| g.degree)
            .min()
            .unwrap_or(2)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome<F = Q> {
    FormalUpTo(u32),
    NonFormal {
        stage: u32,
        obstruction: ObstructionClass<F>,
    },
}

impl<F> Outcome<F> {
    pub fn label(&self) -> String {
        match self {
            Outcome::FormalUpTo(cap) => format!("FormalUpTo({cap})"),
            Outcome::NonFormal { stage, .. } => format!("NonFormal(stage={stage})"),
        }
    }

    pub fn is_formal(&self) -> bool {
        matches!(self, Outcome::FormalUpTo(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaugeStep<F = Q> {
    pub stage: u32,
    pub witness: Derivation<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormalityVerdict<F = Q> {
    pub outcome: Outcome<F>,
    pub transcript: Vec<GaugeStep<F>>,
    pub cap: u32,
    /// The model the verdict was read from, after the recorded gauges.
    pub model: FilteredModel<F>,
}

/// A filtered model through `top`: read off the lower grading when the
/// source declares one, built from cohomology otherwise.
pub fn model_of<F: Scalar>(source: &dyn ModelSource<F>, top: u32) -> Result<FilteredModel<F>> {
    let c = source.realize(top)?;
    if has_lower_grading(&c.algebra) {
        FilteredModel::from_cdga(&c, top)
    } else {
        filtered_model(&c, top)
    }
}

/// Runs the obstruction loop on one filtered model: gauge away exact
/// stages until `D = d` or a stage is not exact.
pub fn run_obstructions<F: Scalar>(
    mut m: FilteredModel<F>,
    cap: u32,
) -> Result<FormalityVerdict<F>> {
    let mut transcript = Vec::new();
    loop {
        let Some((i, _)) = m.deformations().into_iter().next() else {
            return Ok(FormalityVerdict {
                outcome: Outcome::FormalUpTo(cap),
                transcript,
                cap,
                model: m,
            });
        };
        let o = obstruction(&m, i)?;
        match o.status {
            ObstructionStatus::Exact(ref mu) => {
                m = gauge_normalize(&m, i, mu)?;
                transcript.push(GaugeStep {
                    stage: i,
                    witness: mu.clone(),
                });
            }
            ObstructionStatus::Zero => unreachable!("deformations() only lists nonzero stages"),
            ObstructionStatus::NonExact => {
                return Ok(FormalityVerdict {
                    outcome: Outcome::NonFormal {
                        stage: i,
                        obstruction: o,
                    },
                    transcript,
                    cap,
                    model: m,
                })
            }
        }
    }
}

/// Decides formality through degree `cap`.
///
/// Caps are tried from twice the smallest generator degree upwards,
/// doubling, so that a non-formal verdict visible in low degrees is found
/// without building the model through `cap`.
pub fn decide_formality<F: Scalar>(
    source: &dyn ModelSource<F>,
    cap: u32,
) -> Result<FormalityVerdict<F>> {
    let mut t = (2 * source.min_generator_degree())
        .clamp(2, cap.max(2))
        .min(cap);
    loop {
        let v = run_obstructions(model_of(source, t)?, cap)?;
        if !v.outcome.is_formal() || t >= cap {
            return Ok(v);
        }
        t = (2 * t).min(cap);
    }
}
