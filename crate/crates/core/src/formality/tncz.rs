use crate::algebra::{Cdga, LowerGrading};
use crate::cohomology::{
    bigraded_presentation, cocycles, presentation, to_sparse, Presentation, Surjectivity,
};
use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::models::{fiber_part, has_lower_grading};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct TnczReport {
    pub cap: u32,
    /// `dim H^n` of the fiber model, `n = 0..=cap`.
    pub fiber_betti: Vec<usize>,
    /// Rank of `H^n(total) → H^n(fiber)`.
    pub ranks: Vec<usize>,
    pub result: Surjectivity,
}

impl TnczReport {
    pub fn is_tncz(&self) -> bool {
        self.result == Surjectivity::Surjective
    }
}

/// Cohomology of the fiber model through `cap`, read off the lower grading
/// when the fiber is a bigraded model.
pub fn fiber_cohomology<F: Scalar>(
    total: &Cdga<F>,
    base_len: usize,
    cap: u32,
) -> Result<(Cdga<F>, Presentation<F>)> {
    let mut fiber = fiber_part(total, base_len);
    fiber.algebra.set_cap(fiber.cap().max(cap + 1));
    let bigraded = has_lower_grading(&fiber.algebra)
        && fiber.check_differential(LowerGrading::Bigraded).is_ok();
    let pres = if bigraded {
        bigraded_presentation(&fiber.algebra, &fiber.differential, cap)?
    } else {
        presentation(&fiber, cap)?
    };
    Ok((fiber, pres))
}

/// Compares `H(total) → H(fiber)` with `H(fiber)` in each degree through
/// `cap`, where the fiber is the total model with the first `base_len`
/// generators set to zero. `total` must be realized through `cap + 1`.
pub fn tncz_analyze<F: Scalar>(total: &Cdga<F>, base_len: usize, cap: u32) -> Result<TnczReport> {
    let mut total = total.clone();
    total.algebra.set_cap(total.cap().max(cap + 1));
    let (_, fiber_pres) = fiber_cohomology(&total, base_len, cap)?;
    let (_, map) = total.algebra.restrict(|g| g >= base_len);
    let mut fiber_betti = Vec::new();
    let mut ranks = Vec::new();
    let mut result = Surjectivity::Surjective;
    for n in 0..=cap {
        let hf = fiber_pres.degree(n);
        fiber_betti.push(hf.dim());
        if hf.dim() == 0 {
            ranks.push(0);
            continue;
        }
        let mut image: Echelon<usize, F> = Echelon::new();
        for z in cocycles(&total, n)? {
            let restricted = z
                .filter(|m| m.generators().all(|h| h >= base_len))
                .remap(|h| map[h].expect("base generators filtered out"));
            let coords = hf.classify(&restricted).ok_or_else(|| {
                Error::Invariant(format!(
                    "a total cocycle restricts to a non-cocycle in degree {n}"
                ))
            })?;
            image.insert_untagged(to_sparse(&coords));
            if image.rank() == hf.dim() {
                break;
            }
        }
        ranks.push(image.rank());
        if image.rank() < hf.dim() && result == Surjectivity::Surjective {
            result = Surjectivity::FailsAt(n);
        }
    }
    Ok(TnczReport {
        cap,
        fiber_betti,
        ranks,
        result,
    })
}
