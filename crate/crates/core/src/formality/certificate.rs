use super::decide::{decide_formality, GaugeStep, ModelSource, Outcome};
use super::obstruction::gauge_normalize;
use super::slice::{as_vector, slice_with, Shape};
use crate::algebra::{Cdga, FreeCga};
use crate::error::Result;
use crate::models::{base_part, RelativeModel};
use crate::scalar::Scalar;
use crate::Q;

/// The base of a fibration source: its first `base_len` generators.
pub struct BaseOf<'a, F: Scalar> {
    pub source: &'a dyn ModelSource<F>,
    pub base_len: usize,
}

impl<F: Scalar> ModelSource<F> for BaseOf<'_, F> {
    fn realize(&self, top: u32) -> Result<Cdga<F>> {
        base_part(&self.source.realize(top)?, self.base_len)
    }

    fn min_generator_degree(&self) -> u32 {
        self.source.min_generator_degree()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Certified,
    NotCertified(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertificateReport<F = Q> {
    pub certificate: Certificate,
    pub base: Outcome<F>,
    pub total: Outcome<F>,
    pub transcript: Vec<GaugeStep<F>>,
    pub cap: u32,
    /// Generators of the relative model the witnesses act on; empty when
    /// no relative model was built.
    pub algebra: FreeCga,
}

/// Tries to gauge the relative filtered model of the base inclusion until
/// `D'` equals the relative bigraded differential `d'`, with every gauge
/// keeping `ΛZ` closed. Success certifies formality of the map; failure
/// proves nothing.
pub fn map_formality_certificate<F: Scalar>(
    source: &dyn ModelSource<F>,
    base_len: usize,
    cap: u32,
) -> Result<CertificateReport<F>> {
    let base = decide_formality(&BaseOf { source, base_len }, cap)?.outcome;
    let total = decide_formality(source, cap)?.outcome;
    let mut report = CertificateReport {
        certificate: Certificate::Certified,
        base: base.clone(),
        total: total.clone(),
        transcript: Vec::new(),
        cap,
        algebra: FreeCga::new(Vec::new(), 0)?,
    };
    for (name, o) in [("base", &base), ("total space", &total)] {
        if !o.is_formal() {
            report.certificate =
                Certificate::NotCertified(format!("the {name} is not formal: {}", o.label()));
            return Ok(report);
        }
    }

    let mut r = RelativeModel::of(&source.realize(cap)?, base_len, cap)?;
    report.algebra = r.total.algebra.clone();
    loop {
        let Some((i, di)) = r.total.deformations().into_iter().next() else {
            return Ok(report);
        };
        let m = &r.total;
        let top = m.valid_through;
        let shape = Shape {
            top,
            reach: 1,
            unknowns: &|_| true,
            rows: &|_| true,
            values: &|v, h| v >= base_len || h < base_len,
        };
        let slice = slice_with(&m.algebra, &m.d, i - 1, 0, &shape);
        let rhs = as_vector(&di, |g| m.algebra.generator(g).degree <= top);
        let Some(mu) = slice.solve(&rhs) else {
            report.certificate = Certificate::NotCertified(format!(
                "d_{i} of the relative model is not exact relative to the base"
            ));
            return Ok(report);
        };
        let mu_base = mu.restricted(|g| g < base_len);
        let total = gauge_normalize(&r.total, i, &mu)?;
        let base = if r.base.deformation(i).vanishes() && mu_base.vanishes() {
            r.base.clone()
        } else {
            gauge_normalize(&r.base, i, &mu_base)?
        };
        r = RelativeModel {
            base,
            total,
            base_len: r.base_len,
        };
        r.check()?;
        report.transcript.push(GaugeStep {
            stage: i,
            witness: mu,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Derivation, Generator, Polynomial};

    #[test]
    fn product_projection_is_certified() {
        let alg = FreeCga::new(
            vec![
                Generator::new("x", 3),
                Generator::new("a", 2),
                Generator::new("y", 3),
            ],
            12,
        )
        .unwrap();
        let a2 = alg.pow(&Polynomial::generator(1), 2);
        let c = Cdga::<Q>::new(alg, Derivation::new(1, 0).with(2, a2));
        let r = map_formality_certificate(&c, 1, 8).unwrap();
        assert_eq!(r.certificate, Certificate::Certified);
    }

    #[test]
    fn non_formal_total_is_not_certified() {
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
        let c = Cdga::<Q>::new(alg, Derivation::new(1, 0).with(2, xy));
        let r = map_formality_certificate(&c, 1, 12).unwrap();
        assert!(matches!(r.certificate, Certificate::NotCertified(_)));
    }
}
