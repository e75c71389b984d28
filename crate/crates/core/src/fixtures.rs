//! The bundled corpus of documents.

use crate::dsl::AlgebraDocument;
use crate::error::Result;

pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    pub text: &'static str,
}

macro_rules! fixture {
    ($name:literal, $summary:literal) => {
        Fixture {
            name: $name,
            summary: $summary,
            text: include_str!(concat!("../fixtures/", $name, ".cdga")),
        }
    };
}

pub const FIXTURES: &[Fixture] = &[
    fixture!("s2", "the 2-sphere"),
    fixture!("s3", "the 3-sphere"),
    fixture!("s4", "the 4-sphere"),
    fixture!("s6", "the 6-sphere"),
    fixture!(
        "example31",
        "Λ(a,b,c,d; u; v), dv = abcd + u², elliptic and formal"
    ),
    fixture!("heisenberg_shifted", "Λ(x,y; z), |x| = |y| = 3, dz = xy"),
    fixture!("base_bcn", "Λ(b,c,n), dn = bc"),
    fixture!("base_bcn_total", "base_bcn with an S³ fiber, dz = c"),
    fixture!("wedge_s2_s2_s2", "bigraded model of S² ∨ S² ∨ S²"),
    fixture!("lupton_total", "S² ∨ S² ∨ S² over S³ with D(w) = dw + vc"),
    fixture!("product_s3_s2", "the trivial fibration S² → S³ × S² → S³"),
    fixture!("toy_twistor", "S² → CP³ → S⁴"),
];

/// Looks a fixture up by name, with or without a `fixtures/` prefix or a
/// `.cdga` suffix.
pub fn fixture(name: &str) -> Option<&'static Fixture> {
    let name = name.strip_prefix("fixtures/").unwrap_or(name);
    let name = name.strip_suffix(".cdga").unwrap_or(name);
    FIXTURES.iter().find(|f| f.name == name)
}

impl Fixture {
    pub fn load(&self) -> Result<AlgebraDocument> {
        AlgebraDocument::load(self.text)
    }
}
