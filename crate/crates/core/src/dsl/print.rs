use std::fmt;

use super::{AlgebraDocument, GeneratorDecl, Section};
use crate::algebra::{FreeCga, Generator};
use crate::scalar::Scalar;

fn algebra(decls: &[&GeneratorDecl]) -> FreeCga {
    let gens = decls
        .iter()
        .map(|g| Generator::with_lower(g.name.clone(), g.degree, g.lower.unwrap_or(0)))
        .collect();
    FreeCga::new(gens, 0).expect("document generators are valid")
}

fn section<F: Scalar>(f: &mut fmt::Formatter<'_>, s: &Section<F>) -> fmt::Result {
    for g in &s.generators {
        write!(f, "generator {} : degree {}", g.name, g.degree)?;
        if let Some(p) = g.lower {
            write!(f, " lower {p}")?;
        }
        writeln!(f)?;
    }
    let alg = algebra(&s.generators.iter().collect::<Vec<_>>());
    for (g, v) in &s.differential {
        writeln!(f, "d {} = {}", s.generators[*g].name, alg.format(v))?;
    }
    if s.complete {
        writeln!(f, "complete")?;
    }
    Ok(())
}

/// The canonical text form; parsing it gives the document back.
impl<F: Scalar> fmt::Display for AlgebraDocument<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "algebra {}", self.name)?;
        let Some(fib) = &self.fibration else {
            return section(f, &self.section);
        };
        writeln!(f, "base")?;
        section(f, &fib.base)?;
        writeln!(f, "fiber")?;
        section(f, &self.section)?;
        let total = algebra(&self.declared().collect::<Vec<_>>());
        let base = algebra(&fib.base.generators.iter().collect::<Vec<_>>());
        let fiber = algebra(&self.section.generators.iter().collect::<Vec<_>>());
        for (x, v) in &fib.twist {
            writeln!(
                f,
                "twist {} = {}",
                self.section.generators[*x].name,
                total.format(v)
            )?;
        }
        if !fib.via.is_zero() {
            writeln!(f, "via {}", base.format(&fib.via))?;
        }
        for (x, v) in &fib.theta {
            writeln!(
                f,
                "theta {} = {}",
                self.section.generators[*x].name,
                fiber.format(v)
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;
    use crate::Q;

    #[test]
    fn print_then_parse_is_identity() {
        let text = "algebra t\nbase\ngenerator e : degree 4\ngenerator f : degree 7\nd f = e^2\nfiber\ngenerator a : degree 2\ngenerator x : degree 3\nd x = a^2\ntwist x = -1/2*e\n";
        let doc: AlgebraDocument<Q> = parse(text).unwrap();
        let printed = doc.to_string();
        assert_eq!(printed, text);
        assert_eq!(parse::<Q>(&printed).unwrap(), doc);
    }
}
