use std::collections::BTreeMap;

use super::expr::{parse_expr, Span};
use super::{AlgebraDocument, DslError, Fibration, GeneratorDecl, Section};
use crate::algebra::{Cdga, Derivation, FreeCga, Generator, LowerGrading, Polynomial};
use crate::scalar::Scalar;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Where {
    Main,
    Base,
}

struct Assignment {
    name: String,
    name_col: usize,
    expr: String,
    expr_col: usize,
    line: usize,
}

#[derive(Default)]
struct Raw {
    name: Option<String>,
    fibration: bool,
    main: Vec<(GeneratorDecl, usize, usize)>,
    base: Vec<(GeneratorDecl, usize, usize)>,
    main_d: Vec<Assignment>,
    base_d: Vec<Assignment>,
    main_complete: bool,
    base_complete: Option<usize>,
    twist: Vec<Assignment>,
    theta: Vec<Assignment>,
    via: Option<(String, usize, usize)>,
}

/// Whitespace-separated words with their 1-based columns; `:` and `=`
/// are words of their own.
fn words(line: &str) -> Vec<(usize, String)> {
    let mut out: Vec<(usize, String)> = Vec::new();
    let mut cur: Option<(usize, String)> = None;
    for (col, c) in line.chars().enumerate() {
        let col = col + 1;
        if c.is_whitespace() || c == ':' || c == '=' {
            if let Some(w) = cur.take() {
                out.push(w);
            }
            if !c.is_whitespace() {
                out.push((col, c.to_string()));
            }
        } else {
            match &mut cur {
                Some((_, w)) => w.push(c),
                None => cur = Some((col, c.to_string())),
            }
        }
    }
    out.extend(cur);
    out
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> DslError {
    DslError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn invalid(line: usize, column: usize, message: impl Into<String>) -> DslError {
    DslError::InvalidDeclaration {
        line,
        column,
        message: message.into(),
    }
}

fn number(
    w: Option<&(usize, String)>,
    line: usize,
    end: usize,
    what: &str,
) -> Result<u32, DslError> {
    let (col, text) = w.ok_or_else(|| syntax(line, end, format!("expected {what}")))?;
    text.parse()
        .map_err(|_| syntax(line, *col, format!("expected {what}, found `{text}`")))
}

fn generator_line(
    ws: &[(usize, String)],
    line: usize,
    end: usize,
) -> Result<(GeneratorDecl, usize), DslError> {
    let (name_col, name) = ws
        .get(1)
        .ok_or_else(|| syntax(line, end, "expected a generator name"))?;
    if !name
        .chars()
        .next()
        .is_some_and(|c| c.is_alphabetic() || c == '_')
        || !name
            .chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
    {
        return Err(syntax(
            line,
            *name_col,
            format!("`{name}` is not a generator name"),
        ));
    }
    let expect = |k: usize, word: &str| -> Result<(), DslError> {
        match ws.get(k) {
            Some((_, w)) if w == word => Ok(()),
            Some((c, w)) => Err(syntax(line, *c, format!("expected `{word}`, found `{w}`"))),
            None => Err(syntax(line, end, format!("expected `{word}`"))),
        }
    };
    expect(2, ":")?;
    expect(3, "degree")?;
    let degree = number(ws.get(4), line, end, "a degree")?;
    let lower = match ws.get(5) {
        None => None,
        Some((_, w)) if w == "lower" => Some(number(ws.get(6), line, end, "a lower degree")?),
        Some((c, w)) => {
            return Err(syntax(
                line,
                *c,
                format!("expected `lower` or end of line, found `{w}`"),
            ))
        }
    };
    if let Some((c, w)) = ws.get(if lower.is_some() { 7 } else { 5 }) {
        return Err(syntax(line, *c, format!("unexpected `{w}`")));
    }
    if degree < 2 {
        return Err(invalid(
            line,
            ws[4].0,
            format!("generator `{name}` has degree {degree}; degrees start at 2"),
        ));
    }
    Ok((
        GeneratorDecl {
            name: name.clone(),
            degree,
            lower,
        },
        *name_col,
    ))
}

/// `<keyword> <name> = <expr>`.
fn assignment(
    text: &str,
    ws: &[(usize, String)],
    line: usize,
    end: usize,
) -> Result<Assignment, DslError> {
    let (name_col, name) = ws
        .get(1)
        .ok_or_else(|| syntax(line, end, "expected a generator name"))?;
    match ws.get(2) {
        Some((_, w)) if w == "=" => {}
        Some((c, w)) => return Err(syntax(line, *c, format!("expected `=`, found `{w}`"))),
        None => return Err(syntax(line, end, "expected `=`")),
    }
    let eq = ws[2].0;
    let expr: String = text.chars().skip(eq).collect();
    Ok(Assignment {
        name: name.clone(),
        name_col: *name_col,
        expr,
        expr_col: eq + 1,
        line,
    })
}

fn scan(text: &str) -> Result<Raw, DslError> {
    let mut raw = Raw::default();
    let mut here = Where::Main;
    for (k, full) in text.lines().enumerate() {
        let line = k + 1;
        let content = full.split('#').next().unwrap_or("");
        let ws = words(content);
        let Some((kw_col, kw)) = ws.first().cloned() else {
            continue;
        };
        let end = content.chars().count() + 1;
        let only = |ws: &[(usize, String)]| match ws.get(1) {
            Some((c, w)) => Err(syntax(line, *c, format!("unexpected `{w}`"))),
            None => Ok(()),
        };
        match kw.as_str() {
            "algebra" => {
                let (c, name) = ws
                    .get(1)
                    .ok_or_else(|| syntax(line, end, "expected a name"))?;
                if raw.name.is_some() {
                    return Err(invalid(line, kw_col, "the algebra is already named"));
                }
                if let Some((c2, w)) = ws.get(2) {
                    return Err(syntax(line, *c2, format!("unexpected `{w}`")));
                }
                let _ = c;
                raw.name = Some(name.clone());
            }
            "generator" => {
                let (decl, col) = generator_line(&ws, line, end)?;
                match here {
                    Where::Main => raw.main.push((decl, line, col)),
                    Where::Base => raw.base.push((decl, line, col)),
                }
            }
            "d" => {
                let a = assignment(content, &ws, line, end)?;
                match here {
                    Where::Main => raw.main_d.push(a),
                    Where::Base => raw.base_d.push(a),
                }
            }
            "complete" => {
                only(&ws)?;
                match here {
                    Where::Main => raw.main_complete = true,
                    Where::Base => raw.base_complete = Some(line),
                }
            }
            "base" => {
                only(&ws)?;
                raw.fibration = true;
                here = Where::Base;
            }
            "fiber" => {
                only(&ws)?;
                here = Where::Main;
            }
            "twist" => raw.twist.push(assignment(content, &ws, line, end)?),
            "theta" => raw.theta.push(assignment(content, &ws, line, end)?),
            "via" => {
                if raw.via.is_some() {
                    return Err(invalid(line, kw_col, "`via` is already given"));
                }
                let col = kw_col + 3;
                let expr: String = content.chars().skip(col).collect();
                raw.via = Some((expr, line, col + 1));
            }
            other => return Err(syntax(line, kw_col, format!("unknown statement `{other}`"))),
        }
    }
    Ok(raw)
}

fn algebra_of(decls: &[&GeneratorDecl], cap: u32) -> FreeCga {
    let gens = decls
        .iter()
        .map(|g| Generator::with_lower(g.name.clone(), g.degree, g.lower.unwrap_or(0)))
        .collect();
    FreeCga::new(gens, cap).expect("declarations were validated")
}

fn degree_text(alg: &FreeCga, p: &Polynomial<impl Scalar>) -> String {
    let mut ds: Vec<u32> = p.iter().map(|(m, _)| alg.monomial_degree(m)).collect();
    ds.sort_unstable();
    ds.dedup();
    ds.iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(" and ")
}

fn homogeneous<F: Scalar>(
    alg: &FreeCga,
    p: &Polynomial<F>,
    expected: u32,
    what: &str,
    a: &Assignment,
) -> Result<(), DslError> {
    if p.iter().any(|(m, _)| alg.monomial_degree(m) != expected) {
        return Err(DslError::DegreeMismatch {
            line: a.line,
            column: a.expr_col,
            what: what.to_string(),
            expected,
            found: degree_text(alg, p),
        });
    }
    Ok(())
}

struct Ctx<'a> {
    cap: u32,
    warnings: &'a mut Vec<String>,
}

fn section<F: Scalar>(
    decls: &[(GeneratorDecl, usize, usize)],
    ds: &[Assignment],
    complete: bool,
    ctx: &mut Ctx,
) -> Result<(Section<F>, FreeCga), DslError> {
    let alg = algebra_of(&decls.iter().map(|d| &d.0).collect::<Vec<_>>(), ctx.cap);
    let mut differential = BTreeMap::new();
    for a in ds {
        let g = alg.index_of(&a.name).ok_or(DslError::UnknownGenerator {
            line: a.line,
            column: a.name_col,
            name: a.name.clone(),
        })?;
        if differential.contains_key(&g) {
            return Err(invalid(
                a.line,
                a.name_col,
                format!("`d {}` is given twice", a.name),
            ));
        }
        let p: Polynomial<F> = parse_expr(
            &a.expr,
            &alg,
            &Span {
                line: a.line,
                column: a.expr_col,
            },
            ctx.warnings,
        )?;
        homogeneous(
            &alg,
            &p,
            alg.generator(g).degree + 1,
            &format!("d {}", a.name),
            a,
        )?;
        if !p.is_zero() {
            differential.insert(g, p);
        }
    }
    let mut d = Derivation::new(1, 1);
    for (g, v) in &differential {
        d.set(*g, v.clone());
    }
    let lowers = decls.iter().any(|g| g.0.lower.is_some());
    let grading = if lowers {
        LowerGrading::Filtered
    } else {
        LowerGrading::Ignored
    };
    if let Err(v) = Cdga::new(alg.clone(), d).check_differential(grading) {
        let e = v.into_error(&alg);
        let (line, col) = decls
            .iter()
            .find(|g| e.to_string().contains(&format!("`{}`", g.0.name)))
            .map_or((0, 0), |g| {
                let a = ds.iter().find(|a| a.name == g.0.name);
                a.map_or((g.1, g.2), |a| (a.line, a.name_col))
            });
        return Err(invalid(line, col, e.to_string()));
    }
    Ok((
        Section {
            generators: decls.iter().map(|d| d.0.clone()).collect(),
            differential,
            complete,
        },
        alg,
    ))
}

/// Parses a document, checking names, degrees and `d² = 0` within each
/// section. Products are reordered into declaration order with Koszul
/// signs; a product repeating an odd generator is dropped with a warning.
pub fn parse<F: Scalar>(text: &str) -> Result<AlgebraDocument<F>, DslError> {
    let raw = scan(text)?;
    let name = raw.name.clone().unwrap_or_else(|| "unnamed".into());

    let mut seen = BTreeMap::new();
    for (g, line, col) in raw.base.iter().chain(raw.main.iter()) {
        if seen.insert(g.name.clone(), *line).is_some() {
            return Err(invalid(
                *line,
                *col,
                format!("duplicate generator `{}`", g.name),
            ));
        }
    }
    let max_degree = raw
        .base
        .iter()
        .chain(raw.main.iter())
        .map(|g| g.0.degree)
        .max()
        .unwrap_or(2);
    let mut warnings = Vec::new();
    let mut ctx = Ctx {
        cap: 2 * max_degree + 2,
        warnings: &mut warnings,
    };

    if !raw.fibration {
        for (what, list) in [("twist", &raw.twist), ("theta", &raw.theta)] {
            if let Some(a) = list.first() {
                return Err(invalid(
                    a.line,
                    1,
                    format!("`{what}` needs a `base` section"),
                ));
            }
        }
        if let Some((_, line, _)) = &raw.via {
            return Err(invalid(*line, 1, "`via` needs a `base` section"));
        }
        let (section, _) = section(&raw.main, &raw.main_d, raw.main_complete, &mut ctx)?;
        return Ok(AlgebraDocument {
            name,
            section,
            fibration: None,
            warnings,
        });
    }

    if let Some(line) = raw.base_complete {
        return Err(invalid(
            line,
            1,
            "the base of a fibration cannot be completed",
        ));
    }
    let (base, base_alg) = section(&raw.base, &raw.base_d, false, &mut ctx)?;
    let (fiber, fiber_alg) = section(&raw.main, &raw.main_d, raw.main_complete, &mut ctx)?;
    let total_decls: Vec<&GeneratorDecl> = raw
        .base
        .iter()
        .chain(raw.main.iter())
        .map(|d| &d.0)
        .collect();
    let total_alg = algebra_of(&total_decls, ctx.cap);

    let via: Polynomial<F> = match &raw.via {
        Some((expr, line, col)) => {
            let p = parse_expr(
                expr,
                &base_alg,
                &Span {
                    line: *line,
                    column: *col,
                },
                ctx.warnings,
            )?;
            if base_alg.degree_of(&p).is_none() && !p.is_zero() {
                return Err(invalid(*line, *col, "`via` must be homogeneous"));
            }
            p
        }
        None => Polynomial::zero(),
    };
    if !raw.theta.is_empty() && via.is_zero() {
        return Err(invalid(
            raw.theta[0].line,
            1,
            "`theta` needs a nonzero `via`",
        ));
    }
    let via_degree = base_alg.degree_of(&via).unwrap_or(0) as i64;

    let fiber_index = |a: &Assignment| {
        fiber_alg
            .index_of(&a.name)
            .ok_or(DslError::UnknownGenerator {
                line: a.line,
                column: a.name_col,
                name: a.name.clone(),
            })
    };

    let mut twist = BTreeMap::new();
    for a in &raw.twist {
        let g = fiber_index(a)?;
        let p: Polynomial<F> = parse_expr(
            &a.expr,
            &total_alg,
            &Span {
                line: a.line,
                column: a.expr_col,
            },
            ctx.warnings,
        )?;
        homogeneous(
            &total_alg,
            &p,
            fiber_alg.generator(g).degree + 1,
            &format!("twist {}", a.name),
            a,
        )?;
        if twist.insert(g, p).is_some() {
            return Err(invalid(
                a.line,
                a.name_col,
                format!("`twist {}` is given twice", a.name),
            ));
        }
    }

    let mut theta = BTreeMap::new();
    let mut shift: Option<i64> = None;
    for a in &raw.theta {
        let g = fiber_index(a)?;
        let target = fiber_alg.generator(g).degree as i64 + 1 - via_degree;
        let p: Polynomial<F> = parse_expr(
            &a.expr,
            &fiber_alg,
            &Span {
                line: a.line,
                column: a.expr_col,
            },
            ctx.warnings,
        )?;
        if target < 0
            || p.iter()
                .any(|(m, _)| fiber_alg.monomial_degree(m) as i64 != target)
        {
            return Err(DslError::DegreeMismatch {
                line: a.line,
                column: a.expr_col,
                what: format!("theta {}", a.name),
                expected: target.max(0) as u32,
                found: degree_text(&fiber_alg, &p),
            });
        }
        let p_lower = fiber_alg.generator(g).lower as i64;
        for (m, _) in p.iter() {
            let s = p_lower - fiber_alg.monomial_lower(m) as i64;
            if *shift.get_or_insert(s) != s {
                return Err(invalid(
                    a.line,
                    a.expr_col,
                    "theta must lower the lower degree by a fixed amount",
                ));
            }
        }
        if theta.insert(g, p).is_some() {
            return Err(invalid(
                a.line,
                a.name_col,
                format!("`theta {}` is given twice", a.name),
            ));
        }
    }

    Ok(AlgebraDocument {
        name,
        section: fiber,
        fibration: Some(Fibration {
            base,
            twist,
            theta,
            via,
        }),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    const EXAMPLE: &str = "\
algebra example
generator a : degree 3
generator b : degree 3
generator c : degree 3
generator d : degree 3
generator u : degree 6
generator v : degree 11
d v = a*b*c*d + u^2
";

    #[test]
    fn example_document() {
        let doc: AlgebraDocument<Q> = parse(EXAMPLE).unwrap();
        assert_eq!(doc.name, "example");
        assert_eq!(doc.section.generators.len(), 6);
        assert_eq!(doc.section.differential.len(), 1);
    }

    #[test]
    fn degree_mismatch_is_reported() {
        let e = parse::<Q>("generator a : degree 3\nd a = a").unwrap_err();
        assert!(
            matches!(
                e,
                DslError::DegreeMismatch {
                    line: 2,
                    expected: 4,
                    ..
                }
            ),
            "{e}"
        );
    }

    #[test]
    fn unknown_generator_in_differential() {
        let e = parse::<Q>("generator a : degree 3\nd b = a").unwrap_err();
        assert_eq!(
            e,
            DslError::UnknownGenerator {
                line: 2,
                column: 3,
                name: "b".into()
            }
        );
    }

    #[test]
    fn bad_statement_has_position() {
        let e = parse::<Q>("generator a : degree 3\n  gen b : degree 3").unwrap_err();
        assert!(matches!(
            e,
            DslError::Syntax {
                line: 2,
                column: 3,
                ..
            }
        ));
    }

    #[test]
    fn differential_must_square_to_zero() {
        let text = "generator a : degree 2\ngenerator x : degree 3\ngenerator y : degree 4\nd x = a^2\nd y = x*a";
        assert!(parse::<Q>(text).is_err());
    }

    #[test]
    fn degree_below_two_is_rejected() {
        assert!(matches!(
            parse::<Q>("generator t : degree 1"),
            Err(DslError::InvalidDeclaration { line: 1, .. })
        ));
    }
}
