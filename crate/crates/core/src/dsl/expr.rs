use super::DslError;
use crate::algebra::{FreeCga, Polynomial};
use crate::scalar::{parse_rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Open,
    Close,
}

/// Where an expression sits in its document, for diagnostics.
pub(crate) struct Span {
    pub line: usize,
    /// Column of the first character of the expression, 1-based.
    pub column: usize,
}

fn tokenize(text: &str, span: &Span) -> Result<Vec<(Tok, usize)>, DslError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let col = span.column + text[..pos].chars().count();
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '*' | '·' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '/' => Some(Tok::Slash),
            '(' => Some(Tok::Open),
            ')' => Some(Tok::Close),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|x| x.1).collect();
            out.push((Tok::Number(s), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].1.is_alphanumeric() || chars[i].1 == '_' || chars[i].1 == '\'')
            {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|x| x.1).collect();
            out.push((Tok::Ident(s), col));
        } else {
            return Err(DslError::Syntax {
                line: span.line,
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a, F> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    alg: &'a FreeCga,
    span: &'a Span,
    end_col: usize,
    warnings: &'a mut Vec<String>,
    _f: std::marker::PhantomData<F>,
}

impl<F: Scalar> Parser<'_, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn syntax(&self, message: impl Into<String>) -> DslError {
        DslError::Syntax {
            line: self.span.line,
            column: self.col(),
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<Polynomial<F>, DslError> {
        let mut out = Polynomial::zero();
        let mut negate = false;
        match self.peek() {
            Some(Tok::Plus) => self.pos += 1,
            Some(Tok::Minus) => {
                negate = true;
                self.pos += 1;
            }
            _ => {}
        }
        loop {
            let t = self.term()?;
            if negate {
                out -= &t;
            } else {
                out += &t;
            }
            match self.peek() {
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                _ => return Ok(out),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Polynomial<F>, DslError> {
        let start = self.col();
        let mut odd_seen: Vec<(usize, u32)> = Vec::new();
        let mut acc = self.factor(&mut odd_seen)?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let f = self.factor(&mut odd_seen)?;
            acc = self.alg.mul(&acc, &f);
        }
        for (g, count) in odd_seen {
            if count > 1 {
                self.warnings.push(format!(
                    "{}:{}: odd generator `{}` appears {count} times in a product; the term is zero",
                    self.span.line,
                    start,
                    self.alg.generator(g).name
                ));
            }
        }
        Ok(acc)
    }

    fn factor(&mut self, odd_seen: &mut Vec<(usize, u32)>) -> Result<Polynomial<F>, DslError> {
        let col = self.col();
        let (base, gen) = match self.peek().cloned() {
            Some(Tok::Number(n)) => {
                self.pos += 1;
                let mut text = n;
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    let Some(Tok::Number(d)) = self.peek().cloned() else {
                        return Err(self.syntax("expected a denominator after `/`"));
                    };
                    self.pos += 1;
                    if d.trim_start_matches('0').is_empty() {
                        return Err(DslError::Syntax {
                            line: self.span.line,
                            column: col,
                            message: "zero denominator".into(),
                        });
                    }
                    text = format!("{text}/{d}");
                }
                let c: F = parse_rational(&text)
                    .ok_or_else(|| self.syntax(format!("bad number `{text}`")))?;
                (Polynomial::constant(c), None)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let g = self.alg.index_of(&name).ok_or(DslError::UnknownGenerator {
                    line: self.span.line,
                    column: col,
                    name: name.clone(),
                })?;
                (Polynomial::generator(g), Some(g))
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(self.syntax("expected `)`"));
                }
                self.pos += 1;
                (inner, None)
            }
            Some(t) => return Err(self.syntax(format!("unexpected {}", describe(&t)))),
            None => return Err(self.syntax("unexpected end of expression")),
        };
        let mut exponent = 1;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let Some(Tok::Number(e)) = self.peek().cloned() else {
                return Err(self.syntax("expected an exponent after `^`"));
            };
            exponent = e
                .parse::<u32>()
                .map_err(|_| self.syntax(format!("exponent `{e}` is too large")))?;
            self.pos += 1;
        }
        if let Some(g) = gen.filter(|&g| self.alg.is_odd(g)) {
            match odd_seen.iter_mut().find(|(h, _)| *h == g) {
                Some(entry) => entry.1 += exponent,
                None => odd_seen.push((g, exponent)),
            }
        }
        Ok(self.alg.pow(&base, exponent))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Number(s) => format!("`{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Caret => "`^`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Open => "`(`".into(),
        Tok::Close => "`)`".into(),
    }
}

/// Parses `text` into a polynomial of `alg`, reordering products into
/// generator order with Koszul signs.
pub(crate) fn parse_expr<F: Scalar>(
    text: &str,
    alg: &FreeCga,
    span: &Span,
    warnings: &mut Vec<String>,
) -> Result<Polynomial<F>, DslError> {
    let toks = tokenize(text, span)?;
    if toks.is_empty() {
        return Err(DslError::Syntax {
            line: span.line,
            column: span.column,
            message: "empty expression".into(),
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        alg,
        span,
        end_col: span.column + text.chars().count(),
        warnings,
        _f: std::marker::PhantomData,
    };
    let out = p.expr()?;
    if p.pos < p.toks.len() {
        let t = p.toks[p.pos].0.clone();
        return Err(p.syntax(format!("unexpected {}", describe(&t))));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Generator;
    use crate::Q;

    fn alg() -> FreeCga {
        FreeCga::new(
            vec![
                Generator::new("x", 3),
                Generator::new("y", 3),
                Generator::new("u", 6),
            ],
            20,
        )
        .unwrap()
    }

    fn parse(text: &str) -> (Result<Polynomial<Q>, DslError>, Vec<String>) {
        let mut w = Vec::new();
        let r = parse_expr(text, &alg(), &Span { line: 1, column: 1 }, &mut w);
        (r, w)
    }

    #[test]
    fn odd_swap_changes_sign() {
        let a = alg();
        let (yx, _) = parse("y*x");
        let (xy, _) = parse("x*y");
        assert_eq!(yx.unwrap(), -xy.unwrap());
        assert_eq!(a.format(&parse("y*x").0.unwrap()), "-x*y");
    }

    #[test]
    fn odd_square_warns_and_vanishes() {
        let (p, w) = parse("x*x + u^2");
        assert_eq!(alg().format(&p.unwrap()), "u^2");
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn rationals_and_parentheses() {
        let (p, _) = parse("3/2*(x*y - 2*x*y) + u");
        assert_eq!(alg().format(&p.unwrap()), "-3/2*x*y + u");
    }

    #[test]
    fn unknown_generator_has_position() {
        let (p, _) = parse("x*q");
        assert_eq!(
            p.unwrap_err(),
            DslError::UnknownGenerator {
                line: 1,
                column: 3,
                name: "q".into()
            }
        );
    }

    #[test]
    fn dangling_operator_is_a_syntax_error() {
        assert!(matches!(parse("x +").0, Err(DslError::Syntax { .. })));
        assert!(matches!(parse("x ^ y").0, Err(DslError::Syntax { .. })));
    }
}
