//! Text format for user-supplied equivariant systems.
//!
//! ```text
//! # order of the cyclotomic field / acting group
//! order 8
//! gen x*y - u*t^2
//! gen (x+y+z)*z - v*t^2
//! act x -> e^5*z
//! act y -> e*(x+y+z)
//! act z -> -e*y
//! act t -> t
//! act u -> e^6*v
//! act v -> -e^2*u
//! point 0, 0, 0, 1, 0, 0
//! hyperplane t
//! ```
//!
//! `e` denotes the primitive root of the declared order; coefficients are
//! integer polynomials in `e` (negative powers allowed on `e`). Variables
//! missing an `act` line are fixed. `point`/`hyperplane` lines add fixed-locus
//! candidates.

use thiserror::Error;

use super::cyclotomic::Cyclotomic;
use super::families::{Candidate, EquivariantFamily, GroupAction};
use super::poly::{MPoly, NVARS, VAR_NAMES};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseFamilyError {
    #[error("line {0}: {1}")]
    Line(usize, String),
    #[error("missing `order` declaration")]
    MissingOrder,
    #[error("no generators declared")]
    NoGenerators,
}

fn err(line: usize, msg: impl Into<String>) -> ParseFamilyError {
    ParseFamilyError::Line(line, msg.into())
}

#[derive(Clone, Copy, PartialEq, Debug)]
enum Tok {
    Int(i64),
    Root,
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str, line: usize) -> Result<Vec<Tok>, ParseFamilyError> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' => {
                chars.next();
            }
            '0'..='9' => {
                let mut v: i64 = 0;
                while let Some(&d) = chars.peek() {
                    if let Some(dig) = d.to_digit(10) {
                        v = v * 10 + dig as i64;
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Int(v));
            }
            '+' => {
                out.push(Tok::Plus);
                chars.next();
            }
            '-' => {
                out.push(Tok::Minus);
                chars.next();
            }
            '*' => {
                out.push(Tok::Star);
                chars.next();
            }
            '^' => {
                out.push(Tok::Caret);
                chars.next();
            }
            '(' => {
                out.push(Tok::LParen);
                chars.next();
            }
            ')' => {
                out.push(Tok::RParen);
                chars.next();
            }
            'e' => {
                out.push(Tok::Root);
                chars.next();
            }
            other => {
                if let Some(i) = VAR_NAMES.iter().position(|v| v.starts_with(other)) {
                    out.push(Tok::Var(i));
                    chars.next();
                } else {
                    return Err(err(line, format!("unexpected character {other:?}")));
                }
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    order: u32,
    line: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.peek();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<MPoly, ParseFamilyError> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MPoly, ParseFamilyError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(Tok::Star) {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MPoly, ParseFamilyError> {
        if self.peek() == Some(Tok::Minus) {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<MPoly, ParseFamilyError> {
        let base = self.atom()?;
        if self.peek() != Some(Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek() == Some(Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let Some(Tok::Int(k)) = self.next() else {
            return Err(err(self.line, "expected integer exponent after ^"));
        };
        if negative {
            let Some(c) = constant_of(&base) else {
                return Err(err(self.line, "negative exponents only apply to constants"));
            };
            let inv = c
                .pow(-k)
                .map_err(|_| err(self.line, "cannot invert zero"))?;
            return Ok(MPoly::constant(inv));
        }
        if k > u8::MAX as i64 {
            return Err(err(self.line, "exponent too large"));
        }
        Ok(base.pow(k as u8))
    }

    fn atom(&mut self) -> Result<MPoly, ParseFamilyError> {
        match self.next() {
            Some(Tok::Int(v)) => Ok(MPoly::constant(Cyclotomic::from_integer(self.order, v))),
            Some(Tok::Root) => Ok(MPoly::constant(Cyclotomic::root(self.order, 1))),
            Some(Tok::Var(i)) => Ok(MPoly::var(self.order, i)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    return Err(err(self.line, "missing closing parenthesis"));
                }
                Ok(inner)
            }
            other => Err(err(self.line, format!("unexpected token {other:?}"))),
        }
    }
}

fn constant_of(p: &MPoly) -> Option<Cyclotomic> {
    if p.is_zero() {
        return Some(Cyclotomic::zero(p.order()));
    }
    if p.total_degree() == 0 {
        return Some(p.coefficient(&[0; NVARS]));
    }
    None
}

fn parse_expr(s: &str, order: u32, line: usize) -> Result<MPoly, ParseFamilyError> {
    let toks = tokenize(s, line)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        order,
        line,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(err(line, "trailing tokens after expression"));
    }
    Ok(e)
}

/// Extract the linear coefficients of an action image over the given
/// variable block.
fn linear_coeffs(
    p: &MPoly,
    block: std::ops::Range<usize>,
    order: u32,
    line: usize,
) -> Result<Vec<Cyclotomic>, ParseFamilyError> {
    let mut out = vec![Cyclotomic::zero(order); block.len()];
    for (e, c) in p.terms() {
        let mut hit = None;
        for i in 0..NVARS {
            match (e[i], block.contains(&i)) {
                (0, _) => {}
                (1, true) if hit.is_none() => hit = Some(i),
                _ => {
                    return Err(err(
                        line,
                        "action image must be linear in its coordinate block",
                    ))
                }
            }
        }
        match hit {
            Some(i) => out[i - block.start] = c.clone(),
            None => return Err(err(line, "action image has a constant term")),
        }
    }
    Ok(out)
}

/// Parse a whole family description.
pub fn parse_family(text: &str) -> Result<EquivariantFamily, ParseFamilyError> {
    let mut order: Option<u32> = None;
    let mut group_order: Option<u32> = None;
    let mut gens: Vec<(usize, String)> = Vec::new();
    let mut acts: Vec<(usize, usize, String)> = Vec::new();
    let mut points: Vec<(usize, String)> = Vec::new();
    let mut hyperplanes: Vec<(usize, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, rest) = match line.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (line, ""),
        };
        match key {
            "order" => {
                let v: u32 = rest
                    .parse()
                    .map_err(|_| err(line_no, "order must be a positive integer"))?;
                if v == 0 {
                    return Err(err(line_no, "order must be positive"));
                }
                order = Some(v);
            }
            "group-order" => {
                let v: u32 = rest
                    .parse()
                    .map_err(|_| err(line_no, "group-order must be a positive integer"))?;
                group_order = Some(v);
            }
            "gen" => gens.push((line_no, rest.to_string())),
            "act" => {
                let (var_s, expr_s) = rest
                    .split_once("->")
                    .ok_or_else(|| err(line_no, "act line needs `var -> expr`"))?;
                let var_s = var_s.trim();
                let var = VAR_NAMES
                    .iter()
                    .position(|v| *v == var_s)
                    .ok_or_else(|| err(line_no, format!("unknown variable {var_s:?}")))?;
                acts.push((line_no, var, expr_s.trim().to_string()));
            }
            "point" => points.push((line_no, rest.to_string())),
            "hyperplane" => hyperplanes.push((line_no, rest.to_string())),
            other => return Err(err(line_no, format!("unknown directive {other:?}"))),
        }
    }

    let order = order.ok_or(ParseFamilyError::MissingOrder)?;
    if gens.is_empty() {
        return Err(ParseFamilyError::NoGenerators);
    }

    let generators = gens
        .into_iter()
        .map(|(line, s)| parse_expr(&s, order, line))
        .collect::<Result<Vec<_>, _>>()?;

    let mut action = GroupAction::identity(order);
    action.order = group_order.unwrap_or(order);
    for (line, var, s) in acts {
        let image = parse_expr(&s, order, line)?;
        if var < 4 {
            let coeffs = linear_coeffs(&image, 0..4, order, line)?;
            for j in 0..4 {
                action.proj[var][j] = coeffs[j].clone();
            }
        } else {
            let coeffs = linear_coeffs(&image, 4..6, order, line)?;
            for j in 0..2 {
                action.base[var - 4][j] = coeffs[j].clone();
            }
        }
    }

    let mut default_candidates = Vec::new();
    for (k, (line, s)) in points.into_iter().enumerate() {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 6 {
            return Err(err(line, "point needs six comma-separated coordinates"));
        }
        let vals = parts
            .iter()
            .map(|p| {
                parse_expr(p.trim(), order, line).and_then(|e| {
                    constant_of(&e).ok_or_else(|| err(line, "point coordinates must be constants"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        default_candidates.push(Candidate::point(
            &format!("point-{}", k + 1),
            [
                vals[0].clone(),
                vals[1].clone(),
                vals[2].clone(),
                vals[3].clone(),
            ],
            [vals[4].clone(), vals[5].clone()],
        ));
    }
    for (line, s) in hyperplanes {
        let var = VAR_NAMES[..4]
            .iter()
            .position(|v| *v == s.trim())
            .ok_or_else(|| err(line, "hyperplane takes a projective variable name"))?;
        default_candidates.push(Candidate::coordinate_hyperplane(
            &format!("{} = 0", s.trim()),
            order,
            var,
        ));
    }

    Ok(EquivariantFamily {
        name: "user-system".into(),
        field_order: order,
        generators,
        action,
        param: None,
        default_candidates,
    })
}
