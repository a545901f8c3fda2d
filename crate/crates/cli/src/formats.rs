//! Text and JSON encodings of polynomials, graphs and simplicial complexes.
//!
//! Polynomial text grammar (whitespace insignificant):
//!
//! ```text
//! poly  := ['+'|'-'] sterm (('+'|'-') sterm)*
//! sterm := [coef '*'] factor ('*' factor)* | coef
//! factor:= var ['^' uint]
//! coef  := int | int '/' uint | decimal
//! var   := letter (letter|digit|'_')*
//! ```
//!
//! An optional first line `vars: x1 x2 ...` pins the variable order; otherwise
//! variables are numbered by first appearance.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use pdrank_core::{Basis, ExponentVector, Graph, Rational, SimplicialComplex, SparsePoly};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    /// 1-based; 0 when the error has no position.
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            f.write_str(&self.message)
        } else {
            write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
        }
    }
}

fn err<T>(line: usize, col: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        col,
        message: message.into(),
    })
}

fn unpositioned<T>(message: impl Into<String>) -> Result<T, ParseError> {
    err(0, 0, message)
}

pub fn is_var_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Lexer {
    chars: Vec<(char, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

impl Lexer {
    fn new(text: &str, first_line: usize) -> Self {
        let mut chars = Vec::with_capacity(text.len());
        let (mut line, mut col) = (first_line, 1);
        for c in text.chars() {
            chars.push((c, line, col));
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        Lexer {
            chars,
            pos: 0,
            end: (line, col),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].0.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|c| c.0)
    }

    fn here(&self) -> (usize, usize) {
        self.chars.get(self.pos).map_or(self.end, |c| (c.1, c.2))
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let (l, c) = self.here();
        err(l, c, message)
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let start = self.pos;
        while self.peek().is_some_and(&pred) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().map(|c| c.0).collect()
    }

    fn describe_next(&self) -> String {
        match self.peek() {
            Some(c) => format!("'{c}'"),
            None => "end of input".to_string(),
        }
    }
}

/// Parses `int`, `int/uint` or `int.digits` starting at the cursor.
fn parse_coef(lx: &mut Lexer) -> Result<Rational, ParseError> {
    let (line, col) = lx.here();
    let int = lx.take_while(|c| c.is_ascii_digit());
    if int.is_empty() {
        return lx.fail("malformed rational: expected digits");
    }
    let numer: BigInt = int.parse().expect("digits");
    let value = match lx.peek() {
        Some('/') => {
            lx.pos += 1;
            let den = lx.take_while(|c| c.is_ascii_digit());
            if den.is_empty() {
                return err(line, col, "malformed rational: missing denominator");
            }
            let den: BigInt = den.parse().expect("digits");
            if den.is_zero() {
                return err(line, col, "malformed rational: zero denominator");
            }
            Rational::new(numer, den)
        }
        Some('.') => {
            lx.pos += 1;
            let frac = lx.take_while(|c| c.is_ascii_digit());
            if frac.is_empty() {
                return err(line, col, "malformed rational: missing digits after '.'");
            }
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            let frac: BigInt = frac.parse().expect("digits");
            Rational::new(numer * &scale + frac, scale)
        }
        _ => Rational::from_integer(numer),
    };
    match lx.peek() {
        Some('e' | 'E') => err(line, col, "floating-point exponent notation is not accepted"),
        Some('.' | '/') => err(line, col, "malformed rational"),
        _ => Ok(value),
    }
}

/// Parses a coefficient string such as `-3/2`, `0.25` or `7`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let mut lx = Lexer::new(body, 1);
    let v = parse_coef(&mut lx).map_err(|e| ParseError {
        line: 0,
        col: 0,
        message: format!("{} in {s:?}", e.message),
    })?;
    if lx.pos != lx.chars.len() {
        return unpositioned(format!("malformed rational {s:?}"));
    }
    Ok(if neg { -v } else { v })
}

struct VarTable {
    names: Vec<String>,
    index: HashMap<String, usize>,
    pinned: bool,
}

impl VarTable {
    fn lookup(&mut self, name: &str) -> Option<usize> {
        if let Some(&i) = self.index.get(name) {
            return Some(i);
        }
        if self.pinned {
            return None;
        }
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), self.names.len() - 1);
        Some(self.names.len() - 1)
    }
}

/// Splits off a `vars:` header line; returns the pinned names, the body and
/// the line number the body starts on.
fn split_header(text: &str) -> Result<(Option<Vec<String>>, &str, usize), ParseError> {
    let mut offset = 0;
    for (i, line) in text.split_inclusive('\n').enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            offset += line.len();
            continue;
        }
        let Some(rest) = trimmed.strip_prefix("vars:") else {
            return Ok((None, text, 1));
        };
        let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
        let col = line.find("vars:").unwrap_or(0) + 1;
        for (j, n) in names.iter().enumerate() {
            if !is_var_name(n) {
                return err(i + 1, col, format!("invalid variable name {n:?} in vars header"));
            }
            if names[..j].contains(n) {
                return err(i + 1, col, format!("duplicate variable {n:?} in vars header"));
            }
        }
        return Ok((Some(names), &text[offset + line.len()..], i + 2));
    }
    Ok((None, text, 1))
}

/// Parses the text grammar into a canonical polynomial in the ordinary basis.
pub fn parse_poly(text: &str) -> Result<SparsePoly, ParseError> {
    let (header, body, first_line) = split_header(text)?;
    let mut vars = VarTable {
        pinned: header.is_some(),
        index: header
            .iter()
            .flatten()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect(),
        names: header.unwrap_or_default(),
    };
    let mut lx = Lexer::new(body, first_line);
    let mut terms: Vec<(Vec<(usize, u32)>, Rational)> = Vec::new();

    lx.skip_ws();
    if lx.peek().is_none() {
        return lx.fail("empty polynomial (write 0 for the zero polynomial)");
    }
    let mut sign = match lx.peek() {
        Some('-') => {
            lx.pos += 1;
            -1
        }
        Some('+') => {
            lx.pos += 1;
            1
        }
        _ => 1,
    };
    loop {
        lx.skip_ws();
        let (factors, coef) = parse_sterm(&mut lx, &mut vars)?;
        terms.push((factors, if sign < 0 { -coef } else { coef }));
        lx.skip_ws();
        sign = match lx.peek() {
            None => break,
            Some('+') => 1,
            Some('-') => -1,
            Some(c) if c.is_ascii_alphabetic() || c.is_ascii_digit() => {
                return lx.fail(format!("expected '*', '+' or '-' before {}", lx.describe_next()))
            }
            _ => return lx.fail(format!("expected '+' or '-', found {}", lx.describe_next())),
        };
        lx.pos += 1;
    }

    let n = vars.names.len();
    let dense = terms.into_iter().map(|(factors, coef)| {
        let mut e = vec![0u32; n];
        for (i, p) in factors {
            e[i] += p;
        }
        (ExponentVector::new(e), coef)
    });
    SparsePoly::from_terms(vars.names, dense, Basis::Ordinary).map_err(|e| ParseError {
        line: 0,
        col: 0,
        message: e.to_string(),
    })
}

fn parse_sterm(lx: &mut Lexer, vars: &mut VarTable) -> Result<(Vec<(usize, u32)>, Rational), ParseError> {
    let mut coef = Rational::one();
    let mut factors = Vec::new();
    match lx.peek() {
        Some(c) if c.is_ascii_digit() => {
            coef = parse_coef(lx)?;
            lx.skip_ws();
            match lx.peek() {
                Some('*') => lx.pos += 1,
                Some(c) if c.is_ascii_alphabetic() => {
                    return lx.fail("expected '*' between coefficient and variable");
                }
                _ => return Ok((factors, coef)),
            }
            lx.skip_ws();
        }
        Some(c) if c.is_ascii_alphabetic() => {}
        Some('.') => return lx.fail("malformed rational: expected digits before '.'"),
        _ => return lx.fail(format!("expected a term, found {}", lx.describe_next())),
    }
    loop {
        factors.push(parse_factor(lx, vars)?);
        lx.skip_ws();
        if lx.peek() != Some('*') {
            return Ok((factors, coef));
        }
        lx.pos += 1;
        lx.skip_ws();
    }
}

fn parse_factor(lx: &mut Lexer, vars: &mut VarTable) -> Result<(usize, u32), ParseError> {
    let (line, col) = lx.here();
    if !lx.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
        return lx.fail(format!("expected a variable, found {}", lx.describe_next()));
    }
    let name = lx.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
    let Some(idx) = vars.lookup(&name) else {
        return err(line, col, format!("variable {name:?} is not declared in the vars header"));
    };
    lx.skip_ws();
    if lx.peek() != Some('^') {
        return Ok((idx, 1));
    }
    lx.pos += 1;
    lx.skip_ws();
    if lx.peek() == Some('-') {
        return lx.fail("negative exponent");
    }
    let digits = lx.take_while(|c| c.is_ascii_digit());
    if digits.is_empty() {
        return lx.fail(format!("expected an exponent, found {}", lx.describe_next()));
    }
    match digits.parse::<u32>() {
        Ok(p) => Ok((idx, p)),
        Err(_) => err(line, col, format!("exponent {digits} is too large")),
    }
}

/// `p/q` with `q > 0`, also for integers.
pub fn ratio_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn coef_text(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        ratio_string(r)
    }
}

/// Renders in the text grammar with a `vars:` header; terms in decreasing lex
/// order. `parse_poly(format_poly(f)) == f` for ordinary-basis `f`.
pub fn format_poly(f: &SparsePoly) -> String {
    let f = f.to_ordinary();
    let mut out = String::from("vars:");
    for v in f.vars() {
        out.push(' ');
        out.push_str(v);
    }
    out.push('\n');
    if f.is_zero() {
        out.push_str("0\n");
        return out;
    }
    for (i, t) in f.terms().iter().rev().enumerate() {
        let neg = t.coef.is_negative();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let abs = t.coef.abs();
        let monomial = monomial_text(f.vars(), &t.exps);
        match (monomial.is_empty(), abs.is_one()) {
            (true, _) => out.push_str(&coef_text(&abs)),
            (false, true) => out.push_str(&monomial),
            (false, false) => {
                out.push_str(&coef_text(&abs));
                out.push('*');
                out.push_str(&monomial);
            }
        }
    }
    out.push('\n');
    out
}

/// `x1^2*x3`, or the empty string for the constant monomial.
pub fn monomial_text(vars: &[String], e: &ExponentVector) -> String {
    let parts: Vec<String> = e
        .as_slice()
        .iter()
        .zip(vars)
        .filter(|(&p, _)| p > 0)
        .map(|(&p, v)| if p == 1 { v.clone() } else { format!("{v}^{p}") })
        .collect();
    parts.join("*")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coef: String,
    pub exps: Vec<u32>,
}

impl PolyJson {
    pub fn from_poly(f: &SparsePoly) -> Self {
        let f = f.to_ordinary();
        PolyJson {
            vars: f.vars().to_vec(),
            terms: f
                .terms()
                .iter()
                .map(|t| TermJson {
                    coef: ratio_string(&t.coef),
                    exps: t.exps.as_slice().to_vec(),
                })
                .collect(),
        }
    }

    pub fn to_poly(&self) -> Result<SparsePoly, ParseError> {
        for (j, n) in self.vars.iter().enumerate() {
            if !is_var_name(n) {
                return unpositioned(format!("invalid variable name {n:?}"));
            }
            if self.vars[..j].contains(n) {
                return unpositioned(format!("duplicate variable {n:?}"));
            }
        }
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| {
                if t.exps.len() != self.vars.len() {
                    return unpositioned(format!(
                        "term {i}: {} exponents for {} variables",
                        t.exps.len(),
                        self.vars.len()
                    ));
                }
                Ok((ExponentVector::new(t.exps.clone()), parse_rational(&t.coef)?))
            })
            .collect::<Result<Vec<_>, _>>()?;
        SparsePoly::from_terms(self.vars.clone(), terms, Basis::Ordinary).map_err(|e| ParseError {
            line: 0,
            col: 0,
            message: e.to_string(),
        })
    }
}

pub fn parse_poly_json(text: &str) -> Result<SparsePoly, ParseError> {
    let p: PolyJson = serde_json::from_str(text).map_err(|e| ParseError {
        line: e.line(),
        col: e.column(),
        message: format!("invalid JSON polynomial: {e}"),
    })?;
    p.to_poly()
}

/// JSON when the first non-blank character is `{`, the text grammar otherwise.
pub fn read_poly(text: &str) -> Result<SparsePoly, ParseError> {
    if text.trim_start().starts_with('{') {
        parse_poly_json(text)
    } else {
        parse_poly(text)
    }
}

/// Content lines with their 1-based numbers; `#` starts a comment.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
}

fn parse_vertex(tok: &str, line: usize, col: usize) -> Result<usize, ParseError> {
    match tok.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        Ok(_) => err(line, col, "vertex 0 is out of range (vertices are 1-based)"),
        Err(_) => err(line, col, format!("expected a vertex id, found {tok:?}")),
    }
}

fn token_col(line: &str, tok: &str) -> usize {
    let base = line.as_ptr() as usize;
    tok.as_ptr() as usize - base + 1
}

fn parse_header(rest: &str, line: usize, keyword: &str) -> Result<usize, ParseError> {
    let toks: Vec<&str> = rest.split_whitespace().collect();
    match toks.as_slice() {
        [n] => n
            .parse()
            .or_else(|_| err(line, 1, format!("malformed '{keyword}' header: {n:?} is not a count"))),
        _ => err(line, 1, format!("malformed '{keyword}' header: expected '{keyword} <n>'")),
    }
}

/// Edge list with optional `p <n>` header; duplicate edges are merged.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut declared: Option<usize> = None;
    let mut edges: Vec<(usize, usize, usize, usize)> = Vec::new();
    for (line, content) in content_lines(text) {
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("p ").or((content == "p").then_some("")) {
            if declared.is_some() || !edges.is_empty() {
                return err(line, 1, "the 'p' header must come first and only once");
            }
            declared = Some(parse_header(rest, line, "p")?);
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks.len() != 2 {
            return err(line, 1, format!("expected an edge 'u v', found {content:?}"));
        }
        let u = parse_vertex(toks[0], line, token_col(content, toks[0]))?;
        let v = parse_vertex(toks[1], line, token_col(content, toks[1]))?;
        if u == v {
            return err(line, 1, format!("loop edge at vertex {u}"));
        }
        edges.push((u, v, line, token_col(content, toks[0])));
    }
    let n = match declared {
        Some(n) => {
            if let Some(&(u, v, l, c)) = edges.iter().find(|e| e.0 > n || e.1 > n) {
                return err(l, c, format!("edge {u} {v} is out of range for {n} vertices"));
            }
            n
        }
        None => edges.iter().map(|e| e.0.max(e.1)).max().unwrap_or(0),
    };
    Graph::new(n, edges.iter().map(|e| (e.0, e.1))).map_err(|e| ParseError {
        line: 0,
        col: 0,
        message: e.to_string(),
    })
}

/// One facet per line with optional `ground <n>` header. Blank lines before
/// the first and after the last facet are ignored; a blank line between
/// facets is an empty facet and rejected.
pub fn parse_complex(text: &str) -> Result<SimplicialComplex, ParseError> {
    let mut declared: Option<usize> = None;
    let mut facets: Vec<(Vec<usize>, usize)> = Vec::new();
    let mut pending_blank: Option<usize> = None;
    for (line, content) in content_lines(text) {
        if content.is_empty() {
            if !facets.is_empty() && pending_blank.is_none() {
                pending_blank = Some(line);
            }
            continue;
        }
        if let Some(rest) = content.strip_prefix("ground") {
            if declared.is_some() || !facets.is_empty() {
                return err(line, 1, "the 'ground' header must come first and only once");
            }
            declared = Some(parse_header(rest, line, "ground")?);
            continue;
        }
        if let Some(blank) = pending_blank.take() {
            return err(blank, 1, "empty facet");
        }
        let facet = content
            .split_whitespace()
            .map(|t| parse_vertex(t, line, token_col(content, t)))
            .collect::<Result<Vec<_>, _>>()?;
        if let (Some(n), Some(&v)) = (declared, facet.iter().max()) {
            if v > n {
                return err(line, 1, format!("vertex {v} is out of range for ground set of size {n}"));
            }
        }
        facets.push((facet, line));
    }
    if facets.is_empty() {
        return unpositioned("complex has no facets");
    }
    let n = declared.unwrap_or_else(|| facets.iter().flat_map(|f| f.0.iter().copied()).max().unwrap_or(0));
    SimplicialComplex::new(n, facets.into_iter().map(|f| f.0)).map_err(|e| ParseError {
        line: 0,
        col: 0,
        message: e.to_string(),
    })
}

pub fn format_graph(g: &Graph) -> String {
    let mut out = format!("p {}\n", g.n());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn format_complex(c: &SimplicialComplex) -> String {
    let mut out = format!("ground {}\n", c.ground());
    for f in c.facets() {
        let vs: Vec<String> = f.iter().map(|v| v.to_string()).collect();
        out.push_str(&vs.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn simple_sum() {
        let f = parse_poly("x1*x2 + x3").unwrap();
        assert_eq!(f.vars(), ["x1", "x2", "x3"]);
        assert_eq!(f.terms().len(), 2);
    }

    #[test]
    fn cancellation_and_merge() {
        let z = parse_poly("2*x1 - 2*x1").unwrap();
        assert!(z.is_zero());
        assert_eq!(z.vars(), ["x1"]);
        let f = parse_poly("x1^2*x2 + x1^2*x2").unwrap();
        assert_eq!(f.terms().len(), 1);
        assert_eq!(f.terms()[0].coef, q(2, 1));
        assert_eq!(f.terms()[0].exps.as_slice(), [2, 1]);
    }

    #[test]
    fn coefficients_are_exact() {
        let f = parse_poly("3/6*a + 0.25*b - 1.5 + c*c").unwrap();
        assert_eq!(f.coefficient(&ExponentVector::new(vec![1, 0, 0])), q(1, 2));
        assert_eq!(f.coefficient(&ExponentVector::new(vec![0, 1, 0])), q(1, 4));
        assert_eq!(f.coefficient(&ExponentVector::new(vec![0, 0, 0])), q(-3, 2));
        assert_eq!(f.coefficient(&ExponentVector::new(vec![0, 0, 2])), q(1, 1));
    }

    #[test]
    fn header_pins_order() {
        let f = parse_poly("vars: z y x\nx*y + z").unwrap();
        assert_eq!(f.vars(), ["z", "y", "x"]);
        assert!(f.contains_monomial(&ExponentVector::new(vec![0, 1, 1])));
        let g = parse_poly("vars: z y\n\nx*y").unwrap_err();
        assert_eq!((g.line, g.col), (3, 1));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_poly("x1 +\n  x2^-1").unwrap_err();
        assert_eq!((e.line, e.col), (2, 6));
        assert!(e.message.contains("negative exponent"));
        let e = parse_poly("x + 1/0*y").unwrap_err();
        assert_eq!((e.line, e.col), (1, 5));
        assert!(e.message.contains("zero denominator"));
        assert!(parse_poly("1.5e3*x").unwrap_err().message.contains("floating-point"));
        assert!(parse_poly("3x").unwrap_err().message.contains("'*'"));
        assert!(parse_poly("x +").is_err());
        assert!(parse_poly("x ++ y").is_err());
        assert!(parse_poly("1/2/3").is_err());
        assert!(parse_poly("1.").is_err());
        assert!(parse_poly("").is_err());
        assert!(parse_poly("x^").is_err());
        assert!(parse_poly("x*").is_err());
    }

    #[test]
    fn leading_sign_and_constants() {
        let f = parse_poly("-x + 7").unwrap();
        assert_eq!(f.coefficient(&ExponentVector::new(vec![1])), q(-1, 1));
        assert_eq!(f.coefficient(&ExponentVector::new(vec![0])), q(7, 1));
        assert!(parse_poly("0").unwrap().is_zero());
    }

    #[test]
    fn format_examples() {
        let f = parse_poly("x1*x2 + x3 - 3/2*x1^2 + 4").unwrap();
        assert_eq!(format_poly(&f), "vars: x1 x2 x3\n-3/2*x1^2 + x1*x2 + x3 + 4\n");
        let z = parse_poly("x - x").unwrap();
        assert_eq!(format_poly(&z), "vars: x\n0\n");
    }

    #[test]
    fn json_round_trip_and_errors() {
        let f = parse_poly("x1^2*x3*3/2 + -1").unwrap_err();
        assert!(f.line == 1);
        let f = parse_poly("3/2*x1^2*x3 - 1").unwrap();
        let j = serde_json::to_string(&PolyJson::from_poly(&f)).unwrap();
        assert_eq!(
            j,
            r#"{"vars":["x1","x3"],"terms":[{"coef":"-1/1","exps":[0,0]},{"coef":"3/2","exps":[2,1]}]}"#
        );
        assert_eq!(read_poly(&j).unwrap(), f);
        assert!(parse_poly_json(r#"{"vars":["x"],"terms":[{"coef":"1","exps":[1,2]}]}"#).is_err());
        assert!(parse_poly_json(r#"{"vars":["x"],"terms":[{"coef":"1/0","exps":[1]}]}"#).is_err());
        assert!(parse_poly_json(r#"{"vars":["x","x"],"terms":[]}"#).is_err());
        let e = parse_poly_json("{\"vars\": [\n 1]}").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/2").unwrap(), q(-3, 2));
        assert_eq!(parse_rational("0.125").unwrap(), q(1, 8));
        assert_eq!(parse_rational("+4").unwrap(), q(4, 1));
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1 2").is_err());
        assert_eq!(ratio_string(&q(4, 2)), "2/1");
    }

    #[test]
    fn graphs() {
        let g = parse_graph("p 3\n1 2\n2 3\n1 3").unwrap();
        assert_eq!(g, Graph::complete(3));
        let g = parse_graph("# path\n1 2\n2 3\n2 1\n").unwrap();
        assert_eq!((g.n(), g.m()), (3, 2));
        assert_eq!(parse_graph("p 5\n").unwrap().n(), 5);
        let e = parse_graph("p 3\n1 4").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse_graph("1 1").unwrap_err().message.contains("loop"));
        assert!(parse_graph("0 1").unwrap_err().message.contains("out of range"));
        assert!(parse_graph("1 2 3").is_err());
        assert!(parse_graph("1 2\np 3").is_err());
        assert_eq!(parse_graph(&format_graph(&g)).unwrap(), g);
    }

    #[test]
    fn complexes() {
        let c = parse_complex("1 2\n2 3").unwrap();
        assert_eq!((c.ground(), c.facets().len()), (3, 2));
        let c = parse_complex("ground 4\n1 2\n1\n").unwrap();
        assert_eq!(c.facets(), [vec![1, 2]]);
        assert_eq!(c.ground(), 4);
        assert!(parse_complex("1 2\n\n3").unwrap_err().message.contains("empty facet"));
        assert!(parse_complex("\n1 2\n3\n\n").is_ok());
        assert!(parse_complex("ground 2\n1 3").is_err());
        assert!(parse_complex("").is_err());
        assert!(parse_complex("1 x").is_err());
        assert_eq!(parse_complex(&format_complex(&c)).unwrap(), c);
    }

    fn arb_poly() -> impl Strategy<Value = SparsePoly> {
        (1usize..5)
            .prop_flat_map(|n| {
                proptest::collection::vec(
                    (proptest::collection::vec(0u32..4, n), -20i64..20, 1i64..9),
                    0..8,
                )
                .prop_map(move |ts| (n, ts))
            })
            .prop_map(|(n, ts)| {
                SparsePoly::from_terms(
                    pdrank_core::poly::numbered_vars("x", n),
                    ts.into_iter()
                        .map(|(e, p, q)| (ExponentVector::new(e), Rational::new(p.into(), q.into()))),
                    Basis::Ordinary,
                )
                .unwrap()
            })
    }

    proptest! {
        #[test]
        fn text_round_trip(f in arb_poly()) {
            prop_assert_eq!(parse_poly(&format_poly(&f)).unwrap(), f);
        }

        #[test]
        fn json_round_trip(f in arb_poly()) {
            let j = serde_json::to_string(&PolyJson::from_poly(&f)).unwrap();
            prop_assert_eq!(read_poly(&j).unwrap(), f);
        }

        #[test]
        fn parsing_is_idempotent(f in arb_poly()) {
            let once = format_poly(&parse_poly(&format_poly(&f)).unwrap());
            prop_assert_eq!(once, format_poly(&f));
        }
    }
}
