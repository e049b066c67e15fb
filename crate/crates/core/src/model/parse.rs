//! The line-oriented `.akspec` format.
//!
//! ```text
//! manifold iwasawa_ak
//! dim 6
//! coframe phi1 .. phi3
//! symbol F real nonzero d = opaque
//! d phi1 = -1/4*phi{13,}+1/4*phi{1,3}
//! omega = i*phi{1,1}+i*phi{2,2}+i*phi{3,3}
//! ```
//!
//! Monomials are written `phi{I,J}` (φ^I ∧ φ̄^J, both index lists
//! ascending); `phiK` is shorthand for `phi{K,}`. Coefficients are built from
//! rational literals `a/b`, `i`, symbol names, `*`, `^k`, unary `-` and
//! parentheses. Symbols without `conj` are real.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ManifoldSpec;
use crate::error::{Error, Result};
use crate::exterior::{Bidegree, Form, Monomial, MAX_DIM};
use crate::scalar::{Derivative, FunctionSymbol, GaussianRational, SymScalar, Symbol, SymbolTable};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Mono(Vec<usize>, Vec<usize>),
    Punct(char),
    DotDot,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, column: col, message: message.into() }
}

fn tokenize_line(text: &str, line: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let col = k + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let digits: String = chars[start..k].iter().collect();
            let value: BigInt = digits.parse().map_err(|_| syntax(line, col, "bad integer literal"))?;
            out.push(Token { tok: Tok::Int(value), line, col });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            let ident: String = chars[start..k].iter().collect();
            if ident == "phi" && k < chars.len() && chars[k] == '{' {
                let close = chars[k..]
                    .iter()
                    .position(|&ch| ch == '}')
                    .map(|p| p + k)
                    .ok_or_else(|| syntax(line, col, "unterminated monomial `phi{`"))?;
                let body: String = chars[k + 1..close].iter().collect();
                let (holo, anti) =
                    body.split_once(',').ok_or_else(|| syntax(line, col, "monomial must be written phi{I,J}"))?;
                let parse_set = |s: &str| -> Result<Vec<usize>> {
                    let mut v = Vec::new();
                    for ch in s.trim().chars() {
                        let d = ch
                            .to_digit(10)
                            .ok_or_else(|| syntax(line, col, format!("bad index `{ch}` in monomial")))?;
                        if d == 0 {
                            return Err(syntax(line, col, "monomial indices start at 1"));
                        }
                        if v.last().is_some_and(|&last| last >= d as usize) {
                            return Err(syntax(line, col, "monomial indices must be strictly ascending"));
                        }
                        v.push(d as usize);
                    }
                    Ok(v)
                };
                out.push(Token { tok: Tok::Mono(parse_set(holo)?, parse_set(anti)?), line, col });
                k = close + 1;
                continue;
            }
            out.push(Token { tok: Tok::Ident(ident), line, col });
            continue;
        }
        if c == '.' && k + 1 < chars.len() && chars[k + 1] == '.' {
            out.push(Token { tok: Tok::DotDot, line, col });
            k += 2;
            continue;
        }
        if "+-*/^()=".contains(c) {
            out.push(Token { tok: Tok::Punct(c), line, col });
            k += 1;
            continue;
        }
        return Err(syntax(line, col, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

/// Parses a generator name `phiK`.
fn generator_index(ident: &str) -> Option<usize> {
    let digits = ident.strip_prefix("phi")?;
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

struct ExprParser<'a> {
    tokens: &'a [Token],
    pos: usize,
    symbols: &'a BTreeMap<String, Symbol>,
    n: usize,
    line: usize,
    end_col: usize,
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_col, |t| t.col)
    }

    fn err(&self, message: impl Into<String>) -> Error {
        syntax(self.line, self.col(), message)
    }

    fn parse(mut self) -> Result<Form<SymScalar>> {
        if self.tokens.is_empty() {
            return Err(self.err("expected an expression"));
        }
        let f = self.sum()?;
        if self.pos != self.tokens.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(f)
    }

    fn sum(&mut self) -> Result<Form<SymScalar>> {
        let mut acc = self.product()?;
        while let Some(Tok::Punct(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.product()?;
            acc = if op == '+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Form<SymScalar>> {
        let mut acc = self.unary()?;
        while let Some(Tok::Punct('*')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = acc.wedge(&rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Form<SymScalar>> {
        if let Some(Tok::Punct('-')) = self.peek() {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Form<SymScalar>> {
        let base_col = self.col();
        let base = self.atom()?;
        if let Some(Tok::Punct('^')) = self.peek() {
            self.pos += 1;
            let negative = if let Some(Tok::Punct('-')) = self.peek() {
                self.pos += 1;
                true
            } else {
                false
            };
            let Some(Tok::Int(k)) = self.peek().cloned() else {
                return Err(self.err("expected an integer exponent"));
            };
            self.pos += 1;
            let k: u32 = u32::try_from(&k).map_err(|_| self.err("exponent too large"))?;
            if !(base.is_zero() || base.degree() == Some(0)) {
                return Err(syntax(self.line, base_col, "only scalars can be raised to a power"));
            }
            let mut s = base.coefficient(&Monomial::ONE);
            if negative {
                s = s.invert().map_err(|e| syntax(self.line, base_col, e.to_string()))?;
            }
            let mut acc = SymScalar::one();
            for _ in 0..k {
                acc = &acc * &s;
            }
            return Ok(Form::scalar(acc));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Form<SymScalar>> {
        let Some(tok) = self.tokens.get(self.pos).cloned() else {
            return Err(self.err("unexpected end of expression"));
        };
        self.pos += 1;
        match tok.tok {
            Tok::Int(num) => {
                if let Some(Tok::Punct('/')) = self.peek() {
                    self.pos += 1;
                    let Some(Tok::Int(den)) = self.peek().cloned() else {
                        return Err(self.err("expected a denominator"));
                    };
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    self.pos += 1;
                    return Ok(Form::scalar(SymScalar::from_constant(GaussianRational::real(BigRational::new(
                        num, den,
                    )))));
                }
                Ok(Form::scalar(SymScalar::from_constant(GaussianRational::from(num))))
            }
            Tok::Ident(name) if name == "i" => Ok(Form::scalar(SymScalar::from_constant(GaussianRational::i()))),
            Tok::Ident(name) => {
                if let Some(s) = self.symbols.get(&name) {
                    return Ok(Form::scalar(SymScalar::symbol(s.clone())));
                }
                if let Some(j) = generator_index(&name) {
                    if j == 0 || j > self.n {
                        return Err(syntax(
                            tok.line,
                            tok.col,
                            format!("generator `{name}` outside phi1..phi{}", self.n),
                        ));
                    }
                    return Ok(Form::basis(Monomial::holo(j)));
                }
                Err(Error::UnknownSymbol { name, line: tok.line })
            }
            Tok::Mono(holo, anti) => {
                if holo.iter().chain(&anti).any(|&j| j > self.n) {
                    return Err(syntax(tok.line, tok.col, format!("monomial index above {}", self.n)));
                }
                Ok(Form::basis(Monomial::new(&holo, &anti)))
            }
            Tok::Punct('(') => {
                let inner = self.sum()?;
                match self.peek() {
                    Some(Tok::Punct(')')) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.err("expected `)`")),
                }
            }
            other => Err(syntax(tok.line, tok.col, format!("unexpected token {other:?}"))),
        }
    }
}

struct SymbolDecl {
    name: String,
    line: usize,
    col: usize,
    conj: Option<String>,
    nonzero: bool,
    invertible: bool,
    /// `None` for `d = opaque`, otherwise the expression tokens.
    derivative: Option<Vec<Token>>,
    derivative_col: usize,
}

fn expect_ident(tokens: &[Token], k: usize, line: usize, end: usize, what: &str) -> Result<String> {
    match tokens.get(k) {
        Some(Token { tok: Tok::Ident(s), .. }) => Ok(s.clone()),
        Some(t) => Err(syntax(line, t.col, format!("expected {what}"))),
        None => Err(syntax(line, end, format!("expected {what}"))),
    }
}

fn expect_eq(tokens: &[Token], k: usize, line: usize, end: usize) -> Result<()> {
    match tokens.get(k) {
        Some(Token { tok: Tok::Punct('='), .. }) => Ok(()),
        Some(t) => Err(syntax(line, t.col, "expected `=`")),
        None => Err(syntax(line, end, "expected `=`")),
    }
}

const RESERVED: [&str; 8] = ["i", "real", "conj", "nonzero", "invertible", "d", "opaque", "omega"];

/// Parses an `.akspec` document into a validated [`ManifoldSpec`].
pub fn parse_spec(text: &str) -> Result<ManifoldSpec> {
    let mut name: Option<String> = None;
    let mut dim: Option<usize> = None;
    let mut coframe_seen = false;
    let mut decls: Vec<SymbolDecl> = Vec::new();
    let mut equations: BTreeMap<usize, (Vec<Token>, usize, usize)> = BTreeMap::new();
    let mut omega_tokens: Option<(Vec<Token>, usize, usize)> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let end = raw.chars().count() + 1;
        let tokens = tokenize_line(raw, line)?;
        let Some(first) = tokens.first() else { continue };
        let Tok::Ident(keyword) = &first.tok else {
            return Err(syntax(line, first.col, "expected a keyword"));
        };
        match keyword.as_str() {
            "manifold" => {
                if name.is_some() {
                    return Err(syntax(line, first.col, "duplicate `manifold` line"));
                }
                name = Some(expect_ident(&tokens, 1, line, end, "a manifold name")?);
                if tokens.len() > 2 {
                    return Err(syntax(line, tokens[2].col, "unexpected trailing input"));
                }
            }
            "dim" => {
                if dim.is_some() {
                    return Err(syntax(line, first.col, "duplicate `dim` line"));
                }
                let value = match tokens.get(1) {
                    Some(Token { tok: Tok::Int(v), col, .. }) => {
                        let v = usize::try_from(v).map_err(|_| syntax(line, *col, "dimension too large"))?;
                        if v == 0 || v % 2 != 0 || v / 2 > MAX_DIM {
                            return Err(syntax(
                                line,
                                *col,
                                format!("real dimension must be even and in 2..={}", 2 * MAX_DIM),
                            ));
                        }
                        v
                    }
                    Some(t) => return Err(syntax(line, t.col, "expected the real dimension")),
                    None => return Err(syntax(line, end, "expected the real dimension")),
                };
                if tokens.len() > 2 {
                    return Err(syntax(line, tokens[2].col, "unexpected trailing input"));
                }
                dim = Some(value);
            }
            "coframe" => {
                let n = dim.ok_or_else(|| syntax(line, first.col, "`coframe` must follow `dim`"))? / 2;
                let rest = &tokens[1..];
                let ok = match rest {
                    [Token { tok: Tok::Ident(a), .. }, Token { tok: Tok::DotDot, .. }, Token { tok: Tok::Ident(b), .. }] => {
                        generator_index(a) == Some(1) && generator_index(b) == Some(n)
                    }
                    _ => {
                        rest.len() == n
                            && rest
                                .iter()
                                .enumerate()
                                .all(|(k, t)| matches!(&t.tok, Tok::Ident(s) if generator_index(s) == Some(k + 1)))
                    }
                };
                if !ok {
                    return Err(syntax(line, first.col, format!("expected `coframe phi1 .. phi{n}`")));
                }
                coframe_seen = true;
            }
            "symbol" => {
                let sname = expect_ident(&tokens, 1, line, end, "a symbol name")?;
                if RESERVED.contains(&sname.as_str()) || generator_index(&sname).is_some() || sname == "phi" {
                    return Err(syntax(line, tokens[1].col, format!("`{sname}` is reserved")));
                }
                if decls.iter().any(|d| d.name == sname) {
                    return Err(syntax(line, tokens[1].col, format!("symbol `{sname}` declared twice")));
                }
                let mut decl = SymbolDecl {
                    name: sname,
                    line,
                    col: tokens[1].col,
                    conj: None,
                    nonzero: false,
                    invertible: false,
                    derivative: None,
                    derivative_col: end,
                };
                let mut real_seen = false;
                let mut d_seen = false;
                let mut k = 2;
                while k < tokens.len() {
                    let t = &tokens[k];
                    match &t.tok {
                        Tok::Ident(w) if w == "real" && decl.conj.is_none() && !real_seen => real_seen = true,
                        Tok::Ident(w) if w == "conj" && decl.conj.is_none() && !real_seen => {
                            decl.conj = Some(expect_ident(&tokens, k + 1, line, end, "the conjugate symbol name")?);
                            k += 1;
                        }
                        Tok::Ident(w) if w == "nonzero" => decl.nonzero = true,
                        Tok::Ident(w) if w == "invertible" => decl.invertible = true,
                        Tok::Ident(w) if w == "d" && !d_seen => {
                            d_seen = true;
                            expect_eq(&tokens, k + 1, line, end)?;
                            let expr = &tokens[k + 2..];
                            decl.derivative_col = expr.first().map_or(end, |t| t.col);
                            match expr {
                                [Token { tok: Tok::Ident(w), .. }] if w == "opaque" => decl.derivative = None,
                                [] => return Err(syntax(line, end, "expected a 1-form or `opaque`")),
                                _ => decl.derivative = Some(expr.to_vec()),
                            }
                            k = tokens.len();
                            continue;
                        }
                        _ => return Err(syntax(line, t.col, "unexpected symbol attribute")),
                    }
                    k += 1;
                }
                decls.push(decl);
            }
            "d" => {
                let n = dim.ok_or_else(|| syntax(line, first.col, "structure equations must follow `dim`"))? / 2;
                let gen = expect_ident(&tokens, 1, line, end, "a generator phiK")?;
                let j = generator_index(&gen)
                    .filter(|&j| j >= 1 && j <= n)
                    .ok_or_else(|| syntax(line, tokens[1].col, format!("expected a generator phi1..phi{n}")))?;
                expect_eq(&tokens, 2, line, end)?;
                if equations.contains_key(&j) {
                    return Err(syntax(line, first.col, format!("duplicate equation for phi{j}")));
                }
                equations.insert(j, (tokens[3..].to_vec(), line, end));
            }
            "omega" => {
                if omega_tokens.is_some() {
                    return Err(syntax(line, first.col, "duplicate `omega` line"));
                }
                expect_eq(&tokens, 1, line, end)?;
                omega_tokens = Some((tokens[2..].to_vec(), line, end));
            }
            other => return Err(syntax(line, first.col, format!("unknown keyword `{other}`"))),
        }
    }

    let missing = |what: &str| syntax(last_line + 1, 1, format!("missing `{what}` line"));
    let name = name.ok_or_else(|| missing("manifold"))?;
    let n = dim.ok_or_else(|| missing("dim"))? / 2;
    if !coframe_seen {
        return Err(missing("coframe"));
    }
    let (omega_toks, omega_line, omega_end) = omega_tokens.ok_or_else(|| missing("omega"))?;

    // Resolve symbol atoms: attributes are shared across a conjugate pair.
    let by_name: BTreeMap<&str, &SymbolDecl> = decls.iter().map(|d| (d.name.as_str(), d)).collect();
    let mut atoms: BTreeMap<String, Symbol> = BTreeMap::new();
    for d in &decls {
        let atom = match &d.conj {
            None => Symbol::real(&d.name, d.nonzero, d.invertible),
            Some(other) => {
                let partner = by_name
                    .get(other.as_str())
                    .ok_or_else(|| Error::UnknownSymbol { name: other.clone(), line: d.line })?;
                if partner.conj.as_deref() != Some(d.name.as_str()) {
                    return Err(syntax(
                        partner.line,
                        partner.col,
                        format!("`{}` must be declared `conj {}`", partner.name, d.name),
                    ));
                }
                Symbol::paired(&d.name, other, d.nonzero || partner.nonzero, d.invertible || partner.invertible)
            }
        };
        atoms.insert(d.name.clone(), atom);
    }

    let parse_expr = |tokens: &[Token], line: usize, end: usize| -> Result<Form<SymScalar>> {
        ExprParser { tokens, pos: 0, symbols: &atoms, n, line, end_col: end }.parse()
    };

    let mut table = SymbolTable::new();
    for d in &decls {
        let derivative = match &d.derivative {
            None => Derivative::Opaque,
            Some(tokens) => {
                let f = parse_expr(tokens, d.line, d.derivative_col)?;
                if !f.is_zero() && f.degree() != Some(1) {
                    return Err(Error::DegreeMismatch {
                        line: d.line,
                        message: format!("d {} = {f} is not a 1-form", d.name),
                    });
                }
                Derivative::Form(f)
            }
        };
        table.insert(FunctionSymbol { symbol: atoms[&d.name].clone(), derivative });
    }

    let mut structure = vec![Form::zero(); n];
    for (j, (tokens, line, end)) in &equations {
        let f = parse_expr(tokens, *line, *end)?;
        if !f.is_zero() && f.degree() != Some(2) {
            return Err(Error::DegreeMismatch { line: *line, message: format!("d phi{j} = {f} is not a pure 2-form") });
        }
        structure[j - 1] = f;
    }

    let omega = parse_expr(&omega_toks, omega_line, omega_end)?;
    if omega.bidegree() != Some(Bidegree::new(1, 1)) {
        return Err(Error::DegreeMismatch {
            line: omega_line,
            message: format!("omega = {omega} is not a (1,1)-form"),
        });
    }

    ManifoldSpec::new(name, n, table, structure, omega)
}

/// Renders a spec in the `.akspec` format; [`parse_spec`] inverts it.
/// Parses a single form expression against the symbols of a spec. Errors
/// report line 1 and the column within `text`.
pub fn parse_form(spec: &ManifoldSpec, text: &str) -> Result<Form<SymScalar>> {
    let atoms: BTreeMap<String, Symbol> =
        spec.symbols.iter().map(|f| (f.symbol.name().to_string(), f.symbol.clone())).collect();
    let tokens = tokenize_line(text, 1)?;
    let end = text.chars().count() + 1;
    ExprParser { tokens: &tokens, pos: 0, symbols: &atoms, n: spec.n, line: 1, end_col: end }.parse()
}

pub fn render_spec(spec: &ManifoldSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "manifold {}", spec.name);
    let _ = writeln!(out, "dim {}", 2 * spec.n);
    if spec.n == 1 {
        let _ = writeln!(out, "coframe phi1");
    } else {
        let _ = writeln!(out, "coframe phi1 .. phi{}", spec.n);
    }
    for entry in spec.symbols.iter() {
        let s = &entry.symbol;
        let _ = write!(out, "symbol {}", s.name());
        if s.is_real() {
            out.push_str(" real");
        } else {
            let _ = write!(out, " conj {}", s.conj_name());
        }
        if s.is_nonzero() {
            out.push_str(" nonzero");
        }
        if s.is_invertible() {
            out.push_str(" invertible");
        }
        match &entry.derivative {
            Derivative::Opaque => out.push_str(" d = opaque"),
            Derivative::Form(f) => {
                let _ = write!(out, " d = {f}");
            }
        }
        out.push('\n');
    }
    for (j, d) in spec.structure.iter().enumerate() {
        let _ = writeln!(out, "d phi{} = {d}", j + 1);
    }
    let _ = writeln!(out, "omega = {}", spec.omega);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FLAT: &str =
        "manifold t6\ndim 6\ncoframe phi1 .. phi3\nomega = 1/2*i*phi{1,1} + 1/2*i*phi{2,2} + 1/2*i*phi{3,3}\n";

    #[test]
    fn flat_torus() {
        let spec = parse_spec(FLAT).unwrap();
        assert_eq!(spec.n, 3);
        assert!(spec.flags.constant_coefficient);
        assert!(spec.flags.almost_kahler);
        assert_eq!(spec.flags.unitary_scale, Some(BigRational::one()));
        assert!(spec.structure.iter().all(|f| f.is_zero()));
        assert_eq!(parse_spec(&render_spec(&spec)).unwrap(), spec);
    }

    #[test]
    fn symbols_and_pairing() {
        let text = "\
manifold g
dim 6
coframe phi1 .. phi3
symbol V3g conj V3g_bar nonzero d = opaque
symbol V3g_bar conj V3g d = opaque
d phi1 = V3g*phi{3,1} - V3g_bar*phi{,13}
omega = 1/2*i*phi{1,1} + 1/2*i*phi{2,2} + 1/2*i*phi{3,3}
";
        let spec = parse_spec(text).unwrap();
        let v = spec.symbols.get("V3g_bar").unwrap();
        assert!(v.symbol.is_nonzero());
        assert_eq!(v.symbol.conj_name(), "V3g");
        assert_eq!(spec.structure[0].to_string(), "-V3g_bar*phi{,13}+V3g*phi{3,1}");
        assert!(!spec.flags.constant_coefficient);
        assert!(spec.flags.almost_kahler);
        assert_eq!(parse_spec(&render_spec(&spec)).unwrap(), spec);
    }

    #[test]
    fn degree_three_rejected() {
        let text = "manifold b\ndim 6\ncoframe phi1 .. phi3\nd phi1 = phi{123,}\nomega = 1/2*i*phi{1,1}+1/2*i*phi{2,2}+1/2*i*phi{3,3}\n";
        assert!(matches!(parse_spec(text), Err(Error::DegreeMismatch { line: 4, .. })));
    }

    #[test]
    fn positions_reported() {
        let text = "manifold b\ndim 6\ncoframe phi1 .. phi3\nd phi1 = phi{12,} $\n";
        match parse_spec(text) {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (4, 19)),
            other => panic!("unexpected {other:?}"),
        }
        let text = "manifold b\ndim 6\ncoframe phi1 .. phi3\nomega = 1/2*i*phi{1,1} +\n";
        assert!(matches!(parse_spec(text), Err(Error::Syntax { line: 4, column: 25, .. })));
    }

    #[test]
    fn unknown_symbol() {
        let text =
            "manifold b\ndim 4\ncoframe phi1 .. phi2\nd phi1 = G*phi{12,}\nomega = 1/2*i*phi{1,1}+1/2*i*phi{2,2}\n";
        assert_eq!(parse_spec(text).unwrap_err(), Error::UnknownSymbol { name: "G".into(), line: 4 });
    }

    #[test]
    fn non_real_omega() {
        let text = "manifold b\ndim 4\ncoframe phi1 .. phi2\nomega = phi{1,1}\n";
        assert_eq!(parse_spec(text).unwrap_err(), Error::NonRealOmega);
    }

    #[test]
    fn negative_powers_need_invertible() {
        let ok = "manifold b\ndim 2\ncoframe phi1\nsymbol E real invertible d = 0\nomega = 1/2*i*E^-1*phi{1,1}\n";
        let spec = parse_spec(ok).unwrap();
        assert_eq!(spec.omega.to_string(), "1/2*i*E^-1*phi{1,1}");
        assert!(spec.flags.unitary_scale.is_none());
        let bad = "manifold b\ndim 2\ncoframe phi1\nsymbol E real d = 0\nomega = 1/2*i*E^-1*phi{1,1}\n";
        assert!(matches!(parse_spec(bad), Err(Error::Syntax { line: 5, .. })));
    }
}
