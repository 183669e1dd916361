//! Text format for Laurent polynomials and polynomial matrices.
//!
//! ```text
//! matrix := '[' row (',' row)* ']'
//! row    := '[' poly (',' poly)* ']'
//! poly   := ('+'|'-')? term (('+'|'-') term)*
//! term   := coeff ('*' factor)* | factor ('*' factor)*
//! factor := var ('^' int)?
//! var    := 'z' posint            (z1 … z99)
//! coeff  := number | '(' complex ')'
//! number := int | int '/' posint | decimal | imag
//! imag   := number? 'i'
//! ```
//!
//! Whitespace is insignificant and `#` starts a comment running to the end of
//! the line. Decimals become exact rationals.

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use nsbound_core::{Exponent, GaussianRational, LaurentPoly, PolyMatrix};

/// Largest accepted variable index.
pub const MAX_VAR: usize = 99;
/// Largest accepted exponent magnitude.
pub const MAX_EXPONENT: i64 = 1 << 40;

/// Byte range plus 1-based line and column (in characters) of its start.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    fn locate(text: &str, start: usize, end: usize) -> Self {
        let before = &text[..start];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map_or(0, |i| i + 1);
        let column = text[line_start..start].chars().count() + 1;
        Self { start, end, line, column }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedToken,
    BadExponent,
    DimensionMismatch,
    BadNumber,
    UnbalancedBracket,
    RaggedRows,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::UnexpectedToken => "unexpected token",
            Self::BadExponent => "bad exponent",
            Self::DimensionMismatch => "dimension mismatch",
            Self::BadNumber => "bad number",
            Self::UnbalancedBracket => "unbalanced bracket",
            Self::RaggedRows => "ragged rows",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{}:{}: {kind}: {message}", span.line, span.column)]
pub struct ParseError {
    pub span: SourceSpan,
    pub kind: ParseErrorKind,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(String),
    Decimal(String, String),
    Var(usize),
    Imag,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    start: usize,
    end: usize,
}

struct Lexer<'a> {
    text: &'a str,
}

impl<'a> Lexer<'a> {
    fn error(&self, kind: ParseErrorKind, start: usize, end: usize, message: String) -> ParseError {
        ParseError { span: SourceSpan::locate(self.text, start, end), kind, message }
    }

    fn tokens(&self) -> Result<Vec<Token>, ParseError> {
        let bytes = self.text.as_bytes();
        let mut out = Vec::new();
        let mut i = 0;
        let digits_from = |mut j: usize| {
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            j
        };
        while i < bytes.len() {
            let c = bytes[i];
            let start = i;
            let simple = match c {
                b'+' => Some(Tok::Plus),
                b'-' => Some(Tok::Minus),
                b'*' => Some(Tok::Star),
                b'/' => Some(Tok::Slash),
                b'^' => Some(Tok::Caret),
                b'(' => Some(Tok::LParen),
                b')' => Some(Tok::RParen),
                b'[' => Some(Tok::LBracket),
                b']' => Some(Tok::RBracket),
                b',' => Some(Tok::Comma),
                b'i' => Some(Tok::Imag),
                _ => None,
            };
            if let Some(tok) = simple {
                out.push(Token { tok, start, end: start + 1 });
                i += 1;
                continue;
            }
            if c.is_ascii_whitespace() {
                i += 1;
                continue;
            }
            if c == b'#' {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
                continue;
            }
            if c.is_ascii_digit() {
                let int_end = digits_from(i);
                if int_end < bytes.len() && bytes[int_end] == b'.' {
                    let frac_end = digits_from(int_end + 1);
                    if frac_end == int_end + 1 {
                        return Err(self.error(
                            ParseErrorKind::BadNumber,
                            start,
                            frac_end,
                            format!("decimal `{}` has no digits after the point", &self.text[start..frac_end]),
                        ));
                    }
                    let tok = Tok::Decimal(self.text[i..int_end].into(), self.text[int_end + 1..frac_end].into());
                    out.push(Token { tok, start, end: frac_end });
                    i = frac_end;
                } else {
                    out.push(Token { tok: Tok::Int(self.text[i..int_end].into()), start, end: int_end });
                    i = int_end;
                }
                continue;
            }
            if c == b'z' {
                let end = digits_from(i + 1);
                let lexeme = &self.text[start..end];
                let index: Option<usize> = self.text[i + 1..end].parse().ok();
                match index {
                    Some(n) if (1..=MAX_VAR).contains(&n) && !self.text[i + 1..end].starts_with('0') => {
                        out.push(Token { tok: Tok::Var(n), start, end });
                        i = end;
                        continue;
                    }
                    _ => {
                        return Err(self.error(
                            ParseErrorKind::UnexpectedToken,
                            start,
                            end,
                            format!("`{lexeme}` is not a variable; use z1 … z{MAX_VAR}"),
                        ))
                    }
                }
            }
            let ch = self.text[i..].chars().next().expect("in bounds");
            let end = i + ch.len_utf8();
            return Err(self.error(ParseErrorKind::UnexpectedToken, start, end, format!("unexpected character `{ch}`")));
        }
        out.push(Token { tok: Tok::Eof, start: bytes.len(), end: bytes.len() });
        Ok(out)
    }
}

fn describe(tok: &Tok, text: &str, t: &Token) -> String {
    match tok {
        Tok::Eof => "end of input".into(),
        _ => format!("`{}`", &text[t.start..t.end]),
    }
}

/// A parsed polynomial before its dimension is fixed.
struct RawPoly {
    terms: Vec<(Vec<i64>, GaussianRational)>,
    vars: Vec<(usize, usize, usize)>,
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Result<Self, ParseError> {
        let toks = Lexer { text }.tokens()?;
        Ok(Self { text, toks, pos: 0 })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, t: &Token, kind: ParseErrorKind, message: String) -> ParseError {
        ParseError { span: SourceSpan::locate(self.text, t.start, t.end), kind, message }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let t = self.peek();
        let kind = match t.tok {
            Tok::Eof | Tok::RBracket | Tok::RParen => ParseErrorKind::UnbalancedBracket,
            _ => ParseErrorKind::UnexpectedToken,
        };
        let kind = if kind == ParseErrorKind::UnbalancedBracket && !self.bracket_context() {
            ParseErrorKind::UnexpectedToken
        } else {
            kind
        };
        self.error_at(t, kind, format!("expected {expected}, found {}", describe(&t.tok, self.text, t)))
    }

    /// Whether an open bracket precedes the current token without being closed.
    fn bracket_context(&self) -> bool {
        let mut depth = 0i64;
        for t in &self.toks[..self.pos] {
            match t.tok {
                Tok::LBracket | Tok::LParen => depth += 1,
                Tok::RBracket | Tok::RParen => depth -= 1,
                _ => {}
            }
        }
        depth > 0 || matches!(self.peek().tok, Tok::RBracket | Tok::RParen)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        let t = self.peek();
        match t.tok {
            Tok::Eof => Ok(()),
            Tok::RBracket | Tok::RParen => Err(self.error_at(
                t,
                ParseErrorKind::UnbalancedBracket,
                format!("unmatched closing {}", describe(&t.tok, self.text, t)),
            )),
            _ => Err(self.error_at(
                t,
                ParseErrorKind::UnexpectedToken,
                format!("unexpected {} after the end of the expression", describe(&t.tok, self.text, t)),
            )),
        }
    }

    fn bigint(&self, t: &Token, digits: &str) -> Result<BigInt, ParseError> {
        digits
            .parse()
            .map_err(|_| self.error_at(t, ParseErrorKind::BadNumber, format!("`{digits}` is not an integer")))
    }

    /// `number := int | int '/' posint | decimal | imag`, returned as a Gaussian rational.
    fn number(&mut self) -> Result<GaussianRational, ParseError> {
        let t = self.peek().clone();
        let real = match &t.tok {
            Tok::Imag => {
                self.bump();
                return Ok(GaussianRational::i());
            }
            Tok::Int(digits) => {
                self.bump();
                let n = self.bigint(&t, digits)?;
                if self.peek().tok == Tok::Slash {
                    self.bump();
                    let d = self.peek().clone();
                    let den = match &d.tok {
                        Tok::Int(dd) => {
                            self.bump();
                            self.bigint(&d, dd)?
                        }
                        _ => {
                            return Err(self.error_at(
                                &d,
                                ParseErrorKind::BadNumber,
                                format!(
                                    "expected a positive integer denominator, found {}",
                                    describe(&d.tok, self.text, &d)
                                ),
                            ))
                        }
                    };
                    if den.is_zero() {
                        let span = Token { tok: Tok::Eof, start: t.start, end: d.end };
                        return Err(self.error_at(
                            &span,
                            ParseErrorKind::BadNumber,
                            format!("zero denominator in `{}`", &self.text[t.start..d.end]),
                        ));
                    }
                    BigRational::new(n, den)
                } else {
                    BigRational::from_integer(n)
                }
            }
            Tok::Decimal(int, frac) => {
                self.bump();
                let n = self.bigint(&t, &format!("{int}{frac}"))?;
                let den = num_traits::pow(BigInt::from(10u8), frac.len());
                BigRational::new(n, den)
            }
            _ => return Err(self.unexpected("a number")),
        };
        if self.peek().tok == Tok::Imag {
            self.bump();
            Ok(GaussianRational::new(BigRational::zero(), real))
        } else {
            Ok(GaussianRational::from_real(real))
        }
    }

    /// `'(' complex ')'`: a signed sum of numbers.
    fn complex(&mut self) -> Result<GaussianRational, ParseError> {
        let open = self.expect(Tok::LParen, "`(`")?;
        let mut acc = GaussianRational::zero();
        let mut first = true;
        loop {
            let sign = match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    1
                }
                Tok::Minus => {
                    self.bump();
                    -1
                }
                _ if first => 1,
                Tok::RParen => break,
                Tok::Eof => {
                    return Err(self.error_at(&open, ParseErrorKind::UnbalancedBracket, "`(` is never closed".into()))
                }
                _ => return Err(self.unexpected("`+`, `-` or `)`")),
            };
            first = false;
            if self.peek().tok == Tok::Eof {
                return Err(self.error_at(&open, ParseErrorKind::UnbalancedBracket, "`(` is never closed".into()));
            }
            let n = self.number()?;
            if sign < 0 {
                acc -= &n;
            } else {
                acc += &n;
            }
        }
        self.bump();
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let negative = match self.peek().tok {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(digits) => {
                self.bump();
                match digits.parse::<i64>() {
                    Ok(v) if v <= MAX_EXPONENT => Ok(if negative { -v } else { v }),
                    _ => Err(self.error_at(
                        &t,
                        ParseErrorKind::BadExponent,
                        format!("exponent `{digits}` exceeds {MAX_EXPONENT} in magnitude"),
                    )),
                }
            }
            _ => Err(self.error_at(
                &t,
                ParseErrorKind::BadExponent,
                format!("expected an integer exponent, found {}", describe(&t.tok, self.text, &t)),
            )),
        }
    }

    /// `factor := var ('^' int)?`, accumulated into `exps`.
    fn factor(&mut self, exps: &mut Vec<i64>, vars: &mut Vec<(usize, usize, usize)>) -> Result<(), ParseError> {
        let t = self.peek().clone();
        let Tok::Var(v) = t.tok else {
            return Err(self.unexpected("a variable z1 … z99"));
        };
        self.bump();
        vars.push((v, t.start, t.end));
        let e = if self.peek().tok == Tok::Caret {
            self.bump();
            self.exponent()?
        } else {
            1
        };
        if exps.len() < v {
            exps.resize(v, 0);
        }
        exps[v - 1] = exps[v - 1].checked_add(e).filter(|x| x.abs() <= MAX_EXPONENT).ok_or_else(|| {
            self.error_at(&t, ParseErrorKind::BadExponent, format!("exponent of `z{v}` overflows"))
        })?;
        Ok(())
    }

    fn term(&mut self, vars: &mut Vec<(usize, usize, usize)>) -> Result<(Vec<i64>, GaussianRational), ParseError> {
        let mut exps = Vec::new();
        let coeff = match self.peek().tok {
            Tok::Int(_) | Tok::Decimal(..) | Tok::Imag => Some(self.number()?),
            Tok::LParen => Some(self.complex()?),
            Tok::Var(_) => None,
            _ => return Err(self.unexpected("a term")),
        };
        if coeff.is_none() {
            self.factor(&mut exps, vars)?;
        }
        while self.peek().tok == Tok::Star {
            self.bump();
            self.factor(&mut exps, vars)?;
        }
        Ok((exps, coeff.unwrap_or_else(GaussianRational::one)))
    }

    fn poly(&mut self) -> Result<RawPoly, ParseError> {
        let mut terms = Vec::new();
        let mut vars = Vec::new();
        let mut sign = match self.peek().tok {
            Tok::Minus => {
                self.bump();
                -1
            }
            Tok::Plus => {
                self.bump();
                1
            }
            _ => 1,
        };
        loop {
            let (e, c) = self.term(&mut vars)?;
            terms.push((e, if sign < 0 { -c } else { c }));
            sign = match self.peek().tok {
                Tok::Plus => 1,
                Tok::Minus => -1,
                _ => break,
            };
            self.bump();
        }
        Ok(RawPoly { terms, vars })
    }

    fn matrix(&mut self) -> Result<(Vec<Vec<RawPoly>>, Vec<(usize, usize)>), ParseError> {
        let open = self.peek().clone();
        self.expect(Tok::LBracket, "`[` opening the matrix")?;
        let mut rows = Vec::new();
        let mut spans = Vec::new();
        loop {
            let row_open = self.peek().clone();
            if row_open.tok == Tok::Eof {
                return Err(self.error_at(&open, ParseErrorKind::UnbalancedBracket, "`[` is never closed".into()));
            }
            self.expect(Tok::LBracket, "`[` opening a row")?;
            let mut row = Vec::new();
            loop {
                if self.peek().tok == Tok::Eof {
                    return Err(self.error_at(
                        &row_open,
                        ParseErrorKind::UnbalancedBracket,
                        "row `[` is never closed".into(),
                    ));
                }
                row.push(self.poly()?);
                match self.peek().tok {
                    Tok::Comma => {
                        self.bump();
                    }
                    Tok::RBracket => break,
                    Tok::Eof => {
                        return Err(self.error_at(
                            &row_open,
                            ParseErrorKind::UnbalancedBracket,
                            "row `[` is never closed".into(),
                        ))
                    }
                    _ => return Err(self.unexpected("`,` or `]`")),
                }
            }
            let close = self.bump();
            spans.push((row_open.start, close.end));
            rows.push(row);
            match self.peek().tok {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RBracket => break,
                Tok::Eof => {
                    return Err(self.error_at(&open, ParseErrorKind::UnbalancedBracket, "`[` is never closed".into()))
                }
                _ => return Err(self.unexpected("`,` or `]`")),
            }
        }
        self.bump();
        self.expect_eof()?;
        Ok((rows, spans))
    }
}

fn build(raw: RawPoly, dim: usize) -> LaurentPoly {
    let terms = raw.terms.into_iter().map(|(mut e, c)| {
        e.resize(dim, 0);
        (Exponent::new(e), c)
    });
    LaurentPoly::from_terms(dim, terms).expect("exponents are padded to the dimension")
}

fn max_var(raw: &RawPoly) -> usize {
    raw.vars.iter().map(|v| v.0).max().unwrap_or(0)
}

/// Parses one polynomial.
///
/// Without `expected_dim` the dimension is the largest variable index
/// (at least 1). With it, smaller indices embed and larger ones are an error.
pub fn parse_poly(text: &str, expected_dim: Option<usize>) -> Result<LaurentPoly, ParseError> {
    let mut p = Parser::new(text)?;
    let raw = p.poly()?;
    p.expect_eof()?;
    let dim = match expected_dim {
        Some(d) => {
            if let Some(&(v, s, e)) = raw.vars.iter().find(|v| v.0 > d) {
                return Err(ParseError {
                    span: SourceSpan::locate(text, s, e),
                    kind: ParseErrorKind::DimensionMismatch,
                    message: format!("`z{v}` exceeds the expected dimension {d}"),
                });
            }
            d
        }
        None => max_var(&raw).max(1),
    };
    Ok(build(raw, dim))
}

/// Parses a rectangular matrix; its dimension is the largest variable index over all entries.
pub fn parse_matrix(text: &str) -> Result<PolyMatrix, ParseError> {
    let mut p = Parser::new(text)?;
    let (rows, spans) = p.matrix()?;
    let width = rows[0].len();
    if let Some(bad) = rows.iter().position(|r| r.len() != width) {
        let (s, e) = spans[bad];
        return Err(ParseError {
            span: SourceSpan::locate(text, s, e),
            kind: ParseErrorKind::RaggedRows,
            message: format!(
                "row {} `{}` has {} entries, expected {width}",
                bad + 1,
                &text[s..e],
                rows[bad].len()
            ),
        });
    }
    let dim = rows.iter().flatten().map(max_var).max().unwrap_or(0).max(1);
    let entries: Vec<Vec<LaurentPoly>> =
        rows.into_iter().map(|r| r.into_iter().map(|raw| build(raw, dim)).collect()).collect();
    Ok(PolyMatrix::from_rows(entries).expect("rows are rectangular and share one dimension"))
}

/// Whether the text (ignoring comments) is a matrix rather than a bare polynomial.
pub fn looks_like_matrix(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.starts_with('['))
}

fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `a`, `a/b`, `i`, `a/bi`, or `(a + bi)`, without a leading sign decision.
pub fn format_coefficient(c: &GaussianRational) -> String {
    let (re, im) = (c.re(), c.im());
    if im.is_zero() {
        return format_rational(re);
    }
    let imag = |x: &BigRational| if x.is_one() { "i".to_string() } else { format!("{}i", format_rational(x)) };
    if re.is_zero() {
        return if im.is_negative() { format!("-{}", imag(&-im)) } else { imag(im) };
    }
    let sign = if im.is_negative() { '-' } else { '+' };
    format!("({} {sign} {})", format_rational(re), imag(&im.abs()))
}

fn format_monomial(e: &Exponent) -> String {
    let mut out = String::new();
    for (j, &n) in e.entries().iter().enumerate() {
        if n == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push('*');
        }
        write!(out, "z{}", j + 1).expect("string write");
        if n != 1 {
            write!(out, "^{n}").expect("string write");
        }
    }
    out
}

/// Canonical text: terms in descending exponent order, unit coefficients and zero exponents elided.
pub fn format_poly(p: &LaurentPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (e, c)) in p.terms().rev().enumerate() {
        // A term is written with a separate sign when its coefficient is real or purely imaginary.
        let negative = (c.im().is_zero() && c.re().is_negative()) || (c.re().is_zero() && c.im().is_negative());
        let mag = if negative { -c.clone() } else { c.clone() };
        match (idx, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mono = format_monomial(e);
        if mono.is_empty() {
            out.push_str(&format_coefficient(&mag));
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            write!(out, "{}*{mono}", format_coefficient(&mag)).expect("string write");
        }
    }
    out
}

/// `[[a, b], [c, d]]` with canonical entries.
pub fn format_matrix(a: &PolyMatrix) -> String {
    let rows: Vec<String> = (0..a.rows())
        .map(|i| format!("[{}]", a.row(i).iter().map(format_poly).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}
