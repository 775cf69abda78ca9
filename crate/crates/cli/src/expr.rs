//! Expression grammar shared by every payload flag.
//!
//! ```text
//! expr     := term (("+" | "-") term)*
//! term     := factor ("*" factor)*
//! factor   := rational | "r21" | "x" ("^" uint)? | "D" ("^" uint)?
//!           | "xi" ("^" uint)? | "(" expr ")" | "-" factor
//! rational := int ("/" uint)?
//! ```
//!
//! The same tree is evaluated in one of four contexts. In operator context
//! multiplication is composition, so `D*x` normalizes to `x*D + 1`; in
//! symbol context `xi` commutes with `x`.

use std::fmt;

use num_bigint::BigInt;
use opmod::{DiffOp, NormalSymbol, Poly, Rational, Scalar};

/// Exponents above this are rejected rather than expanded.
pub const MAX_EXPONENT: u32 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Scalar,
    Poly,
    Operator,
    Symbol,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Scalar => "scalar",
            Kind::Poly => "polynomial",
            Kind::Operator => "operator",
            Kind::Symbol => "symbol",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken {
        found: String,
        expected: &'static str,
    },
    UnexpectedEnd {
        expected: &'static str,
    },
    ZeroDenominator,
    ExponentTooLarge,
    /// `D` where a function of `x` is required.
    DInPolynomialContext,
    /// A generator that has no meaning in the requested context.
    Misplaced {
        generator: &'static str,
        context: Kind,
    },
}

/// A parse failure at a 0-based character offset.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parse error at column {}: {kind}", .position + 1)]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnexpectedToken { found, expected } => write!(f, "expected {expected}, found {found:?}"),
            ParseErrorKind::UnexpectedEnd { expected } => write!(f, "expected {expected}, found end of input"),
            ParseErrorKind::ZeroDenominator => f.write_str("zero denominator"),
            ParseErrorKind::ExponentTooLarge => write!(f, "exponent above {MAX_EXPONENT}"),
            ParseErrorKind::DInPolynomialContext => f.write_str("D in polynomial context"),
            ParseErrorKind::Misplaced { generator, context } => write!(f, "{generator} in {context} context"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((start, Token::Int(digits.parse().expect("ascii digits"))));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            match word.as_str() {
                "x" | "D" | "xi" | "r21" => out.push((start, Token::Ident(word))),
                _ => {
                    return Err(ParseError {
                        position: start,
                        kind: ParseErrorKind::UnexpectedToken {
                            found: word,
                            expected: "x, D, xi, r21 or a number",
                        },
                    })
                }
            }
        } else if "+-*/^()".contains(c) {
            out.push((i, Token::Op(c)));
            i += 1;
        } else {
            return Err(ParseError {
                position: i,
                kind: ParseErrorKind::UnexpectedChar(c),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Number(Rational),
    Surd,
    X(u32),
    D(u32),
    Xi(u32),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
}

/// A syntax tree node with the offset of its first character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub position: usize,
    pub node: Node,
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.tokens.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn error(&self, expected: &'static str) -> ParseError {
        let kind = match self.tokens.get(self.at) {
            None => ParseErrorKind::UnexpectedEnd { expected },
            Some((_, t)) => ParseErrorKind::UnexpectedToken {
                found: match t {
                    Token::Int(n) => n.to_string(),
                    Token::Ident(s) => s.clone(),
                    Token::Op(c) => c.to_string(),
                },
                expected,
            },
        };
        ParseError {
            position: self.position(),
            kind,
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Op(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let position = lhs.position;
            let node = if self.eat('+') {
                Node::Add(Box::new(lhs), Box::new(self.term()?))
            } else if self.eat('-') {
                Node::Sub(Box::new(lhs), Box::new(self.term()?))
            } else {
                return Ok(lhs);
            };
            lhs = Expr { position, node };
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while self.eat('*') {
            let position = lhs.position;
            lhs = Expr {
                position,
                node: Node::Mul(Box::new(lhs), Box::new(self.factor()?)),
            };
        }
        Ok(lhs)
    }

    fn uint(&mut self) -> Result<BigInt, ParseError> {
        match self.peek() {
            Some(Token::Int(n)) => {
                let n = n.clone();
                self.at += 1;
                Ok(n)
            }
            _ => Err(self.error("an unsigned integer")),
        }
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        if !self.eat('^') {
            return Ok(1);
        }
        let position = self.position();
        let n = self.uint()?;
        u32::try_from(n).ok().filter(|&e| e <= MAX_EXPONENT).ok_or(ParseError {
            position,
            kind: ParseErrorKind::ExponentTooLarge,
        })
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let position = self.position();
        let node = match self.peek().cloned() {
            Some(Token::Int(n)) => {
                self.at += 1;
                let den = if self.eat('/') {
                    let at = self.position();
                    let d = self.uint()?;
                    if d == BigInt::from(0) {
                        return Err(ParseError {
                            position: at,
                            kind: ParseErrorKind::ZeroDenominator,
                        });
                    }
                    d
                } else {
                    BigInt::from(1)
                };
                Node::Number(Rational::new(n, den))
            }
            Some(Token::Ident(name)) => {
                self.at += 1;
                match name.as_str() {
                    "r21" => Node::Surd,
                    "x" => Node::X(self.exponent()?),
                    "D" => Node::D(self.exponent()?),
                    _ => Node::Xi(self.exponent()?),
                }
            }
            Some(Token::Op('(')) => {
                self.at += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("\")\""));
                }
                return Ok(Expr {
                    position,
                    node: inner.node,
                });
            }
            Some(Token::Op('-')) => {
                self.at += 1;
                Node::Neg(Box::new(self.factor()?))
            }
            _ => return Err(self.error("a number, x, D, xi, r21, \"(\" or \"-\"")),
        };
        Ok(Expr { position, node })
    }
}

/// Parses `text` into a syntax tree without interpreting it.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        at: 0,
        end: text.chars().count(),
    };
    let e = parser.expr()?;
    if parser.peek().is_some() {
        return Err(parser.error("an operator or end of input"));
    }
    Ok(e)
}

fn misplaced(e: &Expr, generator: &'static str, context: Kind) -> ParseError {
    let kind = if generator == "D" && context == Kind::Poly {
        ParseErrorKind::DInPolynomialContext
    } else {
        ParseErrorKind::Misplaced { generator, context }
    };
    ParseError {
        position: e.position,
        kind,
    }
}

/// Values that can be built from the grammar: sums, differences and
/// products of the leaves.
trait Algebra: Sized {
    const KIND: Kind;
    fn scalar(c: Scalar) -> Self;
    fn x(e: u32, at: &Expr) -> Result<Self, ParseError>;
    fn d(e: u32, at: &Expr) -> Result<Self, ParseError>;
    fn xi(e: u32, at: &Expr) -> Result<Self, ParseError>;
    fn add(self, other: Self) -> Self;
    fn neg(self) -> Self;
    fn mul(self, other: Self) -> Self;

    fn build(e: &Expr) -> Result<Self, ParseError> {
        Ok(match &e.node {
            Node::Number(r) => Self::scalar(Scalar::from_rational(r.clone())),
            Node::Surd => Self::scalar(Scalar::sqrt21()),
            Node::X(n) => Self::x(*n, e)?,
            Node::D(n) => Self::d(*n, e)?,
            Node::Xi(n) => Self::xi(*n, e)?,
            Node::Add(a, b) => Self::build(a)?.add(Self::build(b)?),
            Node::Sub(a, b) => Self::build(a)?.add(Self::build(b)?.neg()),
            Node::Mul(a, b) => Self::build(a)?.mul(Self::build(b)?),
            Node::Neg(a) => Self::build(a)?.neg(),
        })
    }
}

impl Algebra for Scalar {
    const KIND: Kind = Kind::Scalar;
    fn scalar(c: Scalar) -> Self {
        c
    }
    fn x(_: u32, at: &Expr) -> Result<Self, ParseError> {
        Err(misplaced(at, "x", Self::KIND))
    }
    fn d(_: u32, at: &Expr) -> Result<Self, ParseError> {
        Err(misplaced(at, "D", Self::KIND))
    }
    fn xi(_: u32, at: &Expr) -> Result<Self, ParseError> {
        Err(misplaced(at, "xi", Self::KIND))
    }
    fn add(self, other: Self) -> Self {
        &self + &other
    }
    fn neg(self) -> Self {
        -self
    }
    fn mul(self, other: Self) -> Self {
        &self * &other
    }
}

impl Algebra for Poly {
    const KIND: Kind = Kind::Poly;
    fn scalar(c: Scalar) -> Self {
        Poly::constant(c)
    }
    fn x(e: u32, _: &Expr) -> Result<Self, ParseError> {
        Ok(Poly::x_pow(e as usize))
    }
    fn d(_: u32, at: &Expr) -> Result<Self, ParseError> {
        Err(misplaced(at, "D", Self::KIND))
    }
    fn xi(_: u32, at: &Expr) -> Result<Self, ParseError> {
        Err(misplaced(at, "xi", Self::KIND))
    }
    fn add(self, other: Self) -> Self {
        &self + &other
    }
    fn neg(self) -> Self {
        -self
    }
    fn mul(self, other: Self) -> Self {
        &self * &other
    }
}

/// Operator coefficients; the weight is attached after evaluation.
struct OperatorValue(DiffOp);

impl Algebra for OperatorValue {
    const KIND: Kind = Kind::Operator;
    fn scalar(c: Scalar) -> Self {
        OperatorValue(DiffOp::multiplication(Scalar::zero(), Poly::constant(c)))
    }
    fn x(e: u32, _: &Expr) -> Result<Self, ParseError> {
        Ok(OperatorValue(DiffOp::multiplication(
            Scalar::zero(),
            Poly::x_pow(e as usize),
        )))
    }
    fn d(e: u32, _: &Expr) -> Result<Self, ParseError> {
        Ok(OperatorValue(DiffOp::monomial(Scalar::zero(), Poly::one(), e as usize)))
    }
    fn xi(_: u32, at: &Expr) -> Result<Self, ParseError> {
        Err(misplaced(at, "xi", Self::KIND))
    }
    fn add(self, other: Self) -> Self {
        OperatorValue(self.0.checked_add(&other.0).expect("weights agree"))
    }
    fn neg(self) -> Self {
        OperatorValue(self.0.scale(&Scalar::from_int(-1)))
    }
    fn mul(self, other: Self) -> Self {
        OperatorValue(self.0.compose(&other.0).expect("weights agree"))
    }
}

/// Polynomials in `xi` with coefficients in `x`, indexed by the `xi` power.
struct SymbolValue(Vec<Poly>);

impl Algebra for SymbolValue {
    const KIND: Kind = Kind::Symbol;
    fn scalar(c: Scalar) -> Self {
        SymbolValue(vec![Poly::constant(c)])
    }
    fn x(e: u32, _: &Expr) -> Result<Self, ParseError> {
        Ok(SymbolValue(vec![Poly::x_pow(e as usize)]))
    }
    fn d(_: u32, at: &Expr) -> Result<Self, ParseError> {
        Err(misplaced(at, "D", Self::KIND))
    }
    fn xi(e: u32, _: &Expr) -> Result<Self, ParseError> {
        let mut v = vec![Poly::zero(); e as usize + 1];
        v[e as usize] = Poly::one();
        Ok(SymbolValue(v))
    }
    fn add(self, other: Self) -> Self {
        let (mut long, short) = if self.0.len() >= other.0.len() {
            (self.0, other.0)
        } else {
            (other.0, self.0)
        };
        for (i, p) in short.into_iter().enumerate() {
            long[i] = &long[i] + &p;
        }
        SymbolValue(long)
    }
    fn neg(self) -> Self {
        SymbolValue(self.0.into_iter().map(|p| -p).collect())
    }
    fn mul(self, other: Self) -> Self {
        let mut out = vec![Poly::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        SymbolValue(out)
    }
}

fn trim(mut v: Vec<Poly>) -> Vec<Poly> {
    while v.len() > 1 && v.last().is_some_and(Poly::is_zero) {
        v.pop();
    }
    v
}

pub fn parse_scalar(text: &str) -> Result<Scalar, ParseError> {
    Scalar::build(&parse_expr(text)?)
}

pub fn parse_poly(text: &str) -> Result<Poly, ParseError> {
    <Poly as Algebra>::build(&parse_expr(text)?)
}

/// `Σ p_j(x)·Dʲ` acting on densities of the given weight, stored at the
/// highest `D` power with a nonzero coefficient.
pub fn parse_operator(text: &str, weight: &Scalar) -> Result<DiffOp, ParseError> {
    let op = OperatorValue::build(&parse_expr(text)?)?.0;
    Ok(DiffOp::new(weight.clone(), trim(op.coeffs().to_vec())))
}

/// `Σ p_i(x)·xiⁱ`, stored at the highest nonzero power.
pub fn parse_symbol(text: &str, weight: &Scalar) -> Result<NormalSymbol, ParseError> {
    let v = SymbolValue::build(&parse_expr(text)?)?.0;
    Ok(NormalSymbol::new(weight.clone(), trim(v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    #[test]
    fn polynomial_example() {
        let p = parse_poly("x^2 - 1/2").unwrap();
        assert_eq!(p, Poly::new(vec![q(-1, 2), Scalar::zero(), Scalar::one()]));
        assert_eq!(p.to_string(), "x^2 - 1/2");
        assert_eq!(parse_poly("x").unwrap().to_string(), "x");
    }

    #[test]
    fn operator_example() {
        let a = parse_operator("x*D^3 + (1 + r21)*D", &q(1, 3)).unwrap();
        assert_eq!(a.order(), 3);
        assert_eq!(a.coeff(3), Poly::x());
        assert_eq!(a.coeff(1), Poly::constant(&Scalar::one() + &Scalar::sqrt21()));
        assert!(a.coeff(2).is_zero() && a.coeff(0).is_zero());
        assert_eq!(parse_operator(&a.to_string(), &q(1, 3)).unwrap(), a);
    }

    #[test]
    fn critical_weight_literal() {
        let s = parse_scalar("-1/2 + 1/6*r21").unwrap();
        assert_eq!(s, &q(-1, 2) + &(&q(1, 6) * &Scalar::sqrt21()));
        assert_eq!(parse_scalar(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn composition_normalizes() {
        let w = q(2, 5);
        let a = parse_operator("D*x", &w).unwrap();
        assert_eq!(a, DiffOp::new(w.clone(), vec![Poly::one(), Poly::x()]));
        let b = parse_operator("(1 + x*D)*D", &w).unwrap();
        assert_eq!(b, DiffOp::new(w.clone(), vec![Poly::zero(), Poly::one(), Poly::x()]));
        assert_eq!(
            parse_operator("D^2*x^2", &w).unwrap().to_string(),
            "x^2*D^2 + 4*x*D + 2"
        );
        assert_eq!(parse_operator("0", &w).unwrap().to_string(), "0");
    }

    #[test]
    fn symbols_commute() {
        let w = q(1, 2);
        assert_eq!(parse_symbol("xi*x", &w).unwrap(), parse_symbol("x*xi", &w).unwrap());
        assert_eq!(parse_symbol("(xi + 1)*(xi - 1)", &w).unwrap().to_string(), "xi^2 - 1");
    }

    #[test]
    fn diagnostics() {
        let e = parse_poly("x + D").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DInPolynomialContext);
        assert_eq!(e.position, 4);
        assert_eq!(e.to_string(), "parse error at column 5: D in polynomial context");
        assert!(matches!(
            parse_scalar("2*x").unwrap_err().kind,
            ParseErrorKind::Misplaced { .. }
        ));
        assert_eq!(parse_scalar("1/0").unwrap_err().kind, ParseErrorKind::ZeroDenominator);
        assert_eq!(parse_poly("x^").unwrap_err().position, 2);
        assert_eq!(parse_poly("(x + 1").unwrap_err().position, 6);
        assert!(matches!(
            parse_poly("x $ 1").unwrap_err().kind,
            ParseErrorKind::UnexpectedChar('$')
        ));
        assert!(matches!(
            parse_poly("y").unwrap_err().kind,
            ParseErrorKind::UnexpectedToken { .. }
        ));
        assert!(parse_poly("x x").is_err());
        assert!(parse_poly("").is_err());
        assert_eq!(parse_poly("x^999").unwrap_err().kind, ParseErrorKind::ExponentTooLarge);
        assert!(parse_operator("x*xi", &q(1, 2)).is_err());
    }

    #[test]
    fn whitespace_is_ignored() {
        assert_eq!(parse_poly(" x ^ 2-1 / 2 ").unwrap(), parse_poly("x^2-1/2").unwrap());
    }
}
