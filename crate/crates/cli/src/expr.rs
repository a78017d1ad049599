//! Expression language for algebra elements.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := "-"? factor (("*" | "/") factor)*
//! factor := atom ("^" "-"? INT)? "†"?
//! atom   := INT | "q" | "s" | "u[" INT "," INT "]" | "z[" INT "]" | "zs[" INT "]"
//!         | "x[" INT "]" | "y[" INT "]" | "D[" set ";" set "]"
//!         | "act(" word ";" expr ")" | "(" expr ")"
//! word   := letter ("*" letter)*
//! letter := ("K" | "Kinv" | "E" | "F") "[" INT "]"
//! ```
//!
//! Parentheses are kept in the tree so that printing reproduces the input
//! up to whitespace.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use qflag_core::ncalg::{Algebra, NcPoly};
use qflag_core::uqact::{act_d, LetterKind, UqElement, UqLetter};
use qflag_core::ScalarQ;

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Q,
    S,
    Gen(usize, usize),
    Z(usize),
    Zs(usize),
    X(usize),
    Y(usize),
    Minor(Vec<usize>, Vec<usize>),
    Act(Vec<UqLetter>, Box<Expr>),
    Group(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Star(Box<Expr>),
}

fn join(v: &[usize]) -> String {
    v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{}", n),
            Expr::Q => f.write_str("q"),
            Expr::S => f.write_str("s"),
            Expr::Gen(i, j) => write!(f, "u[{},{}]", i, j),
            Expr::Z(i) => write!(f, "z[{}]", i),
            Expr::Zs(i) => write!(f, "zs[{}]", i),
            Expr::X(i) => write!(f, "x[{}]", i),
            Expr::Y(r) => write!(f, "y[{}]", r),
            Expr::Minor(rows, cols) => write!(f, "D[{};{}]", join(rows), join(cols)),
            Expr::Act(word, e) => {
                let w: Vec<String> = word.iter().map(|l| l.to_string()).collect();
                write!(f, "act({}; {})", w.join("*"), e)
            }
            Expr::Group(e) => write!(f, "({})", e),
            Expr::Add(a, b) => write!(f, "{} + {}", a, b),
            Expr::Sub(a, b) => write!(f, "{} - {}", a, b),
            Expr::Neg(a) => write!(f, "-{}", a),
            Expr::Mul(a, b) => write!(f, "{}*{}", a, b),
            Expr::Div(a, b) => write!(f, "{}/{}", a, b),
            Expr::Pow(a, k) => write!(f, "{}^{}", a, k),
            Expr::Star(a) => write!(f, "{}†", a),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer<'a> {
    text: &'a str,
    toks: Vec<(Tok, usize)>,
}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn error_at(text: &str, offset: usize, message: impl Into<String>) -> CliError {
    let (line, column) = position(text, offset);
    CliError::Parse { line, column, message: message.into() }
}

impl<'a> Lexer<'a> {
    fn run(text: &'a str) -> Result<Vec<(Tok, usize)>, CliError> {
        let mut lx = Lexer { text, toks: Vec::new() };
        let mut chars = text.char_indices().peekable();
        while let Some(&(i, c)) = chars.peek() {
            if c.is_whitespace() {
                chars.next();
            } else if c.is_ascii_digit() {
                let mut end = i;
                while let Some(&(j, d)) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    end = j + d.len_utf8();
                    chars.next();
                }
                let n: BigInt = text[i..end].parse().expect("digits parse");
                lx.toks.push((Tok::Int(n), i));
            } else if c.is_ascii_alphabetic() {
                let mut end = i;
                while let Some(&(j, d)) = chars.peek() {
                    if !d.is_ascii_alphanumeric() {
                        break;
                    }
                    end = j + d.len_utf8();
                    chars.next();
                }
                lx.toks.push((Tok::Ident(text[i..end].to_string()), i));
            } else if "+-*/^()[],;†".contains(c) {
                lx.toks.push((Tok::Sym(c), i));
                chars.next();
            } else {
                return Err(error_at(lx.text, i, format!("unexpected character '{}'", c)));
            }
        }
        lx.toks.push((Tok::End, text.len()));
        Ok(lx.toks)
    }
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    n: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn err(&self, message: impl Into<String>) -> CliError {
        error_at(self.text, self.offset(), message)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == &Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), CliError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c)))
        }
    }

    fn int(&mut self) -> Result<BigInt, CliError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.err("expected an integer")),
        }
    }

    /// An index in `lo..=hi`.
    fn index(&mut self, lo: usize, hi: usize, what: &str) -> Result<usize, CliError> {
        let at = self.offset();
        let n = self.int()?;
        match usize::try_from(n.clone()) {
            Ok(i) if (lo..=hi).contains(&i) => Ok(i),
            _ => Err(error_at(self.text, at, format!("{} index {} out of range {}..{} for N = {}", what, n, lo, hi, self.n))),
        }
    }

    fn expr(&mut self) -> Result<Expr, CliError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, CliError> {
        let negate = self.eat('-');
        let mut lhs = self.factor()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                break;
            }
        }
        Ok(if negate { Expr::Neg(Box::new(lhs)) } else { lhs })
    }

    fn factor(&mut self) -> Result<Expr, CliError> {
        let mut e = self.atom()?;
        if self.eat('^') {
            let negative = self.eat('-');
            let at = self.offset();
            let k = i64::try_from(self.int()?).map_err(|_| error_at(self.text, at, "exponent too large"))?;
            e = Expr::Pow(Box::new(e), if negative { -k } else { k });
        }
        if self.eat('†') {
            e = Expr::Star(Box::new(e));
        }
        Ok(e)
    }

    fn set(&mut self) -> Result<Vec<usize>, CliError> {
        let mut v = vec![self.index(1, self.n, "minor")?];
        while self.eat(',') {
            v.push(self.index(1, self.n, "minor")?);
        }
        Ok(v)
    }

    fn letter(&mut self) -> Result<UqLetter, CliError> {
        let kind = match self.peek() {
            Tok::Ident(name) => match name.as_str() {
                "K" => LetterKind::K,
                "Kinv" => LetterKind::Kinv,
                "E" => LetterKind::E,
                "F" => LetterKind::F,
                other => return Err(self.err(format!("unknown U_q letter '{}'", other))),
            },
            _ => return Err(self.err("expected a U_q letter")),
        };
        self.pos += 1;
        self.expect('[')?;
        let r = self.index(1, self.n - 1, "U_q letter")?;
        self.expect(']')?;
        UqLetter::new(kind, r, self.n).map_err(|e| self.err(e.to_string()))
    }

    fn bracketed(&mut self, lo: usize, hi: usize, what: &str) -> Result<usize, CliError> {
        self.expect('[')?;
        let i = self.index(lo, hi, what)?;
        self.expect(']')?;
        Ok(i)
    }

    fn atom(&mut self) -> Result<Expr, CliError> {
        let n = self.n;
        match self.peek().clone() {
            Tok::Int(v) => {
                self.pos += 1;
                Ok(Expr::Int(v))
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(Expr::Group(Box::new(e)))
            }
            Tok::Ident(name) => {
                self.pos += 1;
                match name.as_str() {
                    "q" => Ok(Expr::Q),
                    "s" => Ok(Expr::S),
                    "u" => {
                        self.expect('[')?;
                        let i = self.index(1, n, "row")?;
                        self.expect(',')?;
                        let j = self.index(1, n, "column")?;
                        self.expect(']')?;
                        Ok(Expr::Gen(i, j))
                    }
                    "z" => Ok(Expr::Z(self.bracketed(1, n, "z")?)),
                    "zs" => Ok(Expr::Zs(self.bracketed(1, n, "zs")?)),
                    "x" => Ok(Expr::X(self.bracketed(1, n, "x")?)),
                    "y" => Ok(Expr::Y(self.bracketed(1, n, "y")?)),
                    "D" => {
                        self.expect('[')?;
                        let rows = self.set()?;
                        self.expect(';')?;
                        let cols = self.set()?;
                        if rows.len() != cols.len() {
                            return Err(self.err("minor row and column sets differ in size"));
                        }
                        self.expect(']')?;
                        Ok(Expr::Minor(rows, cols))
                    }
                    "act" => {
                        self.expect('(')?;
                        let mut word = vec![self.letter()?];
                        while self.eat('*') {
                            word.push(self.letter()?);
                        }
                        self.expect(';')?;
                        let e = self.expr()?;
                        self.expect(')')?;
                        Ok(Expr::Act(word, Box::new(e)))
                    }
                    other => {
                        self.pos -= 1;
                        Err(self.err(format!("unknown name '{}'", other)))
                    }
                }
            }
            Tok::End => Err(self.err("unexpected end of input")),
            Tok::Sym(c) => Err(self.err(format!("unexpected '{}'", c))),
        }
    }
}

/// Parses `text` for the rank-`n` algebra.
pub fn parse_expr(text: &str, n: usize) -> Result<Expr, CliError> {
    if n < 2 {
        return Err(CliError::Usage(format!("N must be at least 2, got {}", n)));
    }
    let toks = Lexer::run(text)?;
    let mut p = Parser { text, toks, pos: 0, n };
    let e = p.expr()?;
    if p.peek() != &Tok::End {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

enum Value {
    Scalar(ScalarQ),
    Poly(NcPoly),
}

impl Value {
    fn into_poly(self, alg: &Algebra) -> NcPoly {
        match self {
            Value::Scalar(c) => alg.scalar(c),
            Value::Poly(p) => p,
        }
    }
}

fn eval_value(e: &Expr, alg: &Algebra) -> Result<Value, CliError> {
    let poly = |v: Value| v.into_poly(alg);
    Ok(match e {
        Expr::Int(n) => Value::Scalar(ScalarQ::from_rational(BigRational::from_integer(n.clone()))),
        Expr::Q => Value::Scalar(ScalarQ::q_pow(1)),
        Expr::S => Value::Scalar(ScalarQ::s_pow(1)),
        Expr::Gen(i, j) => Value::Poly(alg.generator(*i, *j)?),
        Expr::Z(i) => Value::Poly(alg.z(*i)?),
        Expr::Zs(i) => Value::Poly(alg.z_star(*i)?),
        Expr::X(i) => Value::Poly(alg.x(*i)?),
        Expr::Y(r) => Value::Poly(alg.y(*r)?),
        Expr::Minor(rows, cols) => Value::Poly(alg.quantum_minor(rows, cols)?),
        Expr::Act(word, inner) => {
            let eta = UqElement::from_word(alg.rank(), word.clone(), ScalarQ::one());
            let x = poly(eval_value(inner, alg)?);
            Value::Poly(act_d(alg, &eta, &x)?)
        }
        Expr::Group(inner) => eval_value(inner, alg)?,
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (a, b) = (eval_value(a, alg)?, eval_value(b, alg)?);
            let minus = matches!(e, Expr::Sub(..));
            match (a, b) {
                (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(if minus { &x - &y } else { &x + &y }),
                (a, b) => {
                    let (a, b) = (poly(a), poly(b));
                    Value::Poly(if minus { a.sub(&b) } else { a.add(&b) })
                }
            }
        }
        Expr::Neg(a) => match eval_value(a, alg)? {
            Value::Scalar(x) => Value::Scalar(-x),
            Value::Poly(p) => Value::Poly(p.neg()),
        },
        Expr::Mul(a, b) => match (eval_value(a, alg)?, eval_value(b, alg)?) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x * &y),
            (Value::Scalar(x), Value::Poly(p)) | (Value::Poly(p), Value::Scalar(x)) => Value::Poly(p.scale(&x)),
            (Value::Poly(p), Value::Poly(r)) => Value::Poly(alg.mul(&p, &r)?),
        },
        Expr::Div(a, b) => {
            let d = match eval_value(b, alg)? {
                Value::Scalar(d) => d,
                Value::Poly(_) => return Err(CliError::Usage(format!("cannot divide by the non-scalar {}", b))),
            };
            let inv = d.recip()?;
            match eval_value(a, alg)? {
                Value::Scalar(x) => Value::Scalar(&x * &inv),
                Value::Poly(p) => Value::Poly(p.scale(&inv)),
            }
        }
        Expr::Pow(a, k) => match eval_value(a, alg)? {
            Value::Scalar(x) => Value::Scalar(x.pow(*k)?),
            Value::Poly(p) if *k >= 0 => Value::Poly(alg.pow(&p, *k as usize)?),
            Value::Poly(_) => return Err(CliError::Usage(format!("negative power of the non-scalar {}", a))),
        },
        // q and s are real, so the star fixes scalars.
        Expr::Star(a) => match eval_value(a, alg)? {
            Value::Scalar(x) => Value::Scalar(x),
            Value::Poly(p) => Value::Poly(alg.star(&p)?),
        },
    })
}

/// Evaluates to a normal form in `alg`.
pub fn eval_expr(e: &Expr, alg: &Algebra) -> Result<NcPoly, CliError> {
    let p = eval_value(e, alg)?.into_poly(alg);
    Ok(alg.reduce(&p)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prints_what_it_parses() {
        for text in ["1 + q^-1*u[1,2]*u[2,1]", "-(1/2)*q^2*u[1,1]†", "act(E[1]*K[1]; z[1]*zs[2])", "D[1,2;1,2] - y[1]"] {
            assert_eq!(parse_expr(text, 2).unwrap().to_string(), text);
        }
    }

    #[test]
    fn reports_positions() {
        match parse_expr("u[1,1] +\n  u[1,3]", 2) {
            Err(CliError::Parse { line, column, .. }) => assert_eq!((line, column), (2, 7)),
            other => panic!("unexpected {:?}", other),
        }
        assert!(matches!(parse_expr("u[1,1", 2), Err(CliError::Parse { .. })));
        assert!(matches!(parse_expr("E[1]", 2), Err(CliError::Parse { .. })));
    }
}
