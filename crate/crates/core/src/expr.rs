//! A small expression language for real functions of one real variable.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | ident | ident '(' args ')' | '(' expr ')'
//! ```
//!
//! `x` and `t` both name the variable. Functions: `exp`, `log` (natural),
//! `sin`, `cos`, `sqrt`, `abs`, `sign` (with `sign(0) = 0`) and `lnk(k, u)`,
//! the k-fold iterated natural logarithm.
//!
//! Exponentiation binds tighter than unary minus, so `-x^2` is `-(x^2)`, and
//! is right associative: `2^3^2 = 2^9`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("function `{name}` at offset {offset} takes {expected} argument(s), got {got}")]
    Arity {
        offset: usize,
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("lnk at offset {offset} needs a non-negative integer literal as its first argument")]
    LnkOrder { offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::Arity { offset, .. }
            | ParseError::LnkOrder { offset } => *offset,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DomainError {
    #[error("logarithm of non-positive value {0}")]
    Log(f64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of negative value {0}")]
    Sqrt(f64),
    #[error("zero raised to negative power {0}")]
    ZeroToNegative(f64),
    #[error("negative base {0} raised to non-integer power {1}")]
    NegativeBase(f64, f64),
    #[error("non-finite result")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
    Abs,
    Sign,
}

impl Func {
    const ALL: [Func; 7] = [
        Func::Exp,
        Func::Log,
        Func::Sin,
        Func::Cos,
        Func::Sqrt,
        Func::Abs,
        Func::Sign,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Sign => "sign",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Func::ALL.iter().copied().find(|f| f.name() == name)
    }

    fn apply(self, v: f64) -> Result<f64, DomainError> {
        match self {
            Func::Exp => Ok(v.exp()),
            Func::Log => {
                if v > 0.0 {
                    Ok(v.ln())
                } else {
                    Err(DomainError::Log(v))
                }
            }
            Func::Sin => Ok(v.sin()),
            Func::Cos => Ok(v.cos()),
            Func::Sqrt => {
                if v >= 0.0 {
                    Ok(v.sqrt())
                } else {
                    Err(DomainError::Sqrt(v))
                }
            }
            Func::Abs => Ok(v.abs()),
            Func::Sign => Ok(sign(v)),
        }
    }
}

/// `sign(0) = 0`, unlike `f64::signum`.
pub fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    Var,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
    Lnk(u32, Box<Node>),
}

impl Node {
    pub fn eval(&self, x: f64) -> Result<f64, DomainError> {
        let v = match self {
            Node::Num(c) => *c,
            Node::Var => x,
            Node::Neg(a) => -a.eval(x)?,
            Node::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Node::Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Node::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Node::Div(a, b) => {
                let num = a.eval(x)?;
                let den = b.eval(x)?;
                if den == 0.0 {
                    return Err(DomainError::DivisionByZero);
                }
                num / den
            }
            Node::Pow(a, b) => power(a.eval(x)?, b.eval(x)?)?,
            Node::Call(f, a) => f.apply(a.eval(x)?)?,
            Node::Lnk(k, a) => {
                let mut v = a.eval(x)?;
                for _ in 0..*k {
                    v = Func::Log.apply(v)?;
                }
                v
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(DomainError::NonFinite)
        }
    }

    /// Replace every occurrence of the variable by `sub`.
    pub fn substitute(&self, sub: &Node) -> Node {
        let s = |n: &Node| Box::new(n.substitute(sub));
        match self {
            Node::Num(c) => Node::Num(*c),
            Node::Var => sub.clone(),
            Node::Neg(a) => Node::Neg(s(a)),
            Node::Add(a, b) => Node::Add(s(a), s(b)),
            Node::Sub(a, b) => Node::Sub(s(a), s(b)),
            Node::Mul(a, b) => Node::Mul(s(a), s(b)),
            Node::Div(a, b) => Node::Div(s(a), s(b)),
            Node::Pow(a, b) => Node::Pow(s(a), s(b)),
            Node::Call(f, a) => Node::Call(*f, s(a)),
            Node::Lnk(k, a) => Node::Lnk(*k, s(a)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Node::Add(..) | Node::Sub(..) => 1,
            Node::Mul(..) | Node::Div(..) => 2,
            Node::Neg(..) => 3,
            Node::Pow(..) => 4,
            Node::Num(..) | Node::Var | Node::Call(..) | Node::Lnk(..) => 5,
        }
    }
}

fn power(base: f64, exponent: f64) -> Result<f64, DomainError> {
    if base == 0.0 && exponent < 0.0 {
        return Err(DomainError::ZeroToNegative(exponent));
    }
    if base < 0.0 && exponent.fract() != 0.0 {
        return Err(DomainError::NegativeBase(base, exponent));
    }
    if exponent.fract() == 0.0 && exponent.abs() <= 64.0 {
        Ok(base.powi(exponent as i32))
    } else {
        Ok(base.powf(exponent))
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Node, min_prec: u8) -> fmt::Result {
    if child.precedence() < min_prec {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Num(c) => {
                if *c < 0.0 {
                    write!(f, "({c:?})")
                } else {
                    write!(f, "{c:?}")
                }
            }
            Node::Var => write!(f, "x"),
            Node::Neg(a) => {
                write!(f, "-")?;
                write_child(f, a, 3)
            }
            Node::Add(a, b) | Node::Sub(a, b) => {
                let op = if matches!(self, Node::Add(..)) { '+' } else { '-' };
                write_child(f, a, 1)?;
                write!(f, " {op} ")?;
                write_child(f, b, 2)
            }
            Node::Mul(a, b) | Node::Div(a, b) => {
                let op = if matches!(self, Node::Mul(..)) { '*' } else { '/' };
                write_child(f, a, 2)?;
                write!(f, " {op} ")?;
                // `-` is allowed directly after an operator, so a negation
                // on the right needs no parentheses.
                write_child(f, b, 3)
            }
            Node::Pow(a, b) => {
                write_child(f, a, 5)?;
                write!(f, "^")?;
                write_child(f, b, 3)
            }
            Node::Call(func, a) => write!(f, "{}({a})", func.name()),
            Node::Lnk(k, a) => write!(f, "lnk({k}, {a})"),
        }
    }
}

/// A parsed, immutable expression. Cloning is cheap.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    root: Arc<Node>,
}

impl Expression {
    pub fn parse(source: &str) -> Result<Expression, ParseError> {
        let mut parser = Parser::new(source);
        let root = parser.expr()?;
        parser.skip_ws();
        if parser.pos < parser.src.len() {
            return Err(parser.syntax("operator or end of input"));
        }
        Ok(Expression {
            root: Arc::new(root),
        })
    }

    pub fn from_node(node: Node) -> Expression {
        Expression {
            root: Arc::new(node),
        }
    }

    pub fn constant(c: f64) -> Expression {
        Expression::from_node(constant_node(c))
    }

    pub fn node(&self) -> &Node {
        &self.root
    }

    pub fn eval(&self, x: f64) -> Result<f64, DomainError> {
        self.root.eval(x)
    }

    /// Pointwise evaluation; a domain error at one point does not affect the others.
    pub fn eval_grid(&self, points: &[f64]) -> Vec<Result<f64, DomainError>> {
        points.iter().map(|&p| self.eval(p)).collect()
    }

    /// Evaluate, mapping domain errors to NaN. Quadrature rejects non-finite
    /// panels, so a NaN surfaces as non-convergence at the offending node.
    pub fn eval_or_nan(&self, x: f64) -> f64 {
        self.eval(x).unwrap_or(f64::NAN)
    }

    /// `e(-x)`.
    pub fn reflect(&self) -> Expression {
        let neg_var = Node::Neg(Box::new(Node::Var));
        Expression::from_node(self.root.substitute(&neg_var))
    }

    pub fn is_zero_constant(&self) -> bool {
        matches!(*self.root, Node::Num(c) if c == 0.0)
    }

    /// `c * e`, folding the trivial cases.
    pub fn scale(&self, c: f64) -> Expression {
        if c == 0.0 || self.is_zero_constant() {
            return Expression::constant(0.0);
        }
        if c == 1.0 {
            return self.clone();
        }
        if c == -1.0 {
            return Expression::from_node(Node::Neg(Box::new((*self.root).clone())));
        }
        Expression::from_node(Node::Mul(
            Box::new(constant_node(c)),
            Box::new((*self.root).clone()),
        ))
    }

    pub fn add(&self, other: &Expression) -> Expression {
        if self.is_zero_constant() {
            return other.clone();
        }
        if other.is_zero_constant() {
            return self.clone();
        }
        Expression::from_node(Node::Add(
            Box::new((*self.root).clone()),
            Box::new((*other.root).clone()),
        ))
    }

    pub fn sub(&self, other: &Expression) -> Expression {
        if other.is_zero_constant() {
            return self.clone();
        }
        if self.is_zero_constant() {
            return other.scale(-1.0);
        }
        Expression::from_node(Node::Sub(
            Box::new((*self.root).clone()),
            Box::new((*other.root).clone()),
        ))
    }
}

fn constant_node(c: f64) -> Node {
    if c < 0.0 {
        Node::Neg(Box::new(Node::Num(-c)))
    } else {
        Node::Num(c)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)
    }
}

impl std::str::FromStr for Expression {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expression::parse(s)
    }
}

/// Shorthand for [`Expression::parse`].
pub fn parse(source: &str) -> Result<Expression, ParseError> {
    Expression::parse(source)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn syntax(&self, expected: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            expected: expected.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if self.eat(b'-') {
            Ok(Node::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            Ok(Node::Pow(Box::new(base), Box::new(self.unary()?)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Node, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.syntax("`)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            _ => Err(self.syntax("number, identifier or `(`")),
        }
    }

    fn number(&mut self) -> Result<Node, ParseError> {
        let start = self.pos;
        let digits = |p: &mut Parser| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            self.pos = start;
            return Err(self.syntax("digits"));
        }
        if self.pos < self.src.len() && (self.src[self.pos] == b'e' || self.src[self.pos] == b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && (self.src[self.pos] == b'+' || self.src[self.pos] == b'-') {
                self.pos += 1;
            }
            if digits(self) == 0 {
                // `2e` followed by something else: not an exponent.
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<f64>()
            .map(Node::Num)
            .map_err(|_| ParseError::Syntax {
                offset: start,
                expected: "number".into(),
            })
    }

    fn ident(&mut self) -> Result<Node, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        if name == "x" || name == "t" {
            return Ok(Node::Var);
        }
        let is_lnk = name == "lnk";
        let func = Func::from_name(name);
        if func.is_none() && !is_lnk {
            return Err(ParseError::UnknownIdentifier {
                offset: start,
                name: name.to_string(),
            });
        }
        if !self.eat(b'(') {
            return Err(self.syntax("`(` after function name"));
        }
        let mut args = vec![self.expr()?];
        while self.eat(b',') {
            args.push(self.expr()?);
        }
        if !self.eat(b')') {
            return Err(self.syntax("`,` or `)`"));
        }
        let expected = if is_lnk { 2 } else { 1 };
        if args.len() != expected {
            return Err(ParseError::Arity {
                offset: start,
                name: name.to_string(),
                expected,
                got: args.len(),
            });
        }
        let mut args = args.into_iter();
        let first = args.next().expect("arity checked");
        if is_lnk {
            let k = match first {
                Node::Num(k) if k >= 0.0 && k.fract() == 0.0 && k <= 16.0 => k as u32,
                _ => return Err(ParseError::LnkOrder { offset: start }),
            };
            Ok(Node::Lnk(k, Box::new(args.next().expect("arity checked"))))
        } else {
            Ok(Node::Call(func.expect("checked"), Box::new(first)))
        }
    }
}
