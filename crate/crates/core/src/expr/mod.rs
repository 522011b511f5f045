//! Scalar expressions in one variable, evaluated with exact Taylor jets.

mod jet;
mod parse;

use std::fmt;

use thiserror::Error;

pub use jet::{Jet, Jet3, Jet5};
pub use parse::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Tanh,
    Abs,
}

impl Func {
    pub const ALL: [Func; 10] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constant {
    Pi,
    E,
}

impl Constant {
    pub fn name(self) -> &'static str {
        match self {
            Constant::Pi => "pi",
            Constant::E => "e",
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Constant::Pi => std::f64::consts::PI,
            Constant::E => std::f64::consts::E,
        }
    }

    pub fn from_name(name: &str) -> Option<Constant> {
        match name {
            "pi" => Some(Constant::Pi),
            "e" => Some(Constant::E),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

/// Expression tree. `Var` is the single declared variable.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    Const(Constant),
    Var,
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

impl Node {
    pub fn num(v: f64) -> Node {
        Node::Num(v)
    }

    pub fn binary(op: BinOp, lhs: Node, rhs: Node) -> Node {
        Node::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn call(func: Func, arg: Node) -> Node {
        Node::Call(func, Box::new(arg))
    }

    pub fn depends_on_var(&self) -> bool {
        match self {
            Node::Num(_) | Node::Const(_) => false,
            Node::Var => true,
            Node::Neg(a) | Node::Call(_, a) => a.depends_on_var(),
            Node::Binary(_, a, b) => a.depends_on_var() || b.depends_on_var(),
        }
    }

    /// Fully parenthesised text that re-parses to the same tree.
    fn write(&self, var: &str, out: &mut String) {
        use std::fmt::Write;
        match self {
            // Display for f64 is the shortest round-tripping decimal and
            // never uses exponent notation.
            Node::Num(v) => {
                let _ = write!(out, "{v}");
            }
            Node::Const(c) => out.push_str(c.name()),
            Node::Var => out.push_str(var),
            Node::Neg(a) => {
                out.push_str("-(");
                a.write(var, out);
                out.push(')');
            }
            Node::Binary(op, a, b) => {
                out.push('(');
                a.write(var, out);
                out.push(op.symbol());
                b.write(var, out);
                out.push(')');
            }
            Node::Call(f, a) => {
                out.push_str(f.name());
                out.push('(');
                a.write(var, out);
                out.push(')');
            }
        }
    }
}

/// A parsed expression together with its source text and variable name.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    ast: Node,
    source: String,
    variable: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind} in `{subexpr}`")]
pub struct EvalError {
    pub kind: DomainErrorKind,
    /// The offending subexpression, printed in canonical form.
    pub subexpr: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainErrorKind {
    #[error("logarithm of non-positive value {0}")]
    LogNonPositive(f64),
    #[error("square root of non-positive value {0}")]
    SqrtNonPositive(f64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("absolute value is not differentiable at 0")]
    AbsAtZero,
    #[error("non-integer power of non-positive base {0}")]
    PowNonPositiveBase(f64),
    #[error("non-finite result")]
    NonFinite,
}

impl Expression {
    /// Parses `source` with `variable` as the only free symbol.
    pub fn parse(source: &str, variable: &str) -> Result<Expression, ParseError> {
        let ast = parse::parse(source, variable)?;
        Ok(Expression {
            ast,
            source: source.to_string(),
            variable: variable.to_string(),
        })
    }

    /// Wraps a tree built in code. The source text is the canonical print.
    pub fn from_ast(ast: Node, variable: &str) -> Expression {
        let mut source = String::new();
        ast.write(variable, &mut source);
        Expression {
            ast,
            source,
            variable: variable.to_string(),
        }
    }

    pub fn ast(&self) -> &Node {
        &self.ast
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn variable(&self) -> &str {
        &self.variable
    }

    /// Canonical fully-parenthesised text.
    pub fn to_canonical(&self) -> String {
        let mut out = String::new();
        self.ast.write(&self.variable, &mut out);
        out
    }

    /// Value and first three derivatives at `t`.
    pub fn eval_jet3(&self, t: f64) -> Result<Jet3, EvalError> {
        self.eval_jet(t)
    }

    /// Jet of any order at `t`.
    pub fn eval_jet<const K: usize>(&self, t: f64) -> Result<Jet<K>, EvalError> {
        let x = Jet::variable(t);
        eval_node(&self.ast, &x, &self.variable)
    }

    pub fn eval(&self, t: f64) -> Result<f64, EvalError> {
        Ok(self.eval_jet::<1>(t)?.value())
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

fn domain(kind: DomainErrorKind, node: &Node, var: &str) -> EvalError {
    let mut subexpr = String::new();
    node.write(var, &mut subexpr);
    EvalError { kind, subexpr }
}

fn eval_node<const K: usize>(node: &Node, x: &Jet<K>, var: &str) -> Result<Jet<K>, EvalError> {
    let out = match node {
        Node::Num(v) => Jet::constant(*v),
        Node::Const(c) => Jet::constant(c.value()),
        Node::Var => *x,
        Node::Neg(a) => -eval_node(a, x, var)?,
        Node::Binary(op, a, b) => {
            let lhs = eval_node(a, x, var)?;
            match op {
                BinOp::Add => lhs + eval_node(b, x, var)?,
                BinOp::Sub => lhs - eval_node(b, x, var)?,
                BinOp::Mul => lhs * eval_node(b, x, var)?,
                BinOp::Div => {
                    let rhs = eval_node(b, x, var)?;
                    if rhs.value() == 0.0 {
                        return Err(domain(DomainErrorKind::DivisionByZero, node, var));
                    }
                    lhs / rhs
                }
                BinOp::Pow => eval_pow(node, lhs, b, x, var)?,
            }
        }
        Node::Call(f, a) => {
            let arg = eval_node(a, x, var)?;
            let v = arg.value();
            match f {
                Func::Sin => arg.sin(),
                Func::Cos => arg.cos(),
                Func::Tan => arg.tan(),
                Func::Exp => arg.exp(),
                Func::Log if v <= 0.0 => {
                    return Err(domain(DomainErrorKind::LogNonPositive(v), node, var))
                }
                Func::Log => arg.ln(),
                Func::Sqrt if v <= 0.0 => {
                    return Err(domain(DomainErrorKind::SqrtNonPositive(v), node, var))
                }
                Func::Sqrt => arg.sqrt(),
                Func::Sinh => arg.sinh(),
                Func::Cosh => arg.cosh(),
                Func::Tanh => arg.tanh(),
                Func::Abs if v == 0.0 => return Err(domain(DomainErrorKind::AbsAtZero, node, var)),
                Func::Abs => arg.abs(),
            }
        }
    };
    if !out.value().is_finite() {
        return Err(domain(DomainErrorKind::NonFinite, node, var));
    }
    Ok(out)
}

fn eval_pow<const K: usize>(
    node: &Node,
    base: Jet<K>,
    exponent: &Node,
    x: &Jet<K>,
    var: &str,
) -> Result<Jet<K>, EvalError> {
    let e = eval_node(exponent, x, var)?;
    let b = base.value();
    if !exponent.depends_on_var() {
        let p = e.value();
        if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
            if p < 0.0 && b == 0.0 {
                return Err(domain(DomainErrorKind::DivisionByZero, node, var));
            }
            return Ok(base.powi(p as i32));
        }
        if b <= 0.0 {
            return Err(domain(DomainErrorKind::PowNonPositiveBase(b), node, var));
        }
        return Ok(base.powf(p));
    }
    if b <= 0.0 {
        return Err(domain(DomainErrorKind::PowNonPositiveBase(b), node, var));
    }
    Ok(base.pow(&e))
}
