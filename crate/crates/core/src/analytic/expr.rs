use std::fmt;

use crate::algebra::Complex;
use crate::error::{Error, Result};

/// Divisors below this magnitude are treated as poles.
pub const EVAL_SINGULAR_EPS: f64 = 1e-300;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Sin,
    Cos,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "exp" => Some(Func::Exp),
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            _ => None,
        }
    }

    fn apply(self, z: Complex) -> Complex {
        match self {
            Func::Exp => z.exp(),
            Func::Sin => z.sin(),
            Func::Cos => z.cos(),
        }
    }
}

/// Expression tree in one complex variable `z`.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Complex),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn real(x: f64) -> Expr {
        Expr::Const(Complex::new(x, 0.0))
    }

    pub fn zero() -> Expr {
        Expr::real(0.0)
    }

    pub fn eval(&self, z: Complex) -> Result<Complex> {
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var => z,
            Expr::Neg(a) => -a.eval(z)?,
            Expr::Add(a, b) => a.eval(z)? + b.eval(z)?,
            Expr::Sub(a, b) => a.eval(z)? - b.eval(z)?,
            Expr::Mul(a, b) => a.eval(z)? * b.eval(z)?,
            Expr::Div(a, b) => {
                let num = a.eval(z)?;
                let den = b.eval(z)?;
                if !(den.norm() >= EVAL_SINGULAR_EPS) {
                    return Err(Error::EvalSingular(format!("division by {den} at z = {z}")));
                }
                num / den
            }
            Expr::Pow(a, k) => {
                let base = a.eval(z)?;
                if *k < 0 && !(base.norm() >= EVAL_SINGULAR_EPS) {
                    return Err(Error::EvalSingular(format!(
                        "negative power {k} of {base} at z = {z}"
                    )));
                }
                base.powi(*k)
            }
            Expr::Call(f, a) => f.apply(a.eval(z)?),
        })
    }

    /// Symbolic derivative with respect to `z`, lightly simplified.
    pub fn derivative(&self) -> Expr {
        use Expr::*;
        match self {
            Const(_) => Expr::zero(),
            Var => Expr::real(1.0),
            Neg(a) => neg(a.derivative()),
            Add(a, b) => add(a.derivative(), b.derivative()),
            Sub(a, b) => sub(a.derivative(), b.derivative()),
            Mul(a, b) => add(
                mul(a.derivative(), (**b).clone()),
                mul((**a).clone(), b.derivative()),
            ),
            Div(a, b) => div(
                sub(
                    mul(a.derivative(), (**b).clone()),
                    mul((**a).clone(), b.derivative()),
                ),
                pow((**b).clone(), 2),
            ),
            Pow(a, k) => mul(
                mul(Expr::real(*k as f64), pow((**a).clone(), k - 1)),
                a.derivative(),
            ),
            Call(f, a) => {
                let outer = match f {
                    Func::Exp => Call(Func::Exp, a.clone()),
                    Func::Sin => Call(Func::Cos, a.clone()),
                    Func::Cos => neg(Call(Func::Sin, a.clone())),
                };
                mul(outer, a.derivative())
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(c) if !is_atomic_const(*c) => 1,
            _ => 5,
        }
    }
}

fn is_atomic_const(c: Complex) -> bool {
    (c.im == 0.0 && c.re >= 0.0 && !c.re.is_sign_negative()) || (c.re == 0.0 && c.im == 1.0)
}

fn as_const(e: &Expr) -> Option<Complex> {
    match e {
        Expr::Const(c) => Some(*c),
        _ => None,
    }
}

fn is_value(e: &Expr, v: f64) -> bool {
    as_const(e) == Some(Complex::new(v, 0.0))
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => Expr::Const(x + y),
        _ if is_value(&a, 0.0) => b,
        _ if is_value(&b, 0.0) => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => Expr::Const(x - y),
        _ if is_value(&b, 0.0) => a,
        _ if is_value(&a, 0.0) => neg(b),
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => Expr::Const(x * y),
        _ if is_value(&a, 0.0) || is_value(&b, 0.0) => Expr::zero(),
        _ if is_value(&a, 1.0) => b,
        _ if is_value(&b, 1.0) => a,
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    if is_value(&a, 0.0) {
        Expr::zero()
    } else if is_value(&b, 1.0) {
        a
    } else {
        Expr::Div(Box::new(a), Box::new(b))
    }
}

fn pow(a: Expr, k: i32) -> Expr {
    match k {
        0 => Expr::real(1.0),
        1 => a,
        _ => Expr::Pow(Box::new(a), k),
    }
}

fn fmt_number(x: f64) -> String {
    // `{}` on f64 is the shortest round-trip decimal and never uses exponents.
    format!("{x}")
}

fn fmt_const(c: Complex) -> String {
    if c.re == 0.0 && c.im == 1.0 {
        "i".into()
    } else if c.im == 0.0 {
        fmt_number(c.re)
    } else if c.re == 0.0 {
        format!("{}*i", fmt_number(c.im))
    } else {
        let sign = if c.im < 0.0 { '-' } else { '+' };
        format!("{}{}{}*i", fmt_number(c.re), sign, fmt_number(c.im.abs()))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |e: &Expr, min: u8, f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Const(c) => {
                // Negative reals print as `-x`, which binds as a unary minus.
                if c.im == 0.0 && c.re.is_sign_negative() {
                    write!(f, "-{}", fmt_number(-c.re))
                } else {
                    f.write_str(&fmt_const(*c))
                }
            }
            Expr::Var => f.write_str("z"),
            Expr::Neg(a) => {
                f.write_str("-")?;
                wrap(a, 3, f)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                wrap(a, 1, f)?;
                f.write_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                wrap(b, 2, f)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                wrap(a, 2, f)?;
                f.write_str(if matches!(self, Expr::Mul(..)) { "*" } else { "/" })?;
                wrap(b, 3, f)
            }
            Expr::Pow(a, k) => {
                wrap(a, 5, f)?;
                write!(f, "^{k}")
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}
