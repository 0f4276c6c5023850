//! Field-element expressions: integers closed under `+`, `·`, negation,
//! inversion and positive square roots.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::field::{Field, Rational, TowerElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Neg(Box<Expr>),
    Inv(Box<Expr>),
    Sqrt(Box<Expr>),
}

impl core::ops::Neg for Expr {
    type Output = Expr;

    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl Expr {
    pub fn int(n: impl Into<BigInt>) -> Expr {
        Expr::Int(n.into())
    }

    pub fn inv(e: Expr) -> Expr {
        Expr::Inv(Box::new(e))
    }

    pub fn sqrt(e: Expr) -> Expr {
        Expr::Sqrt(Box::new(e))
    }

    /// Evaluate, growing `ctx` whenever a square root leaves the current field.
    pub fn evaluate<F: Field>(&self, ctx: &mut F::Context) -> Result<F> {
        Ok(match self {
            Expr::Int(n) => F::from_integer(n.clone()),
            Expr::Add(args) => {
                let mut acc = F::zero();
                for a in args {
                    acc = acc.try_add(&a.evaluate(ctx)?)?;
                }
                acc
            }
            Expr::Mul(args) => {
                let mut acc = F::one();
                for a in args {
                    acc = acc.try_mul(&a.evaluate(ctx)?)?;
                }
                acc
            }
            Expr::Neg(a) => a.evaluate::<F>(ctx)?.negate(),
            Expr::Inv(a) => a.evaluate::<F>(ctx)?.try_inv()?,
            Expr::Sqrt(a) => {
                let x: F = a.evaluate(ctx)?;
                let joined = F::join_context(ctx, &x.context())?;
                let (root, grown) = x.sqrt_positive(&joined)?;
                *ctx = grown;
                root
            }
        })
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, name: &str, args: &[Expr]) -> fmt::Result {
    write!(f, "{name}(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str(")")
}

/// Functional form: `add(1, mul(3, sqrt(2)))`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Add(a) => write_list(f, "add", a),
            Expr::Mul(a) => write_list(f, "mul", a),
            Expr::Neg(a) => write!(f, "neg({a})"),
            Expr::Inv(a) => write!(f, "inv({a})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}

/// Field elements that can be written back as expressions.
pub trait ToExpr {
    fn to_expr(&self) -> Expr;
}

impl ToExpr for Rational {
    fn to_expr(&self) -> Expr {
        if self.denom().is_one() {
            Expr::Int(self.numer().clone())
        } else {
            Expr::Mul(alloc::vec![
                Expr::Int(self.numer().clone()),
                Expr::inv(Expr::Int(self.denom().clone()))
            ])
        }
    }
}

/// `Σ c_S ∏_{j∈S} √r_j` over the element's own context, radicands written recursively.
impl ToExpr for TowerElement {
    fn to_expr(&self) -> Expr {
        let radicals: Vec<Expr> = self
            .context_ref()
            .radicands()
            .iter()
            .map(|r| Expr::sqrt(r.to_expr()))
            .collect();
        let mut terms = Vec::new();
        for (i, c) in self.coefficients().iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            let mut factors: Vec<Expr> = radicals
                .iter()
                .enumerate()
                .filter(|(j, _)| i >> j & 1 == 1)
                .map(|(_, r)| r.clone())
                .collect();
            if factors.is_empty() || !One::is_one(&Signed::abs(c)) {
                factors.insert(0, c.to_expr());
            } else if Signed::is_negative(c) {
                factors.insert(0, Expr::int(-1));
            }
            terms.push(if factors.len() == 1 {
                factors.pop().unwrap()
            } else {
                Expr::Mul(factors)
            });
        }
        match terms.len() {
            0 => Expr::int(0),
            1 => terms.pop().unwrap(),
            _ => Expr::Add(terms),
        }
    }
}
