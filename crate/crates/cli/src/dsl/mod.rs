//! The set-expression language.
//!
//! ```text
//! set      := term (('u' | '∪' | '\' | '&') term)*
//! term     := interval | points | seq | call | '(' set ')'
//! interval := ('[' | '(') rat ',' rat (']' | ')')
//! points   := '{' [rat (',' rat)*] '}'
//! seq      := 'seq(' 'limit=' rat ',' 'rule=' rule ',' 'from=' int
//!             [',' 'to=' int] [',' 'side=' ('below' | 'above')] [',' 'with_limit'] [',' 'child=' seq] ')'
//! rule     := 'harmonic(' rat ')' | 'geometric(' rat ',' rat ')'
//! call     := ('slice_le' | 'slice_ge' | 'translate' | 'scale' | 'reflect' | 'fatten') '(' set ',' rat ')'
//!           | 'closure(' set ')'
//! rat      := ['-'] int ['/' int]
//! ```
//!
//! Binary operators share one precedence level and associate to the left.

mod parse;

use std::fmt;

use meanlab_core::exactset::{Cluster, Interval, RealSet, Rule, Side};
use meanlab_core::measure;
use meanlab_core::rational::{self, Rational};

pub use parse::{parse, ParseError};

/// Source position, 1-based. Positions do not take part in equality, so
/// trees that differ only in layout compare equal.
#[derive(Clone, Copy, Debug, Default, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Pos) -> bool {
        true
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Union,
    Diff,
    Intersect,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Union => "u",
            BinOp::Diff => "\\",
            BinOp::Intersect => "&",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    SliceLe,
    SliceGe,
    Translate,
    Scale,
    Reflect,
    Fatten,
    Closure,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::SliceLe,
        Func::SliceGe,
        Func::Translate,
        Func::Scale,
        Func::Reflect,
        Func::Fatten,
        Func::Closure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::SliceLe => "slice_le",
            Func::SliceGe => "slice_ge",
            Func::Translate => "translate",
            Func::Scale => "scale",
            Func::Reflect => "reflect",
            Func::Fatten => "fatten",
            Func::Closure => "closure",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn takes_param(self) -> bool {
        self != Func::Closure
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleExpr {
    Harmonic(Rational),
    Geometric(Rational, Rational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqExpr {
    pub limit: Rational,
    pub rule: RuleExpr,
    pub from: u64,
    pub to: Option<u64>,
    pub below: bool,
    pub with_limit: bool,
    pub child: Option<Box<SeqExpr>>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Interval {
        lo: Rational,
        hi: Rational,
        lo_closed: bool,
        hi_closed: bool,
        pos: Pos,
    },
    Points {
        xs: Vec<Rational>,
        pos: Pos,
    },
    Seq(SeqExpr),
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
        pos: Pos,
    },
    Call {
        func: Func,
        arg: Box<Expr>,
        param: Option<Rational>,
        pos: Pos,
    },
}

impl Expr {
    pub fn pos(&self) -> Pos {
        match self {
            Expr::Interval { pos, .. }
            | Expr::Points { pos, .. }
            | Expr::Binary { pos, .. }
            | Expr::Call { pos, .. } => *pos,
            Expr::Seq(s) => s.pos,
        }
    }

    pub fn eval(&self) -> meanlab_core::Result<RealSet> {
        match self {
            Expr::Interval {
                lo,
                hi,
                lo_closed,
                hi_closed,
                ..
            } => Ok(RealSet::interval(Interval::new(
                lo.clone(),
                hi.clone(),
                *lo_closed,
                *hi_closed,
            )?)),
            Expr::Points { xs, .. } => Ok(RealSet::points(xs.iter().cloned())),
            Expr::Seq(s) => Ok(RealSet::cluster(s.cluster()?)),
            Expr::Binary { op, lhs, rhs, .. } => {
                let (a, b) = (lhs.eval()?, rhs.eval()?);
                match op {
                    BinOp::Union => Ok(a.union(&b)),
                    BinOp::Diff => a.diff(&b),
                    BinOp::Intersect => a.intersect(&b),
                }
            }
            Expr::Call {
                func, arg, param, ..
            } => {
                let h = arg.eval()?;
                let p = || param.clone().expect("parser supplies the parameter");
                match func {
                    Func::SliceLe => Ok(h.slice_le(&p())),
                    Func::SliceGe => Ok(h.slice_ge(&p())),
                    Func::Translate => Ok(h.translate(&p())),
                    Func::Scale => h.scale(&p()),
                    Func::Reflect => Ok(h.reflect(&p())),
                    Func::Fatten => measure::fatten(&h, &p()),
                    Func::Closure => Ok(h.closure()),
                }
            }
        }
    }
}

impl SeqExpr {
    pub fn cluster(&self) -> meanlab_core::Result<Cluster> {
        let rule = match &self.rule {
            RuleExpr::Harmonic(c) => Rule::harmonic(c.clone()),
            RuleExpr::Geometric(c, q) => Rule::geometric(c.clone(), q.clone()),
        };
        let side = if self.below { Side::Below } else { Side::Above };
        let mut c = Cluster::new(self.limit.clone(), side, rule, self.from, self.with_limit)?;
        if let Some(e) = self.to {
            c = c.with_end(e)?;
        }
        if let Some(t) = &self.child {
            c = c.with_child(t.cluster()?)?;
        }
        Ok(c)
    }
}

/// Parses and evaluates in one step.
pub fn eval_str(text: &str) -> Result<RealSet, crate::CliError> {
    let e = parse(text)?;
    Ok(e.eval()?)
}

impl fmt::Display for RuleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleExpr::Harmonic(c) => write!(f, "harmonic({})", rational::fmt(c)),
            RuleExpr::Geometric(c, q) => {
                write!(f, "geometric({},{})", rational::fmt(c), rational::fmt(q))
            }
        }
    }
}

impl fmt::Display for SeqExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "seq(limit={}, rule={}, from={}",
            rational::fmt(&self.limit),
            self.rule,
            self.from
        )?;
        if let Some(e) = self.to {
            write!(f, ", to={e}")?;
        }
        if self.below {
            write!(f, ", side=below")?;
        }
        if self.with_limit {
            write!(f, ", with_limit")?;
        }
        if let Some(c) = &self.child {
            write!(f, ", child={c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Interval {
                lo,
                hi,
                lo_closed,
                hi_closed,
                ..
            } => write!(
                f,
                "{}{},{}{}",
                if *lo_closed { '[' } else { '(' },
                rational::fmt(lo),
                rational::fmt(hi),
                if *hi_closed { ']' } else { ')' }
            ),
            Expr::Points { xs, .. } => {
                let list: Vec<String> = xs.iter().map(rational::fmt).collect();
                write!(f, "{{{}}}", list.join(", "))
            }
            Expr::Seq(s) => write!(f, "{s}"),
            Expr::Binary { op, lhs, rhs, .. } => {
                if matches!(**rhs, Expr::Binary { .. }) {
                    write!(f, "{lhs} {} ({rhs})", op.symbol())
                } else {
                    write!(f, "{lhs} {} {rhs}", op.symbol())
                }
            }
            Expr::Call {
                func, arg, param, ..
            } => match param {
                Some(p) => write!(f, "{}({arg}, {})", func.name(), rational::fmt(p)),
                None => write!(f, "{}({arg})", func.name()),
            },
        }
    }
}
