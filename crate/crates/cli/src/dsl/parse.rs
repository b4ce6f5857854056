use std::fmt;

use meanlab_core::rational::Rational;
use num_bigint::BigInt;

use super::{BinOp, Expr, Func, Pos, RuleExpr, SeqExpr};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: expected {}, found {}",
            self.line,
            self.col,
            self.expected.join(" or "),
            self.found
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                chars.next();
                col += 1;
            }
            out.push((Tok::Int(s.parse().expect("digits")), pos));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars
                .peek()
                .filter(|d| d.is_ascii_alphanumeric() || **d == '_')
            {
                s.push(d);
                chars.next();
                col += 1;
            }
            out.push((Tok::Ident(s), pos));
            continue;
        }
        if "[](){},=-/\\&∪".contains(c) {
            chars.next();
            col += 1;
            out.push((Tok::Sym(c), pos));
            continue;
        }
        return Err(ParseError {
            line,
            col,
            expected: vec!["a set expression".into()],
            found: format!("`{c}`"),
        });
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

type PResult<T> = Result<T, ParseError>;

const TERM_START: [&str; 5] = ["`[`", "`(`", "`{`", "`seq`", "a function name"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> PResult<T> {
        let Pos { line, col } = self.pos();
        Err(ParseError {
            line,
            col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        })
    }

    fn sym(&mut self, c: char) -> PResult<()> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.fail(&[&format!("`{c}`")])
        }
    }

    fn keyword(&mut self, word: &str) -> PResult<()> {
        match self.peek() {
            Tok::Ident(s) if s == word => {
                self.bump();
                Ok(())
            }
            _ => self.fail(&[&format!("`{word}`")]),
        }
    }

    fn int(&mut self) -> PResult<BigInt> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => self.fail(&["an integer"]),
        }
    }

    fn index(&mut self) -> PResult<u64> {
        let at = self.at;
        let n = self.int()?;
        u64::try_from(n).or_else(|_| {
            self.at = at;
            self.fail(&["an index below 2^64"])
        })
    }

    fn rat(&mut self) -> PResult<Rational> {
        let neg = *self.peek() == Tok::Sym('-');
        if neg {
            self.bump();
        }
        if !matches!(self.peek(), Tok::Int(_)) {
            return self.fail(&["a rational"]);
        }
        let n = self.int()?;
        let d = if *self.peek() == Tok::Sym('/') {
            self.bump();
            let at = self.at;
            let d = self.int()?;
            if d == BigInt::from(0) {
                self.at = at;
                return self.fail(&["a nonzero denominator"]);
            }
            d
        } else {
            BigInt::from(1)
        };
        let r = Rational::new(n, d);
        Ok(if neg { -r } else { r })
    }

    fn set(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            let pos = self.pos();
            let op = match self.peek() {
                Tok::Ident(s) if s == "u" => BinOp::Union,
                Tok::Sym('∪') => BinOp::Union,
                Tok::Sym('\\') => BinOp::Diff,
                Tok::Sym('&') => BinOp::Intersect,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
                pos,
            };
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Sym('[') => self.interval(),
            Tok::Sym('(') if matches!(self.peek2(), Tok::Int(_) | Tok::Sym('-')) => self.interval(),
            Tok::Sym('(') => {
                self.bump();
                let e = self.set()?;
                self.sym(')')?;
                Ok(e)
            }
            Tok::Sym('{') => {
                self.bump();
                let mut xs = Vec::new();
                if *self.peek() != Tok::Sym('}') {
                    xs.push(self.rat()?);
                    while *self.peek() == Tok::Sym(',') {
                        self.bump();
                        xs.push(self.rat()?);
                    }
                }
                if *self.peek() != Tok::Sym('}') {
                    return self.fail(&["`,`", "`}`"]);
                }
                self.bump();
                Ok(Expr::Points { xs, pos })
            }
            Tok::Ident(s) if s == "seq" => Ok(Expr::Seq(self.seq()?)),
            Tok::Ident(s) => match Func::from_name(&s) {
                Some(func) => {
                    self.bump();
                    self.sym('(')?;
                    let arg = self.set()?;
                    let param = if func.takes_param() {
                        self.sym(',')?;
                        Some(self.rat()?)
                    } else {
                        None
                    };
                    self.sym(')')?;
                    Ok(Expr::Call {
                        func,
                        arg: Box::new(arg),
                        param,
                        pos,
                    })
                }
                None => self.fail(&TERM_START),
            },
            _ => self.fail(&TERM_START),
        }
    }

    fn interval(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        let lo_closed = self.bump() == Tok::Sym('[');
        let lo = self.rat()?;
        self.sym(',')?;
        let hi = self.rat()?;
        let hi_closed = match self.peek() {
            Tok::Sym(']') => true,
            Tok::Sym(')') => false,
            _ => return self.fail(&["`]`", "`)`"]),
        };
        self.bump();
        Ok(Expr::Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
            pos,
        })
    }

    fn seq(&mut self) -> PResult<SeqExpr> {
        let pos = self.pos();
        self.keyword("seq")?;
        self.sym('(')?;
        self.keyword("limit")?;
        self.sym('=')?;
        let limit = self.rat()?;
        self.sym(',')?;
        self.keyword("rule")?;
        self.sym('=')?;
        let rule = match self.peek() {
            Tok::Ident(s) if s == "harmonic" => {
                self.bump();
                self.sym('(')?;
                let c = self.rat()?;
                self.sym(')')?;
                RuleExpr::Harmonic(c)
            }
            Tok::Ident(s) if s == "geometric" => {
                self.bump();
                self.sym('(')?;
                let c = self.rat()?;
                self.sym(',')?;
                let q = self.rat()?;
                self.sym(')')?;
                RuleExpr::Geometric(c, q)
            }
            _ => return self.fail(&["`harmonic`", "`geometric`"]),
        };
        self.sym(',')?;
        self.keyword("from")?;
        self.sym('=')?;
        let from = self.index()?;
        let mut s = SeqExpr {
            limit,
            rule,
            from,
            to: None,
            below: false,
            with_limit: false,
            child: None,
            pos,
        };
        // options in printing order
        let mut stage = 0;
        while *self.peek() == Tok::Sym(',') {
            self.bump();
            let options: [&str; 4] = ["`to`", "`side`", "`with_limit`", "`child`"];
            let word = match self.peek() {
                Tok::Ident(w) => w.clone(),
                _ => return self.fail(&options[stage..]),
            };
            let next = match word.as_str() {
                "to" => 0,
                "side" => 1,
                "with_limit" => 2,
                "child" => 3,
                _ => 4,
            };
            if next < stage || next == 4 {
                return self.fail(&options[stage.min(4)..]);
            }
            self.bump();
            match next {
                0 => {
                    self.sym('=')?;
                    s.to = Some(self.index()?);
                }
                1 => {
                    self.sym('=')?;
                    s.below = match self.peek() {
                        Tok::Ident(w) if w == "below" => true,
                        Tok::Ident(w) if w == "above" => false,
                        _ => return self.fail(&["`below`", "`above`"]),
                    };
                    self.bump();
                }
                2 => s.with_limit = true,
                _ => {
                    self.sym('=')?;
                    s.child = Some(Box::new(self.seq()?));
                }
            }
            stage = next + 1;
            if stage == 4 {
                break;
            }
        }
        self.sym(')')?;
        Ok(s)
    }
}

/// Parses a whole set expression.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let e = p.set()?;
    if *p.peek() != Tok::Eof {
        return p.fail(&["`u`", "`∪`", "`\\`", "`&`", "end of input"]);
    }
    Ok(e)
}
