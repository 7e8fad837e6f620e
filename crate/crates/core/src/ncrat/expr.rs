use std::fmt;

use crate::cursor::Cursor;
use crate::error::ParseError;
use crate::gf::{Field, Scalar};

/// Nesting depth accepted by the parser.
const MAX_DEPTH: usize = 200;

/// A noncommutative rational expression. `Sum` and `Prod` built by the
/// parser have at least two children; variables are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RatExpr {
    Const(Scalar),
    Var(usize),
    Sum(Vec<RatExpr>),
    Prod(Vec<RatExpr>),
    Inv(Box<RatExpr>),
}

impl RatExpr {
    pub fn var(i: usize) -> Self {
        RatExpr::Var(i)
    }

    pub fn inv(e: RatExpr) -> Self {
        RatExpr::Inv(Box::new(e))
    }

    /// Largest variable index, 0 if there are none.
    pub fn num_vars(&self) -> usize {
        match self {
            RatExpr::Const(_) => 0,
            RatExpr::Var(i) => *i,
            RatExpr::Sum(cs) | RatExpr::Prod(cs) => cs.iter().map(RatExpr::num_vars).max().unwrap_or(0),
            RatExpr::Inv(e) => e.num_vars(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            RatExpr::Const(_) | RatExpr::Var(_) => 1,
            RatExpr::Sum(cs) | RatExpr::Prod(cs) => 1 + cs.iter().map(RatExpr::size).sum::<usize>(),
            RatExpr::Inv(e) => 1 + e.size(),
        }
    }
}

impl fmt::Display for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RatExpr::Const(c) => write!(f, "{c}"),
            RatExpr::Var(i) => write!(f, "z{i}"),
            RatExpr::Inv(e) => write!(f, "inv({e})"),
            RatExpr::Sum(cs) => {
                for (k, c) in cs.iter().enumerate() {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    match c {
                        RatExpr::Sum(_) => write!(f, "({c})")?,
                        _ => write!(f, "{c}")?,
                    }
                }
                Ok(())
            }
            RatExpr::Prod(cs) => {
                for (k, c) in cs.iter().enumerate() {
                    if k > 0 {
                        write!(f, "*")?;
                    }
                    match c {
                        RatExpr::Sum(_) | RatExpr::Prod(_) => write!(f, "({c})")?,
                        _ => write!(f, "{c}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

/// Parses
///
/// ```text
/// expr   := term (('+' | '-') term)*
/// term   := factor ('*' factor)*
/// factor := 'z' digit+ | const | 'inv' '(' expr ')' | '(' expr ')'
/// ```
///
/// Constants are field element codes. `a - b` becomes `a + (p-1)*b`; when
/// `b` is already a product the constant is prepended to it.
pub fn parse_ratexpr(text: &str, field: &Field) -> Result<RatExpr, ParseError> {
    let mut p = Parser {
        cur: Cursor::new(text),
        field,
        depth: 0,
    };
    let e = p.expr()?;
    if !p.cur.at_end() {
        return Err(p.cur.error("expected an operator or end of input"));
    }
    Ok(e)
}

/// `print_ratexpr(e)` is `e.to_string()`.
pub fn print_ratexpr(e: &RatExpr) -> String {
    e.to_string()
}

struct Parser<'a, 'f> {
    cur: Cursor<'a>,
    field: &'f Field,
    depth: usize,
}

impl Parser<'_, '_> {
    fn expr(&mut self) -> Result<RatExpr, ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.cur.error(format!("nesting deeper than {MAX_DEPTH}")));
        }
        let mut terms = vec![self.term()?];
        loop {
            if self.cur.eat(b'+') {
                terms.push(self.term()?);
            } else if self.cur.eat(b'-') {
                let t = self.term()?;
                terms.push(self.negate(t));
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(if terms.len() == 1 {
            terms.pop().expect("one term")
        } else {
            RatExpr::Sum(terms)
        })
    }

    fn negate(&self, t: RatExpr) -> RatExpr {
        let minus_one = RatExpr::Const(self.field.neg(Scalar::ONE));
        match t {
            RatExpr::Prod(mut cs) => {
                cs.insert(0, minus_one);
                RatExpr::Prod(cs)
            }
            other => RatExpr::Prod(vec![minus_one, other]),
        }
    }

    fn term(&mut self) -> Result<RatExpr, ParseError> {
        let mut factors = vec![self.factor()?];
        while self.cur.eat(b'*') {
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().expect("one factor")
        } else {
            RatExpr::Prod(factors)
        })
    }

    fn factor(&mut self) -> Result<RatExpr, ParseError> {
        match self.cur.peek() {
            Some(b'z') => {
                self.cur.bump();
                let Some((start, i)) = self.cur.digits_raw() else {
                    return Err(self.cur.error("expected a variable index after `z`"));
                };
                if i == 0 || i > u32::MAX as u64 {
                    return Err(ParseError::new(start, format!("variable index {i} must be positive")));
                }
                Ok(RatExpr::Var(i as usize))
            }
            Some(b) if b.is_ascii_digit() => {
                let (start, v) = self.cur.digits_raw().expect("peeked a digit");
                if v >= self.field.order() as u64 {
                    return Err(ParseError::new(
                        start,
                        format!("constant {v} outside [0, {})", self.field.order()),
                    ));
                }
                Ok(RatExpr::Const(Scalar(v as u32)))
            }
            Some(b'(') => {
                self.cur.bump();
                let e = self.expr()?;
                self.cur.expect(b')')?;
                Ok(e)
            }
            Some(b'i') => {
                if !self.cur.eat_keyword("inv") {
                    return Err(self.cur.error("expected `inv`"));
                }
                self.cur.expect(b'(')?;
                let e = self.expr()?;
                self.cur.expect(b')')?;
                Ok(RatExpr::inv(e))
            }
            _ => Err(self.cur.error("expected a variable, constant, `inv(` or `(`")),
        }
    }
}

/// `z1 - inv(inv(z1) + inv(inv(z2) - z1))`
pub fn hua_left(field: &Field) -> RatExpr {
    parse_ratexpr("z1 - inv(inv(z1) + inv(inv(z2) - z1))", field).expect("fixed text")
}

/// `z1*z2*z1`
pub fn hua_right() -> RatExpr {
    RatExpr::Prod(vec![RatExpr::Var(1), RatExpr::Var(2), RatExpr::Var(1)])
}
