use std::fmt;

use crate::cursor::Cursor;
use crate::error::ParseError;
use crate::gf::{Field, Scalar};

/// Largest exponent accepted by the parser.
const MAX_DEGREE: u64 = 1 << 16;

/// A polynomial in `x`, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::monomial(Scalar::ONE, 0)
    }

    pub fn monomial(c: Scalar, deg: usize) -> Self {
        let mut coeffs = vec![Scalar::ZERO; deg + 1];
        coeffs[deg] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Poly, field: &Field) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Poly, i: usize| p.coeffs.get(i).copied().unwrap_or(Scalar::ZERO);
        Poly::new((0..len).map(|i| field.add(get(self, i), get(other, i))).collect())
    }

    pub fn mul(&self, other: &Poly, field: &Field) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(a, b));
            }
        }
        Poly::new(out)
    }
}

impl fmt::Display for Poly {
    /// Highest degree first, e.g. `x^2 + 2*x + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (deg, c.0) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{c}*x")?,
                (_, 1) => write!(f, "x^{deg}")?,
                (_, _) => write!(f, "{c}*x^{deg}")?,
            }
        }
        Ok(())
    }
}

/// `poly := term (('+' | '-') term)*`, `term := coeff ['*' mono] | mono`,
/// `mono := 'x' ['^' digit+]`, with coefficients as field element codes.
pub fn parse_poly(text: &str, field: &Field) -> Result<Poly, ParseError> {
    let mut cur = Cursor::new(text);
    let mut acc = Poly::zero();
    let mut negate = false;
    loop {
        let (c, deg) = poly_term(&mut cur, field)?;
        let c = if negate { field.neg(c) } else { c };
        acc = acc.add(&Poly::monomial(c, deg), field);
        if cur.eat(b'+') {
            negate = false;
        } else if cur.eat(b'-') {
            negate = true;
        } else if cur.at_end() {
            return Ok(acc);
        } else {
            return Err(cur.error("expected `+`, `-` or end of input"));
        }
    }
}

fn poly_term(cur: &mut Cursor, field: &Field) -> Result<(Scalar, usize), ParseError> {
    match cur.peek() {
        Some(b) if b.is_ascii_digit() => {
            let (start, value) = cur.digits_raw().expect("peeked a digit");
            if value >= field.order() as u64 {
                return Err(ParseError::new(
                    start,
                    format!("coefficient {value} outside [0, {})", field.order()),
                ));
            }
            if cur.eat(b'*') {
                Ok((Scalar(value as u32), monomial(cur)?))
            } else {
                Ok((Scalar(value as u32), 0))
            }
        }
        Some(b'x') => Ok((Scalar::ONE, monomial(cur)?)),
        _ => Err(cur.error("expected a coefficient or `x`")),
    }
}

fn monomial(cur: &mut Cursor) -> Result<usize, ParseError> {
    if !cur.eat(b'x') {
        return Err(cur.error("expected `x`"));
    }
    if !cur.eat(b'^') {
        return Ok(1);
    }
    cur.skip_ws();
    let Some((start, e)) = cur.digits_raw() else {
        return Err(cur.error("expected an exponent"));
    };
    if e > MAX_DEGREE {
        return Err(ParseError::new(start, format!("exponent {e} exceeds {MAX_DEGREE}")));
    }
    Ok(e as usize)
}
