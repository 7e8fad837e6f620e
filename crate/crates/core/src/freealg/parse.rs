//! Text grammar for group-algebra elements.
//!
//! ```text
//! elem     := term (('+' | '-') term)*
//! term     := coeff ['*' wordpart] | wordpart
//! wordpart := 'e' | gen ('*' gen)*
//! gen      := 'g' digit+ ['^' ['-'] digit+]
//! coeff    := digit+              (a field element code in [0, q))
//! ```
//!
//! A bare coefficient `c` stands for `c*e`.

use super::element::AlgebraElement;
use super::word::{Letter, Word};
use crate::cursor::Cursor;
use crate::error::ParseError;
use crate::gf::{Field, Scalar};

const MAX_EXPONENT: u64 = 10_000;

pub fn parse_element(text: &str, field: &Field, r: u32) -> Result<AlgebraElement, ParseError> {
    let mut cur = Cursor::new(text);
    let mut acc = AlgebraElement::zero(field, r);
    let mut negate = false;
    loop {
        let (c, w) = term(&mut cur, field, r)?;
        let c = if negate { field.neg(c) } else { c };
        let t = AlgebraElement::monomial(field, r, c, w);
        acc = acc.add(&t).expect("same algebra");
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

fn term(cur: &mut Cursor, field: &Field, r: u32) -> Result<(Scalar, Word), ParseError> {
    match cur.peek() {
        Some(b) if b.is_ascii_digit() => {
            let (start, value) = cur.digits_raw().expect("peeked a digit");
            if value >= field.order() as u64 {
                return Err(ParseError::new(
                    start,
                    format!("coefficient {value} outside [0, {})", field.order()),
                ));
            }
            let c = Scalar(value as u32);
            if cur.eat(b'*') {
                Ok((c, wordpart(cur, r)?))
            } else {
                Ok((c, Word::identity()))
            }
        }
        Some(b'e' | b'g') => Ok((Scalar::ONE, wordpart(cur, r)?)),
        _ => Err(cur.error("expected a coefficient, `e` or a generator")),
    }
}

fn wordpart(cur: &mut Cursor, r: u32) -> Result<Word, ParseError> {
    if cur.eat(b'e') {
        return Ok(Word::identity());
    }
    let mut letters = Vec::new();
    loop {
        gen(cur, r, &mut letters)?;
        // `*` continues the word only when a generator follows
        let save = cur.pos();
        if cur.eat(b'*') {
            if cur.peek() == Some(b'g') {
                continue;
            }
            return Err(ParseError::new(save, "expected a generator after `*`"));
        }
        return Ok(Word::from_letters(letters));
    }
}

fn gen(cur: &mut Cursor, r: u32, out: &mut Vec<Letter>) -> Result<(), ParseError> {
    if !cur.eat(b'g') {
        return Err(cur.error("expected a generator `g<index>`"));
    }
    let Some((start, index)) = cur.digits_raw() else {
        return Err(cur.error("expected a generator index after `g`"));
    };
    if index == 0 || index > r as u64 {
        return Err(ParseError::new(
            start,
            format!("generator index {index} outside 1..={r}"),
        ));
    }
    let mut exponent: i64 = 1;
    if cur.eat(b'^') {
        let negative = cur.eat(b'-');
        cur.skip_ws();
        let Some((estart, e)) = cur.digits_raw() else {
            return Err(cur.error("expected an exponent"));
        };
        if e > MAX_EXPONENT {
            return Err(ParseError::new(estart, format!("exponent {e} exceeds {MAX_EXPONENT}")));
        }
        exponent = if negative { -(e as i64) } else { e as i64 };
    }
    let l = Letter::new(index as u32, exponent < 0);
    out.extend(std::iter::repeat_n(l, exponent.unsigned_abs() as usize));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let f2 = Field::gf(2).unwrap();
        let e = parse_element("e", &f2, 1).unwrap();
        assert_eq!(e, AlgebraElement::one(&f2, 1));

        let a = parse_element("g1 - 1", &f2, 1).unwrap();
        let b = parse_element("g1 + 1", &f2, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.num_terms(), 2);

        let f3 = Field::gf(3).unwrap();
        let c = parse_element("2*g1^-1*g2 + 1", &f3, 2).unwrap();
        assert_eq!(c.num_terms(), 2);
        let w = Word::from_letters([Letter::new(1, true), Letter::new(2, false)]);
        assert_eq!(c.coefficient(&w), Scalar(2));
        assert_eq!(parse_element(&c.to_string(), &f3, 2).unwrap(), c);
    }

    #[test]
    fn exponents_and_cancellation() {
        let f = Field::gf(5).unwrap();
        let a = parse_element("g1^3*g1^-2", &f, 1).unwrap();
        assert_eq!(a, parse_element("g1", &f, 1).unwrap());
        let z = parse_element("g1^0", &f, 1).unwrap();
        assert_eq!(z, AlgebraElement::one(&f, 1));
        assert!(parse_element("g1 - g1", &f, 1).unwrap().is_zero());
        assert!(parse_element("0", &f, 1).unwrap().is_zero());
    }

    #[test]
    fn errors_are_positioned() {
        let f = Field::gf(3).unwrap();
        let e = parse_element("g3", &f, 2).unwrap_err();
        assert_eq!(e.position, 1);
        let e = parse_element("5*g1", &f, 2).unwrap_err();
        assert_eq!(e.position, 0);
        let e = parse_element("g1 +", &f, 2).unwrap_err();
        assert_eq!(e.position, 4);
        let e = parse_element("g1 * 2", &f, 2).unwrap_err();
        assert_eq!(e.position, 3);
        assert!(parse_element("", &f, 2).is_err());
        assert!(parse_element("g", &f, 2).is_err());
        assert!(parse_element("g1^", &f, 2).is_err());
        assert!(parse_element("g1 g2", &f, 2).is_err());
        assert!(parse_element("g1^99999999999999999999999", &f, 2).is_err());
    }
}
