//! Text grammar for concrete homogeneous polynomials.
//!
//! ```text
//! poly   := ws [sign] term (ws sign ws term)* ws
//! term   := [coef] ['*'] factor ('*' factor)*
//! factor := ('x'|'y'|'z') ['^' digits]
//! coef   := digits | digits '/' digits      (the latter only over `rat`)
//! ```
//!
//! Whitespace is ignored between tokens. Signs live between terms, never
//! inside coefficients. Repeated monomials accumulate. Every term must have
//! the declared total degree; residue coefficients are reduced into
//! `0..modulus`. The printed form of a [`TriPoly`] over a concrete ring is
//! always re-parseable to an equal polynomial.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::ring::{Ring, RingValue};
use crate::sympoly::{Monomial3, TriPoly};

/// Parse `text` as a homogeneous degree-`degree` polynomial over `ring`.
pub fn parse_tripoly(text: &str, degree: usize, ring: &Ring) -> Result<TriPoly<RingValue>> {
    Parser {
        bytes: text.as_bytes(),
        pos: 0,
        ring,
    }
    .poly(degree)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    ring: &'a Ring,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected digits"));
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos]).unwrap())
    }

    fn poly(mut self, degree: usize) -> Result<TriPoly<RingValue>> {
        let mut out = TriPoly::zero(degree);
        self.skip_ws();
        if self.peek().is_none() {
            return Err(self.err("empty polynomial"));
        }
        let mut negative = match self.peek() {
            Some(b'-') => {
                self.bump();
                true
            }
            Some(b'+') => {
                self.bump();
                false
            }
            _ => false,
        };
        loop {
            self.skip_ws();
            let (coef, mono) = self.term(degree)?;
            let coef = if negative { coef.negate() } else { coef };
            out.add_term(mono, coef)?;
            self.skip_ws();
            match self.bump() {
                None => return Ok(out),
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                Some(other) => {
                    self.pos -= 1;
                    return Err(self.err(format!("expected `+`, `-`, or end, found `{}`", other as char)));
                }
            }
        }
    }

    fn term(&mut self, degree: usize) -> Result<(RingValue, Monomial3)> {
        let start = self.pos;
        let coef = match self.peek() {
            Some(b) if b.is_ascii_digit() => {
                let value = self.coefficient()?;
                self.skip_ws();
                if self.peek() == Some(b'*') {
                    self.bump();
                    self.skip_ws();
                }
                value
            }
            _ => self.ring.one(),
        };
        let mut exps = [0usize; 3];
        self.factor(&mut exps)?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.bump();
                self.skip_ws();
                self.factor(&mut exps)?;
            } else {
                break;
            }
        }
        let mono = Monomial3::new(exps[0], exps[1], exps[2]);
        if mono.degree() != degree {
            let term = std::str::from_utf8(&self.bytes[start..self.pos])
                .unwrap()
                .trim()
                .to_string();
            return Err(Error::NonHomogeneous {
                term,
                got: mono.degree(),
                expected: degree,
            });
        }
        Ok((coef, mono))
    }

    fn coefficient(&mut self) -> Result<RingValue> {
        let digits = self.digits()?;
        let numer: BigInt = digits.parse().unwrap();
        if self.peek() == Some(b'/') {
            if *self.ring != Ring::Rationals {
                return Err(self.err(format!(
                    "`/` is only valid in rational coefficients, not over {}",
                    self.ring
                )));
            }
            self.bump();
            let denom_digits = self.digits()?;
            let denom: BigInt = denom_digits.parse().unwrap();
            if denom == BigInt::from(0) {
                return Err(self.err("zero denominator"));
            }
            return Ok(RingValue::Rat(num_rational::BigRational::new(numer, denom)));
        }
        Ok(self.ring.from_integer(&numer))
    }

    fn factor(&mut self, exps: &mut [usize; 3]) -> Result<()> {
        let slot = match self.peek() {
            Some(b'x') => 0,
            Some(b'y') => 1,
            Some(b'z') => 2,
            _ => return Err(self.err("expected variable x, y, or z")),
        };
        self.bump();
        self.skip_ws();
        let exp = if self.peek() == Some(b'^') {
            self.bump();
            self.skip_ws();
            let digits = self.digits()?;
            digits
                .parse::<usize>()
                .map_err(|_| self.err(format!("exponent `{digits}` out of range")))?
        } else {
            1
        };
        exps[slot] += exp;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int() -> Ring {
        Ring::Integers
    }

    fn mono(i: usize, j: usize, k: usize) -> Monomial3 {
        Monomial3::new(i, j, k)
    }

    #[test]
    fn fermat_quintic() {
        let p = parse_tripoly("x^5 + y^5 + z^5", 5, &int()).unwrap();
        assert_eq!(p.num_terms(), 3);
        assert_eq!(
            p.coefficient(&mono(0, 5, 0)).unwrap(),
            Some(&int().from_i64(1))
        );
        assert_eq!(p.to_string(), "x^5 + y^5 + z^5");
    }

    #[test]
    fn coefficients_signs_and_accumulation() {
        let p = parse_tripoly("2*x^2*y*z^2 - x*y^4 + x*y^4 - 3*y^5", 5, &int()).unwrap();
        assert_eq!(p.coefficient(&mono(1, 4, 0)).unwrap(), None);
        assert_eq!(
            p.coefficient(&mono(2, 1, 2)).unwrap(),
            Some(&int().from_i64(2))
        );
        assert_eq!(
            p.coefficient(&mono(0, 5, 0)).unwrap(),
            Some(&int().from_i64(-3))
        );
        // implicit `*` after the coefficient and repeated variables
        let q = parse_tripoly("4x*x*y^3", 5, &int()).unwrap();
        assert_eq!(
            q.coefficient(&mono(2, 3, 0)).unwrap(),
            Some(&int().from_i64(4))
        );
    }

    #[test]
    fn whitespace_and_leading_sign() {
        let p = parse_tripoly("  - x^5\t+ 2 * y ^ 5 ", 5, &int()).unwrap();
        assert_eq!(
            p.coefficient(&mono(5, 0, 0)).unwrap(),
            Some(&int().from_i64(-1))
        );
        assert_eq!(
            p.coefficient(&mono(0, 5, 0)).unwrap(),
            Some(&int().from_i64(2))
        );
    }

    #[test]
    fn rational_and_modular_coefficients() {
        let p = parse_tripoly("1/2*x^5 - 3/4*y^5", 5, &Ring::Rationals).unwrap();
        assert_eq!(p.to_string(), "1/2*x^5 - 3/4*y^5");
        let z6 = Ring::modulus(6u32).unwrap();
        let q = parse_tripoly("7*x^5 - y^5", 5, &z6).unwrap();
        // 7 = 1 and -1 = 5 in Z/6
        assert_eq!(q.to_string(), "x^5 + 5*y^5");
        assert!(parse_tripoly("1/2*x^5", 5, &z6).is_err());
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_tripoly("x^5 + ?", 5, &int()) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(parse_tripoly("", 5, &int()).is_err());
        assert!(parse_tripoly("x^5 +", 5, &int()).is_err());
        assert!(parse_tripoly("x y^4", 5, &int()).is_err());
        assert!(parse_tripoly("5", 5, &int()).is_err());
    }

    #[test]
    fn non_homogeneous_terms_are_named() {
        match parse_tripoly("x^5 + x^4", 5, &int()) {
            Err(Error::NonHomogeneous { term, got, expected }) => {
                assert_eq!(term, "x^4");
                assert_eq!(got, 4);
                assert_eq!(expected, 5);
            }
            other => panic!("expected NonHomogeneous, got {other:?}"),
        }
    }

    #[test]
    fn cancellation_to_zero_is_fine() {
        let p = parse_tripoly("x^5 - x^5", 5, &int()).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.degree(), 5);
    }

    fn arb_ring() -> impl Strategy<Value = Ring> {
        prop_oneof![
            Just(Ring::Integers),
            Just(Ring::Rationals),
            (2u32..30).prop_map(|n| Ring::modulus(n).unwrap()),
        ]
    }

    proptest! {
        // print -> parse is the identity on every constructible polynomial;
        // parse -> print is the identity on canonical (printed) text.
        #[test]
        fn print_parse_round_trip(
            ring in arb_ring(),
            coefs in proptest::collection::vec(-20i64..=20, 1..8),
            seed in 0u64..1000,
        ) {
            let degree = 5 + (seed as usize % 4);
            let monos = Monomial3::all_of_degree(degree);
            let mut poly = TriPoly::zero(degree);
            for (idx, c) in coefs.iter().enumerate() {
                let mono = monos[(seed as usize + idx * 7) % monos.len()];
                poly.add_term(mono, ring.from_i64(*c)).unwrap();
            }
            let printed = poly.to_string();
            if poly.is_zero() {
                prop_assert_eq!(printed, "0");
            } else {
                let reparsed = parse_tripoly(&printed, degree, &ring).unwrap();
                prop_assert_eq!(&reparsed, &poly);
                prop_assert_eq!(reparsed.to_string(), printed);
            }
        }
    }
}
