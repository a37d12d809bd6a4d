//! The genus grammar accepted by `--spec`.
//!
//! ```text
//! genus := "zero" | "R:" uint | "BK:" uint | "poly:" num ("," num)* | "scale:" num ":" genus
//! num   := ["-"] digits ["/" digits]
//! ```

use std::fmt;

use num_traits::Zero;
use torsion_core::genera::{bk_genus, r_genus};
use torsion_core::{Error, Genus, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum GenusSpec {
    Zero,
    R(usize),
    Bk(usize),
    Poly(Vec<Rational>),
    Scale(Rational, Box<GenusSpec>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid genus at position {}: {}", self.pos, self.msg)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<&'a str, ParseError> {
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return self.err("expected digits");
        }
        let d = &self.rest()[..len];
        self.pos += len;
        Ok(d)
    }

    fn uint(&mut self) -> Result<usize, ParseError> {
        let start = self.pos;
        let d = self.digits()?;
        d.parse().map_err(|_| ParseError {
            pos: start,
            msg: "order too large".into(),
        })
    }

    fn num(&mut self) -> Result<Rational, ParseError> {
        let neg = self.eat("-");
        let num: Rational = self.digits()?.parse().expect("digits parse");
        let value = if self.eat("/") {
            let at = self.pos;
            let den: Rational = self.digits()?.parse().expect("digits parse");
            if den.is_zero() {
                return Err(ParseError {
                    pos: at,
                    msg: "zero denominator".into(),
                });
            }
            num / den
        } else {
            num
        };
        Ok(if neg { -value } else { value })
    }

    fn spec(&mut self) -> Result<GenusSpec, ParseError> {
        if self.eat("zero") {
            Ok(GenusSpec::Zero)
        } else if self.eat("R:") {
            Ok(GenusSpec::R(self.uint()?))
        } else if self.eat("BK:") {
            Ok(GenusSpec::Bk(self.uint()?))
        } else if self.eat("poly:") {
            let mut coeffs = vec![self.num()?];
            while self.eat(",") {
                coeffs.push(self.num()?);
            }
            Ok(GenusSpec::Poly(coeffs))
        } else if self.eat("scale:") {
            let c = self.num()?;
            if !self.eat(":") {
                return self.err("expected `:` after the scale factor");
            }
            Ok(GenusSpec::Scale(c, Box::new(self.spec()?)))
        } else {
            self.err("expected one of zero, R:, BK:, poly:, scale:")
        }
    }
}

impl std::str::FromStr for GenusSpec {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut p = Parser { src: s, pos: 0 };
        let spec = p.spec()?;
        if !p.rest().is_empty() {
            return p.err("unexpected trailing input");
        }
        Ok(spec)
    }
}

impl fmt::Display for GenusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenusSpec::Zero => f.write_str("zero"),
            GenusSpec::R(o) => write!(f, "R:{}", o),
            GenusSpec::Bk(o) => write!(f, "BK:{}", o),
            GenusSpec::Poly(c) => {
                f.write_str("poly:")?;
                for (i, q) in c.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", q)?;
                }
                Ok(())
            }
            GenusSpec::Scale(c, inner) => write!(f, "scale:{}:{}", c, inner),
        }
    }
}

impl GenusSpec {
    /// Truncation order of the named series; `None` for polynomials,
    /// which extend by zeros.
    pub fn native_order(&self) -> Option<usize> {
        match self {
            GenusSpec::Zero | GenusSpec::Poly(_) => None,
            GenusSpec::R(o) | GenusSpec::Bk(o) => Some(*o),
            GenusSpec::Scale(_, inner) => inner.native_order(),
        }
    }

    /// The genus at order `order`. Polynomials are padded with zeros; a
    /// truncated series cannot be extended.
    pub fn to_genus(&self, order: usize) -> Result<Genus, Error> {
        match self {
            GenusSpec::Zero => Ok(Genus::zero(order)),
            GenusSpec::R(o) | GenusSpec::Bk(o) => {
                if order > *o {
                    return Err(Error::OrderTooLow {
                        have: *o,
                        need: order,
                    });
                }
                let g = if matches!(self, GenusSpec::R(_)) {
                    r_genus(*o)
                } else {
                    bk_genus(*o)
                };
                Ok(g.with_order(order))
            }
            GenusSpec::Poly(c) => {
                let mut c = c.clone();
                if c.len() > order + 1 {
                    return Err(Error::OutOfRange(format!(
                        "polynomial of degree {} truncated to order {}",
                        c.len() - 1,
                        order
                    )));
                }
                c.resize(order + 1, Rational::zero());
                Genus::exact(c)
            }
            GenusSpec::Scale(c, inner) => Ok(inner.to_genus(order)?.scale_rational(c)),
        }
    }

    /// Order used when the caller does not ask for one.
    pub fn default_order(&self) -> usize {
        match self {
            GenusSpec::Poly(c) => c.len() - 1,
            GenusSpec::Scale(_, inner) => inner.default_order(),
            other => other.native_order().unwrap_or(0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use torsion_core::scalar::{integer, rational};

    #[test]
    fn parses_grammar() {
        assert_eq!("zero".parse::<GenusSpec>().unwrap(), GenusSpec::Zero);
        assert_eq!("R:12".parse::<GenusSpec>().unwrap(), GenusSpec::R(12));
        assert_eq!("BK:7".parse::<GenusSpec>().unwrap(), GenusSpec::Bk(7));
        assert_eq!(
            "poly:0,-1/2,3".parse::<GenusSpec>().unwrap(),
            GenusSpec::Poly(vec![integer(0), rational(-1, 2), integer(3)])
        );
        assert_eq!(
            "scale:1/2:poly:0,0,1".parse::<GenusSpec>().unwrap(),
            GenusSpec::Scale(
                rational(1, 2),
                Box::new(GenusSpec::Poly(vec![integer(0), integer(0), integer(1)]))
            )
        );
        let nested = "scale:2:scale:-1/3:BK:5";
        assert_eq!(nested.parse::<GenusSpec>().unwrap().to_string(), nested);
    }

    #[test]
    fn errors_carry_positions() {
        let cases = [
            ("", 0),
            ("zer", 0),
            ("R:", 2),
            ("R:x", 2),
            ("poly:1,", 7),
            ("poly:1/0", 7),
            ("scale:1/2", 9),
            ("scale:1/2:nope", 10),
            ("zero junk", 4),
            ("BK:7,", 4),
        ];
        for (src, pos) in cases {
            let e = src.parse::<GenusSpec>().unwrap_err();
            assert_eq!(e.pos, pos, "{:?}: {}", src, e);
        }
    }

    #[test]
    fn orders() {
        let p: GenusSpec = "poly:0,1".parse().unwrap();
        assert_eq!(p.to_genus(3).unwrap().order(), 3);
        assert!(p.to_genus(0).is_err());
        let bk: GenusSpec = "BK:3".parse().unwrap();
        assert!(matches!(bk.to_genus(5), Err(Error::OrderTooLow { .. })));
        assert_eq!(bk.to_genus(2).unwrap().order(), 2);
        assert_eq!(
            "scale:2:R:9".parse::<GenusSpec>().unwrap().default_order(),
            9
        );
    }
}
