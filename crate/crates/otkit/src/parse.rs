//! Text grammar and canonical printing.
//!
//! ```text
//! term  := "0" | "K" | term "+" term | "w^(" term ")" | "phi(" term "," term ")"
//!        | "Om(" term ")" | "psi(" term ";" [evec ";"] term ")"
//! evec  := eterm { "," eterm }
//! eterm := "0" | "<" term ",K," term ">" | mono { "+" mono }
//! mono  := "L^(" eterm ")*<" term "," term "," term ">"
//! ```
//!
//! Whitespace is ignored.  A collapsing term with a zero vector may omit it.

use crate::term::{Config, ETerm, Kind, MVector, Mono, Term, Triple};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("vector at {pos} has {found} entries, expected {expected}")]
    Arity { pos: usize, found: usize, expected: usize },
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    cfg: Config,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, cfg: Config) -> Parser<'a> {
        Parser { src: text.as_bytes(), pos: 0, cfg }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos, msg: msg.into() })
    }

    /// Consumes `tok`, allowing whitespace between its characters.
    fn eat(&mut self, tok: &str) -> bool {
        let save = self.pos;
        for &c in tok.as_bytes() {
            if self.peek() != Some(c) {
                self.pos = save;
                return false;
            }
            self.pos += 1;
        }
        true
    }

    fn expect(&mut self, tok: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected `{}`", tok))
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => self.err("trailing input"),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut parts = vec![self.atom()?];
        while self.eat("+") {
            parts.push(self.atom()?);
        }
        Ok(Term::sum_raw(parts))
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        if self.eat("0") {
            Ok(Term::zero())
        } else if self.eat("K") {
            Ok(Term::kappa())
        } else if self.eat("w^(") {
            let b = self.term()?;
            self.expect(")")?;
            Ok(Term::omega_exp(b))
        } else if self.eat("phi(") {
            let a = self.term()?;
            self.expect(",")?;
            let b = self.term()?;
            self.expect(")")?;
            Ok(Term::phi(a, b))
        } else if self.eat("Om(") {
            let b = self.term()?;
            self.expect(")")?;
            Ok(Term::omega_idx(b))
        } else if self.eat("psi(") {
            let anchor = self.term()?;
            self.expect(";")?;
            let vpos = self.pos;
            let vec = if self.has_vector() {
                let v = self.evec()?;
                self.expect(";")?;
                if v.len() != self.cfg.width() {
                    return Err(ParseError::Arity { pos: vpos, found: v.len(), expected: self.cfg.width() });
                }
                v
            } else {
                self.cfg.zero_vec()
            };
            let arg = self.term()?;
            self.expect(")")?;
            Ok(Term::psi(anchor, vec, arg))
        } else {
            self.err("expected a term")
        }
    }

    /// Looks ahead for a second `;` before the closing parenthesis.
    fn has_vector(&self) -> bool {
        let mut depth = 0i32;
        for &c in &self.src[self.pos..] {
            match c {
                b'(' | b'<' => depth += 1,
                b')' | b'>' if depth == 0 => return false,
                b')' | b'>' => depth -= 1,
                b';' if depth == 0 => return true,
                _ => {}
            }
        }
        false
    }

    fn evec(&mut self) -> Result<MVector, ParseError> {
        let mut v = vec![self.eterm()?];
        while self.eat(",") {
            v.push(self.eterm()?);
        }
        Ok(v)
    }

    fn eterm(&mut self) -> Result<ETerm, ParseError> {
        if self.eat("0") {
            return Ok(ETerm::Zero);
        }
        if self.eat("<") {
            let b = self.term()?;
            self.expect(",")?;
            self.expect("K")?;
            self.expect(",")?;
            let a = self.term()?;
            self.expect(">")?;
            return Ok(ETerm::ktriple(b, a));
        }
        let mut monos = vec![self.mono()?];
        while self.eat("+") {
            monos.push(self.mono()?);
        }
        Ok(ETerm::lsum(monos))
    }

    fn mono(&mut self) -> Result<Mono, ParseError> {
        self.expect("L^(")?;
        let exp = self.eterm()?;
        self.expect(")")?;
        self.expect("*")?;
        self.expect("<")?;
        let b = self.term()?;
        self.expect(",")?;
        let p = self.term()?;
        self.expect(",")?;
        let a = self.term()?;
        self.expect(">")?;
        Ok(Mono { exp, coef: Triple::new(b, p, a) })
    }
}

pub fn parse_term(text: &str, cfg: Config) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, cfg);
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_eterm(text: &str, cfg: Config) -> Result<ETerm, ParseError> {
    let mut p = Parser::new(text, cfg);
    let t = p.eterm()?;
    p.finish()?;
    Ok(t)
}

/// Comma separated vector of exactly `N - 2` entries.
pub fn parse_vector(text: &str, cfg: Config) -> Result<MVector, ParseError> {
    let mut p = Parser::new(text, cfg);
    let v = p.evec()?;
    p.finish()?;
    if v.len() != cfg.width() {
        return Err(ParseError::Arity { pos: 0, found: v.len(), expected: cfg.width() });
    }
    Ok(v)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            Kind::Zero => write!(f, "0"),
            Kind::Kappa => write!(f, "K"),
            Kind::Sum(ps) => {
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "{}", p)?;
                }
                Ok(())
            }
            Kind::Phi(a, b) => write!(f, "phi({},{})", a, b),
            Kind::OmegaExp(b) => write!(f, "w^({})", b),
            Kind::OmegaIdx(b) => write!(f, "Om({})", b),
            Kind::Psi(p, v, a) => {
                if v.iter().all(|e| e.is_zero()) {
                    write!(f, "psi({}; {})", p, a)
                } else {
                    write!(f, "psi({}; ", p)?;
                    for (i, e) in v.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{}", e)?;
                    }
                    write!(f, "; {})", a)
                }
            }
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{},{}>", self.coeff, self.anchor, self.stage)
    }
}

impl fmt::Display for ETerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ETerm::Zero => write!(f, "0"),
            ETerm::KTriple(t) => write!(f, "<{},K,{}>", t.coeff, t.stage),
            ETerm::LSum(ms) => {
                for (i, m) in ms.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "L^({})*{}", m.exp, m.coef)?;
                }
                Ok(())
            }
        }
    }
}

/// Vector entries joined by `", "`.
pub fn show_vector(v: &[ETerm]) -> String {
    v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3() -> Config {
        Config::new(3)
    }

    #[test]
    fn parses_atoms() {
        assert_eq!(parse_term("0", c3()).unwrap(), Term::zero());
        assert_eq!(parse_term(" K ", c3()).unwrap(), Term::kappa());
        assert_eq!(parse_term("phi(0,0)", c3()).unwrap(), Term::one());
        assert_eq!(parse_term("phi (0 , 0)+phi(0,0)", c3()).unwrap(), Term::nat(2));
    }

    #[test]
    fn parses_psi_with_zero_vector() {
        let t = parse_term("psi(Om(phi(0,0)); 0; 0)", c3()).unwrap();
        assert_eq!(t, Term::psi(Term::big_omega(), vec![ETerm::Zero], Term::zero()));
        assert_eq!(t.to_string(), "psi(Om(phi(0,0)); 0)");
        assert_eq!(parse_term(&t.to_string(), c3()).unwrap(), t);
    }

    #[test]
    fn parses_k_collapse() {
        let t = parse_term("psi(K; <phi(0,0),K,phi(0,0)>; phi(0,0))", c3()).unwrap();
        let expect = Term::psi(Term::kappa(), vec![ETerm::one()], Term::one());
        assert_eq!(t, expect);
        assert_eq!(parse_term(&t.to_string(), c3()).unwrap(), t);
    }

    #[test]
    fn arity_is_checked() {
        let e = parse_term("psi(K; 0, 0; 0)", c3()).unwrap_err();
        assert!(matches!(e, ParseError::Arity { found: 2, expected: 1, .. }));
        assert!(parse_term("psi(K; 0, 0; 0)", Config::new(4)).is_ok());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_term("phi(0,", c3()).unwrap_err() {
            ParseError::Syntax { pos, .. } => assert_eq!(pos, 6),
            e => panic!("unexpected {e}"),
        }
        assert!(parse_term("0 0", c3()).is_err());
        assert!(parse_term("", c3()).is_err());
    }

    #[test]
    fn monomials_round_trip() {
        let s = "L^(<phi(0,0),K,phi(0,0)>)*<phi(0,0),K,K>+L^(0)*<K,K,K>";
        let e = parse_eterm(s, c3()).unwrap();
        assert_eq!(e.width(), 2);
        assert_eq!(e.to_string(), s);
    }
}
