//! Short names for standard varieties.
//!
//! ```text
//! spec := "projective:" N | "hirzebruch:" A | "point"
//!       | "product(" spec "," spec ")" | "blowup(" spec ";" index ("," index)* ")"
//! ```
//!
//! Blowup indices refer to rays of the inner variety; the new ray is appended last.

use crate::error::{Result, ToricError};
use crate::variety::ToricVariety;

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(ToricError::InvalidArgument(format!("builtin spec, column {}: {msg}", self.pos + 1)))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(&format!("expected '{}'", c as char))
        }
    }

    fn word(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).to_lowercase()
    }

    fn number(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.s.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        match std::str::from_utf8(&self.s[start..self.pos]).ok().and_then(|t| t.parse().ok()) {
            Some(v) => Ok(v),
            None => {
                self.pos = start;
                self.err("expected an integer")
            }
        }
    }

    fn spec(&mut self) -> Result<ToricVariety> {
        let start = self.pos;
        match self.word().as_str() {
            "projective" | "p" => {
                self.eat(b':')?;
                let n = self.number()?;
                if n < 1 {
                    return self.err("dimension must be positive");
                }
                ToricVariety::projective_space(n as usize)
            }
            "hirzebruch" | "f" => {
                self.eat(b':')?;
                let a = self.number()?;
                if a < 0 {
                    return self.err("parameter must be nonnegative");
                }
                ToricVariety::hirzebruch(a)
            }
            "point" => Ok(ToricVariety::point()),
            "product" => {
                self.eat(b'(')?;
                let a = self.spec()?;
                self.eat(b',')?;
                let b = self.spec()?;
                self.eat(b')')?;
                a.product(&b)
            }
            "blowup" => {
                self.eat(b'(')?;
                let x = self.spec()?;
                self.eat(b';')?;
                let mut idx = vec![self.number()?];
                loop {
                    self.skip_ws();
                    if self.s.get(self.pos) == Some(&b',') {
                        self.pos += 1;
                        idx.push(self.number()?);
                    } else {
                        break;
                    }
                }
                self.eat(b')')?;
                if idx.iter().any(|&i| i < 0) {
                    return self.err("ray indices must be nonnegative");
                }
                x.blowup(&idx.iter().map(|&i| i as usize).collect::<Vec<_>>())
            }
            _ => {
                self.pos = start;
                self.err("expected projective, hirzebruch, point, product or blowup")
            }
        }
    }
}

/// Parses a builtin spec such as `blowup(product(hirzebruch:1,projective:1);1,5)`.
pub fn parse_builtin(spec: &str) -> Result<ToricVariety> {
    let mut p = Parser { s: spec.as_bytes(), pos: 0 };
    let x = p.spec()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return p.err("trailing input");
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar() {
        assert_eq!(parse_builtin("projective:2").unwrap(), ToricVariety::projective_space(2).unwrap());
        assert_eq!(parse_builtin(" hirzebruch : 1 ").unwrap(), ToricVariety::hirzebruch(1).unwrap());
        let x = parse_builtin("blowup(product(hirzebruch:1,projective:1);1,5)").unwrap();
        assert_eq!((x.dim(), x.num_rays()), (3, 7));
        assert!(x.is_smooth() && x.is_complete());
        assert!(parse_builtin("product(projective:1)").is_err());
        assert!(parse_builtin("projective:0").is_err());
        assert!(parse_builtin("torus").is_err());
        assert!(parse_builtin("projective:1 x").is_err());
    }
}
