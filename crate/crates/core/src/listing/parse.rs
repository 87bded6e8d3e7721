//! Text grammar for listings:
//!
//! ```text
//! listing := part (SP part)* | ε
//! part    := 'v' INT | 'b' INT '{' INT 'x' INT (':' edge (',' edge)*)? '}'
//! edge    := INT '-' INT
//! ```
//!
//! Whitespace is allowed around the punctuation inside braces. Errors carry
//! the byte offset of the offending token.

use super::{BicolouredGraph, Part, PartListing};
use crate::error::{Error, Result};

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, byte: u8) -> Result<()> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected `{}`", byte as char))
        }
    }

    fn int(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected an integer");
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        digits.parse().map_err(|_| Error::Syntax {
            offset: start,
            message: "integer out of range".into(),
        })
    }

    fn level(&mut self) -> Result<u32> {
        let start = self.pos;
        let level = self.int()?;
        if level == 0 || level > u32::MAX as usize / 2 {
            return Err(Error::Syntax {
                offset: start,
                message: "levels must be positive".into(),
            });
        }
        Ok(level as u32)
    }

    /// `R 'x' S (':' edge (',' edge)*)?`
    fn graph_body(&mut self) -> Result<BicolouredGraph> {
        self.skip_ws();
        let size_at = self.pos;
        let r = self.int()?;
        self.skip_ws();
        self.expect(b'x')?;
        self.skip_ws();
        let s = self.int()?;
        if r > super::MAX_SIDE || s > super::MAX_SIDE {
            return Err(Error::Syntax {
                offset: size_at,
                message: format!("graph sides are limited to {}", super::MAX_SIDE),
            });
        }
        let mut graph = BicolouredGraph::empty(r, s);
        self.skip_ws();
        if self.peek() == Some(b':') {
            self.pos += 1;
            loop {
                self.skip_ws();
                let at = self.pos;
                let down = self.int()?;
                self.skip_ws();
                self.expect(b'-')?;
                self.skip_ws();
                let up = self.int()?;
                if down == 0 || down > r || up == 0 || up > s {
                    return Err(Error::EdgeIndex {
                        offset: at,
                        down,
                        up,
                        r,
                        s,
                    });
                }
                graph.add_edge(down, up);
                self.skip_ws();
                if self.peek() == Some(b',') {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        Ok(graph)
    }

    fn part(&mut self) -> Result<Part> {
        match self.peek() {
            Some(b'v') => {
                self.pos += 1;
                Ok(Part::vertex(self.level()?))
            }
            Some(b'b') => {
                self.pos += 1;
                let level = self.level()?;
                self.expect(b'{')?;
                let graph = self.graph_body()?;
                self.skip_ws();
                self.expect(b'}')?;
                Ok(Part::graph(level, graph))
            }
            _ => self.error("expected a part `v<level>` or `b<level>{...}`"),
        }
    }
}

pub(super) fn parse_listing(text: &str) -> Result<PartListing> {
    let mut c = Cursor::new(text);
    let mut parts = Vec::new();
    c.skip_ws();
    while c.peek().is_some() {
        parts.push(c.part()?);
        let before = c.pos;
        c.skip_ws();
        if c.peek().is_some() && c.pos == before {
            return c.error("parts must be separated by whitespace");
        }
    }
    Ok(PartListing::new(parts))
}

pub(super) fn parse_graph_body(text: &str) -> Result<BicolouredGraph> {
    let mut c = Cursor::new(text);
    let g = c.graph_body()?;
    c.skip_ws();
    if c.peek().is_some() {
        return c.error("unexpected trailing input");
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_word() {
        let l = parse_listing("v2 v1 v3 v3 v1 b1{2x2:1-1,2-1,2-2}").unwrap();
        assert_eq!(l.len(), 6);
        assert_eq!(l.vertex_count(), 9);
        assert_eq!(l.to_string(), "v2 v1 v3 v3 v1 b1{2x2:1-1,2-1,2-2}");
    }

    #[test]
    fn empty_and_whitespace() {
        assert!(parse_listing("").unwrap().is_empty());
        assert!(parse_listing("   \n").unwrap().is_empty());
        let l = parse_listing(" b1{ 3x2: 1-1, 1-2 } v2 ").unwrap();
        assert_eq!(l.to_string(), "b1{3x2:1-1,1-2} v2");
        assert_eq!(parse_listing("b2{2x2}").unwrap().to_string(), "b2{2x2}");
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(
            parse_listing("b1{2x2:3-1}"),
            Err(Error::EdgeIndex {
                offset: 7,
                down: 3,
                up: 1,
                r: 2,
                s: 2
            })
        );
        assert!(matches!(
            parse_listing("v1 x2"),
            Err(Error::Syntax { offset: 3, .. })
        ));
        assert!(matches!(
            parse_listing("v0"),
            Err(Error::Syntax { offset: 1, .. })
        ));
        assert!(matches!(
            parse_listing("v1v2"),
            Err(Error::Syntax { offset: 2, .. })
        ));
        assert!(matches!(
            parse_listing("b1{2x2:1-1"),
            Err(Error::Syntax { offset: 10, .. })
        ));
        assert!(parse_graph_body("2x2:1-1 junk").is_err());
    }
}
