//! Text grammar for words.
//!
//! ```text
//! word  := term*
//! term  := atom ('^' int)*
//! atom  := name | '1' | '(' word ')' | '[' word ',' word ']'
//! ```
//!
//! Juxtaposition is multiplication, `[u,v]` is `u v u^-1 v^-1` and `1` is
//! the empty word. The same cursor drives the presentation and
//! product-element grammars built on top of it.

use crate::error::ParseError;
use crate::word::{Alphabet, Letter, Word};

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_word<A: Alphabet + ?Sized>(text: &str, alphabet: &A) -> Result<Word, ParseError> {
    let mut cur = Cursor::new(text);
    let w = cur.word(alphabet)?;
    cur.skip_ws();
    if !cur.at_end() {
        return Err(cur.error(format!("unexpected `{}`", cur.peek().unwrap())));
    }
    Ok(w)
}

pub(crate) struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            _src: src,
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn location(&self) -> (usize, usize) {
        let mut line = 1;
        let mut col = 1;
        for &c in &self.chars[..self.pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, column) = self.location();
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    /// Consumes `c` (after whitespace) if present.
    pub(crate) fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(match self.peek() {
                Some(found) => self.error(format!("expected `{c}`, found `{found}`")),
                None => self.error(format!("expected `{c}`, found end of input")),
            })
        }
    }

    pub(crate) fn identifier(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => self.pos += 1,
            Some(c) => return Err(self.error(format!("expected a name, found `{c}`"))),
            None => return Err(self.error("expected a name, found end of input")),
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    pub(crate) fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some('-') || self.peek() == Some('+') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.error("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| {
            self.pos = start;
            self.error(format!("integer `{s}` out of range"))
        })
    }

    pub(crate) fn word<A: Alphabet + ?Sized>(&mut self, alphabet: &A) -> Result<Word, ParseError> {
        let mut out = Word::empty();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_alphabetic() || c == '_' || c == '1' || c == '(' || c == '[' => {
                    let t = self.term(alphabet)?;
                    out.mul_assign(&t);
                }
                _ => return Ok(out),
            }
        }
    }

    fn term<A: Alphabet + ?Sized>(&mut self, alphabet: &A) -> Result<Word, ParseError> {
        let mut base = self.atom(alphabet)?;
        while self.peek() == Some('^') {
            self.pos += 1;
            let k = self.integer()?;
            base = base.pow(k);
        }
        Ok(base)
    }

    fn atom<A: Alphabet + ?Sized>(&mut self, alphabet: &A) -> Result<Word, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some('1') => {
                let save = self.pos;
                self.pos += 1;
                if matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric()) {
                    self.pos = save;
                    return Err(self.error("names cannot start with a digit"));
                }
                Ok(Word::empty())
            }
            Some('(') => {
                self.pos += 1;
                let w = self.word(alphabet)?;
                self.expect(')')?;
                Ok(w)
            }
            Some('[') => {
                self.pos += 1;
                let a = self.word(alphabet)?;
                self.expect(',')?;
                let b = self.word(alphabet)?;
                self.expect(']')?;
                Ok(a.commutator(&b))
            }
            _ => {
                let start = self.pos;
                let name = self.identifier()?;
                match alphabet.index_of(&name) {
                    Some(j) if (j as usize) <= alphabet.rank() => Ok(Word::letter(Letter::gen(j))),
                    _ => {
                        self.pos = start;
                        Err(self.error(format!("unknown generator `{name}`")))
                    }
                }
            }
        }
    }
}
