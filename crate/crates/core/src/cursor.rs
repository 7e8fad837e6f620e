//! Byte cursor shared by the small recursive-descent parsers.

use crate::error::ParseError;

pub(crate) struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(text: &'a str) -> Self {
        Cursor {
            text: text.as_bytes(),
            pos: 0,
        }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Next non-space byte, without consuming it.
    pub fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    /// Byte at the cursor, spaces not skipped.
    pub fn peek_raw(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    pub fn bump(&mut self) {
        self.pos += 1;
    }

    pub fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, b: u8) -> Result<(), ParseError> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", b as char)))
        }
    }

    /// A run of ASCII digits directly at the cursor (no leading spaces).
    pub fn digits_raw(&mut self) -> Option<(usize, u64)> {
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(b) = self.peek_raw().filter(u8::is_ascii_digit) {
            value = value.saturating_mul(10).saturating_add((b - b'0') as u64);
            self.pos += 1;
        }
        (self.pos > start).then_some((start, value))
    }

    pub fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub fn error(&mut self, message: impl Into<String>) -> ParseError {
        self.skip_ws();
        let found = match self.text.get(self.pos) {
            Some(&b) => format!(", found `{}`", b as char),
            None => ", found end of input".to_string(),
        };
        ParseError::new(self.pos, format!("{}{found}", message.into()))
    }
}
