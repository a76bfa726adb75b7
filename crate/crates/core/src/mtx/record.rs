use std::ops::Range;

use super::header::memchr;

/// One parsed entry, with 1-based ids as written in the file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Record {
    pub row: u64,
    pub col: u64,
    pub weight: f32,
}

/// Why a line failed to parse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordError {
    Invalid,
    Trailing,
}

/// Byte range of block `i` of the data section starting at `begin`.
///
/// Nominal blocks are `beta` bytes long. Each line belongs to the block its
/// first byte falls in, so both ends are moved forward to the next line
/// start. The range is empty when no line starts inside the nominal block.
pub fn get_block(data: &[u8], begin: usize, i: usize, beta: usize) -> Range<usize> {
    let len = data.len();
    let align = |p: usize| -> usize {
        if p <= begin {
            return begin.min(len);
        }
        if p >= len {
            return len;
        }
        if data[p - 1] == b'\n' {
            p
        } else {
            memchr(b'\n', &data[p..]).map_or(len, |j| p + j + 1)
        }
    };
    let start = align(begin.saturating_add(i.saturating_mul(beta)));
    let end = align(begin.saturating_add((i + 1).saturating_mul(beta)));
    start..end.max(start)
}

#[inline]
fn is_space(c: u8) -> bool {
    c == b' ' || c == b'\t'
}

struct Cursor<'a> {
    s: &'a [u8],
    i: usize,
}

impl<'a> Cursor<'a> {
    fn skip_space(&mut self) {
        while self.i < self.s.len() && is_space(self.s[self.i]) {
            self.i += 1;
        }
    }

    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_space();
        let start = self.i;
        while self.i < self.s.len() && !is_space(self.s[self.i]) {
            self.i += 1;
        }
        (self.i > start).then(|| &self.s[start..self.i])
    }
}

fn parse_id(tok: &[u8]) -> Option<u64> {
    if tok.is_empty() {
        return None;
    }
    let mut x: u64 = 0;
    for &c in tok {
        if !c.is_ascii_digit() {
            return None;
        }
        x = x.checked_mul(10)?.checked_add((c - b'0') as u64)?;
    }
    Some(x)
}

/// Accepts `[+-]? (d+ (. d*)? | . d+) ([eE] [+-]? d+)?`.
fn is_decimal(tok: &[u8]) -> bool {
    let mut i = 0;
    let digits = |i: &mut usize| {
        let s = *i;
        while *i < tok.len() && tok[*i].is_ascii_digit() {
            *i += 1;
        }
        *i - s
    };
    if i < tok.len() && (tok[i] == b'+' || tok[i] == b'-') {
        i += 1;
    }
    let mut mantissa = digits(&mut i);
    if i < tok.len() && tok[i] == b'.' {
        i += 1;
        mantissa += digits(&mut i);
    }
    if mantissa == 0 {
        return false;
    }
    if i < tok.len() && (tok[i] == b'e' || tok[i] == b'E') {
        i += 1;
        if i < tok.len() && (tok[i] == b'+' || tok[i] == b'-') {
            i += 1;
        }
        if digits(&mut i) == 0 {
            return false;
        }
    }
    i == tok.len()
}

fn parse_weight(tok: &[u8]) -> Option<f32> {
    if !is_decimal(tok) {
        return None;
    }
    std::str::from_utf8(tok).ok()?.parse().ok()
}

/// Parses one line (without its newline). Blank and `%` comment lines give
/// `Ok(None)`. Unweighted records get weight 1.
pub fn parse_record(line: &[u8], weighted: bool) -> Result<Option<Record>, RecordError> {
    let line = line.strip_suffix(b"\r").unwrap_or(line);
    let mut c = Cursor { s: line, i: 0 };
    c.skip_space();
    if c.i == line.len() || line[c.i] == b'%' {
        return Ok(None);
    }
    let row = c.token().and_then(parse_id).ok_or(RecordError::Invalid)?;
    let col = c.token().and_then(parse_id).ok_or(RecordError::Invalid)?;
    let weight = if weighted {
        c.token().and_then(parse_weight).ok_or(RecordError::Invalid)?
    } else {
        1.0
    };
    if c.token().is_some() {
        return Err(RecordError::Trailing);
    }
    Ok(Some(Record { row, col, weight }))
}
