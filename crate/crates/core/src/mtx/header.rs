use super::MtxError;

/// What the banner and size line say.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MtxHeader {
    pub symmetric: bool,
    pub weighted: bool,
    pub rows: usize,
    pub cols: usize,
    /// Declared number of entries.
    pub size: usize,
    /// Byte offset where the entries begin.
    pub header_len: usize,
}

impl MtxHeader {
    /// Number of graph vertices.
    pub fn order(&self) -> usize {
        self.rows.max(self.cols)
    }
}

fn lines(data: &[u8], from: usize) -> impl Iterator<Item = (usize, &[u8])> {
    let mut pos = from;
    std::iter::from_fn(move || {
        if pos >= data.len() {
            return None;
        }
        let start = pos;
        let end = memchr(b'\n', &data[start..]).map_or(data.len(), |i| start + i);
        pos = end + 1;
        Some((pos.min(data.len()), &data[start..end]))
    })
}

#[inline]
pub(super) fn memchr(b: u8, s: &[u8]) -> Option<usize> {
    s.iter().position(|&c| c == b)
}

/// Parses the banner, comment lines and size line.
pub fn read_header(data: &[u8]) -> Result<MtxHeader, MtxError> {
    let mut it = lines(data, 0);
    let (_, banner) = it.next().ok_or(MtxError::MalformedBanner)?;
    let banner = std::str::from_utf8(banner).map_err(|_| MtxError::MalformedBanner)?;
    let words: Vec<String> = banner.split_whitespace().map(str::to_ascii_lowercase).collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" {
        return Err(MtxError::MalformedBanner);
    }
    if words[1] != "matrix" || words[2] != "coordinate" {
        return Err(MtxError::UnsupportedFormat {
            found: format!("{} {}", words[1], words[2]),
        });
    }
    let weighted = match words[3].as_str() {
        "pattern" => false,
        "real" | "integer" => true,
        other => return Err(MtxError::UnsupportedField(other.into())),
    };
    let symmetric = match words[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(MtxError::UnsupportedSymmetry(other.into())),
    };
    for (next, line) in it {
        let text = std::str::from_utf8(line).map_err(|_| MtxError::MissingSizeLine)?;
        let text = text.trim();
        if text.is_empty() || text.starts_with('%') {
            continue;
        }
        let nums: Vec<u64> = text
            .split_ascii_whitespace()
            .map(|t| t.parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| MtxError::MissingSizeLine)?;
        let [rows, cols, size] = nums[..] else {
            return Err(MtxError::MissingSizeLine);
        };
        let order = rows.max(cols);
        if order > u32::MAX as u64 {
            return Err(MtxError::TooManyVertices(order));
        }
        return Ok(MtxHeader {
            symmetric,
            weighted,
            rows: rows as usize,
            cols: cols as usize,
            size: usize::try_from(size).map_err(|_| MtxError::MissingSizeLine)?,
            header_len: next,
        });
    }
    Err(MtxError::MissingSizeLine)
}
