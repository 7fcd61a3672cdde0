//! PGM reader and writer for the two 8-bit variants: binary `P5` and ASCII `P2`.
//!
//! Maxval is fixed at 255. `#` comments are accepted between header tokens.
//! The writer is bit-exact: `read_pgm(write_pgm(img, mode))` reproduces the
//! image for either mode, and the binary layout is stable across releases.

use thiserror::Error;

use crate::image::Image;

/// PGM parse errors, each carrying the byte offset where parsing stopped.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PgmError {
    #[error("not a PGM file: expected magic \"P2\" or \"P5\" at byte 0")]
    BadMagic,
    #[error("unexpected end of input at byte {offset} while reading {what}")]
    UnexpectedEof { offset: usize, what: &'static str },
    #[error("malformed {what} at byte {offset}")]
    BadToken { offset: usize, what: &'static str },
    #[error("zero {what} at byte {offset}")]
    ZeroDimension { offset: usize, what: &'static str },
    #[error("unsupported maxval {maxval} at byte {offset}, only 255 is handled")]
    UnsupportedMaxval { maxval: u64, offset: usize },
    #[error("sample value {value} at byte {offset} exceeds maxval 255")]
    SampleOutOfRange { value: u64, offset: usize },
    #[error("pixel data truncated at byte {offset}: expected {expected} samples, found {found}")]
    Truncated {
        offset: usize,
        expected: usize,
        found: usize,
    },
}

fn is_pgm_whitespace(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    /// Skips whitespace and `#` comments (comment runs to end of line).
    fn skip_separators(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if is_pgm_whitespace(b) {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.bytes.len() && !matches!(self.bytes[self.pos], b'\n' | b'\r')
                {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    /// Reads one unsigned decimal token.
    fn next_number(&mut self, what: &'static str) -> Result<(usize, u64), PgmError> {
        self.skip_separators();
        let start = self.pos;
        if start >= self.bytes.len() {
            return Err(PgmError::UnexpectedEof { offset: start, what });
        }
        let mut value: u64 = 0;
        let mut digits = 0usize;
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b.is_ascii_digit() {
                // Saturate instead of overflowing; anything that large fails
                // the range checks downstream anyway.
                value = value.saturating_mul(10).saturating_add(u64::from(b - b'0'));
                digits += 1;
                self.pos += 1;
            } else if is_pgm_whitespace(b) || b == b'#' {
                break;
            } else {
                return Err(PgmError::BadToken { offset: self.pos, what });
            }
        }
        if digits == 0 {
            return Err(PgmError::BadToken { offset: start, what });
        }
        Ok((start, value))
    }
}

/// Parses a PGM file (`P5` binary or `P2` ASCII, maxval 255) into an [`Image`].
pub fn read_pgm(bytes: &[u8]) -> Result<Image, PgmError> {
    if bytes.len() < 2 || bytes[0] != b'P' {
        return Err(PgmError::BadMagic);
    }
    let binary = match bytes[1] {
        b'5' => true,
        b'2' => false,
        _ => return Err(PgmError::BadMagic),
    };

    let mut cur = Cursor::new(bytes);
    cur.pos = 2;

    let (w_off, width) = cur.next_number("width")?;
    if width == 0 {
        return Err(PgmError::ZeroDimension {
            offset: w_off,
            what: "width",
        });
    }
    let (h_off, height) = cur.next_number("height")?;
    if height == 0 {
        return Err(PgmError::ZeroDimension {
            offset: h_off,
            what: "height",
        });
    }
    if width > u64::from(u32::MAX) || height > u64::from(u32::MAX) {
        return Err(PgmError::BadToken {
            offset: w_off,
            what: "dimensions",
        });
    }
    let (m_off, maxval) = cur.next_number("maxval")?;
    if maxval != 255 {
        return Err(PgmError::UnsupportedMaxval {
            maxval,
            offset: m_off,
        });
    }

    let expected = width as usize * height as usize;
    let pixels = if binary {
        // Exactly one whitespace byte separates the header from the payload.
        if cur.pos >= bytes.len() {
            return Err(PgmError::UnexpectedEof {
                offset: cur.pos,
                what: "pixel data",
            });
        }
        if !is_pgm_whitespace(bytes[cur.pos]) {
            return Err(PgmError::BadToken {
                offset: cur.pos,
                what: "header terminator",
            });
        }
        let start = cur.pos + 1;
        let available = bytes.len().saturating_sub(start);
        if available < expected {
            return Err(PgmError::Truncated {
                offset: bytes.len(),
                expected,
                found: available,
            });
        }
        bytes[start..start + expected].to_vec()
    } else {
        let mut pixels = Vec::with_capacity(expected);
        while pixels.len() < expected {
            match cur.next_number("sample") {
                Ok((off, v)) => {
                    if v > 255 {
                        return Err(PgmError::SampleOutOfRange { value: v, offset: off });
                    }
                    pixels.push(v as u8);
                }
                Err(PgmError::UnexpectedEof { offset, .. }) => {
                    return Err(PgmError::Truncated {
                        offset,
                        expected,
                        found: pixels.len(),
                    });
                }
                Err(e) => return Err(e),
            }
        }
        pixels
    };

    Ok(Image::new(width as u32, height as u32, pixels).expect("header dimensions match payload"))
}

/// Serializes an image as PGM, binary `P5` by default or ASCII `P2` when `ascii` is set.
///
/// ASCII output keeps every line at 70 characters or fewer.
pub fn write_pgm(img: &Image, ascii: bool) -> Vec<u8> {
    let header = format!(
        "{}\n{} {}\n255\n",
        if ascii { "P2" } else { "P5" },
        img.width(),
        img.height()
    );
    let mut out = header.into_bytes();
    if !ascii {
        out.extend_from_slice(img.pixels());
        return out;
    }

    let mut line = String::new();
    for &v in img.pixels() {
        let digits = if v >= 100 {
            3
        } else if v >= 10 {
            2
        } else {
            1
        };
        if line.is_empty() {
            line.push_str(&v.to_string());
        } else if line.len() + 1 + digits <= 70 {
            line.push(' ');
            line.push_str(&v.to_string());
        } else {
            line.push('\n');
            out.extend_from_slice(line.as_bytes());
            line.clear();
            line.push_str(&v.to_string());
        }
    }
    if !line.is_empty() {
        line.push('\n');
        out.extend_from_slice(line.as_bytes());
    }
    out
}
