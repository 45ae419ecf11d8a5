//! One bit per domino.
//!
//! Scan the cells in row-major order. At the first cell not yet covered,
//! its domino must go right (`0`) or down (`1`), since everything before it
//! is covered. A rectangle with `m * n` cells therefore encodes in exactly
//! `m * n / 2` bits.
//!
//! Serialized form: two big-endian `u16` (rows, cols), then the bits packed
//! most-significant-bit first, the final partial byte padded with zeros.

use crate::error::{DimerError, Result};
use crate::grid::GridSpec;
use crate::oracle::Matching;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TilingCode {
    pub rows: usize,
    pub cols: usize,
    pub bits: Vec<bool>,
}

impl TilingCode {
    pub fn expected_len(&self) -> usize {
        self.rows * self.cols / 2
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 + self.bits.len().div_ceil(8));
        out.extend_from_slice(&(self.rows as u16).to_be_bytes());
        out.extend_from_slice(&(self.cols as u16).to_be_bytes());
        for chunk in self.bits.chunks(8) {
            let mut byte = 0u8;
            for (k, &bit) in chunk.iter().enumerate() {
                if bit {
                    byte |= 0x80 >> k;
                }
            }
            out.push(byte);
        }
        out
    }

    /// Parses the serialized form. The payload must be exactly
    /// `ceil(rows * cols / 2 / 8)` bytes with zero padding.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 4 {
            return Err(DimerError::InvalidCode {
                bit_index: 0,
                reason: "missing header",
            });
        }
        let rows = u16::from_be_bytes([bytes[0], bytes[1]]) as usize;
        let cols = u16::from_be_bytes([bytes[2], bytes[3]]) as usize;
        let nbits = rows * cols / 2;
        let payload = &bytes[4..];
        if payload.len() != nbits.div_ceil(8) {
            return Err(DimerError::InvalidCode {
                bit_index: nbits.min(payload.len() * 8),
                reason: "payload length does not match the header",
            });
        }
        let bits: Vec<bool> = (0..payload.len() * 8)
            .map(|k| payload[k / 8] & (0x80 >> (k % 8)) != 0)
            .collect();
        if let Some(k) = bits[nbits..].iter().position(|&b| b) {
            return Err(DimerError::InvalidCode {
                bit_index: nbits + k,
                reason: "nonzero padding",
            });
        }
        Ok(TilingCode {
            rows,
            cols,
            bits: bits[..nbits].to_vec(),
        })
    }

    pub fn to_bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn from_bit_string(rows: usize, cols: usize, s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .enumerate()
            .map(|(k, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(DimerError::InvalidCode {
                    bit_index: k,
                    reason: "not a binary digit",
                }),
            })
            .collect::<Result<Vec<bool>>>()?;
        Ok(TilingCode { rows, cols, bits })
    }
}

pub fn encode(matching: &Matching) -> Result<TilingCode> {
    let spec = *matching.spec();
    if spec.is_torus() {
        return Err(DimerError::InvalidDimensions {
            rows: spec.rows,
            cols: spec.cols,
            reason: "only rectangle tilings have a scan-order code",
        });
    }
    let mut covered = vec![false; spec.cells()];
    let mut bits = Vec::with_capacity(spec.cells() / 2);
    for cell in 0..spec.cells() {
        if covered[cell] {
            continue;
        }
        let p = matching.partner(cell);
        covered[cell] = true;
        covered[p] = true;
        bits.push(Some(p) == spec.down(cell));
    }
    Ok(TilingCode {
        rows: spec.rows,
        cols: spec.cols,
        bits,
    })
}

pub fn decode(code: &TilingCode) -> Result<Matching> {
    let spec = GridSpec::rectangle(code.rows, code.cols);
    spec.validate().map_err(|_| DimerError::InvalidCode {
        bit_index: 0,
        reason: "header describes a board without tilings",
    })?;
    let expected = code.expected_len();
    if code.bits.len() != expected {
        return Err(DimerError::InvalidCode {
            bit_index: code.bits.len().min(expected),
            reason: "code length must be rows * cols / 2",
        });
    }
    let mut partner = vec![usize::MAX; spec.cells()];
    let mut cell = 0;
    for (k, &down) in code.bits.iter().enumerate() {
        while partner[cell] != usize::MAX {
            cell += 1;
        }
        let other = if down { spec.down(cell) } else { spec.right(cell) };
        let Some(other) = other else {
            return Err(DimerError::InvalidCode {
                bit_index: k,
                reason: "partner cell is off the board",
            });
        };
        if partner[other] != usize::MAX {
            return Err(DimerError::InvalidCode {
                bit_index: k,
                reason: "partner cell is already covered",
            });
        }
        partner[cell] = other;
        partner[other] = cell;
    }
    Ok(Matching::from_partners_unchecked(spec, partner))
}
