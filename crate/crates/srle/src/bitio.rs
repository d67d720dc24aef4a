//! Bit-granular stream reader/writer and the two symbol
//! representations: fixed-width bit-packing and the 4-bit-prefix
//! variable-length code.
//!
//! Bit order is most-significant bit first within each byte. Trailing
//! pad bits at the end of a stream are zero. These conventions are the
//! wire format consumed by the container; changing them is
//! format-breaking.

use crate::error::{Error, Result};

/// Maximum payload value under the variable-length representation; the
/// 4-bit width field can express widths 1..=16 only.
pub const VARLEN_MAX: u64 = 1 << 16;

/// Fixed width of the variable-length width field (c-alpha).
pub const VARLEN_PREFIX_BITS: u32 = 4;

/// How symbols are rendered as bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    /// Every symbol takes exactly `width` bits.
    BitPacking { width: u32 },
    /// 4-bit width field followed by a minimal-width value field.
    VariableLength,
}

impl Representation {
    /// Bits needed to store `value` under this representation (the
    /// per-symbol b_x).
    pub fn symbol_width(&self, value: u64) -> Result<u32> {
        match *self {
            Representation::BitPacking { width } => {
                check_fits(value, width)?;
                Ok(width)
            }
            Representation::VariableLength => {
                if value >= VARLEN_MAX {
                    return Err(Error::UnsupportedWidth(value));
                }
                Ok(VARLEN_PREFIX_BITS + min_width(value))
            }
        }
    }
}

/// Minimal number of bits for `value`, with zero taking one bit.
pub fn min_width(value: u64) -> u32 {
    (64 - value.leading_zeros()).max(1)
}

/// Minimum fixed width able to encode every symbol in the alphabet.
pub fn bitpack_width<I: IntoIterator<Item = u64>>(alphabet: I) -> Result<u32> {
    let max = alphabet
        .into_iter()
        .max()
        .ok_or_else(|| Error::InvalidArgument("empty alphabet".into()))?;
    Ok(min_width(max))
}

fn check_fits(value: u64, width: u32) -> Result<()> {
    if width < 64 && value >> width != 0 {
        return Err(Error::Overflow { value, width });
    }
    Ok(())
}

/// Append-only MSB-first bit buffer.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BitWriter {
    bytes: Vec<u8>,
    bit_len: usize,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bit_len(&self) -> usize {
        self.bit_len
    }

    /// Writes the low `width` bits of `value`, most significant first.
    pub fn write_bits(&mut self, value: u64, width: u32) -> Result<()> {
        check_fits(value, width)?;
        if width == 0 {
            return Err(Error::InvalidArgument("zero-width field".into()));
        }
        for i in (0..width).rev() {
            let bit = (value >> i) & 1;
            let offset = self.bit_len % 8;
            if offset == 0 {
                self.bytes.push(0);
            }
            if bit == 1 {
                *self.bytes.last_mut().unwrap() |= 1 << (7 - offset);
            }
            self.bit_len += 1;
        }
        Ok(())
    }

    /// Consumes the writer, returning the byte buffer (zero-padded to a
    /// byte boundary) and the exact bit length.
    pub fn finish(self) -> (Vec<u8>, usize) {
        (self.bytes, self.bit_len)
    }
}

/// MSB-first reader over a byte slice.
#[derive(Debug)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
    bit_len: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        Self {
            bytes,
            pos: 0,
            bit_len: bytes.len() * 8,
        }
    }

    pub fn bits_read(&self) -> usize {
        self.pos
    }

    pub fn read_bits(&mut self, width: u32) -> Result<u64> {
        let width = width as usize;
        if self.pos + width > self.bit_len {
            return Err(Error::Truncated {
                needed: width,
                available: self.bit_len - self.pos,
            });
        }
        let mut value = 0u64;
        for _ in 0..width {
            let byte = self.bytes[self.pos / 8];
            let bit = (byte >> (7 - self.pos % 8)) & 1;
            value = (value << 1) | bit as u64;
            self.pos += 1;
        }
        Ok(value)
    }
}

pub fn encode_bitpacked(value: u64, width: u32, stream: &mut BitWriter) -> Result<()> {
    stream.write_bits(value, width)
}

pub fn decode_bitpacked(stream: &mut BitReader<'_>, width: u32) -> Result<u64> {
    stream.read_bits(width)
}

/// Writes the 4-bit width field (stored as width minus one) followed by
/// the value in that many bits.
pub fn encode_varlen(value: u64, stream: &mut BitWriter) -> Result<()> {
    if value >= VARLEN_MAX {
        return Err(Error::UnsupportedWidth(value));
    }
    let width = min_width(value);
    stream.write_bits(u64::from(width - 1), VARLEN_PREFIX_BITS)?;
    stream.write_bits(value, width)
}

pub fn decode_varlen(stream: &mut BitReader<'_>) -> Result<u64> {
    let width = stream.read_bits(VARLEN_PREFIX_BITS)? as u32 + 1;
    stream.read_bits(width)
}

/// Writes one symbol under the given representation.
pub fn encode_symbol(value: u64, repr: Representation, stream: &mut BitWriter) -> Result<()> {
    match repr {
        Representation::BitPacking { width } => encode_bitpacked(value, width, stream),
        Representation::VariableLength => encode_varlen(value, stream),
    }
}

pub fn decode_symbol(stream: &mut BitReader<'_>, repr: Representation) -> Result<u64> {
    match repr {
        Representation::BitPacking { width } => decode_bitpacked(stream, width),
        Representation::VariableLength => decode_varlen(stream),
    }
}
