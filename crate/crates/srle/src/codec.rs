//! Selective RLE encoder/decoder and the `.srle` container format.
//!
//! Members of the suitable set are run-length encoded exactly like
//! vanilla RLE (with runs split at 2^b_r); every other symbol is
//! copied verbatim into the encoded variable with no run-control
//! entry. Both directions are a constant number of linear passes.

use std::collections::BTreeSet;

use crate::bitio::{decode_symbol, encode_symbol, BitReader, BitWriter, Representation};
use crate::error::{Error, Result};
use crate::types::{CodecConfig, Mode, SuitableSet, SymbolSequence};

pub const MAGIC: [u8; 4] = *b"SRLE";
pub const VERSION: u8 = 1;

/// Fixed-size part of the serialized header, before the member list.
pub const HEADER_BYTES: usize = 4 + 1 + 1 + 1 + 1 + 8 + 8 + 2;

/// The two output streams of selective RLE, before bit rendering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedPair {
    pub encoded: Vec<u64>,
    /// One run length in [1, 2^b_r] per encoded entry whose symbol is
    /// a set member.
    pub run_control: Vec<u64>,
}

/// A decoded-form compressed artifact. `serialize` renders it to the
/// bit-exact wire format; `deserialize` parses and fully validates it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SrleContainer {
    pub b_r: u32,
    pub representation: Representation,
    pub mode: Mode,
    pub n: u64,
    pub members: BTreeSet<u64>,
    pub encoded: Vec<u64>,
    pub run_control: Vec<u64>,
}

/// Splits a run of length `n` into ceil(n / 2^b_r) divisions, each at
/// most 2^b_r long, summing to `n`.
pub fn split_run(n: u64, b_r: u32) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::InvalidArgument("run length must be positive".into()));
    }
    let max = 1u64 << b_r;
    let mut divisions = Vec::with_capacity(n.div_ceil(max) as usize);
    let full = n / max;
    for _ in 0..full {
        divisions.push(max);
    }
    if !n.is_multiple_of(max) {
        divisions.push(n % max);
    }
    Ok(divisions)
}

/// Scans the sequence left to right, run-length encoding maximal runs
/// of set members and copying everything else verbatim.
pub fn encode_pair(seq: &SymbolSequence, g: &SuitableSet, b_r: u32) -> Result<EncodedPair> {
    let mut encoded = Vec::new();
    let mut run_control = Vec::new();
    let mut i = 0;
    let elems = &seq.elements;
    while i < elems.len() {
        let symbol = elems[i];
        if g.contains(symbol) {
            let mut run = 1u64;
            while i + (run as usize) < elems.len() && elems[i + run as usize] == symbol {
                run += 1;
            }
            for division in split_run(run, b_r)? {
                encoded.push(symbol);
                run_control.push(division);
            }
            i += run as usize;
        } else {
            encoded.push(symbol);
            i += 1;
        }
    }
    Ok(EncodedPair {
        encoded,
        run_control,
    })
}

/// `encode_pair` plus container framing.
pub fn encode(seq: &SymbolSequence, g: &SuitableSet, config: &CodecConfig) -> Result<SrleContainer> {
    // Validate every element against the representation up front so a
    // too-wide symbol never leaves a half-built container.
    for &x in &seq.elements {
        config.representation.symbol_width(x)?;
    }
    let pair = encode_pair(seq, g, config.b_r)?;
    Ok(SrleContainer {
        b_r: config.b_r,
        representation: config.representation,
        mode: config.mode,
        n: seq.len() as u64,
        members: g.members.clone(),
        encoded: pair.encoded,
        run_control: pair.run_control,
    })
}

/// Expands the container back into the original sequence.
pub fn decode(container: &SrleContainer) -> Result<SymbolSequence> {
    let mut out = Vec::with_capacity(container.n as usize);
    let mut runs = container.run_control.iter();
    for &symbol in &container.encoded {
        if container.members.contains(&symbol) {
            let &run = runs.next().ok_or_else(|| {
                Error::Corrupt("run-control stream shorter than member entries".into())
            })?;
            for _ in 0..run {
                out.push(symbol);
            }
        } else {
            out.push(symbol);
        }
    }
    if runs.next().is_some() {
        return Err(Error::Corrupt(
            "run-control stream longer than member entries".into(),
        ));
    }
    if out.len() as u64 != container.n {
        return Err(Error::LengthMismatch {
            expected: container.n,
            actual: out.len() as u64,
        });
    }
    Ok(SymbolSequence::new(out))
}

/// Two-pass post-hoc selection: measure each symbol's actual division
/// count under vanilla RLE, then keep exactly the symbols whose
/// encoded cost does not exceed their verbatim cost. Ground truth for
/// the frequency-threshold policy.
pub fn exploratory_suitable_set(seq: &SymbolSequence, config: &CodecConfig) -> Result<SuitableSet> {
    use std::collections::BTreeMap;

    let mut occurrences: BTreeMap<u64, u64> = BTreeMap::new();
    let mut divisions: BTreeMap<u64, u64> = BTreeMap::new();
    let max = config.max_run_len();
    let elems = &seq.elements;
    let mut i = 0;
    while i < elems.len() {
        let symbol = elems[i];
        let mut run = 1u64;
        while i + (run as usize) < elems.len() && elems[i + run as usize] == symbol {
            run += 1;
        }
        *occurrences.entry(symbol).or_insert(0) += run;
        *divisions.entry(symbol).or_insert(0) += run.div_ceil(max);
        i += run as usize;
    }

    let mut members = BTreeSet::new();
    for (&symbol, &n_x) in &occurrences {
        let b_x = config.representation.symbol_width(symbol)? as u128;
        let d_x = divisions[&symbol] as u128;
        // Keep when b_x * N_x >= (b_x + b_r) * D_x.
        if b_x * n_x as u128 >= (b_x + config.b_r as u128) * d_x {
            members.insert(symbol);
        }
    }
    Ok(SuitableSet::new(members, Mode::Exploratory))
}

impl SrleContainer {
    /// Bits consumed by the two payload streams, excluding header and
    /// byte-boundary padding.
    pub fn payload_bits(&self) -> Result<u64> {
        let mut bits = 0u64;
        for &x in &self.encoded {
            bits += self.representation.symbol_width(x)? as u64;
        }
        bits += self.b_r as u64 * self.run_control.len() as u64;
        Ok(bits)
    }

    pub fn header_bytes(&self) -> usize {
        HEADER_BYTES + 8 * self.members.len()
    }

    /// Renders the bit-exact wire format: header, member list, then
    /// the two bitstreams each zero-padded to a byte boundary.
    pub fn serialize(&self) -> Result<Vec<u8>> {
        if self.members.len() > u16::MAX as usize {
            return Err(Error::InvalidArgument(format!(
                "suitable set of {} members exceeds container limit",
                self.members.len()
            )));
        }
        let mut out = Vec::new();
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        let repr_bit = match self.representation {
            Representation::BitPacking { .. } => 0u8,
            Representation::VariableLength => 1u8,
        };
        out.push(repr_bit | (self.mode.to_flag_bits() << 1));
        out.push(self.b_r as u8);
        out.push(match self.representation {
            Representation::BitPacking { width } => width as u8,
            Representation::VariableLength => 0,
        });
        out.extend_from_slice(&self.n.to_le_bytes());
        out.extend_from_slice(&(self.encoded.len() as u64).to_le_bytes());
        out.extend_from_slice(&(self.members.len() as u16).to_le_bytes());
        for &member in &self.members {
            out.extend_from_slice(&member.to_le_bytes());
        }

        let mut encoded_stream = BitWriter::new();
        for &x in &self.encoded {
            encode_symbol(x, self.representation, &mut encoded_stream)?;
        }
        let (encoded_bytes, _) = encoded_stream.finish();
        out.extend_from_slice(&encoded_bytes);

        let mut run_stream = BitWriter::new();
        for &run in &self.run_control {
            if run == 0 || run > 1u64 << self.b_r {
                return Err(Error::Corrupt(format!(
                    "run length {run} outside [1, 2^{}]",
                    self.b_r
                )));
            }
            // Stored as length - 1 so the b_r bits cover [1, 2^b_r].
            run_stream.write_bits(run - 1, self.b_r)?;
        }
        let (run_bytes, _) = run_stream.finish();
        out.extend_from_slice(&run_bytes);
        Ok(out)
    }

    /// Parses and fully validates a serialized container. Rejects bad
    /// magic or version, truncation, trailing bytes, and payloads
    /// inconsistent with the header length.
    pub fn deserialize(bytes: &[u8]) -> Result<Self> {
        let need = |len: usize| -> Result<()> {
            if bytes.len() < len {
                Err(Error::Truncated {
                    needed: len * 8,
                    available: bytes.len() * 8,
                })
            } else {
                Ok(())
            }
        };
        // Check the magic first so misidentified files are reported as
        // such rather than as truncation.
        if bytes.len() >= 4 && bytes[0..4] != MAGIC {
            return Err(Error::BadMagic);
        }
        need(HEADER_BYTES)?;
        if bytes[0..4] != MAGIC {
            return Err(Error::BadMagic);
        }
        if bytes[4] != VERSION {
            return Err(Error::BadVersion(bytes[4]));
        }
        let flags = bytes[5];
        if flags & !0b111 != 0 {
            return Err(Error::Corrupt(format!("reserved flag bits set: {flags:#x}")));
        }
        let mode = Mode::from_flag_bits((flags >> 1) & 0b11);
        let b_r = bytes[6] as u32;
        if !(1..=8).contains(&b_r) {
            return Err(Error::Corrupt(format!("run-control width {b_r} out of range")));
        }
        let b_x = bytes[7] as u32;
        let representation = if flags & 1 == 0 {
            if !(1..=64).contains(&b_x) {
                return Err(Error::Corrupt(format!("symbol width {b_x} out of range")));
            }
            Representation::BitPacking { width: b_x }
        } else {
            if b_x != 0 {
                return Err(Error::Corrupt(
                    "symbol width must be zero under variable-length".into(),
                ));
            }
            Representation::VariableLength
        };
        let n = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
        let encoded_count = u64::from_le_bytes(bytes[16..24].try_into().unwrap());
        let g_count = u16::from_le_bytes(bytes[24..26].try_into().unwrap()) as usize;

        let members_end = HEADER_BYTES + 8 * g_count;
        need(members_end)?;
        let mut members = BTreeSet::new();
        for i in 0..g_count {
            let start = HEADER_BYTES + 8 * i;
            members.insert(u64::from_le_bytes(bytes[start..start + 8].try_into().unwrap()));
        }
        if members.len() != g_count {
            return Err(Error::Corrupt("duplicate suitable-set members".into()));
        }

        if encoded_count > n {
            return Err(Error::Corrupt(format!(
                "encoded count {encoded_count} exceeds sequence length {n}"
            )));
        }

        // Phase 1: parse the encoded variable; its bit length locates
        // the run-control section at the next byte boundary.
        let mut reader = BitReader::new(&bytes[members_end..]);
        let mut encoded = Vec::with_capacity(encoded_count as usize);
        let mut run_count = 0usize;
        for _ in 0..encoded_count {
            let x = decode_symbol(&mut reader, representation)?;
            if members.contains(&x) {
                run_count += 1;
            }
            encoded.push(x);
        }
        let encoded_bytes = reader.bits_read().div_ceil(8);
        let run_start = members_end + encoded_bytes;
        let run_bytes = (run_count * b_r as usize).div_ceil(8);
        need(run_start + run_bytes)?;
        if bytes.len() != run_start + run_bytes {
            return Err(Error::Corrupt(format!(
                "{} trailing bytes after payload",
                bytes.len() - run_start - run_bytes
            )));
        }

        // Phase 2: one run length per member entry.
        let mut run_reader = BitReader::new(&bytes[run_start..]);
        let mut run_control = Vec::with_capacity(run_count);
        for _ in 0..run_count {
            run_control.push(run_reader.read_bits(b_r)? + 1);
        }

        // Phase 3 length check without materializing the expansion.
        let mut total = 0u64;
        let mut runs = run_control.iter();
        for &x in &encoded {
            if members.contains(&x) {
                total += *runs.next().unwrap();
            } else {
                total += 1;
            }
        }
        if total != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: total,
            });
        }

        Ok(Self {
            b_r,
            representation,
            mode,
            n,
            members,
            encoded,
            run_control,
        })
    }
}
