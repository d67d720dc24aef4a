//! Turning real-world inputs into symbol sequences: raw integer
//! streams, CSV columns via dictionary mapping, and sampling-based
//! distribution estimation.

use std::collections::HashMap;
use std::io::{Read, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::types::{DistributionEstimate, DistributionSource, SymbolSequence};

/// First-appearance string-to-ID mapping. IDs are assigned 0, 1, 2, ...
/// in order of appearance; `entries[id]` inverts the mapping.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dictionary {
    entries: Vec<String>,
    index: HashMap<String, u64>,
}

impl Dictionary {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[String] {
        &self.entries
    }

    fn intern(&mut self, s: &str) -> u64 {
        if let Some(&id) = self.index.get(s) {
            return id;
        }
        let id = self.entries.len() as u64;
        self.entries.push(s.to_owned());
        self.index.insert(s.to_owned(), id);
        id
    }

    pub fn lookup(&self, id: u64) -> Result<&str> {
        self.entries
            .get(id as usize)
            .map(String::as_str)
            .ok_or(Error::UnknownSymbol {
                id,
                size: self.entries.len(),
            })
    }

    /// Sidecar format: per entry, a little-endian u32 byte length
    /// followed by the UTF-8 bytes, in ID order.
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        for entry in &self.entries {
            out.write_all(&(entry.len() as u32).to_le_bytes())?;
            out.write_all(entry.as_bytes())?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(mut input: R) -> Result<Self> {
        let mut bytes = Vec::new();
        input.read_to_end(&mut bytes)?;
        let mut dict = Dictionary::default();
        let mut pos = 0usize;
        while pos < bytes.len() {
            if pos + 4 > bytes.len() {
                return Err(Error::Corrupt("truncated dictionary entry length".into()));
            }
            let len = u32::from_le_bytes(bytes[pos..pos + 4].try_into().unwrap()) as usize;
            pos += 4;
            if pos + len > bytes.len() {
                return Err(Error::Corrupt("truncated dictionary entry".into()));
            }
            let s = std::str::from_utf8(&bytes[pos..pos + len])
                .map_err(|e| Error::Corrupt(format!("dictionary entry is not UTF-8: {e}")))?;
            dict.intern(s);
            pos += len;
        }
        Ok(dict)
    }
}

/// Replaces each string by its first-appearance ID.
pub fn dictionary_map<S: AsRef<str>>(strings: &[S]) -> (SymbolSequence, Dictionary) {
    let mut dict = Dictionary::default();
    let elements = strings.iter().map(|s| dict.intern(s.as_ref())).collect();
    (SymbolSequence::new(elements), dict)
}

/// Exact inverse of `dictionary_map`.
pub fn dictionary_unmap(seq: &SymbolSequence, dict: &Dictionary) -> Result<Vec<String>> {
    seq.elements
        .iter()
        .map(|&id| dict.lookup(id).map(str::to_owned))
        .collect()
}

/// Estimates the symbol distribution. Sequences no longer than
/// `sample_size` are counted in full; larger ones are sampled
/// uniformly without replacement with a deterministic seeded
/// generator.
pub fn sample_distribution(
    seq: &SymbolSequence,
    sample_size: usize,
    seed: u64,
) -> Result<DistributionEstimate> {
    if sample_size == 0 {
        return Err(Error::InvalidArgument("sample size must be at least 1".into()));
    }
    if seq.len() <= sample_size {
        return Ok(DistributionEstimate::full_pass(seq));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let indices = rand::seq::index::sample(&mut rng, seq.len(), sample_size);
    let mut counts = std::collections::BTreeMap::new();
    for i in indices {
        *counts.entry(seq.elements[i]).or_insert(0u64) += 1;
    }
    Ok(DistributionEstimate::from_counts(
        counts,
        DistributionSource::Sampled { sample_size, seed },
    ))
}

/// Fixed-width raw integer formats the toolkit reads directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    U8,
    U64Le,
}

impl ElementKind {
    pub fn size(self) -> usize {
        match self {
            ElementKind::U8 => 1,
            ElementKind::U64Le => 8,
        }
    }
}

/// Parses a raw little-endian integer stream.
pub fn ingest_raw(bytes: &[u8], kind: ElementKind) -> Result<SymbolSequence> {
    let size = kind.size();
    if !bytes.len().is_multiple_of(size) {
        return Err(Error::IndivisibleInput {
            len: bytes.len(),
            element_size: size,
        });
    }
    let elements = match kind {
        ElementKind::U8 => bytes.iter().map(|&b| u64::from(b)).collect(),
        ElementKind::U64Le => bytes
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect(),
    };
    Ok(SymbolSequence::new(elements))
}

/// Renders a sequence back to the raw integer format.
pub fn render_raw(seq: &SymbolSequence, kind: ElementKind) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(seq.len() * kind.size());
    for &x in &seq.elements {
        match kind {
            ElementKind::U8 => {
                let byte = u8::try_from(x).map_err(|_| Error::Overflow { value: x, width: 8 })?;
                out.push(byte);
            }
            ElementKind::U64Le => out.extend_from_slice(&x.to_le_bytes()),
        }
    }
    Ok(out)
}

/// How to pick the CSV column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelector {
    Name(String),
    Index(usize),
}

/// Extracts one CSV column as opaque strings (no type inference) and
/// dictionary-maps it. The dialect is comma-separated with optional
/// double-quote quoting; rows with the wrong field count are rejected
/// with their line number.
pub fn ingest_csv_column(
    text: &str,
    column: &ColumnSelector,
    has_header: bool,
) -> Result<(SymbolSequence, Dictionary)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(false)
        .from_reader(text.as_bytes());

    let index = match column {
        ColumnSelector::Index(i) => *i,
        ColumnSelector::Name(name) => {
            if !has_header {
                return Err(Error::InvalidArgument(
                    "column selection by name requires a header row".into(),
                ));
            }
            let headers = reader.headers().map_err(csv_error)?;
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::MissingColumn(name.clone()))?
        }
    };

    let mut cells = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let cell = record.get(index).ok_or_else(|| Error::Csv {
            line,
            message: format!("row has {} fields, column {index} missing", record.len()),
        })?;
        cells.push(cell.to_owned());
    }
    Ok(dictionary_map(&cells))
}

fn csv_error(e: csv::Error) -> Error {
    let line = match e.position() {
        Some(pos) => pos.line(),
        None => 0,
    };
    Error::Csv {
        line,
        message: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_by_order_of_appearance() {
        let (seq, dict) = dictionary_map(&["cat", "dog", "cat"]);
        assert_eq!(seq.elements, vec![0, 1, 0]);
        assert_eq!(dict.entries(), &["cat", "dog"]);
    }

    #[test]
    fn map_empty_and_single() {
        let (seq, dict) = dictionary_map::<&str>(&[]);
        assert!(seq.is_empty());
        assert!(dict.is_empty());

        let (seq, dict) = dictionary_map(&["x", "x", "x"]);
        assert_eq!(seq.elements, vec![0, 0, 0]);
        assert_eq!(dict.len(), 1);
    }

    #[test]
    fn unmap_inverts() {
        let (seq, dict) = dictionary_map(&["cat", "dog", "cat"]);
        assert_eq!(dictionary_unmap(&seq, &dict).unwrap(), vec!["cat", "dog", "cat"]);
    }

    #[test]
    fn unmap_rejects_out_of_range() {
        let (_, dict) = dictionary_map(&["cat", "dog"]);
        let seq = SymbolSequence::new(vec![2]);
        assert!(matches!(
            dictionary_unmap(&seq, &dict),
            Err(Error::UnknownSymbol { id: 2, size: 2 })
        ));
    }

    #[test]
    fn dictionary_sidecar_round_trip() {
        let (_, dict) = dictionary_map(&["cat", "", "with\nnewline", "dog"]);
        let mut buf = Vec::new();
        dict.write_to(&mut buf).unwrap();
        assert_eq!(Dictionary::read_from(buf.as_slice()).unwrap(), dict);
    }

    #[test]
    fn small_input_degenerates_to_full_pass() {
        let seq = SymbolSequence::new((0..100).map(|i| i % 3).collect());
        let d = sample_distribution(&seq, 10_000, 0).unwrap();
        assert_eq!(d.source(), DistributionSource::FullPass);
        assert_eq!(d.count(0), 34);
        assert_eq!(d.count(1), 33);
        assert_eq!(d.count(2), 33);
        assert_eq!(d.total(), 100);
    }

    #[test]
    fn sampling_is_deterministic() {
        let seq = SymbolSequence::new((0..50_000).map(|i| i % 17).collect());
        let a = sample_distribution(&seq, 10_000, 7).unwrap();
        let b = sample_distribution(&seq, 10_000, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.total(), 10_000);
        assert!(matches!(a.source(), DistributionSource::Sampled { .. }));
    }

    #[test]
    fn sampling_estimate_is_close() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let seq = SymbolSequence::new(
            (0..1_000_000)
                .map(|_| if rng.gen_bool(0.6) { 0 } else { rng.gen_range(1u64..100) })
                .collect(),
        );
        let d = sample_distribution(&seq, 10_000, 42).unwrap();
        // 5 standard errors of a binomial at p = 0.6, n = 10^4
        let se = (0.6f64 * 0.4 / 10_000.0).sqrt();
        assert!((d.probability(0) - 0.6).abs() < 5.0 * se + 0.01);
    }

    #[test]
    fn raw_u8() {
        let seq = ingest_raw(&[1, 0, 2, 3], ElementKind::U8).unwrap();
        assert_eq!(seq.elements, vec![1, 0, 2, 3]);
        assert_eq!(render_raw(&seq, ElementKind::U8).unwrap(), vec![1, 0, 2, 3]);
    }

    #[test]
    fn raw_u64le() {
        let bytes = 5u64.to_le_bytes();
        let seq = ingest_raw(&bytes, ElementKind::U64Le).unwrap();
        assert_eq!(seq.elements, vec![5]);
        assert!(matches!(
            ingest_raw(&bytes[..7], ElementKind::U64Le),
            Err(Error::IndivisibleInput { .. })
        ));
    }

    #[test]
    fn csv_column_by_name() {
        let (seq, dict) = ingest_csv_column("c\na\nb\na\n", &ColumnSelector::Name("c".into()), true).unwrap();
        assert_eq!(seq.elements, vec![0, 1, 0]);
        assert_eq!(dict.entries(), &["a", "b"]);
    }

    #[test]
    fn csv_column_by_index_without_header() {
        let (seq, dict) =
            ingest_csv_column("a,x\nb,y\na,x\n", &ColumnSelector::Index(1), false).unwrap();
        assert_eq!(seq.elements, vec![0, 1, 0]);
        assert_eq!(dict.entries(), &["x", "y"]);
    }

    #[test]
    fn csv_missing_column_rejected() {
        let err = ingest_csv_column("a,b\n1,2\n", &ColumnSelector::Name("zzz".into()), true);
        assert!(matches!(err, Err(Error::MissingColumn(_))));
    }

    #[test]
    fn csv_short_row_names_line() {
        let err = ingest_csv_column("c,d\n1,2\n3\n", &ColumnSelector::Name("d".into()), true);
        match err {
            Err(Error::Csv { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected csv error, got {other:?}"),
        }
    }

    #[test]
    fn mapping_preserves_run_structure() {
        let strings = ["a", "a", "b", "b", "b", "a", "c", "c"];
        let (seq, _) = dictionary_map(&strings);
        let string_runs = run_lengths(&strings);
        let id_runs = run_lengths(&seq.elements);
        assert_eq!(string_runs, id_runs);
    }

    fn run_lengths<T: PartialEq>(items: &[T]) -> Vec<usize> {
        let mut runs = Vec::new();
        let mut i = 0;
        while i < items.len() {
            let mut len = 1;
            while i + len < items.len() && items[i + len] == items[i] {
                len += 1;
            }
            runs.push(len);
            i += len;
        }
        runs
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn map_unmap_round_trip(strings in prop::collection::vec("[a-z]{0,8}", 0..100)) {
                let (seq, dict) = dictionary_map(&strings);
                prop_assert_eq!(dictionary_unmap(&seq, &dict).unwrap(), strings);
            }

            #[test]
            fn sidecar_round_trip(strings in prop::collection::vec(".{0,12}", 0..40)) {
                let (_, dict) = dictionary_map(&strings);
                let mut buf = Vec::new();
                dict.write_to(&mut buf).unwrap();
                prop_assert_eq!(Dictionary::read_from(buf.as_slice()).unwrap(), dict);
            }
        }
    }
}
