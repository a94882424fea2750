//! Embedding matrix and label I/O.
//!
//! Text format: a header line `n d`, then one row per gene — the symbol
//! followed by `d` decimal values, whitespace-separated.
//!
//! Binary format (behind a flag in the CLI): magic `EMB1`, then
//! little-endian `u32 n`, `u32 d`, then per row a `u16` symbol byte length,
//! the UTF-8 symbol bytes, and `d` little-endian `f32` values.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use super::EmbedError;

/// Dense per-gene embedding matrix with unique row symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    row_ids: Vec<String>,
    dims: usize,
    values: Vec<f64>,
}

impl EmbeddingMatrix {
    pub fn new(row_ids: Vec<String>, dims: usize, values: Vec<f64>) -> Result<Self, EmbedError> {
        if row_ids.len() * dims != values.len() {
            return Err(EmbedError::BadMatrix(format!(
                "{} rows x {} dims != {} values",
                row_ids.len(),
                dims,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(EmbedError::BadMatrix("matrix contains non-finite values".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for id in &row_ids {
            if !seen.insert(id) {
                return Err(EmbedError::BadMatrix(format!("duplicate row id {id}")));
            }
        }
        Ok(Self {
            row_ids,
            dims,
            values,
        })
    }

    pub fn rows(&self) -> usize {
        self.row_ids.len()
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.dims..(i + 1) * self.dims]
    }

    pub fn row_ids(&self) -> &[String] {
        &self.row_ids
    }

    pub fn parse_text(text: &str) -> Result<Self, EmbedError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| EmbedError::BadMatrix("empty matrix file".into()))?;
        let mut parts = header.split_whitespace();
        let n: usize = parts
            .next()
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| EmbedError::BadMatrix("bad header".into()))?;
        let d: usize = parts
            .next()
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| EmbedError::BadMatrix("bad header".into()))?;
        let mut row_ids = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n * d);
        for (i, line) in lines.enumerate() {
            let mut fields = line.split_whitespace();
            let symbol = fields
                .next()
                .ok_or_else(|| EmbedError::BadMatrix(format!("row {i} is empty")))?;
            row_ids.push(symbol.to_string());
            let mut count = 0;
            for field in fields {
                let value: f64 = field
                    .parse()
                    .map_err(|_| EmbedError::BadMatrix(format!("row {symbol}: bad value {field:?}")))?;
                values.push(value);
                count += 1;
            }
            if count != d {
                return Err(EmbedError::BadMatrix(format!(
                    "row {symbol} has {count} values, expected {d}"
                )));
            }
        }
        if row_ids.len() != n {
            return Err(EmbedError::BadMatrix(format!(
                "header declares {n} rows, file has {}",
                row_ids.len()
            )));
        }
        Self::new(row_ids, d, values)
    }

    pub fn read_text(path: &Path) -> Result<Self, EmbedError> {
        Self::parse_text(&std::fs::read_to_string(path)?)
    }

    pub fn write_text(&self, path: &Path) -> Result<(), EmbedError> {
        let mut out = String::new();
        out.push_str(&format!("{} {}\n", self.rows(), self.dims));
        for (i, id) in self.row_ids.iter().enumerate() {
            out.push_str(id);
            for v in self.row(i) {
                out.push_str(&format!(" {v}"));
            }
            out.push('\n');
        }
        std::fs::write(path, out)?;
        Ok(())
    }

    pub fn read_binary(path: &Path) -> Result<Self, EmbedError> {
        let mut file = std::fs::File::open(path)?;
        let mut magic = [0u8; 4];
        file.read_exact(&mut magic)?;
        if &magic != b"EMB1" {
            return Err(EmbedError::BadMatrix("bad magic; not an EMB1 file".into()));
        }
        let mut u32_buf = [0u8; 4];
        file.read_exact(&mut u32_buf)?;
        let n = u32::from_le_bytes(u32_buf) as usize;
        file.read_exact(&mut u32_buf)?;
        let d = u32::from_le_bytes(u32_buf) as usize;
        let mut row_ids = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n * d);
        for _ in 0..n {
            let mut len_buf = [0u8; 2];
            file.read_exact(&mut len_buf)?;
            let len = u16::from_le_bytes(len_buf) as usize;
            let mut symbol_bytes = vec![0u8; len];
            file.read_exact(&mut symbol_bytes)?;
            let symbol = String::from_utf8(symbol_bytes)
                .map_err(|_| EmbedError::BadMatrix("symbol is not UTF-8".into()))?;
            row_ids.push(symbol);
            let mut f32_buf = [0u8; 4];
            for _ in 0..d {
                file.read_exact(&mut f32_buf)?;
                values.push(f32::from_le_bytes(f32_buf) as f64);
            }
        }
        Self::new(row_ids, d, values)
    }

    pub fn write_binary(&self, path: &Path) -> Result<(), EmbedError> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        out.write_all(b"EMB1")?;
        out.write_all(&(self.rows() as u32).to_le_bytes())?;
        out.write_all(&(self.dims as u32).to_le_bytes())?;
        for (i, id) in self.row_ids.iter().enumerate() {
            out.write_all(&(id.len() as u16).to_le_bytes())?;
            out.write_all(id.as_bytes())?;
            for &v in self.row(i) {
                out.write_all(&(v as f32).to_le_bytes())?;
            }
        }
        Ok(())
    }
}

/// Per-gene functional labels aligned to a matrix's row order.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelVector {
    labels: Vec<String>,
}

impl LabelVector {
    /// Builds a vector aligned to the matrix from a symbol → label map;
    /// every row must be labeled.
    pub fn for_matrix(
        matrix: &EmbeddingMatrix,
        by_symbol: &BTreeMap<String, String>,
    ) -> Result<Self, EmbedError> {
        let labels = matrix
            .row_ids()
            .iter()
            .map(|id| {
                by_symbol
                    .get(id)
                    .cloned()
                    .ok_or_else(|| EmbedError::BadLabels(format!("no label for {id}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { labels })
    }

    /// Parses `symbol<TAB>label` lines.
    pub fn parse_table(text: &str) -> Result<BTreeMap<String, String>, EmbedError> {
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (symbol, label) = line.split_once('\t').ok_or_else(|| {
                EmbedError::BadLabels(format!("line {}: expected symbol<TAB>label", i + 1))
            })?;
            map.insert(symbol.trim().to_string(), label.trim().to_string());
        }
        Ok(map)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Encodes labels as dense indices (first-appearance order).
    pub fn to_indices(&self) -> Vec<usize> {
        let mut next = 0usize;
        let mut map: BTreeMap<&str, usize> = BTreeMap::new();
        self.labels
            .iter()
            .map(|l| {
                *map.entry(l.as_str()).or_insert_with(|| {
                    let id = next;
                    next += 1;
                    id
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demo() -> EmbeddingMatrix {
        EmbeddingMatrix::new(
            vec!["A".into(), "B".into(), "C".into()],
            2,
            vec![1.0, 0.0, 0.0, 1.0, 0.5, 0.25],
        )
        .unwrap()
    }

    #[test]
    fn text_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("emb.txt");
        demo().write_text(&path).unwrap();
        assert_eq!(EmbeddingMatrix::read_text(&path).unwrap(), demo());
    }

    #[test]
    fn binary_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("emb.bin");
        demo().write_binary(&path).unwrap();
        let back = EmbeddingMatrix::read_binary(&path).unwrap();
        assert_eq!(back.row_ids(), demo().row_ids());
        for i in 0..back.rows() {
            for (a, b) in back.row(i).iter().zip(demo().row(i)) {
                assert!((a - b).abs() < 1e-6, "f32 round trip within tolerance");
            }
        }
    }

    #[test]
    fn rejects_non_finite_and_duplicates() {
        assert!(EmbeddingMatrix::new(vec!["A".into()], 1, vec![f64::NAN]).is_err());
        assert!(EmbeddingMatrix::new(vec!["A".into(), "A".into()], 1, vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn header_mismatch_is_rejected() {
        assert!(EmbeddingMatrix::parse_text("2 2\nA 1.0 2.0\n").is_err());
        assert!(EmbeddingMatrix::parse_text("1 2\nA 1.0\n").is_err());
    }

    #[test]
    fn labels_align_to_matrix() {
        let table = LabelVector::parse_table("A\tkinase\nB\tligase\nC\tkinase\n").unwrap();
        let labels = LabelVector::for_matrix(&demo(), &table).unwrap();
        assert_eq!(labels.labels(), ["kinase", "ligase", "kinase"]);
        assert_eq!(labels.to_indices(), vec![0, 1, 0]);
    }

    #[test]
    fn missing_label_is_an_error() {
        let table = LabelVector::parse_table("A\tkinase\n").unwrap();
        assert!(LabelVector::for_matrix(&demo(), &table).is_err());
    }
}
