//! Sparse binary parity-check matrices, packed GF(2) row vectors, and the
//! plain-text alist interchange format.

use std::io::{self, BufRead, Write};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("row {row}: column index {col} out of range (matrix has {cols} columns)")]
    ColumnOutOfRange { row: usize, col: usize, cols: usize },
    #[error("row {row}: duplicate column index {col}")]
    DuplicateColumn { row: usize, col: usize },
}

/// A binary matrix stored by row support (sorted column indices per row).
/// Rows are parity checks, columns are code symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    row_supports: Vec<Vec<usize>>,
}

impl BinaryMatrix {
    /// Builds a matrix from per-row column lists; each list is sorted and
    /// checked for range and duplicates.
    pub fn new(
        rows: usize,
        cols: usize,
        mut row_supports: Vec<Vec<usize>>,
    ) -> Result<Self, MatrixError> {
        assert_eq!(row_supports.len(), rows, "one support list per row");
        for (r, support) in row_supports.iter_mut().enumerate() {
            support.sort_unstable();
            for w in support.windows(2) {
                if w[0] == w[1] {
                    return Err(MatrixError::DuplicateColumn { row: r, col: w[0] });
                }
            }
            if let Some(&last) = support.last() {
                if last >= cols {
                    return Err(MatrixError::ColumnOutOfRange {
                        row: r,
                        col: last,
                        cols,
                    });
                }
            }
        }
        Ok(BinaryMatrix {
            rows,
            cols,
            row_supports,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_support(&self, r: usize) -> &[usize] {
        &self.row_supports[r]
    }

    pub fn row_supports(&self) -> &[Vec<usize>] {
        &self.row_supports
    }

    pub fn num_entries(&self) -> usize {
        self.row_supports.iter().map(Vec::len).sum()
    }

    /// Column supports (sorted row indices per column), i.e. the transpose.
    pub fn col_supports(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.cols];
        for (r, support) in self.row_supports.iter().enumerate() {
            for &c in support {
                cols[c].push(r);
            }
        }
        cols
    }

    /// Rows packed into bit vectors for GF(2) linear algebra.
    pub fn packed_rows(&self) -> Vec<BitRow> {
        self.row_supports
            .iter()
            .map(|support| {
                let mut row = BitRow::zeros(self.cols);
                for &c in support {
                    row.set(c, true);
                }
                row
            })
            .collect()
    }

    /// True when `word` satisfies every parity check (H w = 0).
    pub fn checks_satisfied(&self, word: &BitRow) -> bool {
        assert_eq!(word.len(), self.cols);
        self.row_supports.iter().all(|support| {
            support.iter().filter(|&&c| word.get(c)).count() % 2 == 0
        })
    }
}

/// A fixed-length bit vector packed into u64 words, used for GF(2) rows
/// and codewords.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut row = BitRow::zeros(len);
        for &i in support {
            row.set(i, true);
        }
        row
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn xor_in(&mut self, other: &BitRow) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (wi, &w) in self.words.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(wi * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Orders bit sequences as binary strings read from index 0: the first
    /// differing position decides, a 0 there sorting first.
    pub fn lex_cmp(&self, other: &BitRow) -> std::cmp::Ordering {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let bit = diff.trailing_zeros();
                let self_has_one = a >> bit & 1 == 1;
                return if self_has_one {
                    std::cmp::Ordering::Greater
                } else {
                    std::cmp::Ordering::Less
                };
            }
        }
        std::cmp::Ordering::Equal
    }
}

#[derive(Debug, Error)]
pub enum AlistError {
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: malformed header (expected two non-negative integers)")]
    MalformedHeader { line: usize },
    #[error("line {line}: expected an integer token")]
    MalformedToken { line: usize },
    #[error("line {line}: expected {expected} values, found {found}")]
    WrongCount { line: usize, expected: usize, found: usize },
    #[error("file ends early: expected content on line {line}")]
    MissingLine { line: usize },
    #[error("line {line}: degree {degree} exceeds declared maximum {max}")]
    DegreeExceedsMax { line: usize, degree: usize, max: usize },
    #[error("line {line}: node lists {found} neighbors but its declared degree is {expected}")]
    DegreeMismatch { line: usize, expected: usize, found: usize },
    #[error("line {line}: index {index} out of range 1..={limit}")]
    IndexOutOfRange { line: usize, index: usize, limit: usize },
    #[error("line {line}: duplicate index {index}")]
    DuplicateIndex { line: usize, index: usize },
    #[error("line {line}: adjacency disagrees with the check-side lists")]
    InconsistentAdjacency { line: usize },
    #[error("line {line}: unexpected extra content after the adjacency lists")]
    TrailingContent { line: usize },
}

/// Writes `h` in alist format: `N M`, max degrees, per-column then per-row
/// degrees, then 1-indexed neighbor lists, one line per column (its check
/// rows) followed by one per row (its variable columns). Lists are written
/// unpadded.
pub fn write_alist<W: Write>(h: &BinaryMatrix, mut sink: W) -> io::Result<()> {
    let n = h.cols();
    let m = h.rows();
    let col_supports = h.col_supports();
    let max_col = col_supports.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = h.row_supports().iter().map(Vec::len).max().unwrap_or(0);
    writeln!(sink, "{n} {m}")?;
    writeln!(sink, "{max_col} {max_row}")?;
    write_counts(&mut sink, col_supports.iter().map(Vec::len))?;
    write_counts(&mut sink, h.row_supports().iter().map(Vec::len))?;
    for support in &col_supports {
        write_counts(&mut sink, support.iter().map(|&r| r + 1))?;
    }
    for support in h.row_supports() {
        write_counts(&mut sink, support.iter().map(|&c| c + 1))?;
    }
    Ok(())
}

fn write_counts<W: Write>(sink: &mut W, values: impl Iterator<Item = usize>) -> io::Result<()> {
    let mut first = true;
    for v in values {
        if first {
            write!(sink, "{v}")?;
            first = false;
        } else {
            write!(sink, " {v}")?;
        }
    }
    writeln!(sink)
}

/// Reads an alist file. Zero-padded neighbor lists (a common dialect) are
/// accepted: trailing zeros beyond the declared degree are dropped. The two
/// adjacency blocks are cross-checked against each other.
pub fn read_alist<R: BufRead>(src: R) -> Result<BinaryMatrix, AlistError> {
    let mut lines = Vec::new();
    for line in src.lines() {
        lines.push(line?);
    }
    // Ignore trailing blank lines but keep interior ones: positions matter.
    while lines.last().is_some_and(|l| l.trim().is_empty()) {
        lines.pop();
    }
    // A line that should hold zero values may have been stripped above; let
    // it read as empty rather than missing.
    let get = |idx: usize, expected: usize| -> Result<&str, AlistError> {
        match lines.get(idx) {
            Some(l) => Ok(l.as_str()),
            None if expected == 0 => Ok(""),
            None => Err(AlistError::MissingLine { line: idx + 1 }),
        }
    };

    let header = parse_ints(get(0, 1)?, 1)?;
    if header.len() != 2 {
        return Err(AlistError::MalformedHeader { line: 1 });
    }
    let (n, m) = (header[0], header[1]);
    let maxima = parse_ints(get(1, 1)?, 2)?;
    if maxima.len() != 2 {
        return Err(AlistError::MalformedHeader { line: 2 });
    }
    let (max_var, max_check) = (maxima[0], maxima[1]);

    let var_degrees = parse_degree_line(get(2, n)?, 3, n, max_var)?;
    let check_degrees = parse_degree_line(get(3, m)?, 4, m, max_check)?;

    let mut var_adj = Vec::with_capacity(n);
    for (i, &degree) in var_degrees.iter().enumerate() {
        let line_no = 5 + i;
        let support = parse_neighbor_line(get(line_no - 1, degree)?, line_no, degree, m)?;
        var_adj.push(support);
    }
    let mut row_supports = Vec::with_capacity(m);
    for (j, &degree) in check_degrees.iter().enumerate() {
        let line_no = 5 + n + j;
        let support = parse_neighbor_line(get(line_no - 1, degree)?, line_no, degree, n)?;
        row_supports.push(support);
    }
    let expected_lines = 4 + n + m;
    if lines.len() > expected_lines {
        return Err(AlistError::TrailingContent {
            line: expected_lines + 1,
        });
    }

    // The check-side lists define the matrix; the variable-side lists must
    // describe the same incidences.
    let h = BinaryMatrix::new(m, n, row_supports).expect("validated while parsing");
    let cols = h.col_supports();
    for (i, var_list) in var_adj.iter().enumerate() {
        if cols[i] != *var_list {
            return Err(AlistError::InconsistentAdjacency { line: 5 + i });
        }
    }
    Ok(h)
}

fn parse_ints(line: &str, line_no: usize) -> Result<Vec<usize>, AlistError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| AlistError::MalformedToken { line: line_no })
        })
        .collect()
}

fn parse_degree_line(
    line: &str,
    line_no: usize,
    expected: usize,
    max: usize,
) -> Result<Vec<usize>, AlistError> {
    let values = parse_ints(line, line_no)?;
    if values.len() != expected {
        return Err(AlistError::WrongCount {
            line: line_no,
            expected,
            found: values.len(),
        });
    }
    for &d in &values {
        if d > max {
            return Err(AlistError::DegreeExceedsMax {
                line: line_no,
                degree: d,
                max,
            });
        }
    }
    Ok(values)
}

/// Parses one 1-indexed neighbor list, tolerating zero padding, and returns
/// the sorted 0-indexed support.
fn parse_neighbor_line(
    line: &str,
    line_no: usize,
    declared_degree: usize,
    limit: usize,
) -> Result<Vec<usize>, AlistError> {
    let mut values = parse_ints(line, line_no)?;
    while values.len() > declared_degree && values.last() == Some(&0) {
        values.pop();
    }
    if values.len() != declared_degree {
        return Err(AlistError::DegreeMismatch {
            line: line_no,
            expected: declared_degree,
            found: values.len(),
        });
    }
    let mut support = Vec::with_capacity(values.len());
    for v in values {
        if v == 0 || v > limit {
            return Err(AlistError::IndexOutOfRange {
                line: line_no,
                index: v,
                limit,
            });
        }
        support.push(v - 1);
    }
    support.sort_unstable();
    for w in support.windows(2) {
        if w[0] == w[1] {
            return Err(AlistError::DuplicateIndex {
                line: line_no,
                index: w[0] + 1,
            });
        }
    }
    Ok(support)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_matrix() -> BinaryMatrix {
        // 3 checks x 6 symbols.
        BinaryMatrix::new(3, 6, vec![vec![0, 1, 2], vec![2, 3, 4], vec![0, 4, 5]]).unwrap()
    }

    #[test]
    fn new_validates_supports() {
        assert!(matches!(
            BinaryMatrix::new(1, 3, vec![vec![0, 3]]),
            Err(MatrixError::ColumnOutOfRange { row: 0, col: 3, cols: 3 })
        ));
        assert!(matches!(
            BinaryMatrix::new(1, 3, vec![vec![1, 1]]),
            Err(MatrixError::DuplicateColumn { row: 0, col: 1 })
        ));
        // Unsorted input is fine; stored sorted.
        let h = BinaryMatrix::new(1, 4, vec![vec![3, 0, 2]]).unwrap();
        assert_eq!(h.row_support(0), &[0, 2, 3]);
    }

    #[test]
    fn checks_satisfied_matches_definition() {
        let h = sample_matrix();
        assert!(h.checks_satisfied(&BitRow::zeros(6)));
        // Word 111000: check 0 has three ones -> odd.
        assert!(!h.checks_satisfied(&BitRow::from_support(6, &[0, 1, 2])));
        // Word 110100: check 0 sees {0,1} even, but check 1 sees only {3} -> odd.
        assert!(!h.checks_satisfied(&BitRow::from_support(6, &[0, 1, 3])));
        // 011011: check0 {1,2}, check1 {2,4}, check2 {4,5} -> all even.
        assert!(h.checks_satisfied(&BitRow::from_support(6, &[1, 2, 4, 5])));
    }

    #[test]
    fn bitrow_basics() {
        let mut r = BitRow::zeros(70);
        assert_eq!(r.weight(), 0);
        r.set(0, true);
        r.set(64, true);
        r.set(69, true);
        assert_eq!(r.weight(), 3);
        assert_eq!(r.support(), vec![0, 64, 69]);
        assert!(r.get(64));
        r.set(64, false);
        assert_eq!(r.support(), vec![0, 69]);

        let a = BitRow::from_support(70, &[0, 5, 69]);
        let mut b = a.clone();
        b.xor_in(&BitRow::from_support(70, &[5, 6]));
        assert_eq!(b.support(), vec![0, 6, 69]);
        assert!(!b.is_zero());
        b.xor_in(&b.clone());
        assert!(b.is_zero());
    }

    #[test]
    fn bitrow_lex_order() {
        let a = BitRow::from_support(8, &[2, 5]);
        let b = BitRow::from_support(8, &[1, 7]);
        // First difference at bit 1: a has 0, b has 1, so a < b.
        assert_eq!(a.lex_cmp(&b), std::cmp::Ordering::Less);
        assert_eq!(b.lex_cmp(&a), std::cmp::Ordering::Greater);
        assert_eq!(a.lex_cmp(&a.clone()), std::cmp::Ordering::Equal);
        let zero = BitRow::zeros(8);
        assert_eq!(zero.lex_cmp(&a), std::cmp::Ordering::Less);
    }

    fn round_trip(h: &BinaryMatrix) -> BinaryMatrix {
        let mut buf = Vec::new();
        write_alist(h, &mut buf).unwrap();
        read_alist(&buf[..]).unwrap()
    }

    #[test]
    fn alist_round_trip_identity() {
        let h = sample_matrix();
        assert_eq!(round_trip(&h), h);

        // Irregular, with an empty row and an untouched column.
        let h = BinaryMatrix::new(4, 5, vec![vec![0], vec![], vec![0, 1, 2, 4], vec![2]]).unwrap();
        assert_eq!(round_trip(&h), h);
    }

    #[test]
    fn alist_exact_bytes_for_small_example() {
        // 2 checks x 3 symbols: check 0 = {0,1}, check 1 = {1,2}.
        let h = BinaryMatrix::new(2, 3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let mut buf = Vec::new();
        write_alist(&h, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n2 3\n");
    }

    #[test]
    fn alist_reader_accepts_zero_padding() {
        // Same matrix as above, but neighbor lists padded to the max degree.
        let padded = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n";
        let h = read_alist(padded.as_bytes()).unwrap();
        assert_eq!(h, BinaryMatrix::new(2, 3, vec![vec![0, 1], vec![1, 2]]).unwrap());
    }

    #[test]
    fn alist_reader_rejects_declared_max_below_actual() {
        // Var 1 has degree 2 but the header claims max degree 1.
        let bad = "3 2\n1 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n2 3\n";
        match read_alist(bad.as_bytes()) {
            Err(AlistError::DegreeExceedsMax { line: 3, degree: 2, max: 1 }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn alist_reader_reports_line_numbers() {
        let h = sample_matrix();
        let mut buf = Vec::new();
        write_alist(&h, &mut buf).unwrap();
        let good = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = good.lines().collect();

        // Out-of-range index on the first check line (line 5 + n = 11).
        let mut bad = lines.clone();
        let patched = "1 2 7";
        bad[10] = patched;
        match read_alist(bad.join("\n").as_bytes()) {
            Err(AlistError::IndexOutOfRange { line: 11, index: 7, limit: 6 }) => {}
            other => panic!("unexpected: {other:?}"),
        }

        // Truncated file.
        match read_alist(lines[..8].join("\n").as_bytes()) {
            Err(AlistError::MissingLine { line: 9 }) => {}
            other => panic!("unexpected: {other:?}"),
        }

        // Non-numeric token.
        let mut bad = lines.clone();
        bad[2] = "1 x 1 2 2 1";
        match read_alist(bad.join("\n").as_bytes()) {
            Err(AlistError::MalformedToken { line: 3 }) => {}
            other => panic!("unexpected: {other:?}"),
        }

        // Variable side contradicting check side: var 0 sits in checks 1 and 3
        // (1-indexed) per the check lists, but claims 2 and 3 here.
        let mut bad = lines.clone();
        bad[4] = "2 3";
        match read_alist(bad.join("\n").as_bytes()) {
            Err(AlistError::InconsistentAdjacency { line: 5 }) => {}
            other => panic!("unexpected: {other:?}"),
        }

        // Duplicate neighbor.
        let mut bad = lines.clone();
        bad[10] = "1 1 2";
        match read_alist(bad.join("\n").as_bytes()) {
            Err(AlistError::DuplicateIndex { line: 11, index: 1 }) => {}
            other => panic!("unexpected: {other:?}"),
        }

        // Extra content.
        let mut extended = lines.clone();
        extended.push("9 9 9");
        match read_alist(extended.join("\n").as_bytes()) {
            Err(AlistError::TrailingContent { line: 14 }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn alist_handles_degenerate_sizes() {
        let empty = BinaryMatrix::new(0, 0, vec![]).unwrap();
        assert_eq!(round_trip(&empty), empty);
        let no_checks = BinaryMatrix::new(0, 3, vec![]).unwrap();
        assert_eq!(round_trip(&no_checks), no_checks);
    }
}
