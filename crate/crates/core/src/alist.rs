//! Reader and writer for the alist sparse-matrix format.
//!
//! Layout: `n m`, then the maximum column and row degrees, the `n` column
//! degrees, the `m` row degrees, `n` lines of 1-based row indices per column
//! and `m` lines of 1-based column indices per row. Lists may be padded with
//! zeros up to the maximum degree. Files are written padded, with LF endings.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

pub fn read(path: impl AsRef<Path>) -> Result<BitMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse(&text, path)
}

pub fn write(path: impl AsRef<Path>, h: &BitMatrix) -> Result<()> {
    fs::write(path, to_string(h))?;
    Ok(())
}

pub fn to_string(h: &BitMatrix) -> String {
    let (m, n) = (h.rows(), h.cols());
    let cols: Vec<Vec<usize>> = (0..n)
        .map(|c| (0..m).filter(|&r| h.get(r, c)).collect())
        .collect();
    let rows: Vec<Vec<usize>> = (0..m).map(|r| h.row_support(r)).collect();
    let max_col = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = rows.iter().map(Vec::len).max().unwrap_or(0);

    let join = |xs: &mut dyn Iterator<Item = usize>| {
        xs.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    let mut out = String::new();
    writeln!(out, "{n} {m}").unwrap();
    writeln!(out, "{max_col} {max_row}").unwrap();
    writeln!(out, "{}", join(&mut cols.iter().map(Vec::len))).unwrap();
    writeln!(out, "{}", join(&mut rows.iter().map(Vec::len))).unwrap();
    for (lists, width) in [(&cols, max_col), (&rows, max_row)] {
        for list in lists {
            let padded = list
                .iter()
                .map(|&i| i + 1)
                .chain(std::iter::repeat(0))
                .take(width);
            writeln!(out, "{}", join(&mut padded.into_iter())).unwrap();
        }
    }
    out
}

struct Lines<'a> {
    path: PathBuf,
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn err(&self, line: usize, msg: impl Into<String>) -> Error {
        Error::Alist {
            path: self.path.clone(),
            line,
            msg: msg.into(),
        }
    }

    /// Next non-blank line parsed as integers, with its 1-based line number.
    fn numbers(&mut self, what: &str) -> Result<(usize, Vec<usize>)> {
        let Some((no, line)) = self.inner.next() else {
            return Err(self.err(
                self.last + 1,
                format!("unexpected end of file, expected {what}"),
            ));
        };
        self.last = no;
        let nums = line
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>().map_err(|_| {
                    self.err(no, format!("{what}: {t:?} is not a non-negative integer"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((no, nums))
    }

    fn exact(&mut self, what: &str, count: usize) -> Result<(usize, Vec<usize>)> {
        let (no, nums) = self.numbers(what)?;
        if nums.len() != count {
            return Err(self.err(
                no,
                format!("{what}: expected {count} values, found {}", nums.len()),
            ));
        }
        Ok((no, nums))
    }
}

pub fn parse(text: &str, path: &Path) -> Result<BitMatrix> {
    let iter: Box<dyn Iterator<Item = (usize, &str)>> = Box::new(
        text.lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty()),
    );
    let mut lines = Lines {
        path: path.to_path_buf(),
        inner: iter.peekable(),
        last: 0,
    };

    let (_, header) = lines.exact("header `n m`", 2)?;
    let (n, m) = (header[0], header[1]);
    let (deg_line, max_deg) = lines.exact("maximum degrees", 2)?;
    let (max_col, max_row) = (max_deg[0], max_deg[1]);
    let (col_line, col_deg) = lines.exact("column degrees", n)?;
    let (row_line, row_deg) = lines.exact("row degrees", m)?;
    if let Some(&d) = col_deg.iter().find(|&&d| d > max_col) {
        return Err(lines.err(
            col_line,
            format!("column degree {d} exceeds maximum {max_col}"),
        ));
    }
    if let Some(&d) = row_deg.iter().find(|&&d| d > max_row) {
        return Err(lines.err(
            row_line,
            format!("row degree {d} exceeds maximum {max_row}"),
        ));
    }
    if col_deg.iter().sum::<usize>() != row_deg.iter().sum::<usize>() {
        return Err(lines.err(
            deg_line,
            "column and row degrees count different numbers of ones",
        ));
    }

    let mut h = BitMatrix::zeros(m, n);
    for (c, &deg) in col_deg.iter().enumerate() {
        let (no, list) = lines.numbers("column adjacency")?;
        let entries = adjacency(&lines, no, &list, deg, m, "row")?;
        for r in entries {
            h.set(r, c, true);
        }
    }
    for (r, &deg) in row_deg.iter().enumerate() {
        let (no, list) = lines.numbers("row adjacency")?;
        let entries = adjacency(&lines, no, &list, deg, n, "column")?;
        let support = h.row_support(r);
        if support != entries {
            return Err(lines.err(no, format!("row {} disagrees with the column lists", r + 1)));
        }
    }
    if let Some((no, _)) = lines.inner.next() {
        return Err(lines.err(no, "trailing data after row lists"));
    }
    Ok(h)
}

/// Validates one adjacency line and returns its sorted 0-based indices.
fn adjacency(
    lines: &Lines<'_>,
    no: usize,
    list: &[usize],
    degree: usize,
    bound: usize,
    kind: &str,
) -> Result<Vec<usize>> {
    let mut idx: Vec<usize> = list.iter().copied().filter(|&x| x != 0).collect();
    if idx.len() != degree {
        return Err(lines.err(
            no,
            format!("degree mismatch: declared {degree}, listed {}", idx.len()),
        ));
    }
    if let Some(&bad) = idx.iter().find(|&&x| x > bound) {
        return Err(lines.err(no, format!("{kind} index {bad} out of range 1..={bound}")));
    }
    idx.sort_unstable();
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return Err(lines.err(no, format!("duplicate {kind} index")));
    }
    Ok(idx.into_iter().map(|x| x - 1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const REP3: &str = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n";

    fn p(text: &str) -> Result<BitMatrix> {
        parse(text, Path::new("test.alist"))
    }

    #[test]
    fn parses_hand_written_repetition_code() {
        let h = p(REP3).unwrap();
        assert_eq!(h, BitMatrix::from_rows(&[[1, 1, 0], [0, 1, 1]]));
        assert_eq!(to_string(&h), REP3);
    }

    #[test]
    fn accepts_unpadded_lists() {
        let unpadded = "3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n2 3\n";
        assert_eq!(p(unpadded).unwrap(), p(REP3).unwrap());
    }

    #[test]
    fn rejects_out_of_range_index() {
        let bad = REP3.replace("2 3\n", "2 4\n");
        let err = p(&bad).unwrap_err();
        match err {
            Error::Alist { line, msg, .. } => {
                assert_eq!(line, 9);
                assert!(msg.contains("out of range"), "{msg}");
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn rejects_degree_mismatch() {
        let bad = REP3.replacen("1 2\n2 0", "1 2\n2 1", 1);
        assert!(matches!(p(&bad), Err(Error::Alist { line: 7, .. })));
    }

    #[test]
    fn rejects_malformed_header() {
        assert!(matches!(p("3\n"), Err(Error::Alist { line: 1, .. })));
        assert!(matches!(p("3 x\n"), Err(Error::Alist { line: 1, .. })));
        assert!(matches!(
            p("3 2\n2 2\n1 2 1\n"),
            Err(Error::Alist { line: 4, .. })
        ));
    }

    #[test]
    fn rejects_inconsistent_row_section() {
        let bad = REP3.replace("1 2\n2 3\n", "1 3\n2 2\n");
        assert!(matches!(p(&bad), Err(Error::Alist { line: 8, .. })));
    }
}
