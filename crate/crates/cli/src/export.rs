//! alist and MatrixMarket coordinate text formats.

use liftcodes::{Field, Matrix};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("alist is binary only, field has q = {0}")]
    NotBinary(u32),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn perr(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse { line, msg: msg.into() }
}

fn padded(list: &[usize], width: usize) -> String {
    let mut v: Vec<String> = list.iter().map(|i| (i + 1).to_string()).collect();
    v.resize(width, "0".to_string());
    v.join(" ")
}

/// "n m", "max_col max_row", one line per column, one line per row; index
/// lists are 1-based and padded with zeros.
pub fn to_alist(m: &Matrix) -> Result<String, FormatError> {
    if m.field().q() != 2 {
        return Err(FormatError::NotBinary(m.field().q()));
    }
    let (rows, cols) = m.shape();
    let row_lists: Vec<Vec<usize>> = (0..rows).map(|i| m.row(i).iter().map(|e| e.0).collect()).collect();
    let t = m.transpose();
    let col_lists: Vec<Vec<usize>> = (0..cols).map(|j| t.row(j).iter().map(|e| e.0).collect()).collect();
    let max_c = col_lists.iter().map(Vec::len).max().unwrap_or(0);
    let max_r = row_lists.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = format!("{cols} {rows}\n{max_c} {max_r}\n");
    for l in &col_lists {
        out.push_str(&padded(l, max_c));
        out.push('\n');
    }
    for l in &row_lists {
        out.push_str(&padded(l, max_r));
        out.push('\n');
    }
    Ok(out)
}

fn ints(line: usize, s: &str) -> Result<Vec<usize>, FormatError> {
    s.split_whitespace()
        .map(|t| t.parse().map_err(|_| perr(line, format!("'{t}' is not a number"))))
        .collect()
}

pub fn from_alist(text: &str) -> Result<Matrix, FormatError> {
    let lines: Vec<&str> = text.lines().collect();
    let get = |i: usize| lines.get(i).copied().ok_or_else(|| perr(i + 1, "unexpected end of file"));
    let [cols, rows] = <[usize; 2]>::try_from(ints(1, get(0)?)?).map_err(|_| perr(1, "expected 'n m'"))?;
    let [max_c, max_r] = <[usize; 2]>::try_from(ints(2, get(1)?)?).map_err(|_| perr(2, "expected two weights"))?;
    let mut from_cols = Vec::new();
    for j in 0..cols {
        let l = ints(j + 3, get(j + 2)?)?;
        if l.len() != max_c {
            return Err(perr(j + 3, format!("column list must have {max_c} entries")));
        }
        for &i in l.iter().filter(|&&i| i != 0) {
            if i > rows {
                return Err(perr(j + 3, format!("row {i} out of range")));
            }
            from_cols.push((i - 1, j));
        }
    }
    let mut from_rows = Vec::new();
    for i in 0..rows {
        let ln = cols + i + 3;
        let l = ints(ln, get(ln - 1)?)?;
        if l.len() != max_r {
            return Err(perr(ln, format!("row list must have {max_r} entries")));
        }
        for &j in l.iter().filter(|&&j| j != 0) {
            if j > cols {
                return Err(perr(ln, format!("column {j} out of range")));
            }
            from_rows.push((i, j - 1));
        }
    }
    from_cols.sort_unstable();
    from_rows.sort_unstable();
    if from_cols != from_rows {
        return Err(perr(cols + 3, "row and column lists disagree"));
    }
    let trip: Vec<(usize, usize, u32)> = from_rows.into_iter().map(|(i, j)| (i, j, 1)).collect();
    Ok(Matrix::from_triplets(Field::binary(), rows, cols, trip))
}

pub const MM_HEADER: &str = "%%MatrixMarket matrix coordinate integer general";

/// Entries are field representatives in 0..q, sorted by (row, col).
pub fn to_matrix_market(m: &Matrix) -> String {
    let (rows, cols) = m.shape();
    let mut out = format!("{MM_HEADER}\n{rows} {cols} {}\n", m.nnz());
    for (i, j, x) in m.triplets() {
        out.push_str(&format!("{} {} {x}\n", i + 1, j + 1));
    }
    out
}

pub fn from_matrix_market(text: &str, field: Field) -> Result<Matrix, FormatError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, l)) if l.trim() == MM_HEADER => {}
        _ => return Err(perr(1, "missing MatrixMarket header")),
    }
    let mut lines = lines.filter(|(_, l)| !l.starts_with('%'));
    let (ln, dims) = lines.next().ok_or_else(|| perr(2, "missing size line"))?;
    let d = ints(ln + 1, dims)?;
    let [rows, cols, nnz] = <[usize; 3]>::try_from(d).map_err(|_| perr(ln + 1, "expected 'rows cols nnz'"))?;
    let mut trip = Vec::with_capacity(nnz);
    for (ln, l) in lines {
        let v = ints(ln + 1, l)?;
        let [i, j, x] = <[usize; 3]>::try_from(v).map_err(|_| perr(ln + 1, "expected 'row col value'"))?;
        if i == 0 || j == 0 || i > rows || j > cols {
            return Err(perr(ln + 1, "index out of range"));
        }
        if x as u64 >= field.q() as u64 {
            return Err(perr(ln + 1, format!("value {x} is not below q = {}", field.q())));
        }
        trip.push((i - 1, j - 1, x as u32));
    }
    if trip.len() != nnz {
        return Err(perr(0, format!("expected {nnz} entries, found {}", trip.len())));
    }
    Ok(Matrix::from_triplets(field, rows, cols, trip))
}
