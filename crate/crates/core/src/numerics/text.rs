//! Plain-text matrix format: one row per line, whitespace-separated entries in
//! `re+imj` form, `#` starts a comment.

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Parses a matrix from the text format. A single non-comment line yields a
/// 1×r matrix, which callers may treat as a diagonal.
pub fn parse_matrix(input: &str) -> Result<ComplexMatrix> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    let mut width = None;
    for (line_idx, raw_line) in input.lines().enumerate() {
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        let mut col = 0;
        for (start, token) in tokens_with_columns(line) {
            let value = parse_entry(token).map_err(|message| Error::Parse {
                line: line_idx + 1,
                column: start + 1,
                message,
            })?;
            row.push(value);
            col = start;
        }
        if let Some(w) = width {
            if row.len() != w {
                return Err(Error::Parse {
                    line: line_idx + 1,
                    column: col + 1,
                    message: format!("expected {w} entries per row, found {}", row.len()),
                });
            }
        } else {
            width = Some(row.len());
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "no matrix rows found".into(),
        });
    }
    ComplexMatrix::from_rows(&rows)
}

/// Renders a matrix in the text format accepted by [`parse_matrix`].
pub fn format_matrix(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| format_entry(m.get(i, j))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn format_entry(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.im < 0.0 {
        format!("{}-{}j", c.re, -c.im)
    } else {
        format!("{}+{}j", c.re, c.im)
    }
}

fn tokens_with_columns(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace().map(move |token| {
        // split_whitespace yields subslices of `line`, so offsets are exact
        let start = token.as_ptr() as usize - line.as_ptr() as usize;
        (start, token)
    })
}

/// Accepts `a`, `bj`, `a+bj`, `a-bj` with decimal or scientific mantissas.
fn parse_entry(token: &str) -> std::result::Result<Complex64, String> {
    if let Some(body) = token.strip_suffix('j').or_else(|| token.strip_suffix('J')) {
        // the sign that separates real and imaginary parts is the last +/- not
        // directly after an exponent marker and not leading
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let b = bytes[i];
            if (b == b'+' || b == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
                split = Some(i);
                break;
            }
        }
        match split {
            Some(i) => {
                let re: f64 = body[..i]
                    .parse()
                    .map_err(|_| format!("invalid real part `{}`", &body[..i]))?;
                let im_str = &body[i..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str
                        .parse()
                        .map_err(|_| format!("invalid imaginary part `{im_str}`"))?
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im: f64 = if body.is_empty() {
                    1.0
                } else if body == "-" {
                    -1.0
                } else {
                    body.parse()
                        .map_err(|_| format!("invalid imaginary part `{body}`"))?
                };
                Ok(Complex64::new(0.0, im))
            }
        }
    } else {
        let re: f64 = token
            .parse()
            .map_err(|_| format!("invalid entry `{token}`"))?;
        Ok(Complex64::new(re, 0.0))
    }
}
