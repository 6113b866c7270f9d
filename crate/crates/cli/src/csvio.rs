//! Two-column numeric CSV: comma separator, `.` decimal point, LF or CRLF
//! line endings, blank lines skipped, and an optional single header line
//! auto-detected by a non-numeric first row. Parse errors carry 1-based line
//! numbers and the offending token.

use std::fmt::Write as _;

/// The scale a file declared for its two columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsvScale {
    /// Header `u,v`: copula-scale points, expected inside [0, 1]².
    Unit,
    /// Header `x,y`: data-scale points; rank-transform before unit-square use.
    Raw,
    /// No header, or an unrecognized one: decide by value range.
    Unknown,
}

fn parse_row(line: &str) -> Result<(f64, f64), String> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 2 {
        return Err(format!(
            "expected 2 comma-separated values, found {}",
            fields.len()
        ));
    }
    let mut out = [0.0f64; 2];
    for (slot, token) in out.iter_mut().zip(&fields) {
        let t = token.trim();
        let value: f64 = t
            .parse()
            .map_err(|_| format!("could not parse `{t}` as a number"))?;
        if !value.is_finite() {
            return Err(format!("non-finite value `{t}`"));
        }
        *slot = value;
    }
    Ok((out[0], out[1]))
}

fn header_scale(line: &str) -> CsvScale {
    let squeezed: String = line
        .to_ascii_lowercase()
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '"')
        .collect();
    match squeezed.as_str() {
        "u,v" => CsvScale::Unit,
        "x,y" => CsvScale::Raw,
        _ => CsvScale::Unknown,
    }
}

/// Parses two-column CSV text into (declared scale, data rows).
pub fn read_pairs(text: &str) -> Result<(CsvScale, Vec<(f64, f64)>), String> {
    let mut scale = CsvScale::Unknown;
    let mut rows = Vec::new();
    let mut first_content = true;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() {
            continue;
        }
        if first_content {
            first_content = false;
            if parse_row(line).is_err() {
                scale = header_scale(line);
                continue;
            }
        }
        let lineno = idx + 1;
        rows.push(parse_row(line).map_err(|e| format!("line {lineno}: {e}"))?);
    }
    Ok((scale, rows))
}

/// Renders rows under a header with full shortest-round-trip precision.
pub fn render_csv(header: &str, rows: &[(f64, f64)]) -> String {
    let mut out = String::with_capacity(rows.len() * 40 + header.len() + 1);
    out.push_str(header);
    out.push('\n');
    for &(a, b) in rows {
        let _ = writeln!(out, "{a},{b}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_headerless_data() {
        let (scale, rows) = read_pairs("0.25,0.5\n0.75,0.125\n").unwrap();
        assert_eq!(scale, CsvScale::Unknown);
        assert_eq!(rows, vec![(0.25, 0.5), (0.75, 0.125)]);
    }

    #[test]
    fn detects_headers_and_crlf() {
        let (scale, rows) = read_pairs("u,v\r\n0.25,0.5\r\n").unwrap();
        assert_eq!(scale, CsvScale::Unit);
        assert_eq!(rows, vec![(0.25, 0.5)]);

        let (scale, _) = read_pairs("x, Y\n1.5,2.5\n").unwrap();
        assert_eq!(scale, CsvScale::Raw);

        let (scale, rows) = read_pairs("alpha,beta\n1,2\n").unwrap();
        assert_eq!(scale, CsvScale::Unknown);
        assert_eq!(rows, vec![(1.0, 2.0)]);
    }

    #[test]
    fn skips_blank_lines() {
        let (_, rows) = read_pairs("\n0.1,0.2\n\n0.3,0.4\n\n").unwrap();
        assert_eq!(rows.len(), 2);
    }

    #[test]
    fn reports_line_numbers_and_tokens() {
        let err = read_pairs("u,v\n0.1,0.2\n0.3,oops\n").unwrap_err();
        assert!(err.contains("line 3"), "{err}");
        assert!(err.contains("oops"), "{err}");

        let err = read_pairs("0.1,0.2\n0.3,0.4,0.5\n").unwrap_err();
        assert!(err.contains("line 2"), "{err}");
        assert!(err.contains("found 3"), "{err}");

        let err = read_pairs("0.1,0.2\nnan,0.4\n").unwrap_err();
        assert!(err.contains("line 2"), "{err}");
        assert!(err.contains("non-finite"), "{err}");
    }

    #[test]
    fn round_trips_full_precision() {
        let rows = vec![(0.123456789012345678, 2.0 / 3.0), (1e-15, 0.9999999999999999)];
        let text = render_csv("u,v", &rows);
        let (scale, back) = read_pairs(&text).unwrap();
        assert_eq!(scale, CsvScale::Unit);
        assert_eq!(back, rows);
    }

    #[test]
    fn header_only_file_is_empty_data() {
        let (scale, rows) = read_pairs("u,v\n").unwrap();
        assert_eq!(scale, CsvScale::Unit);
        assert!(rows.is_empty());
    }
}
