//! File formats: CSV for tabulated functions, support lists, and density
//! series; breakpoint tables for Z functions; JSON for experiment reports.
//!
//! The parsers are strict — fixed headers, exact row shapes, no silent
//! recovery — because their inputs are untrusted files. Parse errors carry
//! the 1-based line number.

use std::io::Write;
use std::path::Path;

use crate::arithfn::ArithFunction;
use crate::construct::ZTable;
use crate::density::DensityEstimate;
use crate::error::{Error, Result};
use crate::experiment::ExperimentReport;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn text_of(bytes: &[u8]) -> Result<&str> {
    std::str::from_utf8(bytes).map_err(|e| parse_err(0, format!("not valid UTF-8: {e}")))
}

/// Writes the dense `n,value` CSV, one row per n in [1, N].
pub fn write_function_csv<W: Write + ?Sized>(w: &mut W, f: &ArithFunction) -> std::io::Result<()> {
    writeln!(w, "n,value")?;
    for (n, v) in f.iter() {
        writeln!(w, "{n},{v}")?;
    }
    Ok(())
}

/// Parses a dense `n,value` CSV: mandatory header, rows for n = 1, 2, ...
/// with no gaps, exact i64 values.
pub fn parse_function_csv(bytes: &[u8]) -> Result<ArithFunction> {
    let text = text_of(bytes)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "n,value" => {}
        Some((_, header)) => {
            return Err(parse_err(
                1,
                format!("expected header 'n,value', got '{header}'"),
            ))
        }
        None => return Err(parse_err(1, "empty input")),
    }
    let mut values = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            return Err(parse_err(line_no, "blank row"));
        }
        let (n_str, v_str) = line
            .split_once(',')
            .ok_or_else(|| parse_err(line_no, "expected 'n,value' row"))?;
        let n: u64 = n_str
            .trim()
            .parse()
            .map_err(|e| parse_err(line_no, format!("bad n '{n_str}': {e}")))?;
        if n != values.len() as u64 + 1 {
            return Err(parse_err(
                line_no,
                format!(
                    "rows must be contiguous from 1; expected n = {}",
                    values.len() + 1
                ),
            ));
        }
        let v: i64 = v_str
            .trim()
            .parse()
            .map_err(|e| parse_err(line_no, format!("bad value '{v_str}': {e}")))?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(parse_err(2, "no data rows"));
    }
    Ok(ArithFunction::from_values("csv", values))
}

/// Writes a sparse support CSV: rows only for the listed (n, value) points.
pub fn write_support_csv<W: Write + ?Sized>(
    w: &mut W,
    support: &[(u64, i64)],
) -> std::io::Result<()> {
    writeln!(w, "n,value")?;
    for &(n, v) in support {
        writeln!(w, "{n},{v}")?;
    }
    Ok(())
}

/// Parses a sparse support CSV: mandatory `n,value` header, strictly
/// increasing n >= 1, nonzero values.
pub fn parse_support_csv(bytes: &[u8]) -> Result<Vec<(u64, i64)>> {
    let text = text_of(bytes)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "n,value" => {}
        Some((_, header)) => {
            return Err(parse_err(
                1,
                format!("expected header 'n,value', got '{header}'"),
            ))
        }
        None => return Err(parse_err(1, "empty input")),
    }
    let mut out: Vec<(u64, i64)> = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            return Err(parse_err(line_no, "blank row"));
        }
        let (n_str, v_str) = line
            .split_once(',')
            .ok_or_else(|| parse_err(line_no, "expected 'n,value' row"))?;
        let n: u64 = n_str
            .trim()
            .parse()
            .map_err(|e| parse_err(line_no, format!("bad n '{n_str}': {e}")))?;
        if n < 1 {
            return Err(parse_err(line_no, "support points must be >= 1"));
        }
        if let Some(&(prev, _)) = out.last() {
            if n <= prev {
                return Err(parse_err(
                    line_no,
                    "support points must be strictly increasing",
                ));
            }
        }
        let v: i64 = v_str
            .trim()
            .parse()
            .map_err(|e| parse_err(line_no, format!("bad value '{v_str}': {e}")))?;
        if v == 0 {
            return Err(parse_err(line_no, "support values must be nonzero"));
        }
        out.push((n, v));
    }
    if out.is_empty() {
        return Err(parse_err(2, "no support points"));
    }
    Ok(out)
}

/// Parses Z-table breakpoints: mandatory `x,z` header, ascending x,
/// nondecreasing finite z.
pub fn parse_ztable(bytes: &[u8]) -> Result<ZTable> {
    let text = text_of(bytes)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "x,z" => {}
        Some((_, header)) => {
            return Err(parse_err(
                1,
                format!("expected header 'x,z', got '{header}'"),
            ))
        }
        None => return Err(parse_err(1, "empty input")),
    }
    let mut breakpoints = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            return Err(parse_err(line_no, "blank row"));
        }
        let (x_str, z_str) = line
            .split_once(',')
            .ok_or_else(|| parse_err(line_no, "expected 'x,z' row"))?;
        let x: u64 = x_str
            .trim()
            .parse()
            .map_err(|e| parse_err(line_no, format!("bad x '{x_str}': {e}")))?;
        let z: f64 = z_str
            .trim()
            .parse()
            .map_err(|e| parse_err(line_no, format!("bad z '{z_str}': {e}")))?;
        breakpoints.push((x, z));
    }
    ZTable::new(breakpoints)
}

/// Writes the checkpointed `x,count,ratio` CSV of a density estimate.
pub fn write_density_csv<W: Write + ?Sized>(
    w: &mut W,
    est: &DensityEstimate,
) -> std::io::Result<()> {
    writeln!(w, "x,count,ratio")?;
    for c in &est.checkpoints {
        writeln!(w, "{},{},{}", c.x, c.count, c.ratio)?;
    }
    Ok(())
}

pub fn report_to_json(report: &ExperimentReport) -> String {
    serde_json::to_string_pretty(report).expect("report serialization")
}

pub fn report_from_json(bytes: &[u8]) -> Result<ExperimentReport> {
    serde_json::from_slice(bytes).map_err(|e| parse_err(e.line(), e.to_string()))
}

pub fn read_function_csv_path(path: &Path) -> Result<ArithFunction> {
    parse_function_csv(&std::fs::read(path)?)
}

pub fn read_support_csv_path(path: &Path) -> Result<Vec<(u64, i64)>> {
    parse_support_csv(&std::fs::read(path)?)
}

pub fn read_ztable_path(path: &Path) -> Result<ZTable> {
    parse_ztable(&std::fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn function_csv_round_trip() {
        let f = ArithFunction::from_fn(30, |n| (n as i64 % 7) - 3, "t");
        let mut buf = Vec::new();
        write_function_csv(&mut buf, &f).unwrap();
        let back = parse_function_csv(&buf).unwrap();
        assert_eq!(back.limit(), f.limit());
        assert!(f.iter().zip(back.iter()).all(|((_, a), (_, b))| a == b));
    }

    #[test]
    fn function_csv_rejects_malformed() {
        assert!(parse_function_csv(b"").is_err());
        assert!(parse_function_csv(b"nope\n1,2\n").is_err());
        assert!(parse_function_csv(b"n,value\n").is_err());
        assert!(parse_function_csv(b"n,value\n2,5\n").is_err()); // gap
        assert!(parse_function_csv(b"n,value\n1,5\n3,7\n").is_err());
        assert!(parse_function_csv(b"n,value\n1,5\n1,5\n").is_err());
        assert!(parse_function_csv(b"n,value\n1,x\n").is_err());
        assert!(parse_function_csv(b"n,value\n1\n").is_err());
        assert!(parse_function_csv(&[0xff, 0xfe, b'\n']).is_err());
        // windows line endings are fine
        assert!(parse_function_csv(b"n,value\r\n1,5\r\n").is_ok());
    }

    #[test]
    fn support_csv_round_trip_and_validation() {
        let support = vec![(1u64, 1i64), (4, -1), (9, 2)];
        let mut buf = Vec::new();
        write_support_csv(&mut buf, &support).unwrap();
        assert_eq!(parse_support_csv(&buf).unwrap(), support);

        assert!(parse_support_csv(b"n,value\n4,1\n2,1\n").is_err());
        assert!(parse_support_csv(b"n,value\n4,0\n").is_err());
        assert!(parse_support_csv(b"n,value\n0,3\n").is_err());
    }

    #[test]
    fn ztable_parsing() {
        let t = parse_ztable(b"x,z\n2,0.5\n10,1.5\n").unwrap();
        assert_eq!(t.breakpoints().len(), 2);
        assert!(parse_ztable(b"x,z\n10,1.5\n2,0.5\n").is_err());
        assert!(parse_ztable(b"x,z\n2,nan\n").is_err());
        assert!(parse_ztable(b"x,z\n").is_err());
        assert!(parse_ztable(b"z\n2,1\n").is_err());
    }

    #[test]
    fn density_csv_shape() {
        let est = DensityEstimate::from_counts(&[10, 20], &[3, 7]);
        let mut buf = Vec::new();
        write_density_csv(&mut buf, &est).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x,count,ratio"));
        assert_eq!(lines.next(), Some("10,3,0.3"));
    }

    #[test]
    fn report_json_round_trip_keeps_verdict() {
        use crate::experiment::{CompareOp, Criterion, Verdict};
        let report = ExperimentReport {
            name: "roundtrip".into(),
            params: Default::default(),
            series: vec![],
            verdict: Verdict::from_criteria(vec![Criterion::check("c", 1.0, CompareOp::Le, 2.0)]),
            runtime_ms: 7,
        };
        let json = report_to_json(&report);
        let back = report_from_json(json.as_bytes()).unwrap();
        assert_eq!(back.name, "roundtrip");
        assert!(crate::experiment::recompute_verdict(&back).pass);
        assert!(report_from_json(b"{not json").is_err());
    }
}
