use std::fmt::Write as _;
use std::path::Path;

use crate::amplitude::AmplitudeTrace;
use crate::channel::RateFunctions;
use crate::error::{Error, Result};

/// One line of amplitude output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputRow {
    pub t: f64,
    pub re_a: f64,
    pub im_a: f64,
    pub abs2_a: f64,
    pub gamma_t: Option<f64>,
    pub eps_t: Option<f64>,
}

impl OutputRow {
    pub fn new(t: f64, re_a: f64, im_a: f64) -> Self {
        Self {
            t,
            re_a,
            im_a,
            abs2_a: re_a * re_a + im_a * im_a,
            gamma_t: None,
            eps_t: None,
        }
    }

    pub fn with_rates(mut self, gamma: f64, eps: f64) -> Self {
        self.gamma_t = Some(gamma);
        self.eps_t = Some(eps);
        self
    }
}

/// Rows for a trace, with rate columns when `rates` is given.
pub fn rows_from_trace(trace: &AmplitudeTrace, rates: Option<&RateFunctions>) -> Vec<OutputRow> {
    trace
        .samples()
        .enumerate()
        .map(|(k, (t, a))| {
            let row = OutputRow::new(t, a.re, a.im);
            match rates {
                Some(r) => row.with_rates(r.gamma()[k], r.eps()[k]),
                None => row,
            }
        })
        .collect()
}

/// Shortest decimal that parses back to the same `f64`; scientific notation
/// outside `[1e-5, 1e16)`. Negative zero prints as `0`.
pub fn format_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    let abs = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&abs) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// CSV text: header `t,re_a,im_a,abs2_a`, plus `,gamma,eps` when the first
/// row carries rates. Lines end in `\n`.
pub fn render_csv(rows: &[OutputRow]) -> Result<String> {
    let with_rates = rows.first().is_some_and(|r| r.gamma_t.is_some());
    let mut out = String::from(if with_rates {
        "t,re_a,im_a,abs2_a,gamma,eps\n"
    } else {
        "t,re_a,im_a,abs2_a\n"
    });
    for row in rows {
        if row.gamma_t.is_some() != with_rates || row.eps_t.is_some() != with_rates {
            return Err(Error::BadParameter(
                "rows mix present and absent rate columns".into(),
            ));
        }
        let _ = write!(
            out,
            "{},{},{},{}",
            format_float(row.t),
            format_float(row.re_a),
            format_float(row.im_a),
            format_float(row.abs2_a)
        );
        if let (Some(g), Some(e)) = (row.gamma_t, row.eps_t) {
            let _ = write!(out, ",{},{}", format_float(g), format_float(e));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_csv(rows: &[OutputRow], path: &Path) -> Result<()> {
    let text = render_csv(rows)?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// Reads the `abs2_a` column of a file written by [`write_csv`].
pub fn read_abs2_column(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap_or_default().split(',').collect();
    let col = header
        .iter()
        .position(|h| *h == "abs2_a")
        .ok_or_else(|| Error::ConfigParse(format!("{}: no abs2_a column", path.display())))?;
    lines
        .map(|line| {
            let fields: Vec<&str> = line.split(',').collect();
            let parse = |i: usize| -> Result<f64> {
                fields.get(i).and_then(|f| f.parse().ok()).ok_or_else(|| {
                    Error::ConfigParse(format!("{}: bad line `{line}`", path.display()))
                })
            };
            Ok((parse(0)?, parse(col)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_only_and_unit_row() {
        assert_eq!(render_csv(&[]).unwrap(), "t,re_a,im_a,abs2_a\n");
        assert_eq!(
            render_csv(&[OutputRow::new(0.0, 1.0, -0.0)]).unwrap(),
            "t,re_a,im_a,abs2_a\n0,1,0,1\n"
        );
    }

    #[test]
    fn float_format_round_trips() {
        for x in [
            0.1,
            1.0 / 3.0,
            2.5e-7,
            6.02e23,
            -1e-300,
            123456.789,
            f64::MIN_POSITIVE,
        ] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_float(2.5e-7), "2.5e-7");
        assert_eq!(format_float(0.25), "0.25");
    }

    #[test]
    fn rate_columns() {
        let rows = [OutputRow::new(0.5, 0.6, 0.8).with_rates(1.0, 2.0)];
        assert_eq!(
            render_csv(&rows).unwrap(),
            "t,re_a,im_a,abs2_a,gamma,eps\n0.5,0.6,0.8,1,1,2\n"
        );
        let mixed = [rows[0], OutputRow::new(1.0, 0.5, 0.0)];
        assert!(render_csv(&mixed).is_err());
    }
}
