use std::io::Write;

use crate::{CliError, CliResult};

/// One line of experiment output.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment: String,
    pub case: String,
    /// Inputs, in column order.
    pub params: Vec<(String, String)>,
    /// Computed quantities, in column order.
    pub values: Vec<(String, f64)>,
    pub tolerance: f64,
    pub pass: bool,
}

impl ResultRow {
    pub fn new(experiment: &str, case: impl Into<String>, tolerance: f64) -> Self {
        Self {
            experiment: experiment.to_string(),
            case: case.into(),
            params: Vec::new(),
            values: Vec::new(),
            tolerance,
            pass: true,
        }
    }

    pub fn param(mut self, name: &str, value: impl ToString) -> Self {
        self.params.push((name.to_string(), value.to_string()));
        self
    }

    pub fn value(mut self, name: &str, value: f64) -> Self {
        self.values.push((name.to_string(), value));
        self
    }

    pub fn check(mut self, ok: bool) -> Self {
        self.pass = self.pass && ok;
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }

    fn header(&self) -> Vec<String> {
        let mut h = vec!["experiment".to_string(), "case".to_string()];
        h.extend(self.params.iter().map(|(k, _)| k.clone()));
        h.extend(self.values.iter().map(|(k, _)| k.clone()));
        h.push("tolerance".into());
        h.push("pass".into());
        h
    }

    fn record(&self) -> Vec<String> {
        let mut r = vec![self.experiment.clone(), self.case.clone()];
        r.extend(self.params.iter().map(|(_, v)| v.clone()));
        r.extend(self.values.iter().map(|(_, v)| format_float(*v)));
        r.push(format_float(self.tolerance));
        r.push(self.pass.to_string());
        r
    }
}

/// Scientific notation with 17 significant digits.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else if x == 0.0 {
        // no negative zero in the output
        format!("{:.16e}", 0.0)
    } else {
        format!("{x:.16e}")
    }
}

/// Writes rows with a header taken from the first row; columns are the
/// union in first-seen order, missing cells left empty.
pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> CliResult<()> {
    let io = |e: csv::Error| CliError::Io(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = Vec::new();
    for row in rows {
        for h in row.header() {
            if !header.contains(&h) {
                header.push(h);
            }
        }
    }
    // keep tolerance and pass last
    header.retain(|h| h != "tolerance" && h != "pass");
    header.push("tolerance".into());
    header.push("pass".into());
    w.write_record(&header).map_err(io)?;
    for row in rows {
        let (names, cells) = (row.header(), row.record());
        let line: Vec<&str> = header
            .iter()
            .map(|h| names.iter().position(|n| n == h).map(|i| cells[i].as_str()).unwrap_or(""))
            .collect();
        w.write_record(&line).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(())
}
