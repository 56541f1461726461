use std::io::Write;

/// One recorded iteration.
///
/// `k` counts states: row k describes the iterate `xᵏ` together with the
/// gradient `gᵏ` evaluated there and the momentum `β_k` in effect. Optional
/// fields are absent when undefined (ratio needs a previous displacement,
/// distance/suboptimality need a converged reference, wall time is recorded
/// only when timing is enabled).
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub k: u64,
    pub gamma: f64,
    pub beta: f64,
    pub ratio: Option<f64>,
    pub grad_norm: f64,
    pub dist_to_opt: Option<f64>,
    pub subopt: Option<f64>,
    pub wall_ms: Option<f64>,
}

/// Per-iteration record of a run. Rows are strictly increasing in `k`,
/// starting at 1, and every stored scalar is finite.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trace {
    pub rows: Vec<TraceRow>,
}

pub(crate) const CSV_HEADER: &str = "k,gamma,beta,ratio,grad_norm,dist_to_opt,subopt,wall_ms";

impl Trace {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn push(&mut self, row: TraceRow) {
        if let Some(last) = self.rows.last() {
            debug_assert!(row.k > last.k, "trace rows must be strictly increasing in k");
        }
        debug_assert!(row.gamma.is_finite() && row.beta.is_finite() && row.grad_norm.is_finite());
        self.rows.push(row);
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    /// Rows whose `k` falls in the final `fraction` of the run (by largest k).
    pub fn tail_fraction(&self, fraction: f64) -> &[TraceRow] {
        let Some(last) = self.rows.last() else {
            return &[];
        };
        let cutoff = last.k as f64 * (1.0 - fraction);
        let start = self.rows.partition_point(|r| (r.k as f64) <= cutoff);
        &self.rows[start..]
    }

    /// Writes the trace as CSV; missing values are emitted as empty fields.
    /// Output is byte-deterministic for a given trace.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.rows {
            write!(out, "{},{},{},", r.k, r.gamma, r.beta)?;
            write_opt(&mut out, r.ratio)?;
            write!(out, ",{},", r.grad_norm)?;
            write_opt(&mut out, r.dist_to_opt)?;
            out.write_all(b",")?;
            write_opt(&mut out, r.subopt)?;
            out.write_all(b",")?;
            write_opt(&mut out, r.wall_ms)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

fn write_opt<W: Write>(out: &mut W, v: Option<f64>) -> std::io::Result<()> {
    match v {
        Some(x) => write!(out, "{x}"),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(k: u64) -> TraceRow {
        TraceRow {
            k,
            gamma: 0.1,
            beta: 0.5,
            ratio: (k > 1).then_some(0.25),
            grad_norm: 1.0 / k as f64,
            dist_to_opt: Some(2.0),
            subopt: None,
            wall_ms: None,
        }
    }

    #[test]
    fn csv_format_is_stable() {
        let mut t = Trace::new();
        t.push(row(1));
        t.push(row(2));
        let csv = t.to_csv_string();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        assert_eq!(lines.next().unwrap(), "1,0.1,0.5,,1,2,,");
        assert_eq!(lines.next().unwrap(), "2,0.1,0.5,0.25,0.5,2,,");
        assert!(lines.next().is_none());
    }

    #[test]
    fn tail_fraction_selects_last_rows() {
        let mut t = Trace::new();
        for k in 1..=100 {
            t.push(row(k));
        }
        let tail = t.tail_fraction(0.1);
        assert_eq!(tail.first().unwrap().k, 91);
        assert_eq!(tail.last().unwrap().k, 100);
    }
}
