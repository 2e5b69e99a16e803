use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;

pub const CSV_HEADER: &str = "experiment,receiver,snr_db,frame,symbols,errors,ser,seed";

/// Pooled symbol-error count for one receiver at one operating point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SerRecord {
    pub experiment: String,
    pub receiver: String,
    pub snr_db: f64,
    /// Frame index for the adaptive experiment, −1 otherwise.
    pub frame: i64,
    pub symbols: u64,
    pub errors: u64,
    pub ser: f64,
    pub seed: u64,
}

impl SerRecord {
    pub fn new(
        experiment: &str,
        receiver: &str,
        snr_db: f64,
        frame: i64,
        symbols: u64,
        errors: u64,
        seed: u64,
    ) -> Self {
        let ser = if symbols == 0 {
            0.0
        } else {
            errors as f64 / symbols as f64
        };
        Self {
            experiment: experiment.to_string(),
            receiver: receiver.to_string(),
            snr_db,
            frame,
            symbols,
            errors,
            ser,
            seed,
        }
    }

    /// Binomial standard error `sqrt(p(1−p)/n)`.
    pub fn std_error(&self) -> f64 {
        if self.symbols == 0 {
            return 0.0;
        }
        (self.ser * (1.0 - self.ser) / self.symbols as f64).sqrt()
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.experiment,
            self.receiver,
            self.snr_db,
            self.frame,
            self.symbols,
            self.errors,
            self.ser,
            self.seed
        )
    }
}

/// Render records as CSV text (header included, LF line endings).
pub fn to_csv_string(records: &[SerRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

pub fn write_csv(records: &[SerRecord], path: impl AsRef<Path>) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    f.write_all(to_csv_string(records).as_bytes())?;
    f.flush()?;
    Ok(())
}

/// Is `a.ser` below `b.ser` by more than `k` standard errors of the
/// difference?
pub fn significantly_lower(a: &SerRecord, b: &SerRecord, k: f64) -> bool {
    let se = (a.std_error().powi(2) + b.std_error().powi(2)).sqrt();
    b.ser - a.ser > k * se
}
