//! Task scheduling and order-independent aggregation.

use rayon::prelude::*;

use super::records::SerRecord;
use crate::error::{Error, Result};

/// Run `n` independent tasks, optionally on a dedicated pool of `parallel`
/// threads. Results come back in task order whatever the schedule.
pub(crate) fn run_tasks<T, F>(n: usize, parallel: Option<usize>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    let work = || (0..n).into_par_iter().map(&f).collect::<Result<Vec<T>>>();
    match parallel {
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            pool.install(work)
        }
        None => work(),
    }
}

/// Per-user error counts of every receiver in one task.
#[derive(Debug, Clone, Default)]
pub(crate) struct Tally {
    pub symbols_per_user: u64,
    pub entries: Vec<(String, Vec<u64>)>,
}

impl Tally {
    pub fn new(symbols_per_user: u64) -> Self {
        Self {
            symbols_per_user,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, label: impl Into<String>, per_user: Vec<u64>) {
        self.entries.push((label.into(), per_user));
    }

    /// Element-wise sum; labels must line up.
    pub fn merge(&mut self, other: &Tally) {
        if self.entries.is_empty() {
            *self = other.clone();
            return;
        }
        self.symbols_per_user += other.symbols_per_user;
        for ((la, a), (lb, b)) in self.entries.iter_mut().zip(&other.entries) {
            debug_assert_eq!(la, lb);
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    pub fn records(
        &self,
        experiment: &str,
        snr_db: f64,
        frame: i64,
        seed: u64,
        per_user: bool,
    ) -> Vec<SerRecord> {
        let mut out = Vec::new();
        for (label, errs) in &self.entries {
            let symbols = self.symbols_per_user * errs.len() as u64;
            let errors = errs.iter().sum();
            out.push(SerRecord::new(
                experiment, label, snr_db, frame, symbols, errors, seed,
            ));
            if per_user {
                for (u, &e) in errs.iter().enumerate() {
                    out.push(SerRecord::new(
                        experiment,
                        &format!("{label}#user{u}"),
                        snr_db,
                        frame,
                        self.symbols_per_user,
                        e,
                        seed,
                    ));
                }
            }
        }
        out
    }
}
