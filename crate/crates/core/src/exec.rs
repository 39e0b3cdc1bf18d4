//! Sequential / data-parallel evaluation of residual sweeps.
//!
//! Every identity check in this crate reduces a residual over a set of lattice
//! stencils with `max`. [`sweep`] runs that reduction either on the rayon pool
//! (feature `parallel`) or on the calling thread. Without the feature,
//! [`Exec::Parallel`] silently runs sequentially.

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// True when the parallel path is compiled in and selected.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Max-reduced residual statistics of one sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepStats {
    pub max_residual: f64,
    pub count: usize,
    pub skipped: usize,
}

impl Default for SweepStats {
    fn default() -> Self {
        SweepStats { max_residual: 0.0, count: 0, skipped: 0 }
    }
}

impl SweepStats {
    fn record(mut self, outcome: &Result<f64>) -> Self {
        match outcome {
            Ok(r) => {
                self.count += 1;
                // NaN must never pass a tolerance check
                let r = if r.is_nan() { f64::INFINITY } else { r.abs() };
                if r > self.max_residual {
                    self.max_residual = r;
                }
            }
            Err(e) if e.is_skippable() => self.skipped += 1,
            Err(_) => {
                self.count += 1;
                self.max_residual = f64::INFINITY;
            }
        }
        self
    }

    pub fn merge(self, other: SweepStats) -> SweepStats {
        SweepStats {
            max_residual: self.max_residual.max(other.max_residual),
            count: self.count + other.count,
            skipped: self.skipped + other.skipped,
        }
    }

    /// At least one stencil evaluated and the maximum within tolerance.
    pub fn passes(&self, tol: f64) -> bool {
        self.count > 0 && self.max_residual <= tol
    }
}

/// Evaluates `residual` on each item and max-reduces.
///
/// Skippable errors (see [`crate::Error::is_skippable`]) are counted in
/// `skipped`; any other error poisons the sweep with an infinite residual.
pub fn sweep<T, F>(items: &[T], exec: Exec, residual: F) -> SweepStats
where
    T: Sync,
    F: Fn(&T) -> Result<f64> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items
            .par_iter()
            .fold(SweepStats::default, |acc, item| acc.record(&residual(item)))
            .reduce(SweepStats::default, SweepStats::merge);
    }
    let _ = exec;
    items
        .iter()
        .fold(SweepStats::default(), |acc, item| acc.record(&residual(item)))
}

/// Maps `f` over `items`, in parallel when requested, preserving order.
pub fn map_collect<T, U, F>(items: &[T], exec: Exec, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn sweep_counts_and_skips() {
        let items: Vec<i32> = (0..100).collect();
        for exec in [Exec::Sequential, Exec::Parallel] {
            let stats = sweep(&items, exec, |&i| {
                if i % 10 == 0 {
                    Err(Error::Domain("edge".into()))
                } else {
                    Ok(-(i as f64))
                }
            });
            assert_eq!(stats.count, 90);
            assert_eq!(stats.skipped, 10);
            assert_eq!(stats.max_residual, 99.0);
        }
    }

    #[test]
    fn nan_and_hard_errors_fail() {
        let stats = sweep(&[1, 2], Exec::Sequential, |&i| if i == 1 { Ok(f64::NAN) } else { Ok(0.0) });
        assert!(!stats.passes(1.0));
        let stats = sweep(&[1], Exec::Sequential, |_| Err(Error::Malformed("x".into())));
        assert!(!stats.passes(1.0));
    }

    #[test]
    fn empty_sweep_does_not_pass() {
        let stats = sweep::<i32, _>(&[], Exec::Parallel, |_| Ok(0.0));
        assert!(!stats.passes(1.0));
    }
}
