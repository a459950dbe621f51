//! Planar intersections of the Hermitian curve `x^{q+1} = y^q + y` over
//! GF(q²) with parabolas `y = ax² + bx + c`: a closed-form classifier, an
//! exhaustive oracle, and the Hermitian codes whose weight-4 words depend on
//! those counts.

pub mod census;
pub mod classify;
pub mod codes;
pub mod curve;
pub mod error;
pub mod gf;
pub mod linalg;
pub mod oracle;

pub use census::{CensusMode, CensusTable};
pub use classify::{classify, ClassificationResult};
pub use curve::{CurvePoint, LambdaAut, Parabola};
pub use error::{Error, Result};
pub use gf::{Elem, FieldCtx};

/// Environment variable overriding the largest `q` the exhaustive routines
/// accept.
pub const MAX_Q_ENV: &str = "HERMITIAN_MAX_Q";

/// Default bound on `q` for exhaustive enumeration.
pub const DEFAULT_MAX_Q: u64 = 16;

/// Worker count and enumeration bound for the parallel routines. Results never
/// depend on `workers`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub workers: usize,
    pub max_q: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            max_q: DEFAULT_MAX_Q,
        }
    }
}

impl RunOptions {
    /// Defaults, with `max_q` taken from `HERMITIAN_MAX_Q` when set.
    pub fn from_env() -> Result<Self> {
        let mut opts = Self::default();
        if let Ok(v) = std::env::var(MAX_Q_ENV) {
            opts.max_q = v
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("{MAX_Q_ENV}={v:?} is not an integer")))?;
        }
        Ok(opts)
    }

    /// Runs `f` on a dedicated pool of `workers` threads.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers.max(1))
            .build()
            .expect("thread pool")
            .install(f)
    }
}
