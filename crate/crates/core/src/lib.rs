//! Exact and certified computation for Thue inequalities `|F(x, y)| ≤ m` and equations
//! `|F(x, y)| = m` over integral binary forms.

pub mod error;
pub mod forms;
pub mod numeric;
pub mod poly;
pub mod primes;
pub mod roots;
pub mod solver;
pub mod bounds;
pub mod logcurve;
pub mod audit;

pub use error::{Error, ParseError, Result};
pub use forms::{BinaryForm, IntMatrix2};
pub use numeric::{Interval, Tri};

/// Precision and tolerance knobs shared by every certified computation.
#[derive(Clone, Debug)]
pub struct Config {
    /// Starting working precision in bits.
    pub precision: usize,
    /// Precision budget; exceeding it yields `NonConvergence`.
    pub max_precision: usize,
    /// Absolute diameter bound on root enclosures.
    pub root_tol: f64,
    /// Relative width bound on the Mahler-measure enclosure.
    pub mahler_rel_tol: f64,
    /// Largest degree for the certified irreducibility search.
    pub irreducible_search_cap: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            precision: numeric::DEFAULT_PRECISION,
            max_precision: 4096,
            root_tol: 1e-20,
            mahler_rel_tol: 1e-12,
            irreducible_search_cap: 8,
        }
    }
}
