//! Truncated series: period-Laurent coefficients, `q`-series, coordinate
//! polynomials over them, and matrices of all of these.

pub mod coeff;
pub mod logseries;
pub mod matseries;
pub mod series;

pub use coeff::CoeffScalar;
pub use logseries::{LogCtx, LogSeries};
pub use matseries::MatrixSeries;
pub use series::{total_degree, QExp, QSeries};
