//! Exact scalar arithmetic: Laurent polynomials, rational functions in `q`,
//! q-integers and truncated series with rational exponents.

mod laurent;
mod qint;
mod ratfunc;
mod series;
mod zpoly;

pub use laurent::LaurentPoly;
pub use qint::{qbinomial, qfactorial, qnum};
pub use ratfunc::RatFunc;
pub use series::{
    euler_phi, jacobi_cube_series, partition_numbers, partition_series, pentagonal_series, Discrepancy,
    QSeries, TwoVarSeries,
};
