//! Exact computations for N-qutrit Mermin operators.
//!
//! Everything lives in the cyclotomic ring `Z[α]`, `α = e^{2πi/9}`, so
//! eigenvalues, operator coefficients and hidden-variable maxima are
//! compared without rounding.
//!
//! * [`cyclo`]: ring arithmetic and phases `α^e`;
//! * [`pauli`]: the local bases `X`, `Y`, `W` and tensor words;
//! * [`ghz`]: GHZ states and eigenvalue checks;
//! * [`mermin`]: the operators `𝓜ₖ`, their quantum values and the closed form;
//! * [`hv`]: hidden-variable values and three maximization methods;
//! * [`report`]: tables, verification suites and the CLI plumbing.
//!
//! The `examples/` directory has one runnable program per module; the
//! `qutrit-mermin` binary exposes the report commands.

pub mod cyclo;
pub mod ghz;
pub mod hv;
pub mod mermin;
pub mod pauli;
pub mod report;
