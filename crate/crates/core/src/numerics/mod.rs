//! High-precision evaluation of T̃-values and formal combinations.

mod bigreal;
mod eval;
mod series;

pub use bigreal::{bits_for_digits, BigComplex, BigReal};
pub use eval::{ttilde_batch, ExecMode, Evaluator};
pub use series::{dirichlet_beta, ttilde, PrecisionPolicy};

pub(crate) use bigreal::{with_consts, RM};
