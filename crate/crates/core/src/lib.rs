//! Level-four multiple T-values: index algebra, the `𝒜 → λ` expansion,
//! high-precision `T̃` numerics and a double-precision integral oracle.

pub mod algebra;
pub mod combination;
pub mod error;
pub mod expansion;
pub mod index;
pub mod numerics;
pub mod oracle;
pub mod parallel;
pub mod reference;

pub use algebra::{GaussianRational, SPoly};
pub use combination::{FormalCombination, Monomial, TailSymbol};
pub use error::{Error, Result};
pub use expansion::{
    closed_form_for, closed_form_one_two, closed_form_ones_two, duality_relation, expand_a,
    lambda_expansion, shuffle_relation_at_one, sum_relation, BinomialVariant, CircledSemantics,
    ExpansionTerm, LambdaIdentity, SumRelation,
};
pub use index::{Index, IndexCombination, Letter, SplitMode, Word};
pub use numerics::{ttilde, BigComplex, BigReal, Evaluator, ExecMode, PrecisionPolicy};
