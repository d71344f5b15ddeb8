//! Exact finite-scale Ramsey computations over categories of embeddings.
//!
//! Structures and their embeddings are enumerated exhaustively; categories are
//! finite and explicit; every degree reported is either exact for the finite
//! category at hand or marked with the bound that stopped the search.

pub mod arrows;
pub mod category;
pub mod cli;
pub mod corpus;
pub mod degrees;
pub mod error;
pub mod expansion;
pub mod formulas;
pub mod search;
pub mod structures;
pub mod suites;

pub use error::{Error, Result};
pub use search::SearchConfig;
