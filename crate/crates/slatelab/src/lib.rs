//! A laboratory for slate-based recommendation with reinforcement learning.
//!
//! The crate simulates sessions of a user interacting with a recommender that
//! serves slates of `k` documents drawn from per-event candidate sets. Item
//! long-term values are learned with temporal-difference methods on an
//! item-decomposed Q-function, and slates are assembled by exact or heuristic
//! optimizers over the induced fractional objective.

pub mod agents;
pub mod choice;
pub mod config;
pub mod corpus;
pub mod error;
pub mod fixtures;
pub mod harness;
pub mod qmodel;
pub mod slate_opt;
pub mod user;

pub use error::SlateError;

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, SlateError>;
