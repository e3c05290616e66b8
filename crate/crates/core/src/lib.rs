//! Argument mining over issue-tracker discussions.
//!
//! Threads are segmented into quotes, quotes are tokenized and turned into
//! sparse feature vectors, and linear classifiers label each quote as
//! argumentative or not, then by component and standpoint.

pub mod classifiers;
pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod features;
pub mod par;
pub mod pipeline;
pub mod preprocess;
pub mod synthetic;
pub mod task;

pub use error::{Error, Result};
