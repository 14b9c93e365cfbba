//! The chapters of `book/`, included so `cargo test` runs their snippets.

#[doc = include_str!("../../../book/src/overview.md")]
pub mod overview {}

#[doc = include_str!("../../../book/src/data.md")]
pub mod data {}

#[doc = include_str!("../../../book/src/dataset-adapter.md")]
pub mod dataset_adapter {}

#[doc = include_str!("../../../book/src/index.md")]
pub mod index {}

#[doc = include_str!("../../../book/src/cascade.md")]
pub mod cascade {}

#[doc = include_str!("../../../book/src/evaluation.md")]
pub mod evaluation {}

#[doc = include_str!("../../../book/src/hybrid.md")]
pub mod hybrid {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
