//! The guide's chapters, compiled so `cargo test` runs every snippet.

#[doc = include_str!("../../../book/src/registers.md")]
pub mod registers {}
#[doc = include_str!("../../../book/src/families.md")]
pub mod families {}
#[doc = include_str!("../../../book/src/algorithms.md")]
pub mod algorithms {}
#[doc = include_str!("../../../book/src/sharing.md")]
pub mod sharing {}
#[doc = include_str!("../../../book/src/histories.md")]
pub mod histories {}
#[doc = include_str!("../../../book/src/generator.md")]
pub mod generator {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
