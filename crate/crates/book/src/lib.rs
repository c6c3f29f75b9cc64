//! The guide's chapters as doc comments, so `cargo test` compiles and runs
//! every snippet in `book/src`. One module per chapter keeps failures
//! traceable to a file.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/words.md")]
pub mod words {}
#[doc = include_str!("../../../book/src/magnus.md")]
pub mod magnus {}
#[doc = include_str!("../../../book/src/commutators.md")]
pub mod commutators {}
#[doc = include_str!("../../../book/src/witnesses.md")]
pub mod witnesses {}
#[doc = include_str!("../../../book/src/surfaces.md")]
pub mod surfaces {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
