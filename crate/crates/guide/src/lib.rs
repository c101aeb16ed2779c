//! The book chapters, compiled as doc tests so their snippets stay runnable.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/cones.md")]
pub mod cones {}
#[doc = include_str!("../../../book/src/models.md")]
pub mod models {}
#[doc = include_str!("../../../book/src/chambers.md")]
pub mod chambers {}
#[doc = include_str!("../../../book/src/stable-base-loci.md")]
pub mod stable_base_loci {}
#[doc = include_str!("../../../book/src/comparisons.md")]
pub mod comparisons {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
