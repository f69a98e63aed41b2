// mdbook cannot run listings that depend on workspace crates, so each chapter
// is pulled in as a module doc and checked by `cargo test --doc`.

#[doc = include_str!("../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../book/src/model.md")]
pub mod model {}
#[doc = include_str!("../../book/src/product.md")]
pub mod product {}
#[doc = include_str!("../../book/src/distortion.md")]
pub mod distortion {}
#[doc = include_str!("../../book/src/size.md")]
pub mod size {}
#[doc = include_str!("../../book/src/scenarios.md")]
pub mod scenarios {}
