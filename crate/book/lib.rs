// mdbook cannot run listings that depend on a local crate, so every chapter
// is pulled in as a module doc comment and `cargo test` runs the listings as
// doctests. One module per chapter keeps failures traceable to a file.

#[doc = include_str!("src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("src/groups.md")]
pub mod groups {}
#[doc = include_str!("src/su2.md")]
pub mod su2 {}
#[doc = include_str!("src/models.md")]
pub mod models {}
#[doc = include_str!("src/circle.md")]
pub mod circle {}
#[doc = include_str!("src/torsion.md")]
pub mod torsion {}
#[doc = include_str!("src/volume-form.md")]
pub mod volume_form {}
#[doc = include_str!("src/symmetry.md")]
pub mod symmetry {}
#[doc = include_str!("src/cli.md")]
pub mod cli {}
