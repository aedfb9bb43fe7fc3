//! Exact branch-and-cut solver for minimum spanning trees in hypergraphs.

pub mod bnc;
pub mod error;
pub mod harness;
pub mod hypergraph;
pub mod lp;
pub mod oracle;
pub mod pool;
pub mod separation;
pub mod strengthen;
pub mod subtour;

pub use error::{Error, Result};
