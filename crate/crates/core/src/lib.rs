//! Subsampled r-index: a compressed self-index over a run-length BWT whose
//! end-of-run suffix-array samples are thinned so that no three retained
//! samples fall within distance `s`. Counting costs `O(m + s)` LF-steps and
//! each occurrence is located in at most `s` steps.
//!
//! ```
//! use srindex::{build_index, BuildOptions, Text, Variant};
//!
//! let text = Text::from_bytes(b"abracadabra").unwrap();
//! let index = build_index(&text, &BuildOptions::new(4, Variant::ValidArea)).unwrap();
//! assert_eq!(index.count(b"abra").unwrap().occ(), 2);
//! let mut hits = index.locate(b"abra").unwrap();
//! hits.sort_unstable();
//! assert_eq!(hits, vec![1, 8]);
//! ```

pub mod bench;
pub mod build;
mod codec;
pub mod error;
pub mod locate;
pub mod oracle;
pub mod persist;
pub mod query;
pub mod rlbwt;
pub mod subsample;
pub mod succinct;
pub mod suffix;
pub mod text;

pub use build::{build_index, build_index_from_context, BuildOptions, VerifyLevel};
pub use error::{BuildError, PersistError, QueryError, SubsampleError, TextError};
pub use query::{CountResult, LocateStats, SrIndex};
pub use subsample::Variant;
pub use suffix::SuffixContext;
pub use text::{PatternSet, Text};
