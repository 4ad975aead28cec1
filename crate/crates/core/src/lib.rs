//! Enumeration of the stable extensions of abstract argumentation frameworks.
//!
//! Two backtracking engines share one contract: [`set_enum`] works directly
//! on argument sets and is the readable reference, [`label_enum`] runs the
//! same search over a labelling with attacker counters and a trail. The
//! [`oracle`] module checks everything against the definition by exhaustive
//! search.

pub mod argset;
pub mod extension;
pub mod framework;
pub mod generators;
pub mod invariants;
pub mod io;
pub mod label_enum;
pub mod oracle;
pub mod search;
pub mod set_enum;

pub use argset::{ArgId, ArgSet};
pub use extension::Extension;
pub use framework::{Framework, FrameworkBuilder, FrameworkError};
pub use search::{PickStrategy, Propagation, SearchStats};
