//! Exact counting of acyclic orientations on generalized Sierpinski gaskets.

pub mod cache;
pub mod derive;
pub mod error;
pub mod gasket;
pub mod oracle;
pub mod growth;
pub mod precision;
pub mod reference;
pub mod recur;
pub mod states;
pub mod verify;

pub use derive::{Polynomial, RecursionSystem};
pub use error::{Error, Result};
pub use gasket::{build_gasket, build_layout, GasketGraph, GasketSpec, Graph, GluingLayout};
pub use oracle::{BigCount, Orientation};
pub use recur::{builtin_system, iterate, ClassVector, StageSequence};
pub use states::{ClassTable, CornerPoset};
