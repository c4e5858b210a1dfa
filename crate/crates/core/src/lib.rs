//! Low-bandwidth repair of Reed-Solomon codes through trace queries.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod format;
pub mod gf;
pub mod repair;
pub mod rs;
pub mod schemes;
pub mod search;
pub mod sim;

pub use error::{Error, Result};
pub use gf::{make_tower, Field, FieldElem, FieldTower};
pub use repair::{RepairScheme, RepairTranscript, SchemeReport};
pub use rs::{PolyF, RsCode};
