pub mod construct;
pub mod core2;
pub mod dyadic;
pub mod error;
pub mod exec;
pub mod golan;
pub mod groupcalc;
pub mod plmap;
pub mod repro;
pub mod sample;
pub mod treepair;

pub use dyadic::{CirclePoint, Dyadic};
pub use error::{Error, Result};
pub use exec::Exec;
pub use plmap::{Carrier, PLMap, Side};
pub use treepair::{BinaryWord, TreePair};
