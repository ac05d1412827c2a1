pub mod geom;
pub mod lambda;
pub mod term;
pub mod proto;
pub mod engine;
pub mod params;
pub mod dif;
pub mod checks;

pub use engine::{absorb, compose_h, compose_v, degree, reduce, reduce_split, word, RawDiagram, Slice};
pub use lambda::HPoly;
pub use params::DifParams;
pub use term::{Arc, ArcKind, BasisDiagram, Dir, End, Morphism, Word};

#[cfg(test)]
mod engine_tests;

#[cfg(test)]
mod dif_tests;
