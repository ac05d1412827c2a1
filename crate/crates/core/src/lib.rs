//! Exact symbolic engine for p-DG categorified quantum sl(2) at a prime root
//! of unity: p-complexes, differentials on symmetric functions and nilHecke
//! algebras, a diagrammatic rewrite engine with its multiparameter
//! differentials, fantastic-filtration certification, and the Grothendieck
//! layer over the cyclotomic integers O_p.

pub mod scalars;
pub mod pcomplex;
pub mod symfun;
pub mod nilhecke;
pub mod diagcat;
pub mod dsl;
pub mod filtration;
pub mod groth;
pub mod report;
