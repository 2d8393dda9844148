pub mod foundations;
pub mod pnl;
pub mod hol;
pub mod capture;
pub mod kernel;
pub mod translate;
pub mod semantics;
pub mod frontend;
