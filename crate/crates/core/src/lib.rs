pub mod catalog;
pub mod graph;
pub mod jumps;
pub mod lattice;
pub mod monoid;
pub mod checks;
pub mod cli;
pub mod verify;
