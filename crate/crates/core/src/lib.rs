//! Simulator for an arbitrated quantum signature protocol built on GHZ
//! triplets and one-time pads.

pub mod adversary;
pub mod cipher;
pub mod protocol;
pub mod quantum;
