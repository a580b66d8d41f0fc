#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod cocycle;
pub mod error;
pub mod form;
pub mod group;
pub mod json;
pub mod lagrangian;
pub mod modular;
pub mod orbifold;
pub mod qmodz;
