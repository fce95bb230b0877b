//! Exact verification toolkit for LP relaxations of capacitated and
//! lower-bounded facility location: instance families, standard, star and
//! constellation relaxations, an exact rational simplex, the Lovász–Schrijver
//! lifting operator and the witness constructions that certify survival.

pub mod error;
pub mod instances;
pub mod lp;
pub mod ls_hierarchy;
pub mod proper_constructions;
pub mod rational;
pub mod relaxations;
pub mod solver;
pub mod witnesses;

pub use error::{Error, Result};
pub use rational::Q;
