//! Problem files, random problems and differential checks for selective
//! unification.

pub mod diff;
pub mod format;
pub mod gen;
pub mod regress;
