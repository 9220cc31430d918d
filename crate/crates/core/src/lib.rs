pub mod algebra;
pub mod chain;
pub mod cli;
pub mod cwmodel;
pub mod error;
pub mod laurent;
pub mod linalg;
pub mod repspace;
pub mod su2;
pub mod symm;
pub mod torsion;
pub mod volform;
