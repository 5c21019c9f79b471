pub mod exact;
pub mod poly;
pub mod graph;
pub mod cohomology;
pub mod facering;
pub mod quotient;
pub mod fixtures;
