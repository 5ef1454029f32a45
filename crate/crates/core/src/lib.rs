//! Braid monodromy of trinomial algebraic functions `Y^{mn} - X^g Y^{mp} + X^r = 0`.

pub mod braid;
pub mod cache;
pub mod dd;
pub mod equation;
pub mod galois;
pub mod gamma;
pub mod laurent;
pub mod paths;
pub mod predictor;
pub mod projection;
pub mod report;
pub mod series;
pub mod svg;
pub mod tracker;
pub mod turns;
pub mod twists;
