//! Synthesis of Skolem functions for 2-QBF specifications `∃Y F(X,Y)`.
//!
//! The pipeline samples satisfying assignments of `F`, learns a candidate
//! function per output with decision trees, then repairs the candidates with
//! counterexamples from an error formula until the candidate vector is proven
//! correct.

pub mod formula;
pub mod generator;
pub mod learner;
pub mod maxsat;
pub mod pipeline;
pub mod preprocess;
pub mod refiner;
pub mod sampler;
pub mod sat;
pub mod seed;
