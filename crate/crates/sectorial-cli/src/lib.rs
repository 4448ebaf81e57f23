//! Library surface of the harness: file formats, falsification sweeps,
//! sharpness comparisons, and the worked-example regression table. The
//! `sectorial` binary is a thin argument parser over these modules.

pub mod io;
pub mod reproduce;
pub mod run;
pub mod sharp;
