//! Library side of the experiment driver: sweep configuration, execution,
//! and rendering. The `csbm` binary is a thin dispatcher over this and the
//! core crate.

pub mod sweep;
