//! Library surface of the relay command-line tool: configuration
//! resolution, record serialization and the scan drivers. The `relay`
//! binary is a thin dispatcher over these.

pub mod config;
pub mod record;
pub mod scan;
