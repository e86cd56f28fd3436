//! Instance generation, the text instance format and the benchmark harness
//! behind the `lcs-bench` binary.

pub mod bench;
pub mod instance;
pub mod verify_suite;

pub use bench::{run_bench, write_csv, Algorithm, BenchConfig, BenchError, BenchRow};
pub use instance::{generate, read_instance, write_instance, Family, InstanceError, InstanceSpec};
