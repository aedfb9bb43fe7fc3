//! Instance files, random instance generation and the mode experiment.

pub mod experiment;
pub mod generate;
pub mod io;

pub use experiment::{
    mean_small_mass, run_experiment, run_root, write_csvs, ExperimentRecord, HISTOGRAM_CSV, ITERATIONS_CSV,
};
pub use generate::{generate_instance, random_instance, GeneratorParams};
pub use io::{parse_instance, parse_instance_labeled, read_instance_file, write_instance, write_instance_file, Instance};
