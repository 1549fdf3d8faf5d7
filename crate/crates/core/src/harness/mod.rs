//! Example generation, theorem checkers, descriptors and reports.

pub mod checks;
pub mod descriptor;
pub mod generate;
pub mod report;
pub mod suite;

pub use checks::{
    check_prop13, check_prop7, check_theorem11, check_theorem14, check_theorem9, run_check, spectral_facts_suite,
    Theorem,
};
pub use descriptor::SystemDescriptor;
pub use generate::{generate_action, generate_examples, generate_with, Family, GeneratorConfig};
pub use report::VerdictReport;
pub use suite::{run_suite, run_suite_with, SuiteReport};
