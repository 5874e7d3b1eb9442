//! Scenario catalog, scenario files, certification runs and reports.

pub mod catalog;
pub mod certify;
pub mod report;
pub mod scenario;

pub use catalog::{catalog, catalog_entries, find};
pub use certify::{run_certify, Certificate, CertifyOptions, Mode, Verdict};
pub use report::{certificate_json, summary_line, write_run};
pub use scenario::{parse_scenario, parse_scenario_str, Expected, GeneratorSpec, Scenario, ScenarioFile};
