pub mod parse;
pub mod reference;
pub mod report;

pub use parse::{parse_distributions, parse_outages, parse_producers, ParseError};
pub use reference::ReferenceData;
pub use report::{write_report, Report, ReportFormat};
