pub mod fields;
pub mod matrices;
pub mod canonical;
pub mod report;
pub mod oracle;
pub mod obstruction;
pub mod decomp;
pub mod cli;
