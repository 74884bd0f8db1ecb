//! Fixture parsing, pipeline orchestration and JSON reports for the
//! `boundaryk` command.

pub mod commands;
pub mod fixture;
pub mod pipeline;
pub mod report;
