//! Configuration, factor cache and commands behind the `piecel` binary.

pub mod cache;
pub mod commands;
pub mod config;

pub use commands::Session;
pub use config::CurveConfig;

/// Attaches the originating module to a core error.
pub fn core_err(module: &'static str) -> impl Fn(piecel_core::Error) -> anyhow::Error {
    move |e| anyhow::anyhow!("{module}: {e}")
}
