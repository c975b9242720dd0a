//! Command line and HTTP front ends over `mbc-core`.

pub mod app;
pub mod render;
pub mod service;

pub use app::run;
