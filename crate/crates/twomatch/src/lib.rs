pub mod cli;
pub mod format;
pub mod parallel;
pub mod random;
