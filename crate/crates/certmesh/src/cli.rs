//! Command-line entry point.

/// Run the CLI; returns the process exit code.
pub fn run() -> i32 {
    eprintln!("not yet implemented");
    2
}
