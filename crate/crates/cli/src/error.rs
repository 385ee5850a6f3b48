use thiserror::Error;

/// Process exit code for a successful run.
pub const EXIT_OK: i32 = 0;
/// A numerical check recorded in the metadata failed.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// The configuration was rejected.
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical error: {0}")]
    Numerical(#[from] phasepad::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed data file: {0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use phasepad::Error as E;
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            // Parameters the library rejects before computing anything.
            CliError::Numerical(
                E::Config(_)
                | E::InvalidAxis(_)
                | E::Degree(..)
                | E::Aliasing(_)
                | E::Range(_)
                | E::Truncation(_)
                | E::Domain(_)
                | E::NotImplemented(_),
            ) => EXIT_CONFIG,
            CliError::Numerical(_) | CliError::Io(_) | CliError::Data(_) => EXIT_CHECK_FAILED,
        }
    }
}
