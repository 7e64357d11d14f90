use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] koszul_core::Error),
}

impl CliError {
    /// 2 for anything wrong with the input, 1 for failures while computing.
    pub fn exit_code(&self) -> i32 {
        use koszul_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Core(e) => match e {
                E::Parse { .. }
                | E::InhomogeneousRelation { .. }
                | E::RelationDegree { .. }
                | E::UnknownGenerator { .. }
                | E::InvalidPresentation(_)
                | E::InvalidBimodule(_)
                | E::UnknownPreset(_) => 2,
                _ => 1,
            },
        }
    }
}
