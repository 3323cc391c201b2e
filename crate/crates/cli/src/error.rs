use liegeom::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    /// 1 for malformed input, 2 for a violated mathematical precondition.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_precondition() => 2,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => match e {
                Error::DimensionMismatch { .. } => "dimension_mismatch",
                Error::Input(_) => "input",
                Error::Parse(_) => "parse",
                Error::NotPositiveDefinite => "not_positive_definite",
                Error::DegeneratePlane => "degenerate_plane",
                Error::SingularTransform => "singular_transform",
                Error::NormBound { .. } => "norm_bound",
                Error::ZeroDirection => "zero_direction",
                Error::NonBerwald => "non_berwald",
                Error::CaseOutOfRange(_) | Error::UnexpectedParams(_) | Error::MissingParams(_) => "catalog",
            },
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preconditions_exit_with_two() {
        for e in [Error::NormBound { norm_squared: "4".into() }, Error::DegeneratePlane, Error::NonBerwald] {
            assert_eq!(CliError::from(e).exit_code(), 2);
        }
        assert_eq!(CliError::from(Error::NotPositiveDefinite).exit_code(), 1);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
    }
}
