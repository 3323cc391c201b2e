use std::io::Read;

use liegeom::catalog::{get_case, CatalogCase};
use liegeom::document::{AlgebraDocument, Formula, Params};
use liegeom::Scalar;
use sha2::{Digest, Sha256};

use crate::args::InputArgs;
use crate::error::CliError;

/// A document ready for dispatch, with the catalog case it came from.
pub struct LoadedInput {
    pub document: AlgebraDocument,
    pub case: Option<CatalogCase>,
}

impl LoadedInput {
    /// SHA-256 of the canonical JSON of the document after overrides.
    pub fn digest(&self) -> String {
        sha256_hex(self.document.to_json().as_bytes())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn merge_params(existing: Option<Params>, alpha: Option<&Scalar>, beta: Option<&Scalar>) -> Result<Option<Params>, CliError> {
    match (existing, alpha, beta) {
        (existing, None, None) => Ok(existing),
        (Some(p), a, b) => Ok(Some(Params {
            alpha: a.cloned().unwrap_or(p.alpha),
            beta: b.cloned().unwrap_or(p.beta),
        })),
        (None, Some(a), Some(b)) => Ok(Some(Params { alpha: a.clone(), beta: b.clone() })),
        (None, _, _) => Err(CliError::Usage("--alpha and --beta must be given together".into())),
    }
}

fn read_source(path: &std::path::Path) -> Result<String, CliError> {
    let io = |source| CliError::Io { path: path.display().to_string(), source };
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(io)?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

/// Loads `--input` or `--case` and applies the parameter and drift overrides.
pub fn load(args: &InputArgs) -> Result<LoadedInput, CliError> {
    let (mut document, case) = match (&args.input, args.case) {
        (Some(path), _) => {
            let mut doc = AlgebraDocument::from_json(&read_source(path)?)?;
            doc.params = merge_params(doc.params.take(), args.alpha.as_ref(), args.beta.as_ref())?;
            (doc, None)
        }
        (None, Some(id)) => {
            let params = merge_params(None, args.alpha.as_ref(), args.beta.as_ref())?;
            let case = get_case(id, params)?;
            (case.document(), Some(case))
        }
        (None, None) => return Err(CliError::Usage("one of --input or --case is required".into())),
    };
    if let Some(drift) = &args.drift {
        document.drift = Some(drift.raw.iter().map(|s| Formula(s.clone())).collect());
    }
    document.validate_shape()?;
    Ok(LoadedInput { document, case })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::parse_vector;

    fn args(case: Option<u32>) -> InputArgs {
        InputArgs { input: None, case, alpha: None, beta: None, drift: None }
    }

    #[test]
    fn case_overrides_are_merged() {
        let mut a = args(Some(4));
        a.alpha = Some("1".parse().unwrap());
        a.beta = Some("1".parse().unwrap());
        a.drift = Some(parse_vector("0,0,0,1/2").unwrap());
        let loaded = load(&a).unwrap();
        assert_eq!(loaded.document.drift.as_ref().unwrap()[3].0, "1/2");
        assert!(loaded.document.params.is_some());
        assert_eq!(loaded.digest().len(), 64);
    }

    #[test]
    fn lone_parameter_is_rejected() {
        let mut a = args(Some(4));
        a.alpha = Some("1".parse().unwrap());
        assert!(matches!(load(&a), Err(CliError::Usage(_))));
    }

    #[test]
    fn drift_of_wrong_length_is_an_input_error() {
        let mut a = args(Some(1));
        a.drift = Some(parse_vector("0,1/2").unwrap());
        assert!(matches!(load(&a), Err(CliError::Core(liegeom::Error::Input(_)))));
    }
}
