use std::path::Path;

use super::{ConeModel, Polyhedral};
use crate::error::{Error, Result};

/// Parses "orthant:N", "sym:N", "spin:N", "poly:<path>" (or the built-in
/// "poly:square") and "sum:<spec>+<spec>…".
pub fn parse_model_spec(spec: &str) -> Result<ConeModel> {
    let spec = spec.trim();
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::input(format!("model spec '{spec}' has no ':'")))?;
    let size = || -> Result<usize> {
        rest.parse::<usize>()
            .map_err(|_| Error::input(format!("model spec '{spec}': expected a positive integer")))
    };
    match kind {
        "orthant" => ConeModel::orthant(size()?),
        "sym" => ConeModel::sym(size()?),
        "spin" => ConeModel::spin(size()?),
        "poly" => {
            if rest == "square" {
                Ok(ConeModel::Polyhedral(Polyhedral::square()))
            } else {
                // bare file names also resolve against ./models
                let direct = Path::new(rest);
                let shipped = Path::new("models").join(rest);
                let path = if !direct.exists() && shipped.exists() {
                    shipped.as_path()
                } else {
                    direct
                };
                Ok(ConeModel::Polyhedral(Polyhedral::load(path)?))
            }
        }
        "sum" => {
            let blocks = rest
                .split('+')
                .map(parse_model_spec)
                .collect::<Result<Vec<_>>>()?;
            ConeModel::direct_sum(blocks)
        }
        other => Err(Error::input(format!("unknown model kind '{other}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_kinds() {
        assert_eq!(
            parse_model_spec("orthant:4").unwrap(),
            ConeModel::Orthant(4)
        );
        assert_eq!(parse_model_spec("sym:3").unwrap(), ConeModel::SymMat(3));
        assert_eq!(parse_model_spec("spin:2").unwrap(), ConeModel::Spin(2));
        assert_eq!(
            parse_model_spec("poly:square").unwrap(),
            ConeModel::Polyhedral(Polyhedral::square())
        );
        assert_eq!(
            parse_model_spec("sum:orthant:2+spin:3").unwrap(),
            ConeModel::DirectSum(vec![ConeModel::Orthant(2), ConeModel::Spin(3)])
        );
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in [
            "orthant",
            "orthant:0",
            "cube:3",
            "sym:x",
            "poly:/nonexistent.json",
            "sum:",
        ] {
            assert!(
                matches!(parse_model_spec(bad), Err(Error::Input(_))),
                "{bad}"
            );
        }
    }
}
