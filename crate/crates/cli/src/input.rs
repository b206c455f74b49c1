use std::path::Path;
use std::str::FromStr;

use aea_core::LimbBase;
use num_bigint::BigUint;
use num_traits::Num;

use crate::CliError;

/// Decimal, or hexadecimal with a `0x` prefix.
pub fn parse_uint(s: &str) -> Result<BigUint, CliError> {
    let t = s.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => BigUint::from_str_radix(hex, 16),
        None => BigUint::from_str_radix(t, 10),
    };
    parsed.map_err(|_| CliError::Usage(format!("not a nonnegative integer literal: `{s}`")))
}

/// `binary:W` or `decimal:d`.
#[derive(Debug, Clone, Copy)]
pub struct BaseArg(pub LimbBase);

impl FromStr for BaseArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, width) = s
            .split_once(':')
            .ok_or_else(|| format!("expected binary:W or decimal:d, got `{s}`"))?;
        let width: u32 = width.parse().map_err(|_| format!("bad width in `{s}`"))?;
        let base = match kind {
            "binary" => LimbBase::binary(width),
            "decimal" => LimbBase::decimal(width),
            _ => return Err(format!("unknown base kind `{kind}`")),
        };
        base.map(BaseArg).map_err(|e| e.to_string())
    }
}

/// The operand pair, from two literals or a file holding two literals.
pub fn pair(values: &[String], file: Option<&Path>) -> Result<(BigUint, BigUint), CliError> {
    let owned;
    let words: Vec<&str> = match (values, file) {
        ([], Some(path)) => {
            owned = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            owned.split_whitespace().collect()
        }
        ([_, _], None) => values.iter().map(String::as_str).collect(),
        _ => {
            return Err(CliError::Usage(
                "give exactly one input source: two integers or --file".into(),
            ))
        }
    };
    match words.as_slice() {
        [u, v] => Ok((parse_uint(u)?, parse_uint(v)?)),
        _ => Err(CliError::Usage(format!(
            "expected two integers, found {}",
            words.len()
        ))),
    }
}
