//! File formats and factory strings: the row-major matrix JSON used by
//! every command, named-state factories, and strategy parsing.

use entkit_core::qla::{ComplexMatrix, DensityMatrix};
use entkit_core::states::{self, BellKind, StateVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// {"dims": [...], "re": [[...]], "im": [[...]]}, row-major.
#[derive(Serialize, Deserialize)]
pub struct MatrixJson {
    pub dims: Vec<usize>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let n = rho.order();
        let m = rho.matrix();
        let re = (0..n)
            .map(|r| (0..n).map(|c| m[(r, c)].re).collect())
            .collect();
        let im = (0..n)
            .map(|r| (0..n).map(|c| m[(r, c)].im).collect())
            .collect();
        MatrixJson {
            dims: rho.dims().to_vec(),
            re,
            im,
        }
    }

    pub fn to_density(&self) -> Result<DensityMatrix, CliError> {
        let order: usize = self.dims.iter().product();
        if self.re.len() != order || self.im.len() != order {
            return Err(CliError::usage("matrix rows do not match dims"));
        }
        let mut m = ComplexMatrix::zeros(order, order);
        for r in 0..order {
            if self.re[r].len() != order || self.im[r].len() != order {
                return Err(CliError::usage("matrix columns do not match dims"));
            }
            for c in 0..order {
                m[(r, c)] = Complex64::new(self.re[r][c], self.im[r][c]);
            }
        }
        DensityMatrix::new(m, self.dims.clone())
            .map_err(|e| CliError::usage(format!("invalid density matrix: {e}")))
    }
}

/// Loads a state from a JSON file path or builds it from a factory
/// string such as `ghz:3`, `werner2:0.75` or `wernersym:0.0:3`.
pub fn load_state(source: &str) -> Result<DensityMatrix, CliError> {
    if std::path::Path::new(source).exists() {
        let text = std::fs::read_to_string(source)
            .map_err(|e| CliError::usage(format!("cannot read {source}: {e}")))?;
        let parsed: MatrixJson = serde_json::from_str(&text)
            .map_err(|e| CliError::usage(format!("cannot parse {source}: {e}")))?;
        return parsed.to_density();
    }
    factory_state(source)
}

pub fn factory_state(spec: &str) -> Result<DensityMatrix, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = |what: &str| CliError::usage(format!("factory `{spec}`: {what}"));
    let pure = |v: StateVector| Ok(v.to_density());
    match parts[0] {
        "bell" => {
            let kind = match parts.get(1).copied().unwrap_or("phi+") {
                "phi+" => BellKind::PhiPlus,
                "phi-" => BellKind::PhiMinus,
                "psi+" => BellKind::PsiPlus,
                "psi-" => BellKind::PsiMinus,
                other => return Err(bad(&format!("unknown Bell kind `{other}`"))),
            };
            pure(states::bell(kind))
        }
        "ghz" => {
            let n: usize = parse_at(&parts, 1, spec)?;
            pure(states::ghz(n).map_err(CliError::compute)?)
        }
        "w" => {
            let n: usize = parse_at(&parts, 1, spec)?;
            pure(states::w_state(n).map_err(CliError::compute)?)
        }
        "cluster4" => pure(states::cluster4()),
        "product" => {
            let bits = parts
                .get(1)
                .ok_or_else(|| bad("missing bit string"))?
                .chars()
                .map(|c| match c {
                    '0' => Ok(0u8),
                    '1' => Ok(1u8),
                    _ => Err(bad("bit string must be 0s and 1s")),
                })
                .collect::<Result<Vec<_>, _>>()?;
            pure(states::product_basis_state(&bits))
        }
        "schmidt" => {
            let probs: Vec<f64> = parts
                .get(1)
                .ok_or_else(|| bad("missing coefficient list"))?
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| bad("coefficients must be numbers"))?;
            let total: f64 = probs.iter().sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(bad("Schmidt probabilities must sum to 1"));
            }
            pure(states::schmidt_diagonal_state(&probs, probs.len()))
        }
        "werner2" => {
            let lambda: f64 = parse_at(&parts, 1, spec)?;
            states::werner2(lambda).map_err(CliError::compute)
        }
        "wernersym" => {
            let lambda: f64 = parse_at(&parts, 1, spec)?;
            let n: usize = parse_at(&parts, 2, spec)?;
            states::werner_sym(lambda, n).map_err(CliError::compute)
        }
        other => Err(bad(&format!("unknown factory `{other}`"))),
    }
}

fn parse_at<T: std::str::FromStr>(parts: &[&str], idx: usize, spec: &str) -> Result<T, CliError> {
    parts
        .get(idx)
        .ok_or_else(|| CliError::usage(format!("factory `{spec}`: missing argument {idx}")))?
        .parse::<T>()
        .map_err(|_| CliError::usage(format!("factory `{spec}`: bad argument {idx}")))
}

/// Comma-separated subsystem indices of side A, e.g. `0` or `0,2`.
pub fn parse_cut(cut: &str) -> Result<Vec<usize>, CliError> {
    cut.split(',')
        .map(|x| x.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::usage(format!("bad cut `{cut}`")))
}

/// Comma list of Schmidt probabilities, normalized on entry.
pub fn parse_spectrum(list: &str) -> Result<entkit_core::qla::OrderedSpectrum, CliError> {
    let values: Vec<f64> = list
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::usage(format!("bad spectrum `{list}`")))?;
    if values.iter().any(|&x| x < 0.0) || values.is_empty() {
        return Err(CliError::usage("spectrum entries must be non-negative"));
    }
    Ok(entkit_core::qla::OrderedSpectrum::new(values))
}

/// Partition of subsystems: groups separated by `/`, members by commas,
/// e.g. `0,1/2/3`.
pub fn parse_split(split: &str) -> Result<Vec<Vec<usize>>, CliError> {
    split
        .split('/')
        .map(|group| {
            group
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| CliError::usage(format!("bad split `{split}`")))
        })
        .collect()
}

/// Twelve significant digits, locale-free; pinned for golden files.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.11e}")
}
