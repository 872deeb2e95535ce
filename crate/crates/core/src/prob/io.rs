//! JSON file formats for distributions, kernels and deterministic models.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Alphabet, DeterministicModel, Distribution, Kernel};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::Scalar;

/// Column-sum tolerance accepted when loading a kernel from disk.
pub const FILE_KERNEL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionFile {
    pub labels: Vec<String>,
    pub probs: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelFile {
    pub input_labels: Vec<String>,
    pub output_labels: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub input_labels: Vec<String>,
    pub output_labels: Vec<String>,
    pub map: Vec<usize>,
}

/// Either flavour of model file.
#[derive(Debug, Clone)]
pub enum Model<T> {
    Kernel(Kernel<T>),
    Deterministic(DeterministicModel),
}

impl<T: Scalar> Model<T> {
    pub fn kernel(&self) -> Kernel<T> {
        match self {
            Model::Kernel(k) => k.clone(),
            Model::Deterministic(f) => super::one_hot_kernel(f),
        }
    }

    pub fn input(&self) -> &Alphabet {
        match self {
            Model::Kernel(k) => k.input(),
            Model::Deterministic(f) => f.input(),
        }
    }
}

impl DistributionFile {
    pub fn from_dist<T: Scalar>(d: &Distribution<T>) -> Self {
        DistributionFile {
            labels: d.alphabet().labels().to_vec(),
            probs: d.probs().iter().map(|p| p.as_f64()).collect(),
        }
    }

    pub fn into_dist<T: Scalar>(self) -> Result<Distribution<T>> {
        let alphabet = Alphabet::new(self.labels)?;
        Distribution::new(alphabet, self.probs.into_iter().map(T::lit).collect())
    }
}

impl KernelFile {
    pub fn from_kernel<T: Scalar>(k: &Kernel<T>) -> Self {
        KernelFile {
            input_labels: k.input().labels().to_vec(),
            output_labels: k.output().labels().to_vec(),
            matrix: k
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(|v| v.as_f64()).collect())
                .collect(),
        }
    }

    /// Checks column sums against [`FILE_KERNEL_TOL`] and renormalizes.
    pub fn into_kernel<T: Scalar>(self) -> Result<Kernel<T>> {
        let input = Alphabet::new(self.input_labels)?;
        let output = Alphabet::new(self.output_labels)?;
        kernel_from_loose_rows(input, output, &self.matrix)
    }
}

impl ModelFile {
    pub fn from_model(f: &DeterministicModel) -> Self {
        ModelFile {
            input_labels: f.input().labels().to_vec(),
            output_labels: f.output().labels().to_vec(),
            map: f.map().to_vec(),
        }
    }

    pub fn into_model(self) -> Result<DeterministicModel> {
        DeterministicModel::new(
            Alphabet::new(self.input_labels)?,
            Alphabet::new(self.output_labels)?,
            self.map,
        )
    }
}

pub(crate) fn kernel_from_loose_rows<T: Scalar>(
    input: Alphabet,
    output: Alphabet,
    rows: &[Vec<f64>],
) -> Result<Kernel<T>> {
    if rows.len() != output.len() || rows.iter().any(|r| r.len() != input.len()) {
        return Err(Error::shape(format!(
            "kernel matrix must be {} rows of {} entries",
            output.len(),
            input.len()
        )));
    }
    let mut mat = Mat::from_fn(output.len(), input.len(), |r, c| rows[r][c]);
    for c in 0..mat.cols() {
        let col = mat.col_mut(c);
        if let Some(bad) = col.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::domain(format!("kernel column {c} has invalid entry {bad}")));
        }
        let s: f64 = col.iter().sum();
        if (s - 1.0).abs() > FILE_KERNEL_TOL {
            return Err(Error::domain(format!("kernel column {c} sums to {s}")));
        }
        col.iter_mut().for_each(|v| *v /= s);
    }
    let mat = Mat::from_fn(mat.rows(), mat.cols(), |r, c| T::lit(mat[(r, c)]));
    Kernel::new(input, output, mat)
}

fn read<D: for<'de> Deserialize<'de>>(path: &Path) -> Result<D> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn write<S: Serialize>(path: &Path, value: &S) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn read_distribution<T: Scalar>(path: impl AsRef<Path>) -> Result<Distribution<T>> {
    read::<DistributionFile>(path.as_ref())?.into_dist()
}

pub fn write_distribution<T: Scalar>(path: impl AsRef<Path>, d: &Distribution<T>) -> Result<()> {
    write(path.as_ref(), &DistributionFile::from_dist(d))
}

pub fn read_kernel<T: Scalar>(path: impl AsRef<Path>) -> Result<Kernel<T>> {
    read::<KernelFile>(path.as_ref())?.into_kernel()
}

pub fn write_kernel<T: Scalar>(path: impl AsRef<Path>, k: &Kernel<T>) -> Result<()> {
    write(path.as_ref(), &KernelFile::from_kernel(k))
}

pub fn read_deterministic(path: impl AsRef<Path>) -> Result<DeterministicModel> {
    read::<ModelFile>(path.as_ref())?.into_model()
}

pub fn write_deterministic(path: impl AsRef<Path>, f: &DeterministicModel) -> Result<()> {
    write(path.as_ref(), &ModelFile::from_model(f))
}

/// Parses a model file, deciding between `"map"` and `"matrix"` payloads.
pub fn parse_model<T: Scalar>(text: &str) -> Result<Model<T>> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let has = |key| value.get(key).is_some();
    match (has("map"), has("matrix")) {
        (true, false) => Ok(Model::Deterministic(serde_json::from_value::<ModelFile>(value)?.into_model()?)),
        (false, true) => Ok(Model::Kernel(serde_json::from_value::<KernelFile>(value)?.into_kernel()?)),
        _ => Err(Error::domain("model file needs exactly one of `map` or `matrix`")),
    }
}

pub fn read_model<T: Scalar>(path: impl AsRef<Path>) -> Result<Model<T>> {
    parse_model(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_loader_renormalizes_within_tolerance() {
        let f = KernelFile {
            input_labels: vec!["a".into(), "b".into()],
            output_labels: vec!["u".into(), "v".into()],
            matrix: vec![vec![0.3, 0.5], vec![0.7 + 5e-7, 0.5]],
        };
        let k: Kernel<f64> = f.clone().into_kernel().unwrap();
        let s: f64 = k.column(0).iter().sum();
        assert!((s - 1.0).abs() < 1e-15);

        let mut bad = f;
        bad.matrix[1][0] = 0.71;
        assert!(bad.into_kernel::<f64>().is_err());
    }

    #[test]
    fn model_detection() {
        let m: Model<f64> =
            parse_model(r#"{"input_labels":["a","b"],"output_labels":["y"],"map":[0,0]}"#).unwrap();
        assert!(matches!(m, Model::Deterministic(_)));
        let m: Model<f64> =
            parse_model(r#"{"input_labels":["a"],"output_labels":["y","z"],"matrix":[[0.5],[0.5]]}"#).unwrap();
        assert!(matches!(m, Model::Kernel(_)));
        assert!(parse_model::<f64>(r#"{"input_labels":["a"]}"#).is_err());
    }

    #[test]
    fn round_trip_through_files() {
        let dir = std::env::temp_dir().join(format!("oil-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let d = Distribution::new(Alphabet::new(["p", "q", "r"]).unwrap(), vec![0.1, 0.2, 0.7]).unwrap();
        write_distribution(dir.join("d.json"), &d).unwrap();
        assert_eq!(read_distribution::<f64>(dir.join("d.json")).unwrap(), d);

        let k = Kernel::from_rows(
            d.alphabet().clone(),
            Alphabet::indexed(2).unwrap(),
            &[vec![0.25, 1.0, 0.5], vec![0.75, 0.0, 0.5]],
        )
        .unwrap();
        write_kernel(dir.join("k.json"), &k).unwrap();
        assert_eq!(read_kernel::<f64>(dir.join("k.json")).unwrap(), k);
        fs::remove_dir_all(dir).unwrap();
    }
}
