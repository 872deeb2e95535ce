use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ordered set of distinct, non-empty symbol labels.
///
/// Cloning is cheap; kernels and distributions share one label table.
#[derive(Clone)]
pub struct Alphabet {
    labels: Arc<[String]>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::domain("alphabet must contain at least one symbol"));
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for l in &labels {
            if l.is_empty() {
                return Err(Error::domain("alphabet labels must be non-empty"));
            }
            if !seen.insert(l.as_str()) {
                return Err(Error::domain(format!("duplicate alphabet label `{l}`")));
            }
        }
        Ok(Alphabet { labels: labels.into() })
    }

    /// Alphabet labelled `"0"`, `"1"`, ... `"n-1"`.
    pub fn indexed(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    // An alphabet is never empty; kept for clippy's len-without-is-empty lint.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Sub-alphabet keeping the listed positions, in order.
    pub fn select(&self, keep: &[usize]) -> Result<Self> {
        Self::new(keep.iter().map(|&i| self.labels[i].clone()))
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels.iter()).finish()
    }
}
