use crate::error::{Error, Result};
use crate::prob::{Alphabet, Distribution};
use crate::scalar::Scalar;

/// Empirical output frequencies from symbol indices.
pub fn estimate_r<T: Scalar>(observed: &[usize], alphabet: &Alphabet) -> Result<Distribution<T>> {
    if observed.is_empty() {
        return Err(Error::Degenerate("no observations".into()));
    }
    let mut counts = vec![0usize; alphabet.len()];
    for &o in observed {
        *counts
            .get_mut(o)
            .ok_or_else(|| Error::shape(format!("symbol index {o} outside alphabet of size {}", alphabet.len())))? += 1;
    }
    let n = observed.len() as f64;
    Ok(Distribution::from_parts(alphabet.clone(), counts.into_iter().map(|c| T::lit(c as f64 / n)).collect()))
}

/// Same as [`estimate_r`] for observations given by label.
pub fn estimate_r_labels<T: Scalar, S: AsRef<str>>(observed: &[S], alphabet: &Alphabet) -> Result<Distribution<T>> {
    let idx = observed.iter().map(|s| alphabet.index_of(s.as_ref())).collect::<Result<Vec<_>>>()?;
    estimate_r(&idx, alphabet)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frequencies() {
        let a = Alphabet::indexed(2).unwrap();
        assert_eq!(estimate_r::<f64>(&[0, 1, 0, 1], &a).unwrap().probs(), &[0.5, 0.5]);
        assert_eq!(estimate_r::<f64>(&[1, 1, 1], &a).unwrap().probs(), &[0.0, 1.0]);
        assert!(estimate_r::<f64>(&[], &a).is_err());
        assert!(estimate_r::<f64>(&[2], &a).is_err());
    }

    #[test]
    fn by_label() {
        let a = Alphabet::new(["no", "yes"]).unwrap();
        let r = estimate_r_labels::<f64, _>(&["yes", "no", "yes", "yes"], &a).unwrap();
        assert_eq!(r.probs(), &[0.25, 0.75]);
        assert!(estimate_r_labels::<f64, _>(&["maybe"], &a).is_err());
    }
}
