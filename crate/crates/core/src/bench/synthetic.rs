//! Small synthetic stand-ins for a four-category text classifier.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::prob::{Alphabet, DeterministicModel, Distribution};
use crate::scalar::Scalar;

/// Category frequencies the synthetic model reproduces.
pub const FOUR_CLASS_R: [f64; 4] = [0.22, 0.27, 0.21, 0.30];

pub const FOUR_CLASS_LABELS: [&str; 4] = ["comp", "rec", "sci", "talk"];

const DOC_MASS: [f64; 8] = [0.12, 0.10, 0.15, 0.12, 0.11, 0.10, 0.16, 0.14];
const DOC_CLASS: [usize; 8] = [0, 0, 1, 1, 2, 2, 3, 3];

/// Eight query types, two per category, with masses chosen so that the
/// category frequencies equal [`FOUR_CLASS_R`].
pub fn four_class_model<T: Scalar>() -> (Distribution<T>, DeterministicModel) {
    let docs = Alphabet::new((0..DOC_MASS.len()).map(|i| format!("doc{i}"))).expect("distinct labels");
    let classes = Alphabet::new(FOUR_CLASS_LABELS).expect("distinct labels");
    let px = Distribution::new(docs.clone(), DOC_MASS.iter().map(|&p| T::lit(p)).collect()).expect("masses sum to one");
    let f = DeterministicModel::new(docs, classes, DOC_CLASS.to_vec()).expect("valid map");
    (px, f)
}

/// A shuffled stream of 100 category observations with counts 22, 27, 21, 30.
pub fn four_class_stream(seed: u64) -> Vec<usize> {
    let mut v: Vec<usize> = FOUR_CLASS_R
        .iter()
        .enumerate()
        .flat_map(|(c, &p)| std::iter::repeat_n(c, (p * 100.0).round() as usize))
        .collect();
    v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    v
}
