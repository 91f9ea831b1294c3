//! Frame-level phoneme-class scoring and a multiclass Passive-Aggressive
//! trainer.
//!
//! The classifier is a plain linear scorer over 39-dimensional MFCC frames.
//! Which classes exist, and which of them count as vowels or nasals, comes
//! from a user-supplied inventory; nothing here is tied to a particular
//! phone set.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dsp::MFCC_DIM;
use crate::error::{Error, Result};

/// Class inventory with vowel and nasal membership.
///
/// Parsed from a small `key = value` text file:
///
/// ```text
/// classes = sil, f, s, a, i, u, n, t
/// vowels = a, i, u
/// nasals = n
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassInventory {
    pub class_names: Vec<String>,
    pub vowels: Vec<String>,
    pub nasals: Vec<String>,
}

impl ClassInventory {
    pub fn new(class_names: Vec<String>, vowels: Vec<String>, nasals: Vec<String>) -> Result<Self> {
        let inv = Self { class_names, vowels, nasals };
        inv.validate()?;
        Ok(inv)
    }

    fn validate(&self) -> Result<()> {
        if self.class_names.len() < 2 {
            return Err(Error::InvalidArgument("need at least two classes".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for c in &self.class_names {
            if !seen.insert(c.as_str()) {
                return Err(Error::InvalidArgument(format!("duplicate class {c:?}")));
            }
        }
        for (kind, set) in [("vowel", &self.vowels), ("nasal", &self.nasals)] {
            for c in set {
                if !seen.contains(c.as_str()) {
                    return Err(Error::InvalidArgument(format!(
                        "{kind} class {c:?} not in class list"
                    )));
                }
            }
        }
        if self.vowels.iter().any(|v| self.nasals.contains(v)) {
            return Err(Error::InvalidArgument("vowel and nasal sets overlap".into()));
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut classes = Vec::new();
        let mut vowels = Vec::new();
        let mut nasals = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidArgument(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let items: Vec<String> = value
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
            match key.trim() {
                "classes" => classes = items,
                "vowels" => vowels = items,
                "nasals" => nasals = items,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "line {}: unknown key {other:?}",
                        lineno + 1
                    )))
                }
            }
        }
        Self::new(classes, vowels, nasals)
    }

    pub fn to_text(&self) -> String {
        format!(
            "classes = {}\nvowels = {}\nnasals = {}\n",
            self.class_names.join(", "),
            self.vowels.join(", "),
            self.nasals.join(", ")
        )
    }

    fn index_of(&self, name: &str) -> Option<usize> {
        self.class_names.iter().position(|c| c == name)
    }
}

/// Linear per-class scorer over MFCC frames.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameClassifier {
    inventory: ClassInventory,
    vowel_indices: Vec<usize>,
    nasal_indices: Vec<usize>,
    /// One weight vector of [`MFCC_DIM`] reals per class.
    weights: Vec<Vec<f64>>,
}

impl FrameClassifier {
    pub fn new(inventory: ClassInventory, weights: Vec<Vec<f64>>) -> Result<Self> {
        inventory.validate()?;
        if weights.len() != inventory.class_names.len() {
            return Err(Error::DimensionMismatch {
                expected: inventory.class_names.len(),
                got: weights.len(),
            });
        }
        for w in &weights {
            if w.len() != MFCC_DIM {
                return Err(Error::DimensionMismatch { expected: MFCC_DIM, got: w.len() });
            }
        }
        let vowel_indices = inventory
            .vowels
            .iter()
            .map(|v| inventory.index_of(v).unwrap())
            .collect();
        let nasal_indices = inventory
            .nasals
            .iter()
            .map(|v| inventory.index_of(v).unwrap())
            .collect();
        Ok(Self { inventory, vowel_indices, nasal_indices, weights })
    }

    pub fn inventory(&self) -> &ClassInventory {
        &self.inventory
    }

    pub fn num_classes(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn vowel_indices(&self) -> &[usize] {
        &self.vowel_indices
    }

    pub fn nasal_indices(&self) -> &[usize] {
        &self.nasal_indices
    }

    /// Linear score per class; the predicted class is the argmax with ties
    /// broken toward the lowest class index.
    pub fn score_frame(&self, mfcc: &[f64]) -> Result<Vec<f64>> {
        if mfcc.len() != MFCC_DIM {
            return Err(Error::DimensionMismatch { expected: MFCC_DIM, got: mfcc.len() });
        }
        Ok(self
            .weights
            .iter()
            .map(|w| w.iter().zip(mfcc.iter()).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn predict(&self, mfcc: &[f64]) -> Result<usize> {
        Ok(argmax(&self.score_frame(mfcc)?))
    }
}

/// Index of the largest value; first wins on ties.
pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// One training frame: the MFCC vector and its class name.
#[derive(Debug, Clone)]
pub struct LabeledFrame {
    pub mfcc: Vec<f64>,
    pub label: String,
}

/// Online multiclass PA-I with per-step weight averaging.
///
/// For each example the rival is the highest-scoring wrong class; on a
/// positive hinge loss `max(0, 1 - s_y + s_r)` the true and rival weight
/// vectors move by `tau * x` with `tau = min(C, loss / |dphi|^2)` and
/// `|dphi|^2 = 2 |x|^2` in the stacked per-class feature space. The returned
/// classifier averages the weights over every example step.
pub fn train_pa_multiclass(
    data: &[LabeledFrame],
    inventory: &ClassInventory,
    c: f64,
    epochs: usize,
    seed: u64,
) -> Result<FrameClassifier> {
    train_pa_multiclass_impl(data, inventory, c, epochs, seed).map(|(clf, _)| clf)
}

fn train_pa_multiclass_impl(
    data: &[LabeledFrame],
    inventory: &ClassInventory,
    c: f64,
    epochs: usize,
    seed: u64,
) -> Result<(FrameClassifier, Vec<Vec<f64>>)> {
    if !(c > 0.0) {
        return Err(Error::InvalidArgument(format!("C must be positive, got {c}")));
    }
    if epochs == 0 {
        return Err(Error::InvalidArgument("epochs must be at least 1".into()));
    }
    if data.is_empty() {
        return Err(Error::InvalidArgument("no training frames".into()));
    }

    let labels: Vec<usize> = data
        .iter()
        .map(|f| {
            inventory
                .index_of(&f.label)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown label {:?}", f.label)))
        })
        .collect::<Result<_>>()?;
    let distinct: std::collections::BTreeSet<usize> = labels.iter().copied().collect();
    if distinct.len() < 2 {
        return Err(Error::InvalidArgument(
            "training data must contain at least two distinct classes".into(),
        ));
    }
    for f in data {
        if f.mfcc.len() != MFCC_DIM {
            return Err(Error::DimensionMismatch { expected: MFCC_DIM, got: f.mfcc.len() });
        }
    }

    let k = inventory.class_names.len();
    let mut w = vec![vec![0.0; MFCC_DIM]; k];
    let mut acc = vec![vec![0.0; MFCC_DIM]; k];
    let mut steps = 0u64;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    for _ in 0..epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let x = &data[i].mfcc;
            let y = labels[i];
            let scores: Vec<f64> = w
                .iter()
                .map(|wc| wc.iter().zip(x.iter()).map(|(a, b)| a * b).sum())
                .collect();
            let rival = scores
                .iter()
                .enumerate()
                .filter(|&(c_idx, _)| c_idx != y)
                .fold(None::<(usize, f64)>, |best, (c_idx, &s)| match best {
                    Some((_, bs)) if bs >= s => best,
                    _ => Some((c_idx, s)),
                })
                .map(|(c_idx, _)| c_idx)
                .unwrap();
            let loss = (1.0 - scores[y] + scores[rival]).max(0.0);
            if loss > 0.0 {
                let xnorm2: f64 = x.iter().map(|v| v * v).sum();
                if xnorm2 > 0.0 {
                    let tau = c.min(loss / (2.0 * xnorm2));
                    for (wy, &v) in w[y].iter_mut().zip(x.iter()) {
                        *wy += tau * v;
                    }
                    for (wr, &v) in w[rival].iter_mut().zip(x.iter()) {
                        *wr -= tau * v;
                    }
                    #[cfg(debug_assertions)]
                    if tau < c {
                        let sy: f64 = w[y].iter().zip(x.iter()).map(|(a, b)| a * b).sum();
                        let sr: f64 = w[rival].iter().zip(x.iter()).map(|(a, b)| a * b).sum();
                        debug_assert!(
                            (1.0 - sy + sr) < 1e-9,
                            "PA-I step left positive hinge {}",
                            1.0 - sy + sr
                        );
                    }
                }
            }
            for (a_row, w_row) in acc.iter_mut().zip(w.iter()) {
                for (a_val, &w_val) in a_row.iter_mut().zip(w_row.iter()) {
                    *a_val += w_val;
                }
            }
            steps += 1;
        }
    }

    let avg: Vec<Vec<f64>> = acc
        .into_iter()
        .map(|row| row.into_iter().map(|v| v / steps as f64).collect())
        .collect();
    Ok((FrameClassifier::new(inventory.clone(), avg)?, w))
}
