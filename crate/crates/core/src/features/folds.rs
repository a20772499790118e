use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::rng;

/// Fold index of every sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldAssignment {
    pub fold_of: Vec<usize>,
    pub k_folds: usize,
}

impl FoldAssignment {
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_of.len()).filter(|&i| self.fold_of[i] == fold).collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_of.len()).filter(|&i| self.fold_of[i] != fold).collect()
    }

    /// `(train, test)` index pairs for every fold.
    pub fn splits(&self) -> impl Iterator<Item = (Vec<usize>, Vec<usize>)> + '_ {
        (0..self.k_folds).map(|f| (self.train_indices(f), self.test_indices(f)))
    }
}

fn class_members(labels: &[usize]) -> Vec<Vec<usize>> {
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut members = vec![Vec::new(); k];
    for (i, &l) in labels.iter().enumerate() {
        members[l].push(i);
    }
    members
}

/// Stratified k-fold assignment.
///
/// Each class is shuffled with the seeded generator and dealt round-robin.
/// The dealing position carries over from one class to the next, so total
/// fold sizes stay within one of each other as well.
pub fn stratified_kfold(labels: &[usize], k_folds: usize, seed: u64) -> Result<FoldAssignment> {
    if k_folds < 2 {
        return Err(Error::Config("k_folds must be at least 2".into()));
    }
    let members = class_members(labels);
    for (class, m) in members.iter().enumerate() {
        if !m.is_empty() && m.len() < k_folds {
            return Err(Error::InsufficientStratification {
                class,
                count: m.len(),
                folds: k_folds,
            });
        }
    }
    let mut r = rng(seed);
    let mut fold_of = vec![0; labels.len()];
    let mut next = 0;
    for mut m in members {
        m.shuffle(&mut r);
        for i in m {
            fold_of[i] = next;
            next = (next + 1) % k_folds;
        }
    }
    Ok(FoldAssignment { fold_of, k_folds })
}

/// Per-class shuffled split; `round(train_fraction · n_class)` samples of
/// each class go to the first list. Both lists are sorted.
pub fn stratified_split(labels: &[usize], train_fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(0.0..=1.0).contains(&train_fraction) {
        return Err(Error::Config("train fraction must be within [0, 1]".into()));
    }
    let mut r = rng(seed);
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for mut m in class_members(labels) {
        m.shuffle(&mut r);
        let cut = (train_fraction * m.len() as f64).round() as usize;
        train.extend_from_slice(&m[..cut]);
        test.extend_from_slice(&m[cut..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn per_class_counts(labels: &[usize], fa: &FoldAssignment) -> Vec<Vec<usize>> {
        let k = labels.iter().max().unwrap() + 1;
        let mut counts = vec![vec![0; fa.k_folds]; k];
        for (i, &l) in labels.iter().enumerate() {
            counts[l][fa.fold_of[i]] += 1;
        }
        counts
    }

    #[test]
    fn balanced_three_classes() {
        let labels: Vec<usize> = (0..90).map(|i| i % 3).collect();
        let fa = stratified_kfold(&labels, 10, 1).unwrap();
        for row in per_class_counts(&labels, &fa) {
            assert!(row.iter().all(|&c| c == 3));
        }
    }

    #[test]
    fn one_of_each_per_fold() {
        let labels = [0, 0, 0, 1, 1, 1];
        let fa = stratified_kfold(&labels, 3, 9).unwrap();
        for row in per_class_counts(&labels, &fa) {
            assert_eq!(row, vec![1, 1, 1]);
        }
    }

    #[test]
    fn small_class_rejected() {
        let labels = [0, 0, 0, 1, 1];
        let err = stratified_kfold(&labels, 3, 0).unwrap_err();
        assert!(err.to_string().starts_with("insufficient samples for stratification"));
    }

    #[test]
    fn split_fractions() {
        let labels: Vec<usize> = (0..20).map(|i| i % 2).collect();
        let (tr, te) = stratified_split(&labels, 0.6, 3).unwrap();
        assert_eq!(tr.len(), 12);
        assert_eq!(te.len(), 8);
        let (_, te) = stratified_split(&labels, 1.0, 3).unwrap();
        assert!(te.is_empty());
    }
}
