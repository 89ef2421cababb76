use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowMode {
    /// Fixed-length window sliding one quarter per fold.
    #[default]
    Rolling,
    /// Origin pinned at the first observation; the window grows.
    Expanding,
}

/// One train/test split, 0-based and inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fold {
    pub train_start: usize,
    pub train_end: usize,
    pub test_index: usize,
}

impl Fold {
    pub fn train_len(&self) -> usize {
        self.train_end + 1 - self.train_start
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub folds: Vec<Fold>,
    pub n: usize,
    /// Training size of the first fold, `n - k`.
    pub m: usize,
    pub k: usize,
    pub window: WindowMode,
}

/// `k` rolling folds over `n` observations, each training on the `m = n - k`
/// quarters immediately before its single test quarter.
pub fn make_fold_plan(n: usize, k: usize) -> Result<FoldPlan> {
    make_fold_plan_with(n, k, WindowMode::Rolling)
}

pub fn make_fold_plan_with(n: usize, k: usize, window: WindowMode) -> Result<FoldPlan> {
    if k < 2 || k + 3 > n {
        return Err(Error::Config(format!(
            "fold count {k} must satisfy 2 <= k <= n - 3 with n = {n}"
        )));
    }
    let m = n - k;
    let folds = (0..k)
        .map(|j| Fold {
            train_start: match window {
                WindowMode::Rolling => j,
                WindowMode::Expanding => 0,
            },
            train_end: j + m - 1,
            test_index: j + m,
        })
        .collect();
    Ok(FoldPlan {
        folds,
        n,
        m,
        k,
        window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ninety_five_with_thirty_six_folds() {
        let plan = make_fold_plan(95, 36).unwrap();
        assert_eq!(plan.folds.len(), 36);
        assert_eq!(plan.m, 59);
        // 1-based position 60
        assert_eq!(plan.folds[0].test_index + 1, 60);
        assert_eq!(plan.folds[35].test_index, 94);
        for (j, f) in plan.folds.iter().enumerate() {
            assert_eq!(f.train_len(), 59);
            assert_eq!(f.test_index, f.train_end + 1);
            assert_eq!(f.train_start, j);
        }
    }

    #[test]
    fn smallest_plan() {
        let plan = make_fold_plan(5, 2).unwrap();
        assert_eq!(
            plan.folds,
            vec![
                Fold { train_start: 0, train_end: 2, test_index: 3 },
                Fold { train_start: 1, train_end: 3, test_index: 4 },
            ]
        );
    }

    #[test]
    fn out_of_range() {
        assert!(make_fold_plan(5, 4).is_err());
        assert!(make_fold_plan(5, 1).is_err());
        assert!(make_fold_plan(2, 2).is_err());
    }

    #[test]
    fn expanding_windows_keep_origin() {
        let plan = make_fold_plan_with(10, 3, WindowMode::Expanding).unwrap();
        assert!(plan.folds.iter().all(|f| f.train_start == 0));
        assert_eq!(plan.folds[2].train_len(), 9);
    }
}
