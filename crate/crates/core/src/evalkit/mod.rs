//! Precision, recall and F1 for multi-class and multi-label predictions.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::{Error, Result, Task};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Documents that truly carry the label.
    pub support: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Averages {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricsReport {
    pub task: Task,
    pub per_class: Vec<ClassMetrics>,
    /// Unweighted mean of the per-class values.
    #[cfg_attr(feature = "serde", serde(rename = "macro"))]
    pub macro_avg: Averages,
    /// From counts pooled over all classes.
    #[cfg_attr(feature = "serde", serde(rename = "micro"))]
    pub micro_avg: Averages,
    /// Exact-match ratio: correct label (multi-class) or identical label set
    /// (multi-label).
    pub accuracy: f64,
    /// `confusion[truth][pred]`, multi-class only.
    pub confusion: Option<Vec<Vec<u64>>>,
}

#[derive(Clone, Copy, Default)]
struct Counts {
    tp: u64,
    fp: u64,
    fn_: u64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

fn summarize(task: Task, counts: &[Counts], accuracy: f64, confusion: Option<Vec<Vec<u64>>>) -> MetricsReport {
    let per_class: Vec<ClassMetrics> = counts
        .iter()
        .map(|c| {
            let precision = ratio(c.tp, c.tp + c.fp);
            let recall = ratio(c.tp, c.tp + c.fn_);
            ClassMetrics {
                precision,
                recall,
                f1: harmonic(precision, recall),
                support: c.tp + c.fn_,
            }
        })
        .collect();
    let k = per_class.len().max(1) as f64;
    let macro_avg = Averages {
        precision: per_class.iter().map(|c| c.precision).sum::<f64>() / k,
        recall: per_class.iter().map(|c| c.recall).sum::<f64>() / k,
        f1: per_class.iter().map(|c| c.f1).sum::<f64>() / k,
    };
    let tp: u64 = counts.iter().map(|c| c.tp).sum();
    let fp: u64 = counts.iter().map(|c| c.fp).sum();
    let fn_: u64 = counts.iter().map(|c| c.fn_).sum();
    let (p, r) = (ratio(tp, tp + fp), ratio(tp, tp + fn_));
    MetricsReport {
        task,
        per_class,
        macro_avg,
        micro_avg: Averages {
            precision: p,
            recall: r,
            f1: harmonic(p, r),
        },
        accuracy,
        confusion,
    }
}

fn check_ids<'a>(ids: impl Iterator<Item = &'a usize>, k: usize) -> Result<()> {
    for &label in ids {
        if label >= k {
            return Err(Error::LabelOutOfRange { label, k });
        }
    }
    Ok(())
}

pub fn evaluate_multiclass(truth: &[usize], pred: &[usize], k: usize) -> Result<MetricsReport> {
    if truth.len() != pred.len() {
        return Err(Error::LengthMismatch {
            truth: truth.len(),
            pred: pred.len(),
        });
    }
    check_ids(truth.iter().chain(pred), k)?;
    let mut confusion = vec![vec![0u64; k]; k];
    for (&t, &p) in truth.iter().zip(pred) {
        confusion[t][p] += 1;
    }
    let counts: Vec<Counts> = (0..k)
        .map(|c| {
            let tp = confusion[c][c];
            let row: u64 = confusion[c].iter().sum();
            let col: u64 = confusion.iter().map(|r| r[c]).sum();
            Counts {
                tp,
                fp: col - tp,
                fn_: row - tp,
            }
        })
        .collect();
    let correct: u64 = (0..k).map(|c| confusion[c][c]).sum();
    let accuracy = ratio(correct, truth.len() as u64);
    Ok(summarize(Task::Multiclass, &counts, accuracy, Some(confusion)))
}

/// Label sets are treated as sets: duplicates are ignored.
pub fn evaluate_multilabel(truth: &[Vec<usize>], pred: &[Vec<usize>], k: usize) -> Result<MetricsReport> {
    if truth.len() != pred.len() {
        return Err(Error::LengthMismatch {
            truth: truth.len(),
            pred: pred.len(),
        });
    }
    check_ids(truth.iter().chain(pred).flatten(), k)?;
    let mut counts = vec![Counts::default(); k];
    let mut exact = 0u64;
    let mut t_set = vec![false; k];
    let mut p_set = vec![false; k];
    for (t, p) in truth.iter().zip(pred) {
        t_set.fill(false);
        p_set.fill(false);
        t.iter().for_each(|&l| t_set[l] = true);
        p.iter().for_each(|&l| p_set[l] = true);
        for (c, counts) in counts.iter_mut().enumerate() {
            match (t_set[c], p_set[c]) {
                (true, true) => counts.tp += 1,
                (false, true) => counts.fp += 1,
                (true, false) => counts.fn_ += 1,
                (false, false) => {}
            }
        }
        if t_set == p_set {
            exact += 1;
        }
    }
    Ok(summarize(
        Task::Multilabel,
        &counts,
        ratio(exact, truth.len() as u64),
        None,
    ))
}

impl MetricsReport {
    /// Aligned text table: one row per label, then macro and micro averages.
    pub fn to_table(&self, names: &[String]) -> String {
        let label = |i: usize| names.get(i).map_or_else(|| alloc::format!("{i}"), |n| n.clone());
        let width = (0..self.per_class.len())
            .map(|i| label(i).chars().count())
            .chain([11])
            .max()
            .unwrap_or(11);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$}  {:>9}  {:>9}  {:>9}  {:>7}",
            "Label", "Precision", "Recall", "F1 Score", "Support"
        );
        for (i, c) in self.per_class.iter().enumerate() {
            let _ = writeln!(
                out,
                "{:<width$}  {:>9.4}  {:>9.4}  {:>9.4}  {:>7}",
                label(i),
                c.precision,
                c.recall,
                c.f1,
                c.support
            );
        }
        for (name, a) in [("macro avg", &self.macro_avg), ("micro avg", &self.micro_avg)] {
            let _ = writeln!(
                out,
                "{:<width$}  {:>9.4}  {:>9.4}  {:>9.4}",
                name, a.precision, a.recall, a.f1
            );
        }
        let _ = writeln!(out, "{:<width$}  {:>9.4}", "accuracy", self.accuracy);
        out
    }
}

/// One row per model with its averaged precision, recall and F1.
pub fn comparison_table(rows: &[(&str, &MetricsReport)], use_macro: bool) -> String {
    let width = rows.iter().map(|(n, _)| n.chars().count()).chain([5]).max().unwrap_or(5);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<width$}  {:>9}  {:>9}  {:>9}",
        "Model", "Precision", "Recall", "F1 Score"
    );
    for (name, r) in rows {
        let a = if use_macro { &r.macro_avg } else { &r.micro_avg };
        let _ = writeln!(
            out,
            "{:<width$}  {:>9.4}  {:>9.4}  {:>9.4}",
            name, a.precision, a.recall, a.f1
        );
    }
    out
}
