//! Residual reports and refinement-study tables.

use serde::{Deserialize, Serialize};

/// Named max/mean residual norms plus grid metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualReport {
    pub name: String,
    pub max: f64,
    pub mean: f64,
    pub nu: usize,
    pub nv: usize,
    pub notes: String,
}

impl ResidualReport {
    pub fn new(name: impl Into<String>, max: f64, mean: f64, nu: usize, nv: usize) -> Self {
        Self {
            name: name.into(),
            max,
            mean,
            nu,
            nv,
            notes: String::new(),
        }
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }
}

/// One refinement level of a convergence study.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RefinementRow {
    pub nu: usize,
    pub nv: usize,
    pub value: f64,
    /// value(previous level) / value(this level); None on the first row.
    pub ratio: Option<f64>,
}

/// Max-residual table across grid doublings with second-order ratio checks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RefinementTable {
    pub check: String,
    pub rows: Vec<RefinementRow>,
}

impl RefinementTable {
    pub fn from_values(check: impl Into<String>, grids: &[(usize, usize)], values: &[f64]) -> Self {
        assert_eq!(grids.len(), values.len());
        let mut rows = Vec::with_capacity(values.len());
        for (i, (&(nu, nv), &value)) in grids.iter().zip(values).enumerate() {
            let ratio = if i == 0 { None } else { Some(values[i - 1] / value) };
            rows.push(RefinementRow { nu, nv, value, ratio });
        }
        Self { check: check.into(), rows }
    }

    /// All doubling ratios within [lo, hi].
    pub fn ratios_within(&self, lo: f64, hi: f64) -> bool {
        self.rows
            .iter()
            .filter_map(|row| row.ratio)
            .all(|q| q >= lo && q <= hi)
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|row| row.ratio).collect()
    }
}
