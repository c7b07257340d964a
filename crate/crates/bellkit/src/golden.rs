//! Published classical (`L`) and Svetlichny (`S`) values, tagged by table,
//! row and column, for delta reporting.

use std::f64::consts::PI;

use serde::Serialize;

use bellkit_core::bounds::BoundKind;

pub const DERIVED_LABEL: &str = "derived, not paper-verified";

/// Published values are printed to four decimals.
pub const PRINT_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenCell {
    pub table: u8,
    /// `"L"` or `"S"`.
    pub row: &'static str,
    pub n_parties: usize,
    pub m: usize,
    pub d: usize,
    /// `None` for the cell left blank in print.
    pub paper: Option<f64>,
}

impl GoldenCell {
    pub fn kind(&self) -> BoundKind {
        if self.row == "L" {
            BoundKind::Classical
        } else {
            BoundKind::Svetlichny
        }
    }

    /// Column tag `d=..`.
    pub fn column(&self) -> String {
        format!("d={}", self.d)
    }

    pub fn tag(&self) -> String {
        format!("table {} / {}(N={},m={}) / {}", self.table, self.row, self.n_parties, self.m, self.column())
    }

    /// The closed form printed alongside the decimal, where there is one.
    pub fn exact(&self) -> Option<f64> {
        if self.row != "L" {
            return None;
        }
        let s3 = 3f64.sqrt();
        let cot = |x: f64| 1.0 / x.tan();
        let tan = f64::tan;
        Some(match (self.n_parties, self.m, self.d) {
            (3, 3, 2) => 13.0 / s3,
            (3, 3, 3) => (13.0 * cot(PI / 18.0) - 17.0 * tan(PI / 9.0) - 4.0 * tan(2.0 * PI / 9.0)) / (6.0 * s3),
            (3, 3, 4) => (-10.0 + 17.0 * 2f64.sqrt() + 14.0 * 6f64.sqrt()) / (4.0 * s3),
            (4, 2, 2) => 2.5 * (cot(PI / 8.0) + tan(PI / 8.0)),
            (4, 2, 3) => 10.0 / s3 + 5.0 / 6.0 * (s3 - 3.0),
            (4, 2, 4) => {
                (10.0 * cot(PI / 16.0) - 5.0 * cot(3.0 * PI / 16.0) + 16.0 * tan(PI / 16.0) + tan(3.0 * PI / 16.0))
                    / 8.0
            }
            (4, 3, 2) => 35.0 / s3,
            (4, 3, 3) => 7.0 * (5.0 * cot(PI / 18.0) - 7.0 * tan(PI / 9.0) - 2.0 * tan(2.0 * PI / 9.0)) / (6.0 * s3),
            _ => return None,
        })
    }
}

const fn cell(table: u8, row: &'static str, n_parties: usize, m: usize, d: usize, paper: Option<f64>) -> GoldenCell {
    GoldenCell { table, row, n_parties, m, d, paper }
}

/// Tripartite cells; for `m = 2` both rows share one printed line.
pub const TABLE_1: [GoldenCell; 12] = [
    cell(1, "L", 3, 2, 2, Some(4.2426)),
    cell(1, "L", 3, 2, 3, Some(3.0416)),
    cell(1, "L", 3, 2, 4, Some(3.5953)),
    cell(1, "S", 3, 2, 2, Some(4.2426)),
    cell(1, "S", 3, 2, 3, Some(3.0416)),
    cell(1, "S", 3, 2, 4, Some(3.5953)),
    cell(1, "L", 3, 3, 2, Some(7.5056)),
    cell(1, "L", 3, 3, 3, Some(6.1760)),
    cell(1, "L", 3, 3, 4, Some(6.9765)),
    cell(1, "S", 3, 3, 2, Some(8.6603)),
    cell(1, "S", 3, 3, 3, Some(7.3132)),
    cell(1, "S", 3, 3, 4, Some(8.1115)),
];

pub const TABLE_2: [GoldenCell; 12] = [
    cell(2, "L", 4, 2, 2, Some(7.0711)),
    cell(2, "L", 4, 2, 3, Some(4.7169)),
    cell(2, "L", 4, 2, 4, Some(5.8301)),
    cell(2, "S", 4, 2, 2, Some(8.4853)),
    cell(2, "S", 4, 2, 3, Some(6.0829)),
    cell(2, "S", 4, 2, 4, Some(7.1905)),
    cell(2, "L", 4, 3, 2, Some(20.2073)),
    cell(2, "L", 4, 3, 3, Some(16.2537)),
    cell(2, "L", 4, 3, 4, None),
    cell(2, "S", 4, 3, 2, Some(25.9808)),
    cell(2, "S", 4, 3, 3, Some(21.9394)),
    cell(2, "S", 4, 3, 4, Some(24.3345)),
];

pub fn table(which: u8) -> Option<&'static [GoldenCell]> {
    match which {
        1 => Some(&TABLE_1),
        2 => Some(&TABLE_2),
        _ => None,
    }
}

pub fn lookup(kind: BoundKind, n_parties: usize, m: usize, d: usize) -> Option<&'static GoldenCell> {
    TABLE_1
        .iter()
        .chain(TABLE_2.iter())
        .find(|c| c.kind() == kind && (c.n_parties, c.m, c.d) == (n_parties, m, d))
}

/// Reference attached to a computed bound in reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoldenRef {
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paper_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<&'static str>,
}

impl GoldenRef {
    pub fn new(c: &GoldenCell, computed: f64) -> Self {
        GoldenRef {
            source: c.tag(),
            paper_value: c.paper,
            delta: c.paper.map(|p| computed - p),
            label: c.paper.is_none().then_some(DERIVED_LABEL),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_forms_round_to_reference_decimals() {
        for c in TABLE_1.iter().chain(TABLE_2.iter()) {
            if let (Some(e), Some(p)) = (c.exact(), c.paper) {
                assert!((e - p).abs() < 5e-5 + 1e-12, "{}: {e} vs {p}", c.tag());
            }
        }
    }

    #[test]
    fn blank_cell_is_labeled() {
        let c = lookup(BoundKind::Classical, 4, 3, 4).unwrap();
        let r = GoldenRef::new(c, 1.0);
        assert_eq!(r.label, Some(DERIVED_LABEL));
        assert!(r.delta.is_none());
        assert!(lookup(BoundKind::Svetlichny, 4, 3, 4).unwrap().paper.is_some());
    }
}
