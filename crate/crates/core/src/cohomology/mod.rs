//! Cohomology of line bundles on toric varieties, one character at a time.
//!
//! The degree-`m` piece of `H^i(X, O(D))` is the reduced cohomology `H~^{i-1}` of the complex
//! of cone-spanning subsets of the rays with `<m, u_rho> < -a_rho`.

mod complex;

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

pub use complex::{induced_restriction, CohomologyBasis, SupportComplex};

use crate::error::{Result, ToricError};
use crate::fan::SubFan;
use crate::variety::{TDivisor, ToricVariety};

/// Support complex of `D` at character `m` on a subfan of `X`'s fan.
pub fn support_complex(x: &ToricVariety, subfan: &SubFan, d: &TDivisor, m: &[i64]) -> Result<SupportComplex> {
    x.check_divisor(d)?;
    if m.len() != x.dim() {
        return Err(ToricError::InvalidArgument(format!("character has length {}, expected {}", m.len(), x.dim())));
    }
    Ok(SupportComplex::new(subfan, x.negative_mask(d, m)))
}

/// Per-character dimensions of `H^i(X, O(D))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedCohomologyTable {
    pub degree: usize,
    pub divisor: TDivisor,
    pub entries: BTreeMap<Vec<i64>, usize>,
}

#[derive(Serialize)]
struct Entry<'a> {
    m: &'a [i64],
    dim: usize,
}

impl GradedCohomologyTable {
    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }

    /// `[{"m": [...], "dim": k}, ...]` in lexicographic character order.
    pub fn to_json(&self) -> serde_json::Value {
        let list: Vec<Entry> = self.entries.iter().map(|(m, &dim)| Entry { m, dim }).collect();
        serde_json::to_value(list).expect("serializable")
    }
}

/// Graded pieces of `H^i(X, O(D))` over the character box of `D`.
pub fn line_bundle_cohomology(x: &ToricVariety, d: &TDivisor, i: usize) -> Result<GradedCohomologyTable> {
    let bx = x.character_box(d)?;
    line_bundle_cohomology_in(x, d, i, &bx)
}

/// As [`line_bundle_cohomology`], over an explicit box of characters.
pub fn line_bundle_cohomology_in(
    x: &ToricVariety,
    d: &TDivisor,
    i: usize,
    bx: &crate::lattice::LatticeBox,
) -> Result<GradedCohomologyTable> {
    if !(x.is_smooth() && x.is_complete()) {
        return Err(ToricError::NotSmoothComplete);
    }
    x.check_divisor(d)?;
    let full = SubFan::full(x.fan());
    let masks: Vec<(Vec<i64>, u64)> = bx.iter().map(|m| {
        let w = x.negative_mask(d, &m);
        (m, w)
    }).collect();
    let mut unique: Vec<u64> = masks.iter().map(|(_, w)| *w).collect();
    unique.sort_unstable();
    unique.dedup();
    let dims: HashMap<u64, usize> = unique
        .par_iter()
        .map(|&w| (w, SupportComplex::new(&full, w).reduced_cohomology(i as i64 - 1).dim()))
        .collect();
    let entries = masks
        .into_iter()
        .filter_map(|(m, w)| {
            let k = dims[&w];
            (k > 0).then_some((m, k))
        })
        .collect();
    Ok(GradedCohomologyTable { degree: i, divisor: d.clone(), entries })
}

/// Total dimensions `h^0, ..., h^n` of `O(D)`.
pub fn cohomology_dims(x: &ToricVariety, d: &TDivisor) -> Result<Vec<usize>> {
    (0..=x.dim()).map(|i| line_bundle_cohomology(x, d, i).map(|t| t.total())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_divisor_zero_character_has_no_vertices() {
        let f1 = ToricVariety::hirzebruch(1).unwrap();
        let c = support_complex(&f1, &SubFan::full(f1.fan()), &TDivisor::zero(4), &[0, 0]).unwrap();
        assert_eq!(c.vertex_mask(), 0);
    }

    #[test]
    fn p1_minus_two() {
        let p1 = ToricVariety::projective_space(1).unwrap();
        let d = TDivisor(vec![-2, 0]);
        let full = SubFan::full(p1.fan());
        let c = support_complex(&p1, &full, &d, &[-1]).unwrap();
        assert_eq!(c.vertex_mask(), 0b01);
        assert_eq!(c.reduced_cohomology(0).dim(), 0);
        let c = support_complex(&p1, &full, &d, &[1]).unwrap();
        assert_eq!(c.vertex_mask(), 0b11);
        assert_eq!(c.reduced_cohomology(0).dim(), 1);
        let t = line_bundle_cohomology(&p1, &d, 1).unwrap();
        assert_eq!(t.total(), 1);
        assert_eq!(t.entries.keys().collect::<Vec<_>>(), vec![&vec![1]]);
    }

    #[test]
    fn projective_plane_sections() {
        let p2 = ToricVariety::projective_space(2).unwrap();
        for d in 0..5i64 {
            let div = TDivisor(vec![0, 0, d]);
            let want = ((d + 1) * (d + 2) / 2) as usize;
            assert_eq!(cohomology_dims(&p2, &div).unwrap(), vec![want, 0, 0]);
        }
        // O(-3) = K has h^2 = 1
        assert_eq!(cohomology_dims(&p2, &TDivisor(vec![-1, -1, -1])).unwrap(), vec![0, 0, 1]);
    }

    #[test]
    fn hirzebruch_negative_bundle() {
        let f1 = ToricVariety::hirzebruch(1).unwrap();
        let d = TDivisor(vec![0, -1, -2, -3]);
        assert_eq!(cohomology_dims(&f1, &d).unwrap(), vec![0, 0, 6]);
    }
}
