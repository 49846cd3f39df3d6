//! Simplicial fans in a lattice `N = Z^n`.

use std::collections::{BTreeSet, HashMap};

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Result, ToricError};
use crate::linalg::{nonnegative_solution_exists, primitive_vector, smith_diagonal, IntMatrix, RatMatrix};

/// Ray indices are packed into `u64` masks, which bounds the number of rays.
pub const MAX_RAYS: usize = 64;

pub(crate) fn mask_of(cone: &[usize]) -> u64 {
    cone.iter().fold(0u64, |m, &i| m | (1u64 << i))
}

pub(crate) fn indices_of(mask: u64) -> Vec<usize> {
    (0..MAX_RAYS).filter(|&i| mask >> i & 1 == 1).collect()
}

/// A simplicial fan given by primitive ray generators and maximal cones (sets of ray indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Validates and builds a fan.
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        let fan = Self::checked_shape(dim, rays, max_cones)?;
        fan.check_intersections()?;
        Ok(fan)
    }

    /// Builds a fan from data known to be a fan (builder output), skipping the pairwise
    /// intersection test.
    pub(crate) fn trusted(dim: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        Self::checked_shape(dim, rays, max_cones)
    }

    fn checked_shape(dim: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        let bad = |msg: String| Err(ToricError::InvalidFan(msg));
        if rays.len() > MAX_RAYS {
            return bad(format!("at most {MAX_RAYS} rays are supported"));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return bad(format!("ray {i} has length {}, expected {dim}", r.len()));
            }
            match primitive_vector(r) {
                Err(_) => return bad(format!("ray {i} is zero")),
                Ok(p) if &p != r => return bad(format!("ray {i} is not primitive")),
                Ok(_) => {}
            }
        }
        let distinct: BTreeSet<&Vec<i64>> = rays.iter().collect();
        if distinct.len() != rays.len() {
            return bad("rays are not distinct".into());
        }
        if max_cones.is_empty() {
            return bad("a fan needs at least one cone".into());
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for (c, cone) in max_cones.iter().enumerate() {
            let mut sorted = cone.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != cone.len() {
                return bad(format!("cone {c} repeats a ray"));
            }
            if let Some(&i) = sorted.iter().find(|&&i| i >= rays.len()) {
                return bad(format!("cone {c} refers to missing ray {i}"));
            }
            if sorted.is_empty() && max_cones.len() > 1 {
                return bad(format!("cone {c} is the zero cone but is listed as maximal"));
            }
            let m = IntMatrix::from_rows(dim, &sorted.iter().map(|&i| rays[i].clone()).collect::<Vec<_>>());
            if crate::linalg::int_rank(&m) != sorted.len() {
                return bad(format!("cone {c} is not simplicial"));
            }
            cones.push(sorted);
        }
        for a in 0..cones.len() {
            for b in 0..cones.len() {
                if a != b && cones[a].iter().all(|i| cones[b].contains(i)) {
                    return bad(format!("cone {a} is contained in cone {b}"));
                }
            }
        }
        for i in 0..rays.len() {
            if !cones.iter().any(|c| c.contains(&i)) {
                return bad(format!("ray {i} lies in no cone"));
            }
        }
        Ok(Fan { dim, rays, max_cones: cones })
    }

    /// Two simplicial cones meet properly iff no point of both has a positive coordinate on
    /// a ray outside their common face.
    fn check_intersections(&self) -> Result<()> {
        for a in 0..self.max_cones.len() {
            for b in a + 1..self.max_cones.len() {
                let ca = &self.max_cones[a];
                let cb = &self.max_cones[b];
                let off_a: Vec<usize> = ca.iter().copied().filter(|i| !cb.contains(i)).collect();
                let off_b: Vec<usize> = cb.iter().copied().filter(|i| !ca.contains(i)).collect();
                let common: Vec<usize> = ca.iter().copied().filter(|i| cb.contains(i)).collect();
                if off_a.is_empty() || off_b.is_empty() {
                    continue;
                }
                // variables: off_a, common(a), off_b, common(b); all >= 0
                // sum_a - sum_b = 0 and sum of off_a coefficients = 1
                let vars: Vec<(usize, i64)> = off_a
                    .iter()
                    .map(|&i| (i, 1))
                    .chain(common.iter().map(|&i| (i, 1)))
                    .chain(off_b.iter().map(|&i| (i, -1)))
                    .chain(common.iter().map(|&i| (i, -1)))
                    .collect();
                let mut cols = Vec::with_capacity(vars.len());
                for (k, &(i, s)) in vars.iter().enumerate() {
                    let mut col: Vec<BigRational> =
                        self.rays[i].iter().map(|&x| BigRational::from_integer((s * x).into())).collect();
                    col.push(if k < off_a.len() { BigRational::one() } else { BigRational::from_integer(0.into()) });
                    cols.push(col);
                }
                let a_mat = RatMatrix::from_columns(self.dim + 1, cols);
                let mut rhs = vec![BigRational::from_integer(0.into()); self.dim];
                rhs.push(BigRational::one());
                if nonnegative_solution_exists(&a_mat, &rhs) {
                    return Err(ToricError::InvalidFan(format!("cones {a} and {b} overlap in their interiors")));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub(crate) fn cone_masks(&self) -> Vec<u64> {
        self.max_cones.iter().map(|c| mask_of(c)).collect()
    }

    /// Whether the index set spans a cone of the fan (for simplicial fans: lies in a maximal cone).
    pub fn is_face(&self, cone: &[usize]) -> bool {
        let m = mask_of(cone);
        self.cone_masks().iter().any(|&c| c & m == m)
    }

    /// Every cone of the fan, as sorted index sets, ordered by size then lexicographically.
    pub fn all_cones(&self) -> Vec<Vec<usize>> {
        let mut seen = BTreeSet::new();
        for c in &self.max_cones {
            for sub in 0u64..(1u64 << c.len()) {
                let face: Vec<usize> = (0..c.len()).filter(|&k| sub >> k & 1 == 1).map(|k| c[k]).collect();
                seen.insert((face.len(), face));
            }
        }
        seen.into_iter().map(|(_, f)| f).collect()
    }

    pub fn is_smooth(&self) -> bool {
        self.max_cones.iter().all(|c| {
            let m = IntMatrix::from_rows(self.dim, &c.iter().map(|&i| self.rays[i].clone()).collect::<Vec<_>>());
            smith_diagonal(&m).iter().all(|d| d.is_one())
        })
    }

    /// Facet-pairing completeness test, valid for simplicial fans.
    pub fn is_complete(&self) -> bool {
        if self.dim == 0 {
            return true;
        }
        if self.max_cones.iter().any(|c| c.len() != self.dim) {
            return false;
        }
        let mut facets: HashMap<u64, usize> = HashMap::new();
        for c in self.cone_masks() {
            for i in crate::fan::indices_of(c) {
                *facets.entry(c & !(1u64 << i)).or_default() += 1;
            }
        }
        facets.values().all(|&n| n == 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cone_is_not_complete() {
        let fan = Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]).unwrap();
        assert!(!fan.is_complete());
        assert!(fan.is_smooth());
    }

    #[test]
    fn determinant_two_cone_is_singular() {
        let fan = Fan::new(2, vec![vec![1, 0], vec![1, 2]], vec![vec![0, 1]]).unwrap();
        assert!(!fan.is_smooth());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Fan::new(2, vec![vec![2, 0]], vec![vec![0]]).is_err());
        assert!(Fan::new(2, vec![vec![1, 0], vec![1, 0]], vec![vec![0], vec![1]]).is_err());
        assert!(Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0]]).is_err());
        // overlapping 2-cones
        let err = Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![-1, 0]],
            vec![vec![0, 1], vec![2, 3]],
        )
        .unwrap_err();
        assert!(err.to_string().contains("overlap"));
    }

    #[test]
    fn all_cones_of_p1() {
        let fan = Fan::new(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).unwrap();
        assert_eq!(fan.all_cones(), vec![vec![], vec![0], vec![1]]);
        assert!(fan.is_complete());
    }
}

/// A subfan of an ambient fan: maximal cones given as masks over the ambient ray indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubFan {
    cones: Vec<u64>,
}

impl SubFan {
    /// Keeps only the inclusion-maximal cones, sorted for a canonical representation.
    pub fn from_masks(masks: impl IntoIterator<Item = u64>) -> SubFan {
        let mut all: Vec<u64> = masks.into_iter().collect();
        all.sort_unstable();
        all.dedup();
        let cones: Vec<u64> = all
            .iter()
            .copied()
            .filter(|&c| !all.iter().any(|&d| d != c && d & c == c))
            .collect();
        SubFan { cones }
    }

    pub fn full(fan: &Fan) -> SubFan {
        SubFan::from_masks(fan.cone_masks())
    }

    pub fn from_cones(cones: &[Vec<usize>]) -> SubFan {
        SubFan::from_masks(cones.iter().map(|c| mask_of(c)))
    }

    pub fn cone_masks(&self) -> &[u64] {
        &self.cones
    }

    /// Maximal cones as sorted ray-index lists.
    pub fn max_cones(&self) -> Vec<Vec<usize>> {
        self.cones.iter().map(|&c| indices_of(c)).collect()
    }

    /// Mask of rays occurring in some cone.
    pub fn ray_mask(&self) -> u64 {
        self.cones.iter().fold(0, |a, &c| a | c)
    }

    pub fn contains_cone(&self, cone: &[usize]) -> bool {
        let m = mask_of(cone);
        self.cones.iter().any(|&c| c & m == m)
    }

    pub fn is_subfan_of(&self, other: &SubFan) -> bool {
        self.cones.iter().all(|&c| other.cones.iter().any(|&d| d & c == c))
    }
}
