use std::collections::{BTreeSet, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Result, ToricError};
use crate::fan::{indices_of, SubFan};
use crate::linalg::{pivot_columns, rational_kernel_basis, RatMatrix};

/// Abstract simplicial complex on ray indices: the cone-spanning subsets of a vertex set.
///
/// The empty complex (only the empty face) has reduced cohomology `k` in degree `-1`; the
/// void complex has no faces at all and no cohomology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportComplex {
    vertices: u64,
    /// `faces[j]` holds the faces with `j` vertices, ordered lexicographically.
    faces: Vec<Vec<u64>>,
}

impl SupportComplex {
    /// Subsets of `vertices` contained in a cone of `subfan`; vertices outside the subfan's
    /// rays are dropped.
    pub fn new(subfan: &SubFan, vertices: u64) -> SupportComplex {
        let vertices = vertices & subfan.ray_mask();
        let mut set = BTreeSet::from([0u64]);
        for &c in subfan.cone_masks() {
            let top = c & vertices;
            // enumerate submasks of top
            let mut s = top;
            loop {
                set.insert(s);
                if s == 0 {
                    break;
                }
                s = (s - 1) & top;
            }
        }
        Self::from_face_set(vertices, set)
    }

    /// Complex generated by the given facets (as vertex index lists).
    pub fn from_facets(facets: &[Vec<usize>]) -> SupportComplex {
        let subfan = SubFan::from_cones(facets);
        Self::new(&subfan, subfan.ray_mask())
    }

    /// The complex with no faces, not even the empty one.
    pub fn void() -> SupportComplex {
        SupportComplex { vertices: 0, faces: vec![] }
    }

    fn from_face_set(vertices: u64, set: BTreeSet<u64>) -> SupportComplex {
        let max = set.iter().map(|f| f.count_ones() as usize).max().unwrap_or(0);
        let mut faces = vec![Vec::new(); max + 1];
        for f in set {
            faces[f.count_ones() as usize].push(f);
        }
        for level in &mut faces {
            level.sort_by_key(|&f| indices_of(f));
        }
        SupportComplex { vertices, faces }
    }

    pub fn is_void(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn vertex_mask(&self) -> u64 {
        self.vertices
    }

    /// Faces of dimension `k` (with `k + 1` vertices); `k = -1` is the empty face.
    pub fn faces_of_dim(&self, k: i64) -> &[u64] {
        let idx = k + 1;
        if idx < 0 || idx as usize >= self.faces.len() {
            return &[];
        }
        &self.faces[idx as usize]
    }

    pub fn contains_face(&self, f: u64) -> bool {
        let j = f.count_ones() as usize;
        j < self.faces.len() && self.faces[j].binary_search_by_key(&indices_of(f), |&g| indices_of(g)).is_ok()
    }

    pub fn is_subcomplex_of(&self, big: &SupportComplex) -> bool {
        self.faces.iter().flatten().all(|&f| big.contains_face(f))
    }

    /// Coboundary `C^k -> C^{k+1}`: rows indexed by `(k+1)`-faces, columns by `k`-faces.
    fn coboundary(&self, k: i64) -> RatMatrix {
        let src = self.faces_of_dim(k);
        let dst = self.faces_of_dim(k + 1);
        let index: HashMap<u64, usize> = src.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let mut m = RatMatrix::zeros(dst.len(), src.len());
        for (r, &tau) in dst.iter().enumerate() {
            for (j, v) in indices_of(tau).into_iter().enumerate() {
                let face = tau & !(1u64 << v);
                let c = index[&face];
                m[(r, c)] = if j % 2 == 0 { BigRational::one() } else { -BigRational::one() };
            }
        }
        m
    }

    /// Reduced cohomology in degree `k` with a deterministic basis of cocycle representatives.
    pub fn reduced_cohomology(&self, k: i64) -> CohomologyBasis {
        let faces = self.faces_of_dim(k).to_vec();
        let n = faces.len();
        if n == 0 {
            return CohomologyBasis::zero(k, faces);
        }
        let delta = self.coboundary(k);
        let cocycles = if delta.rows() == 0 { RatMatrix::identity(n) } else { rational_kernel_basis(&delta) };
        if cocycles.cols() == 0 {
            return CohomologyBasis::zero(k, faces);
        }
        let prev = self.coboundary(k - 1);
        let boundaries: Vec<Vec<BigRational>> = if prev.cols() == 0 {
            vec![]
        } else {
            pivot_columns(&prev).into_iter().map(|j| prev.column(j)).collect()
        };
        let nb = boundaries.len();
        let mut cols = boundaries.clone();
        cols.extend((0..cocycles.cols()).map(|j| cocycles.column(j)));
        let stacked = RatMatrix::from_columns(n, cols);
        let reps: Vec<Vec<BigRational>> = pivot_columns(&stacked)
            .into_iter()
            .filter(|&j| j >= nb)
            .map(|j| cocycles.column(j - nb))
            .collect();
        let mut basis_cols = boundaries;
        basis_cols.extend(reps.iter().cloned());
        CohomologyBasis {
            degree: k,
            face_index: faces.iter().enumerate().map(|(i, &f)| (f, i)).collect(),
            faces,
            solver: (!reps.is_empty()).then(|| RatMatrix::from_columns(n, basis_cols)),
            boundary_rank: nb,
            reps,
        }
    }
}

/// Cocycle representatives of a reduced cohomology group over its faces.
#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    degree: i64,
    faces: Vec<u64>,
    face_index: HashMap<u64, usize>,
    reps: Vec<Vec<BigRational>>,
    solver: Option<RatMatrix>,
    boundary_rank: usize,
}

impl CohomologyBasis {
    fn zero(degree: i64, faces: Vec<u64>) -> Self {
        CohomologyBasis {
            degree,
            face_index: faces.iter().enumerate().map(|(i, &f)| (f, i)).collect(),
            faces,
            reps: vec![],
            solver: None,
            boundary_rank: 0,
        }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn faces(&self) -> &[u64] {
        &self.faces
    }

    /// Representative cocycles, as value vectors over `faces()`.
    pub fn representatives(&self) -> &[Vec<BigRational>] {
        &self.reps
    }

    /// Coordinates of a cocycle's class in this basis.
    pub fn coordinates(&self, cocycle: &[BigRational]) -> Vec<BigRational> {
        match &self.solver {
            None => vec![],
            Some(m) => {
                let x = m.solve(cocycle).expect("cochain is not a cocycle of this complex");
                x[self.boundary_rank..].to_vec()
            }
        }
    }

    /// Matrix of the map induced by restricting cochains to a subcomplex's faces,
    /// `dim(sub) × dim(self)`.
    pub fn restrict_to(&self, sub: &CohomologyBasis) -> RatMatrix {
        let mut m = RatMatrix::zeros(sub.dim(), self.dim());
        if sub.dim() == 0 || self.dim() == 0 {
            return m;
        }
        for (j, rep) in self.reps.iter().enumerate() {
            let restricted: Vec<BigRational> = sub
                .faces
                .iter()
                .map(|f| self.face_index.get(f).map(|&i| rep[i].clone()).unwrap_or_else(BigRational::zero))
                .collect();
            for (i, c) in sub.coordinates(&restricted).into_iter().enumerate() {
                m[(i, j)] = c;
            }
        }
        m
    }
}

/// Map `H~^k(big) -> H~^k(sub)` induced by cochain restriction.
pub fn induced_restriction(big: &SupportComplex, sub: &SupportComplex, k: i64) -> Result<RatMatrix> {
    if !sub.is_subcomplex_of(big) {
        return Err(ToricError::NotSubcomplex);
    }
    Ok(big.reduced_cohomology(k).restrict_to(&sub.reduced_cohomology(k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(c: &SupportComplex) -> Vec<usize> {
        (-1..3).map(|k| c.reduced_cohomology(k).dim()).collect()
    }

    #[test]
    fn empty_and_void() {
        let empty = SupportComplex::from_facets(&[]);
        assert_eq!(dims(&empty), vec![1, 0, 0, 0]);
        assert_eq!(dims(&SupportComplex::void()), vec![0, 0, 0, 0]);
    }

    #[test]
    fn two_points_and_triangle_boundary() {
        let two = SupportComplex::from_facets(&[vec![0], vec![1]]);
        assert_eq!(dims(&two), vec![0, 1, 0, 0]);
        let tri = SupportComplex::from_facets(&[vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert_eq!(dims(&tri), vec![0, 0, 1, 0]);
        let filled = SupportComplex::from_facets(&[vec![0, 1, 2]]);
        assert_eq!(dims(&filled), vec![0, 0, 0, 0]);
    }

    #[test]
    fn restriction_examples() {
        let tri = SupportComplex::from_facets(&[vec![0, 1], vec![1, 2], vec![0, 2]]);
        let id = induced_restriction(&tri, &tri, 1).unwrap();
        assert_eq!(id, RatMatrix::identity(1));

        let two = SupportComplex::from_facets(&[vec![0], vec![1]]);
        let one = SupportComplex::from_facets(&[vec![0]]);
        let r = induced_restriction(&two, &one, 0).unwrap();
        assert_eq!((r.rows(), r.cols()), (0, 1));

        let path = SupportComplex::from_facets(&[vec![0, 1]]);
        let r1 = induced_restriction(&tri, &path, 1).unwrap();
        assert_eq!((r1.rows(), r1.cols()), (0, 1));
        let r0 = induced_restriction(&tri, &path, 0).unwrap();
        assert_eq!((r0.rows(), r0.cols()), (0, 0));

        assert!(matches!(induced_restriction(&one, &two, 0), Err(ToricError::NotSubcomplex)));
    }

    #[test]
    fn circle_restricted_to_two_points_is_injective_on_h0() {
        // four points in a square restricted to two opposite points
        let square = SupportComplex::from_facets(&[vec![0], vec![1], vec![2], vec![3]]);
        let opposite = SupportComplex::from_facets(&[vec![0], vec![2]]);
        let r = induced_restriction(&square, &opposite, 0).unwrap();
        assert_eq!((r.rows(), r.cols()), (1, 3));
        assert_eq!(r.rank(), 1);
    }
}
