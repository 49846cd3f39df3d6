//! Toric varieties, torus-invariant divisors and their classes.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Result, ToricError};
use crate::fan::{mask_of, Fan};
use crate::lattice::LatticeBox;
use crate::linalg::{
    hermite_normal_form, hnf_pivots, integer_right_inverse, primitive_vector, smith_diagonal, IntMatrix,
    RatMatrix,
};

/// Torus-invariant Weil divisor: one coefficient per ray, in ray order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TDivisor(pub Vec<i64>);

/// A divisor class, in the fixed basis of the free part of the class group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass(pub Vec<i64>);

impl TDivisor {
    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn zero(n: usize) -> Self {
        TDivisor(vec![0; n])
    }
}

impl Add for &TDivisor {
    type Output = TDivisor;
    fn add(self, o: &TDivisor) -> TDivisor {
        assert_eq!(self.0.len(), o.0.len());
        TDivisor(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &TDivisor {
    type Output = TDivisor;
    fn sub(self, o: &TDivisor) -> TDivisor {
        assert_eq!(self.0.len(), o.0.len());
        TDivisor(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &TDivisor {
    type Output = TDivisor;
    fn neg(self) -> TDivisor {
        TDivisor(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<&TDivisor> for i64 {
    type Output = TDivisor;
    fn mul(self, d: &TDivisor) -> TDivisor {
        TDivisor(d.0.iter().map(|a| self * a).collect())
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, o: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, o: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, d: &DivisorClass) -> DivisorClass {
        DivisorClass(d.0.iter().map(|a| self * a).collect())
    }
}

/// Inverse of the ray matrix on an `n`-subset of linearly independent rays.
#[derive(Clone, Debug)]
struct Chamber {
    rays: Vec<usize>,
    inverse: RatMatrix,
}

/// A toric variety given by a simplicial fan whose rays span `N_R`, together with a fixed
/// basis of its class group.
#[derive(Clone, Debug)]
pub struct ToricVariety {
    fan: Fan,
    class_projection: Vec<Vec<i64>>,
    class_section: Vec<Vec<i64>>,
    torsion: Vec<i64>,
    chambers: OnceLock<Vec<Chamber>>,
}

impl PartialEq for ToricVariety {
    fn eq(&self, other: &Self) -> bool {
        self.fan == other.fan
    }
}

impl ToricVariety {
    pub fn new(fan: Fan) -> Result<ToricVariety> {
        let n = fan.dim();
        let r = fan.num_rays();
        let ray_matrix = IntMatrix::from_rows(n, fan.rays());
        let (h, u) = hermite_normal_form(&ray_matrix);
        if hnf_pivots(&h).len() != n {
            return Err(ToricError::RaysDoNotSpan);
        }
        let torsion = smith_diagonal(&ray_matrix)
            .iter()
            .filter(|d| !d.is_one())
            .map(crate::linalg::big_to_i64)
            .collect::<Result<Vec<_>>>()?;

        // rows n..r of U annihilate the ray matrix and map onto the free part of Cl;
        // the reversed Hermite form pins down a canonical basis
        let rows: Vec<usize> = (n..r).collect();
        let relations = u.select_rows(&rows);
        let (h_rev, _) = hermite_normal_form(&relations.reverse_cols());
        let projection = h_rev.reverse_rows().reverse_cols();
        let section = Self::class_section(&projection)?;

        Ok(ToricVariety {
            fan,
            class_projection: projection.to_i64_rows()?,
            class_section: section.to_i64_rows()?,
            torsion,
            chambers: OnceLock::new(),
        })
    }

    /// Integer right inverse of the class projection, preferring unit columns so that
    /// class representatives are supported on single rays whenever possible.
    fn class_section(projection: &IntMatrix) -> Result<IntMatrix> {
        let k = projection.rows();
        let r = projection.cols();
        let mut unit_cols = vec![None; k];
        for j in 0..r {
            let col = projection.column(j);
            let nonzero: Vec<usize> = (0..k).filter(|&i| !col[i].is_zero()).collect();
            if nonzero.len() == 1 && col[nonzero[0]].is_one() {
                unit_cols[nonzero[0]] = Some(j);
            }
        }
        if unit_cols.iter().all(|c| c.is_some()) {
            let mut s = IntMatrix::zeros(r, k);
            for (i, c) in unit_cols.iter().enumerate() {
                s[(c.unwrap(), i)] = BigInt::one();
            }
            return Ok(s);
        }
        integer_right_inverse(projection)
    }

    /// Projective space `P^n`: rays `e_1, ..., e_n, -(e_1 + ... + e_n)`, cones all `n`-subsets.
    pub fn projective_space(n: usize) -> Result<ToricVariety> {
        if n == 0 {
            return Err(ToricError::InvalidArgument("projective space needs n >= 1".into()));
        }
        let mut rays: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        rays.push(vec![-1; n]);
        let cones = (0..=n).rev().map(|skip| (0..=n).filter(|&i| i != skip).collect()).collect();
        ToricVariety::new(Fan::trusted(n, rays, cones)?)
    }

    /// Hirzebruch surface `F_a` with rays `(1,0), (0,1), (-1,a), (0,-1)`.
    pub fn hirzebruch(a: i64) -> Result<ToricVariety> {
        if a < 0 {
            return Err(ToricError::InvalidArgument("Hirzebruch parameter must be >= 0".into()));
        }
        let rays = vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]];
        let cones = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]];
        ToricVariety::new(Fan::trusted(2, rays, cones)?)
    }

    /// The one-point variety (zero-dimensional lattice, only the zero cone).
    pub fn point() -> ToricVariety {
        ToricVariety::new(Fan::trusted(0, vec![], vec![vec![]]).expect("point fan"))
            .expect("point variety")
    }

    /// Product variety: rays of `self` padded with zeros, then rays of `other`.
    pub fn product(&self, other: &ToricVariety) -> Result<ToricVariety> {
        let (n1, n2) = (self.dim(), other.dim());
        let r1 = self.num_rays();
        let mut rays = Vec::with_capacity(r1 + other.num_rays());
        for u in self.fan.rays() {
            let mut v = u.clone();
            v.extend(std::iter::repeat(0).take(n2));
            rays.push(v);
        }
        for u in other.fan.rays() {
            let mut v = vec![0; n1];
            v.extend(u.iter().copied());
            rays.push(v);
        }
        let mut cones = Vec::new();
        for a in self.fan.max_cones() {
            for b in other.fan.max_cones() {
                let mut c = a.clone();
                c.extend(b.iter().map(|i| i + r1));
                cones.push(c);
            }
        }
        ToricVariety::new(Fan::trusted(n1 + n2, rays, cones)?)
    }

    /// Star subdivision along the cone spanned by `selected`; the new ray is appended last.
    pub fn blowup(&self, selected: &[usize]) -> Result<ToricVariety> {
        let mut sel = selected.to_vec();
        sel.sort_unstable();
        sel.dedup();
        if sel.is_empty() || sel.iter().any(|&i| i >= self.num_rays()) || !self.fan.is_face(&sel) {
            return Err(ToricError::NotAFace(sel));
        }
        if sel.len() == 1 {
            return Err(ToricError::AlreadyARay(sel));
        }
        let n = self.dim();
        let sum: Vec<i64> = (0..n).map(|k| sel.iter().map(|&i| self.fan.rays()[i][k]).sum()).collect();
        let new_ray = primitive_vector(&sum)?;
        let new_index = self.num_rays();
        let mut rays = self.fan.rays().to_vec();
        rays.push(new_ray);
        let sel_mask = mask_of(&sel);
        let mut cones = Vec::new();
        for c in self.fan.max_cones() {
            if mask_of(c) & sel_mask == sel_mask {
                for &drop in &sel {
                    let mut nc: Vec<usize> = c.iter().copied().filter(|&i| i != drop).collect();
                    nc.push(new_index);
                    nc.sort_unstable();
                    cones.push(nc);
                }
            } else {
                cones.push(c.clone());
            }
        }
        ToricVariety::new(Fan::trusted(n, rays, cones)?)
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn dim(&self) -> usize {
        self.fan.dim()
    }

    pub fn num_rays(&self) -> usize {
        self.fan.num_rays()
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        self.fan.rays()
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        self.fan.max_cones()
    }

    pub fn is_smooth(&self) -> bool {
        self.fan.is_smooth()
    }

    pub fn is_complete(&self) -> bool {
        self.fan.is_complete()
    }

    pub fn class_rank(&self) -> usize {
        self.class_projection.len()
    }

    /// Torsion invariants of the class group (empty for smooth complete varieties).
    pub fn class_torsion(&self) -> &[i64] {
        &self.torsion
    }

    /// Matrix of the projection `Z^{rays} -> Cl(X)` in the fixed basis.
    pub fn class_projection(&self) -> &[Vec<i64>] {
        &self.class_projection
    }

    pub fn divisor(&self, coeffs: Vec<i64>) -> Result<TDivisor> {
        if coeffs.len() != self.num_rays() {
            return Err(ToricError::DivisorLength { expected: self.num_rays(), got: coeffs.len() });
        }
        Ok(TDivisor(coeffs))
    }

    pub(crate) fn check_divisor(&self, d: &TDivisor) -> Result<()> {
        if d.0.len() != self.num_rays() {
            return Err(ToricError::DivisorLength { expected: self.num_rays(), got: d.0.len() });
        }
        Ok(())
    }

    pub(crate) fn check_class(&self, c: &DivisorClass) -> Result<()> {
        if c.0.len() != self.class_rank() {
            return Err(ToricError::ClassLength { expected: self.class_rank(), got: c.0.len() });
        }
        Ok(())
    }

    /// Canonical divisor `K_X`: every coefficient `-1`.
    pub fn canonical_divisor(&self) -> TDivisor {
        TDivisor(vec![-1; self.num_rays()])
    }

    /// `<m, u_rho>` for each ray.
    pub fn pairings(&self, m: &[i64]) -> Vec<i64> {
        self.fan.rays().iter().map(|u| dot(u, m)).collect()
    }

    /// Principal divisor of the character `m`.
    pub fn principal_divisor(&self, m: &[i64]) -> TDivisor {
        TDivisor(self.pairings(m))
    }

    pub fn class_of(&self, d: &TDivisor) -> DivisorClass {
        DivisorClass(self.class_projection.iter().map(|row| dot(row, &d.0)).collect())
    }

    /// Canonical representative of a class, supported on the basis rays when possible.
    pub fn divisor_of_class(&self, c: &DivisorClass) -> TDivisor {
        TDivisor(self.class_section.iter().map(|row| dot(row, &c.0)).collect())
    }

    fn chambers(&self) -> &[Chamber] {
        self.chambers.get_or_init(|| {
            let n = self.dim();
            let mut out = Vec::new();
            for subset in combinations(self.num_rays(), n) {
                let rows: Vec<Vec<i64>> = subset.iter().map(|&i| self.fan.rays()[i].clone()).collect();
                if let Some(inverse) = RatMatrix::from_i64_rows(n, &rows).inverse() {
                    out.push(Chamber { rays: subset, inverse });
                }
            }
            out
        })
    }

    /// All points `m` with `<m, u_rho> = -a_rho` on `n` linearly independent rays.
    pub fn chamber_vertices(&self, d: &TDivisor) -> Vec<Vec<BigRational>> {
        self.chambers()
            .iter()
            .map(|ch| {
                let rhs: Vec<BigRational> =
                    ch.rays.iter().map(|&i| BigRational::from_integer((-d.0[i]).into())).collect();
                ch.inverse.mul_vec(&rhs)
            })
            .collect()
    }

    /// Lattice bounding box of all chamber vertices, enlarged by one in every direction.
    ///
    /// Every character with a nonzero graded piece of cohomology of `O(D)` lies inside.
    pub fn character_box(&self, d: &TDivisor) -> Result<LatticeBox> {
        self.check_divisor(d)?;
        let n = self.dim();
        if n == 0 {
            return Ok(LatticeBox::new(vec![], vec![]));
        }
        let verts = self.chamber_vertices(d);
        if verts.is_empty() {
            return Err(ToricError::RaysDoNotSpan);
        }
        let mut lo = vec![i64::MAX; n];
        let mut hi = vec![i64::MIN; n];
        for v in &verts {
            for k in 0..n {
                let f = crate::linalg::big_to_i64(&v[k].floor().to_integer())?;
                let c = crate::linalg::big_to_i64(&v[k].ceil().to_integer())?;
                lo[k] = lo[k].min(f);
                hi[k] = hi[k].max(c);
            }
        }
        Ok(LatticeBox::new(lo.iter().map(|x| x - 1).collect(), hi.iter().map(|x| x + 1).collect()))
    }

    /// For each maximal cone, the point `m_sigma` with `<m_sigma, u_rho> = -a_rho` on its rays.
    pub fn divisor_polytope_vertices(&self, d: &TDivisor) -> Result<Vec<(Vec<usize>, Vec<BigRational>)>> {
        self.check_divisor(d)?;
        let n = self.dim();
        let mut out = Vec::new();
        for cone in self.max_cones() {
            if cone.len() != n {
                return Err(ToricError::NotSmoothComplete);
            }
            let rows: Vec<Vec<i64>> = cone.iter().map(|&i| self.fan.rays()[i].clone()).collect();
            let inv = RatMatrix::from_i64_rows(n, &rows).inverse().ok_or(ToricError::NotSmoothComplete)?;
            let rhs: Vec<BigRational> = cone.iter().map(|&i| BigRational::from_integer((-d.0[i]).into())).collect();
            out.push((cone.clone(), inv.mul_vec(&rhs)));
        }
        Ok(out)
    }

    /// Lattice points of `P_D = { m : <m, u_rho> >= -a_rho }`, in lexicographic order.
    pub fn lattice_points(&self, d: &TDivisor) -> Result<Vec<Vec<i64>>> {
        let bx = self.character_box(d)?;
        Ok(bx.iter().filter(|m| self.in_polytope(d, m)).collect())
    }

    pub fn count_lattice_points(&self, d: &TDivisor) -> Result<usize> {
        let bx = self.character_box(d)?;
        Ok(bx.iter().filter(|m| self.in_polytope(d, m)).count())
    }

    fn in_polytope(&self, d: &TDivisor, m: &[i64]) -> bool {
        self.fan.rays().iter().zip(&d.0).all(|(u, a)| dot(u, m) >= -a)
    }

    /// Mask of rays with `<m, u_rho> < -a_rho`.
    pub fn negative_mask(&self, d: &TDivisor, m: &[i64]) -> u64 {
        self.fan
            .rays()
            .iter()
            .zip(&d.0)
            .enumerate()
            .filter(|(_, (u, a))| dot(u, m) < -**a)
            .fold(0u64, |acc, (i, _)| acc | (1u64 << i))
    }
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, 0, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn floor_div(a: i64, b: i64) -> i64 {
    num_integer::Integer::div_floor(&a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hirzebruch_class_basis() {
        let f1 = ToricVariety::hirzebruch(1).unwrap();
        assert_eq!(f1.class_of(&TDivisor(vec![0, -1, -2, -3])), DivisorClass(vec![-1, -4]));
        assert_eq!(f1.class_of(&TDivisor(vec![0, 0, 1, 0])), DivisorClass(vec![1, 0]));
        assert_eq!(f1.class_of(&TDivisor(vec![0, 0, 0, 1])), DivisorClass(vec![0, 1]));
        assert_eq!(f1.class_of(&TDivisor(vec![1, 0, 0, 0])), DivisorClass(vec![1, 0]));
        assert_eq!(f1.divisor_of_class(&DivisorClass(vec![2, -1])), TDivisor(vec![0, 0, 2, -1]));
    }

    #[test]
    fn projective_builders() {
        let p1 = ToricVariety::projective_space(1).unwrap();
        assert_eq!(p1.rays(), &[vec![1], vec![-1]]);
        assert_eq!(p1.max_cones().len(), 2);
        let p2 = ToricVariety::projective_space(2).unwrap();
        assert_eq!(p2.class_rank(), 1);
        assert_eq!(p2.class_of(&TDivisor(vec![1, 1, 1])), DivisorClass(vec![3]));
        let p4 = ToricVariety::projective_space(4).unwrap();
        assert_eq!(p4.num_rays(), 5);
        assert_eq!(p4.max_cones().len(), 5);
        assert!(p4.is_smooth() && p4.is_complete());
        assert!(ToricVariety::projective_space(0).is_err());
        assert!(ToricVariety::hirzebruch(-1).is_err());
    }

    #[test]
    fn products_and_point() {
        let p1 = ToricVariety::projective_space(1).unwrap();
        let pp = p1.product(&p1).unwrap();
        assert_eq!((pp.num_rays(), pp.max_cones().len()), (4, 4));
        let f1p1 = ToricVariety::hirzebruch(1).unwrap().product(&p1).unwrap();
        assert_eq!((f1p1.num_rays(), f1p1.max_cones().len(), f1p1.dim()), (6, 8, 3));
        let f1 = ToricVariety::hirzebruch(1).unwrap();
        let same = f1.product(&ToricVariety::point()).unwrap();
        assert_eq!(same.fan(), f1.fan());
    }

    #[test]
    fn blowups() {
        let p1 = ToricVariety::projective_space(1).unwrap();
        let x = ToricVariety::hirzebruch(1).unwrap().product(&p1).unwrap().blowup(&[1, 5]).unwrap();
        assert_eq!((x.num_rays(), x.max_cones().len()), (7, 10));
        assert_eq!(x.rays()[6], vec![0, 1, -1]);
        assert!(x.is_smooth() && x.is_complete());
        assert!(matches!(p1.blowup(&[0]), Err(ToricError::AlreadyARay(_))));
        let p2 = ToricVariety::projective_space(2).unwrap();
        assert!(matches!(p1.product(&p1).unwrap().blowup(&[0, 1]), Err(ToricError::NotAFace(_))));
        let bl = p2.blowup(&[0, 1]).unwrap();
        assert_eq!(bl.rays()[3], vec![1, 1]);
        assert_eq!(bl.max_cones().len(), 4);
    }

    #[test]
    fn lattice_point_basics() {
        let p1 = ToricVariety::projective_space(1).unwrap();
        assert_eq!(p1.lattice_points(&TDivisor(vec![2, 0])).unwrap(), vec![vec![-2], vec![-1], vec![0]]);
        let bx = p1.character_box(&TDivisor(vec![2, 0])).unwrap();
        assert!(bx.lo()[0] <= -3 && bx.hi()[0] >= 1);
        let f1 = ToricVariety::hirzebruch(1).unwrap();
        assert!(f1.lattice_points(&TDivisor(vec![0, -1, -2, -3])).unwrap().is_empty());
        assert_eq!(f1.lattice_points(&TDivisor::zero(4)).unwrap(), vec![vec![0, 0]]);
        let p2 = ToricVariety::projective_space(2).unwrap();
        assert_eq!(p2.count_lattice_points(&TDivisor(vec![1, 1, 1])).unwrap(), 10);
    }

    #[test]
    fn polytope_vertices_p1() {
        let p1 = ToricVariety::projective_space(1).unwrap();
        let v = p1.divisor_polytope_vertices(&TDivisor(vec![3, 0])).unwrap();
        let vals: Vec<BigRational> = v.iter().map(|(_, m)| m[0].clone()).collect();
        assert_eq!(vals, vec![BigRational::from_integer((-3).into()), BigRational::zero()]);
    }
}
