//! Toric morphisms given by lattice maps compatible with both fans.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Result, ToricError};
use crate::fan::{indices_of, mask_of, SubFan};
use crate::linalg::{
    big_to_i64, hermite_normal_form, integer_kernel, integer_right_inverse, reduce_mod_lattice, smith_diagonal,
    IntMatrix, RatMatrix,
};
use crate::variety::{dot, TDivisor, ToricVariety};

/// Where a source ray lands: the smallest target cone containing its image, with the
/// coordinates of the image on that cone's rays.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Carrier {
    mask: u64,
    coords: Vec<(usize, BigRational)>,
}

/// A toric morphism `X -> Y` given by an integer matrix `f_N` of shape `dim Y x dim X`.
#[derive(Clone, Debug)]
pub struct ToricMorphism {
    source: Arc<ToricVariety>,
    target: Arc<ToricVariety>,
    matrix: Vec<Vec<i64>>,
    finite: bool,
    carriers: Vec<Carrier>,
}

impl PartialEq for ToricMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.matrix == other.matrix
    }
}

impl ToricMorphism {
    /// Checks that every source cone maps into a cone of the target.
    pub fn new(target: Arc<ToricVariety>, source: Arc<ToricVariety>, matrix: Vec<Vec<i64>>) -> Result<ToricMorphism> {
        if matrix.len() != target.dim() || matrix.iter().any(|r| r.len() != source.dim()) {
            return Err(ToricError::InvalidArgument(format!(
                "lattice map must be {} x {}",
                target.dim(),
                source.dim()
            )));
        }
        let mut carriers = Vec::with_capacity(source.num_rays());
        for u in source.rays() {
            let image: Vec<i64> = matrix.iter().map(|row| dot(row, u)).collect();
            carriers.push(Self::carrier(&target, &image));
        }
        for cone in source.max_cones() {
            let mut union = 0u64;
            for &r in cone {
                match &carriers[r] {
                    Some(c) => union |= c.mask,
                    None => return Err(ToricError::Incompatible { cone: cone.clone() }),
                }
            }
            if !target.fan().is_face(&indices_of(union)) {
                return Err(ToricError::Incompatible { cone: cone.clone() });
            }
        }
        Ok(ToricMorphism {
            source,
            target,
            matrix,
            finite: false,
            carriers: carriers.into_iter().map(Option::unwrap).collect(),
        })
    }

    fn carrier(target: &ToricVariety, v: &[i64]) -> Option<Carrier> {
        if v.iter().all(|&x| x == 0) {
            return Some(Carrier { mask: 0, coords: vec![] });
        }
        let rhs: Vec<BigRational> = v.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        for cone in target.max_cones() {
            let cols = cone
                .iter()
                .map(|&i| target.rays()[i].iter().map(|&x| BigRational::from_integer(x.into())).collect())
                .collect();
            let a = RatMatrix::from_columns(target.dim(), cols);
            if let Some(x) = a.solve(&rhs) {
                if x.iter().all(|c| !c.is_negative()) {
                    let coords: Vec<(usize, BigRational)> =
                        cone.iter().zip(x).filter(|(_, c)| !c.is_zero()).map(|(&i, c)| (i, c)).collect();
                    let mask = coords.iter().fold(0u64, |m, (i, _)| m | (1u64 << i));
                    return Some(Carrier { mask, coords });
                }
            }
        }
        None
    }

    pub fn identity(x: Arc<ToricVariety>) -> ToricMorphism {
        let n = x.dim();
        let m = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        ToricMorphism::new(x.clone(), x, m).expect("identity is compatible")
    }

    /// The toric Frobenius `F_p`, multiplication by `p` on `N`. Flagged finite.
    pub fn frobenius(x: Arc<ToricVariety>, p: u32) -> Result<ToricMorphism> {
        if p == 0 {
            return Err(ToricError::InvalidArgument("p must be positive".into()));
        }
        let n = x.dim();
        let m = (0..n).map(|i| (0..n).map(|j| if i == j { p as i64 } else { 0 }).collect()).collect();
        let mut f = ToricMorphism::new(x.clone(), x, m)?;
        f.finite = p > 1;
        Ok(f)
    }

    pub fn source(&self) -> &Arc<ToricVariety> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ToricVariety> {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    /// Set for Frobenius morphisms with `p > 1`.
    pub fn is_finite(&self) -> bool {
        self.finite
    }

    pub fn apply(&self, u: &[i64]) -> Vec<i64> {
        self.matrix.iter().map(|row| dot(row, u)).collect()
    }

    fn int_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.source.dim(), &self.matrix)
    }

    /// `g o self`.
    pub fn then(&self, g: &ToricMorphism) -> Result<ToricMorphism> {
        if *g.source != *self.target {
            return Err(ToricError::InvalidArgument("morphisms are not composable".into()));
        }
        let prod = g.int_matrix().mul(&self.int_matrix()).to_i64_rows()?;
        ToricMorphism::new(g.target.clone(), self.source.clone(), prod)
    }

    /// Lattice surjectivity: the Smith form of `f_N` has only unit invariants.
    pub fn is_fibration(&self) -> bool {
        let m = self.int_matrix();
        let diag = smith_diagonal(&m);
        diag.len() == self.target.dim() && diag.iter().all(|d| d == &1.into())
    }

    pub(crate) fn require_fibration(&self) -> Result<()> {
        if self.is_fibration() {
            Ok(())
        } else {
            Err(ToricError::NotFibration)
        }
    }

    /// Pullback of a torus-invariant divisor through the support function of `E`.
    pub fn pullback_divisor(&self, e: &TDivisor) -> Result<TDivisor> {
        self.target.check_divisor(e)?;
        let mut out = Vec::with_capacity(self.carriers.len());
        for c in &self.carriers {
            let mut v = BigRational::zero();
            for (i, coeff) in &c.coords {
                v += coeff * BigRational::from_integer(e.0[*i].into());
            }
            if !v.is_integer() {
                return Err(ToricError::InvalidArgument("pullback is not Cartier".into()));
            }
            out.push(big_to_i64(&v.to_integer())?);
        }
        Ok(TDivisor(out))
    }

    /// Mask (over target rays) of the smallest cone containing each source ray's image.
    pub fn ray_carriers(&self) -> Vec<u64> {
        self.carriers.iter().map(|c| c.mask).collect()
    }

    /// Source cones mapping into the target cone `sigma`, as a subfan of the source fan.
    pub fn preimage_subfan(&self, sigma: &[usize]) -> Result<SubFan> {
        if sigma.iter().any(|&i| i >= self.target.num_rays()) || !self.target.fan().is_face(sigma) {
            return Err(ToricError::NotAFace(sigma.to_vec()));
        }
        Ok(self.preimage_of_mask(mask_of(sigma)))
    }

    pub(crate) fn preimage_of_mask(&self, sigma: u64) -> SubFan {
        SubFan::from_masks(self.source.max_cones().iter().map(|tau| {
            tau.iter()
                .filter(|&&r| self.carriers[r].mask & !sigma == 0)
                .fold(0u64, |m, &r| m | (1u64 << r))
        }))
    }

    /// Characters of the kernel torus and a splitting of `M_X` along them.
    pub fn kernel_characters(&self) -> Result<KernelCharacterData> {
        self.require_fibration()?;
        let n = self.source.dim();
        let f = self.int_matrix();
        let k = integer_kernel(&f);
        let projection = k.transpose();
        let rank = projection.rows();
        let raw = if rank == 0 { IntMatrix::zeros(n, 0) } else { integer_right_inverse(&projection)? };
        let (image_hnf, _) = hermite_normal_form(&f);
        let mut section_cols = Vec::with_capacity(rank);
        for j in 0..rank {
            section_cols.push(big_to_i64_vec(&reduce_mod_lattice(&raw.column(j), &image_hnf))?);
        }
        let section = (0..n).map(|i| section_cols.iter().map(|c| c[i]).collect()).collect();
        Ok(KernelCharacterData {
            pullback: f.transpose().to_i64_rows()?,
            projection: projection.to_i64_rows()?,
            section,
            rank,
        })
    }
}

fn big_to_i64_vec(v: &[num_bigint::BigInt]) -> Result<Vec<i64>> {
    v.iter().map(big_to_i64).collect()
}

/// Splitting data for `M_X = s(M_K) + f^*(M_Y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelCharacterData {
    /// `f^*: M_Y -> M_X`, shape `dim X x dim Y`.
    pub pullback: Vec<Vec<i64>>,
    /// `M_X -> M_K`, shape `rank x dim X`.
    pub projection: Vec<Vec<i64>>,
    /// `s: M_K -> M_X`, shape `dim X x rank`.
    pub section: Vec<Vec<i64>>,
    pub rank: usize,
}

impl KernelCharacterData {
    pub fn project(&self, m: &[i64]) -> Vec<i64> {
        self.projection.iter().map(|row| dot(row, m)).collect()
    }

    pub fn lift(&self, u: &[i64]) -> Vec<i64> {
        self.section.iter().map(|row| dot(row, u)).collect()
    }

    pub fn pull(&self, m_y: &[i64]) -> Vec<i64> {
        self.pullback.iter().map(|row| dot(row, m_y)).collect()
    }

    /// The unique `(u, m')` with `m = s(u) + f^*(m')`.
    pub fn decompose(&self, m: &[i64]) -> (Vec<i64>, Vec<i64>) {
        let u = self.project(m);
        let s = self.lift(&u);
        let rest: Vec<BigRational> =
            m.iter().zip(&s).map(|(a, b)| BigRational::from_integer((a - b).into())).collect();
        let dim_y = self.pullback.first().map_or(0, |r| r.len());
        let a = RatMatrix::from_i64_rows(dim_y, &self.pullback);
        let mp = if dim_y == 0 {
            vec![]
        } else {
            a.solve(&rest)
                .expect("remainder lies in the pullback lattice")
                .iter()
                .map(|x| big_to_i64(&x.to_integer()).expect("small"))
                .collect()
        };
        (u, mp)
    }
}
