//! Multigraded modules over the Cox ring, presented by homogeneous polynomial matrices.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::Zero;
#[cfg(test)]
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ToricError};
use crate::lattice::LatticeBox;
use crate::linalg::RatMatrix;
use crate::variety::{DivisorClass, TDivisor, ToricVariety};

/// A term `c * x^e` of the Cox ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxMonomial {
    pub coefficient: BigRational,
    pub exponents: Vec<u32>,
}

impl CoxMonomial {
    pub fn class(&self, x: &ToricVariety) -> DivisorClass {
        x.class_of(&TDivisor(self.exponents.iter().map(|&e| e as i64).collect()))
    }
}

/// A polynomial in the Cox ring, kept with like terms combined and zero terms dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CoxPolynomial {
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl CoxPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(coefficient: BigRational, exponents: Vec<u32>) -> Self {
        let mut p = Self::zero();
        p.add_term(coefficient, exponents);
        p
    }

    /// The constant `c` in a ring with `vars` variables.
    pub fn constant(c: i64, vars: usize) -> Self {
        Self::monomial(BigRational::from_integer(c.into()), vec![0; vars])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = CoxMonomial>) -> Self {
        let mut p = Self::zero();
        for t in terms {
            p.add_term(t.coefficient, t.exponents);
        }
        p
    }

    pub fn add_term(&mut self, coefficient: BigRational, exponents: Vec<u32>) {
        if coefficient.is_zero() {
            return;
        }
        let slot = self.terms.entry(exponents).or_insert_with(BigRational::zero);
        *slot += coefficient;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn to_monomials(&self) -> Vec<CoxMonomial> {
        self.terms.iter().map(|(e, c)| CoxMonomial { coefficient: c.clone(), exponents: e.clone() }).collect()
    }

    pub fn add(&self, other: &CoxPolynomial) -> CoxPolynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(c.clone(), e.clone());
        }
        out
    }

    pub fn neg(&self) -> CoxPolynomial {
        CoxPolynomial { terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn mul(&self, other: &CoxPolynomial) -> CoxPolynomial {
        let mut out = CoxPolynomial::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(c1 * c2, e1.iter().zip(e2).map(|(a, b)| a + b).collect());
            }
        }
        out
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut sum = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            sum += t;
        }
        sum
    }
}

/// A free module `S(-g_1) + ... + S(-g_k)`, recorded by its generator degrees `g_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FreeModule {
    pub degrees: Vec<DivisorClass>,
}

impl FreeModule {
    pub fn new(degrees: Vec<DivisorClass>) -> Self {
        FreeModule { degrees }
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    /// Monomial basis of the degree-`d` piece: pairs (generator, exponents).
    pub fn graded_piece_basis(&self, x: &ToricVariety, d: &DivisorClass) -> Result<Vec<(usize, Vec<u32>)>> {
        let mut out = Vec::new();
        for (j, g) in self.degrees.iter().enumerate() {
            x.check_class(g)?;
            let c = d - g;
            let rep = x.divisor_of_class(&c);
            for m in x.lattice_points(&rep)? {
                let e = x.pairings(&m).iter().zip(&rep.0).map(|(p, a)| (p + a) as u32).collect();
                out.push((j, e));
            }
        }
        Ok(out)
    }

    pub fn graded_piece_dim(&self, x: &ToricVariety, d: &DivisorClass) -> Result<usize> {
        let mut n = 0;
        for g in &self.degrees {
            n += x.count_lattice_points(&x.divisor_of_class(&(d - g)))?;
        }
        Ok(n)
    }

    pub fn direct_sum(&self, other: &FreeModule) -> FreeModule {
        FreeModule { degrees: self.degrees.iter().chain(&other.degrees).cloned().collect() }
    }
}

/// A homogeneous map `source -> target` of free modules; `entries[i][j]` sends generator `j`
/// of the source to generator `i` of the target, so it has degree `g_j - g_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedModule {
    pub target: FreeModule,
    pub source: FreeModule,
    pub entries: Vec<Vec<CoxPolynomial>>,
}

impl PresentedModule {
    /// Validates shapes and homogeneity.
    pub fn new(x: &ToricVariety, target: FreeModule, source: FreeModule, entries: Vec<Vec<CoxPolynomial>>) -> Result<Self> {
        if entries.len() != target.rank() || entries.iter().any(|r| r.len() != source.rank()) {
            return Err(ToricError::InvalidArgument(format!(
                "matrix must be {} x {}",
                target.rank(),
                source.rank()
            )));
        }
        for g in target.degrees.iter().chain(&source.degrees) {
            x.check_class(g)?;
        }
        for (i, row) in entries.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                let want = &source.degrees[j] - &target.degrees[i];
                for (e, _) in p.terms() {
                    if e.len() != x.num_rays() {
                        return Err(ToricError::DivisorLength { expected: x.num_rays(), got: e.len() });
                    }
                    let c = x.class_of(&TDivisor(e.iter().map(|&v| v as i64).collect()));
                    if c != want {
                        return Err(ToricError::NotHomogeneous);
                    }
                }
            }
        }
        Ok(PresentedModule { target, source, entries })
    }

    /// The free module itself, with no relations.
    pub fn free(target: FreeModule) -> Self {
        let n = target.rank();
        PresentedModule { target, source: FreeModule::new(vec![]), entries: vec![vec![]; n] }
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.source.rank()
    }

    /// `self * other`, the composite `other.source -> other.target = self.source -> self.target`.
    pub fn compose(&self, other: &PresentedModule) -> Result<PresentedModule> {
        if self.source != other.target {
            return Err(ToricError::InvalidArgument("matrices are not composable".into()));
        }
        let mut entries = vec![vec![CoxPolynomial::zero(); other.cols()]; self.rows()];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                for k in 0..self.cols() {
                    *slot = slot.add(&self.entries[i][k].mul(&other.entries[k][j]));
                }
            }
        }
        Ok(PresentedModule { target: self.target.clone(), source: other.source.clone(), entries })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|p| p.is_zero())
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &PresentedModule) -> PresentedModule {
        let cols = self.cols() + other.cols();
        let mut entries = Vec::with_capacity(self.rows() + other.rows());
        for row in &self.entries {
            let mut r = row.clone();
            r.resize(cols, CoxPolynomial::zero());
            entries.push(r);
        }
        for row in &other.entries {
            let mut r = vec![CoxPolynomial::zero(); self.cols()];
            r.extend(row.iter().cloned());
            entries.push(r);
        }
        PresentedModule { target: self.target.direct_sum(&other.target), source: self.source.direct_sum(&other.source), entries }
    }

    /// The map on degree-`d` pieces, rows indexed by the target basis.
    pub fn graded_piece_matrix(&self, x: &ToricVariety, d: &DivisorClass) -> Result<RatMatrix> {
        let tb = self.target.graded_piece_basis(x, d)?;
        let sb = self.source.graded_piece_basis(x, d)?;
        let index: HashMap<&(usize, Vec<u32>), usize> = tb.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let mut m = RatMatrix::zeros(tb.len(), sb.len());
        for (col, (j, e)) in sb.iter().enumerate() {
            for (i, row) in self.entries.iter().enumerate() {
                for (c, coeff) in row[*j].terms() {
                    let key = (i, c.iter().zip(e).map(|(a, b)| a + b).collect::<Vec<u32>>());
                    let r = *index.get(&key).ok_or(ToricError::NotHomogeneous)?;
                    m[(r, col)] += coeff;
                }
            }
        }
        Ok(m)
    }

    /// Dimension of the cokernel in degree `d`.
    pub fn hilbert_value(&self, x: &ToricVariety, d: &DivisorClass) -> Result<usize> {
        if self.cols() == 0 {
            return self.target.graded_piece_dim(x, d);
        }
        let m = self.graded_piece_matrix(x, d)?;
        Ok(m.rows() - if m.rows() == 0 || m.cols() == 0 { 0 } else { m.rank() })
    }

    pub fn hilbert_function(&self, x: &ToricVariety, classes: &LatticeBox) -> Result<BTreeMap<Vec<i64>, usize>> {
        classes.iter().map(|c| Ok((c.clone(), self.hilbert_value(x, &DivisorClass(c))?))).collect()
    }

    /// Generic rank of the cokernel: rows minus the largest rank seen at random points.
    pub fn generic_cokernel_rank(&self, samples: usize, seed: u64) -> usize {
        let vars = self.entries.iter().flatten().flat_map(|p| p.terms().map(|(e, _)| e.len())).next().unwrap_or(0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = 0;
        for _ in 0..samples.max(1) {
            let point: Vec<BigRational> =
                (0..vars).map(|_| BigRational::from_integer(rng.gen_range(-97i64..=97).into())).collect();
            let rows: Vec<Vec<BigRational>> =
                self.entries.iter().map(|row| row.iter().map(|p| p.eval(&point)).collect()).collect();
            if self.cols() > 0 && !rows.is_empty() {
                best = best.max(RatMatrix::from_rows(self.cols(), rows).rank());
            }
        }
        self.rows() - best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> BigRational {
        BigRational::one()
    }

    fn x(e: &[u32]) -> CoxPolynomial {
        CoxPolynomial::monomial(one(), e.to_vec())
    }

    #[test]
    fn projective_plane_pieces() {
        let p2 = ToricVariety::projective_space(2).unwrap();
        let s = FreeModule::new(vec![DivisorClass(vec![0])]);
        assert_eq!(s.graded_piece_basis(&p2, &DivisorClass(vec![2])).unwrap().len(), 6);
        assert!(s.graded_piece_basis(&p2, &DivisorClass(vec![-1])).unwrap().is_empty());
    }

    #[test]
    fn hirzebruch_degree_one_zero() {
        let f1 = ToricVariety::hirzebruch(1).unwrap();
        let s = FreeModule::new(vec![DivisorClass(vec![0, 0])]);
        let mut b: Vec<Vec<u32>> =
            s.graded_piece_basis(&f1, &DivisorClass(vec![1, 0])).unwrap().into_iter().map(|(_, e)| e).collect();
        b.sort();
        assert_eq!(b, vec![vec![0, 0, 1, 0], vec![1, 0, 0, 0]]);
    }

    #[test]
    fn multiplication_on_p1() {
        let p1 = ToricVariety::projective_space(1).unwrap();
        let m = PresentedModule::new(
            &p1,
            FreeModule::new(vec![DivisorClass(vec![0])]),
            FreeModule::new(vec![DivisorClass(vec![1])]),
            vec![vec![x(&[1, 0])]],
        )
        .unwrap();
        let piece = m.graded_piece_matrix(&p1, &DivisorClass(vec![1])).unwrap();
        assert_eq!((piece.rows(), piece.cols()), (2, 1));
        assert_eq!(piece.rank(), 1);
        assert_eq!(m.hilbert_value(&p1, &DivisorClass(vec![3])).unwrap(), 1);
        assert_eq!(m.generic_cokernel_rank(3, 1), 0);
    }

    #[test]
    fn inhomogeneous_entry_is_rejected() {
        let p1 = ToricVariety::projective_space(1).unwrap();
        let err = PresentedModule::new(
            &p1,
            FreeModule::new(vec![DivisorClass(vec![0])]),
            FreeModule::new(vec![DivisorClass(vec![2])]),
            vec![vec![x(&[1, 0])]],
        )
        .unwrap_err();
        assert_eq!(err, ToricError::NotHomogeneous);
    }

    #[test]
    fn polynomial_arithmetic() {
        let p = x(&[1, 0]).add(&x(&[0, 1]));
        let q = x(&[1, 0]).add(&x(&[0, 1]).neg());
        let prod = p.mul(&q);
        assert_eq!(prod.terms().count(), 2);
        assert!(p.add(&p.neg()).is_zero());
    }
}
