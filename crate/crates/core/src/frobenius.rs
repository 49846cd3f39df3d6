//! Pushforward along the toric Frobenius `F_p`, multiplication by `p` on `N`.
//!
//! Sections of `O(D)` in degree `m = u + p m_1` (with `u` a residue in `{0..p-1}^n`) become
//! sections of `O(D_u)` in degree `m_1`, where `(D_u)_rho = floor((a_rho + <u, u_rho>) / p)`.
//! Maps between line bundles are pushed character by character in the same way.

use num_rational::BigRational;
use serde::Serialize;

use crate::cox::{CoxPolynomial, FreeModule, PresentedModule};
use crate::error::{Result, ToricError};
use crate::lattice::LatticeBox;
use crate::linalg::{big_to_i64, RatMatrix};
use crate::variety::{dot, floor_div, DivisorClass, TDivisor, ToricVariety};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusSummand {
    pub u: Vec<i64>,
    pub divisor: TDivisor,
    pub class: DivisorClass,
}

fn residues(n: usize, p: u32) -> impl Iterator<Item = Vec<i64>> {
    LatticeBox::cube(n, 0, p as i64 - 1).iter().collect::<Vec<_>>().into_iter()
}

fn residue_index(u: &[i64], p: u32) -> usize {
    u.iter().fold(0usize, |acc, &x| acc * p as usize + x as usize)
}

fn check(x: &ToricVariety, p: u32) -> Result<()> {
    if p == 0 {
        return Err(ToricError::InvalidArgument("p must be positive".into()));
    }
    if !(x.is_smooth() && x.is_complete()) {
        return Err(ToricError::NotSmoothComplete);
    }
    Ok(())
}

/// `F_{p*} O(D) = sum_u O(D_u)`, residues in lexicographic order.
pub fn frobenius_summands(x: &ToricVariety, p: u32, d: &TDivisor) -> Result<Vec<FrobeniusSummand>> {
    check(x, p)?;
    x.check_divisor(d)?;
    Ok(residues(x.dim(), p)
        .map(|u| {
            let coeffs: Vec<i64> = x.pairings(&u).iter().zip(&d.0).map(|(pu, a)| floor_div(a + pu, p as i64)).collect();
            let divisor = TDivisor(coeffs);
            FrobeniusSummand { class: x.class_of(&divisor), divisor, u }
        })
        .collect())
}

/// Generator of degree `g` spans `S(-g)`, whose sheaf is `O(-E_g)` for the canonical
/// representative `E_g` of `g`.
fn generator_divisor(x: &ToricVariety, g: &DivisorClass) -> TDivisor {
    -&x.divisor_of_class(g)
}

/// Pushforward of a free module; generators ordered by (original generator, residue).
pub fn push_free_module(x: &ToricVariety, p: u32, f: &FreeModule) -> Result<FreeModule> {
    let mut degrees = Vec::with_capacity(f.rank() * (p as usize).pow(x.dim() as u32));
    for g in &f.degrees {
        x.check_class(g)?;
        for s in frobenius_summands(x, p, &generator_divisor(x, g))? {
            degrees.push(DivisorClass(s.class.0.iter().map(|c| -c).collect()));
        }
    }
    Ok(FreeModule::new(degrees))
}

/// Character `w` with `<w, u_rho> = t_rho - s_rho - c_rho`, relating multiplication by `x^c`
/// from `O(S)` to `O(T)` to a shift of characters.
fn alignment(x: &ToricVariety, s: &TDivisor, t: &TDivisor, c: &[u32]) -> Result<Vec<i64>> {
    let n = x.dim();
    let rhs: Vec<BigRational> = (0..x.num_rays())
        .map(|r| BigRational::from_integer((t.0[r] - s.0[r] - c[r] as i64).into()))
        .collect();
    if n == 0 {
        return if rhs.iter().all(|v| v == &BigRational::from_integer(0.into())) {
            Ok(vec![])
        } else {
            Err(ToricError::NotHomogeneous)
        };
    }
    let a = RatMatrix::from_i64_rows(n, x.rays());
    let w = a.solve(&rhs).ok_or(ToricError::NotHomogeneous)?;
    w.iter()
        .map(|v| if v.is_integer() { big_to_i64(&v.to_integer()) } else { Err(ToricError::NotHomogeneous) })
        .collect()
}

/// Pushforward of a homogeneous matrix between free modules.
///
/// Row `(i, u')` and column `(j, u)` are laid out as `i * p^n + index(u')` and
/// `j * p^n + index(u)`.
pub fn push_matrix(x: &ToricVariety, p: u32, m: &PresentedModule) -> Result<PresentedModule> {
    check(x, p)?;
    let n = x.dim();
    let q = (p as usize).pow(n as u32);
    let target = push_free_module(x, p, &m.target)?;
    let source = push_free_module(x, p, &m.source)?;
    let tdivs: Vec<TDivisor> = m.target.degrees.iter().map(|g| generator_divisor(x, g)).collect();
    let sdivs: Vec<TDivisor> = m.source.degrees.iter().map(|g| generator_divisor(x, g)).collect();
    let tsum: Vec<Vec<FrobeniusSummand>> = tdivs.iter().map(|d| frobenius_summands(x, p, d)).collect::<Result<_>>()?;
    let ssum: Vec<Vec<FrobeniusSummand>> = sdivs.iter().map(|d| frobenius_summands(x, p, d)).collect::<Result<_>>()?;
    let pi = p as i64;
    let mut entries = vec![vec![CoxPolynomial::zero(); source.rank()]; target.rank()];
    for (i, row) in m.entries.iter().enumerate() {
        for (j, poly) in row.iter().enumerate() {
            for (c, coeff) in poly.terms() {
                let w = alignment(x, &sdivs[j], &tdivs[i], c)?;
                for (ui, su) in ssum[j].iter().enumerate() {
                    let shifted: Vec<i64> = su.u.iter().zip(&w).map(|(a, b)| a - b).collect();
                    let up: Vec<i64> = shifted.iter().map(|v| v.rem_euclid(pi)).collect();
                    let k: Vec<i64> = shifted.iter().zip(&up).map(|(a, b)| (a - b) / pi).collect();
                    let tu = &tsum[i][residue_index(&up, p)];
                    let mut e = Vec::with_capacity(x.num_rays());
                    for (r, ray) in x.rays().iter().enumerate() {
                        let v = dot(&k, ray) + tu.divisor.0[r] - su.divisor.0[r];
                        if v < 0 {
                            return Err(ToricError::NotHomogeneous);
                        }
                        e.push(v as u32);
                    }
                    entries[i * q + residue_index(&up, p)][j * q + ui].add_term(coeff.clone(), e);
                }
            }
        }
    }
    Ok(PresentedModule { target, source, entries })
}

/// Pushforward of the cokernel of a presentation, as the cokernel of the pushed matrix.
pub fn push_module(x: &ToricVariety, p: u32, m: &PresentedModule) -> Result<PresentedModule> {
    push_matrix(x, p, m)
}

/// Pushforward of a chain of maps `d_1, d_2, ...` with `d_k o d_{k+1} = 0`.
pub fn push_complex(x: &ToricVariety, p: u32, maps: &[PresentedModule]) -> Result<Vec<PresentedModule>> {
    for w in maps.windows(2) {
        if !w[0].compose(&w[1])?.is_zero() {
            return Err(ToricError::NotAComplex);
        }
    }
    maps.iter().map(|m| push_matrix(x, p, m)).collect()
}
