//! Fixtures and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_hdi::cox::{CoxPolynomial, FreeModule, PresentedModule};
use toric_hdi::{DivisorClass, TDivisor, ToricMorphism, ToricVariety};

pub fn f1() -> Arc<ToricVariety> {
    Arc::new(ToricVariety::hirzebruch(1).unwrap())
}

pub fn p(n: usize) -> Arc<ToricVariety> {
    Arc::new(ToricVariety::projective_space(n).unwrap())
}

/// Projection of the first Hirzebruch surface onto the projective line.
pub fn phi() -> ToricMorphism {
    ToricMorphism::new(p(1), f1(), vec![vec![1, 0]]).unwrap()
}

/// Blowdown of the first Hirzebruch surface to the plane.
pub fn psi() -> ToricMorphism {
    ToricMorphism::new(p(2), f1(), vec![vec![0, -1], vec![1, 0]]).unwrap()
}

/// Blowup of `F1 x P1` along a torus-invariant curve, mapped back onto `F1`, with the
/// divisor that is `-2` on the rays `(0,0,1)` and `(0,1,-1)`.
pub fn theta() -> (ToricMorphism, TDivisor) {
    let x = f1().product(&ToricVariety::projective_space(1).unwrap()).unwrap().blowup(&[1, 5]).unwrap();
    let d = TDivisor(
        x.rays()
            .iter()
            .map(|r| if *r == vec![0, 0, 1] || *r == vec![0, 1, -1] { -2 } else { 0 })
            .collect(),
    );
    (ToricMorphism::new(f1(), Arc::new(x), vec![vec![1, 0, 0], vec![0, 1, 0]]).unwrap(), d)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_divisor(rng: &mut ChaCha8Rng, rays: usize, bound: i64) -> TDivisor {
    TDivisor((0..rays).map(|_| rng.gen_range(-bound..=bound)).collect())
}

/// Counts `m` with `<m, u_rho> >= -a_rho` by scanning a cube.
///
/// For varieties whose rays contain the standard basis and whose remaining rays have
/// entries in `{-1, 0, 1}` (projective spaces, `F1`), every such `m` has
/// `|m_i| <= sum |a_rho|`, so the cube below is large enough.
pub fn count_points_oracle(rays: &[Vec<i64>], a: &[i64]) -> usize {
    let n = rays[0].len();
    let r: i64 = a.iter().map(|v| v.abs()).sum();
    let mut count = 0;
    let mut m = vec![-r; n];
    loop {
        if rays.iter().zip(a).all(|(u, ai)| u.iter().zip(&m).map(|(x, y)| x * y).sum::<i64>() >= -ai) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == n {
                return count;
            }
            if m[k] < r {
                m[k] += 1;
                break;
            }
            m[k] = -r;
            k += 1;
        }
    }
}

/// Degree `d` monomials in three variables lying in the square of the ideal `(x, y)`.
pub fn squared_point_ideal_count(d: i64) -> usize {
    let mut c = 0;
    for a in 0..=d {
        for b in 0..=d - a {
            if a + b >= 2 {
                c += 1;
            }
        }
    }
    c
}

pub fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

pub fn poly(terms: &[(i64, [u32; 4])]) -> CoxPolynomial {
    let mut p = CoxPolynomial::zero();
    for (c, e) in terms {
        p.add_term(q(*c), e.to_vec());
    }
    p
}

/// Presentation of the cotangent module of `F1`: one relation `(x1 x3, x0, -x2)`.
pub fn cotangent_f1(x: &ToricVariety) -> PresentedModule {
    let cls = |a: i64, b: i64| DivisorClass(vec![a, b]);
    PresentedModule::new(
        x,
        FreeModule::new(vec![cls(2, 0), cls(0, 2), cls(0, 2)]),
        FreeModule::new(vec![cls(1, 2)]),
        vec![
            vec![poly(&[(1, [0, 1, 0, 1])])],
            vec![poly(&[(1, [1, 0, 0, 0])])],
            vec![poly(&[(-1, [0, 0, 1, 0])])],
        ],
    )
    .unwrap()
}

const X0: [u32; 4] = [1, 0, 0, 0];
const X2: [u32; 4] = [0, 0, 1, 0];
const X13: [u32; 4] = [0, 1, 0, 1];
const ONE: [u32; 4] = [0, 0, 0, 0];

/// The twelve by four reference matrix for the pushforward of the cotangent module at `p = 2`,
/// as (row degree, entries), each entry a single signed monomial or zero.
pub fn reference_pushforward() -> Vec<([i64; 2], [Option<(i64, [u32; 4])>; 4])> {
    vec![
        ([1, 0], [None, None, None, Some((1, X13))]),
        ([1, 1], [None, None, Some((1, ONE)), None]),
        ([2, 0], [None, Some((1, X13)), None, None]),
        ([1, 1], [Some((1, ONE)), None, None, None]),
        ([0, 1], [Some((1, X0)), None, None, None]),
        ([0, 2], [None, Some((1, X0)), None, None]),
        ([1, 1], [None, None, Some((1, ONE)), None]),
        ([0, 2], [None, None, None, Some((1, ONE))]),
        ([0, 1], [None, None, Some((-1, X2)), None]),
        ([0, 2], [None, None, None, Some((-1, ONE))]),
        ([1, 1], [Some((-1, ONE)), None, None, None]),
        ([0, 2], [None, Some((-1, X2)), None, None]),
    ]
}

/// The reference matrix as a presentation; column degrees follow from the unit entries.
pub fn reference_pushforward_module(x: &ToricVariety) -> PresentedModule {
    let rows = reference_pushforward();
    let cls = |a: i64, b: i64| DivisorClass(vec![a, b]);
    let target = FreeModule::new(rows.iter().map(|(d, _)| cls(d[0], d[1])).collect());
    let source = FreeModule::new(vec![cls(1, 1), cls(1, 2), cls(1, 1), cls(0, 2)]);
    let entries = rows
        .iter()
        .map(|(_, es)| es.iter().map(|e| e.map(|(c, m)| poly(&[(c, m)])).unwrap_or_else(CoxPolynomial::zero)).collect())
        .collect();
    PresentedModule::new(x, target, source, entries).unwrap()
}

/// Single-term entry as `(sign, exponents)`, `None` for zero.
fn signed_entry(p: &CoxPolynomial) -> Option<(i64, Vec<u32>)> {
    let terms: Vec<_> = p.terms().collect();
    match terms.as_slice() {
        [] => None,
        [(e, c)] if **c == q(1) => Some((1, (*e).clone())),
        [(e, c)] if **c == q(-1) => Some((-1, (*e).clone())),
        _ => Some((0, vec![u32::MAX])),
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Whether a matrix equals the reference pushforward after permuting rows and columns and
/// flipping signs of rows and columns. Row degrees must travel with their rows.
pub fn matches_reference_up_to_symmetry(m: &PresentedModule) -> bool {
    let reference = reference_pushforward();
    if m.rows() != reference.len() || m.cols() != 4 {
        return false;
    }
    type Row = (Vec<i64>, Vec<Option<(i64, Vec<u32>)>>);
    // a row up to sign: flip so the first nonzero entry is positive
    let normalize = |mut r: Row| -> Row {
        if let Some(s) = r.1.iter().flatten().map(|(s, _)| *s).next() {
            if s < 0 {
                r.1.iter_mut().flatten().for_each(|(s, _)| *s = -*s);
            }
        }
        r
    };
    let mut expected: Vec<Row> = reference
        .iter()
        .map(|(d, es)| normalize((d.to_vec(), es.iter().map(|e| e.map(|(c, m)| (c, m.to_vec()))).collect())))
        .collect();
    expected.sort();
    let ours: Vec<Row> = (0..m.rows())
        .map(|i| (m.target.degrees[i].0.clone(), m.entries[i].iter().map(signed_entry).collect()))
        .collect();
    for perm in permutations(4) {
        for signs in 0..16u32 {
            let mut got: Vec<Row> = ours
                .iter()
                .map(|(d, es)| {
                    let es = perm
                        .iter()
                        .enumerate()
                        .map(|(k, &j)| es[j].clone().map(|(s, e)| (if signs >> k & 1 == 1 { -s } else { s }, e)))
                        .collect();
                    normalize((d.clone(), es))
                })
                .collect();
            got.sort();
            if got == expected {
                return true;
            }
        }
    }
    false
}
