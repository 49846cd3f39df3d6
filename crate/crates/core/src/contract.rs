//! Nef cones and the contractions attached to their extremal rays.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_rational::BigRational;

use crate::error::{Result, ToricError};
use crate::fan::Fan;
use crate::linalg::{in_cone, integer_kernel, primitive_vector, IntMatrix};
use crate::maps::ToricMorphism;
use crate::variety::{combinations, dot, DivisorClass, ToricVariety};

/// A wall `tau` shared by two maximal cones, with its primitive linear relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub cones: (usize, usize),
    /// `sum b_rho u_rho = 0`, positive on the two rays off the wall.
    pub relation: Vec<i64>,
    /// The curve class as a functional on `Cl(X)`: `d -> D . C_tau`.
    pub functional: Vec<i64>,
}

fn check_smooth_complete(x: &ToricVariety) -> Result<()> {
    if x.is_smooth() && x.is_complete() {
        Ok(())
    } else {
        Err(ToricError::NotSmoothComplete)
    }
}

/// All walls of a smooth complete fan.
pub fn walls(x: &ToricVariety) -> Result<Vec<Wall>> {
    check_smooth_complete(x)?;
    let n = x.dim();
    let cones = x.fan().max_cones();
    let section = section_matrix(x);
    let mut out = Vec::new();
    for a in 0..cones.len() {
        for b in a + 1..cones.len() {
            let shared = cones[a].iter().filter(|i| cones[b].contains(i)).count();
            if shared + 1 != n {
                continue;
            }
            let support: Vec<usize> = cones[a].iter().chain(&cones[b]).copied().collect::<BTreeSet<_>>().into_iter().collect();
            let cols: Vec<Vec<i64>> = support.iter().map(|&i| x.rays()[i].clone()).collect();
            // n x (n+1) matrix of the rays as columns
            let mat = IntMatrix::from_rows(support.len(), &(0..n).map(|k| cols.iter().map(|c| c[k]).collect::<Vec<_>>()).collect::<Vec<_>>());
            let ker = integer_kernel(&mat).to_i64_rows()?;
            let mut rel = vec![0i64; x.num_rays()];
            for (pos, &i) in support.iter().enumerate() {
                rel[i] = ker[pos][0];
            }
            let off = *cones[a].iter().find(|i| !cones[b].contains(i)).expect("off-wall ray");
            if rel[off] < 0 {
                rel.iter_mut().for_each(|v| *v = -*v);
            }
            let functional = (0..x.class_rank()).map(|j| section.iter().zip(&rel).map(|(row, b)| row[j] * b).sum()).collect();
            out.push(Wall { cones: (a, b), relation: rel, functional });
        }
    }
    Ok(out)
}

fn section_matrix(x: &ToricVariety) -> Vec<Vec<i64>> {
    let k = x.class_rank();
    (0..x.num_rays())
        .map(|r| {
            (0..k)
                .map(|j| {
                    let mut e = vec![0; k];
                    e[j] = 1;
                    x.divisor_of_class(&DivisorClass(e)).0[r]
                })
                .collect()
        })
        .collect()
}

/// Whether every wall curve has nonnegative degree.
pub fn is_nef(x: &ToricVariety, c: &DivisorClass) -> Result<bool> {
    Ok(walls(x)?.iter().all(|w| dot(&w.functional, &c.0) >= 0))
}

/// Toric Kleiman criterion: positive degree on every wall curve.
pub fn is_ample(x: &ToricVariety, c: &DivisorClass) -> Result<bool> {
    Ok(walls(x)?.iter().all(|w| dot(&w.functional, &c.0) > 0))
}

/// Primitive generators of the extremal rays of the nef cone, in lexicographic order.
pub fn nef_cone_rays(x: &ToricVariety) -> Result<Vec<DivisorClass>> {
    let k = x.class_rank();
    let mut funcs: Vec<Vec<i64>> = walls(x)?.into_iter().map(|w| w.functional).filter(|f| f.iter().any(|&v| v != 0)).collect();
    funcs.sort();
    funcs.dedup();
    let mut rays = BTreeSet::new();
    if k == 0 {
        return Ok(vec![]);
    }
    for subset in combinations(funcs.len(), k - 1) {
        let rows: Vec<Vec<i64>> = subset.iter().map(|&i| funcs[i].clone()).collect();
        let ker = integer_kernel(&IntMatrix::from_rows(k, &rows));
        if ker.cols() != 1 {
            continue;
        }
        let v: Vec<i64> = ker.to_i64_rows()?.into_iter().map(|r| r[0]).collect();
        for sign in [1, -1] {
            let r: Vec<i64> = v.iter().map(|a| sign * a).collect();
            if funcs.iter().all(|f| dot(f, &r) >= 0) {
                rays.insert(primitive_vector(&r)?);
            }
        }
    }
    Ok(rays.into_iter().map(DivisorClass).collect())
}

/// The contraction attached to one extremal ray of the nef cone.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub nef_ray: DivisorClass,
    pub morphism: ToricMorphism,
    /// Set when the ray is ample, in which case the morphism is the identity.
    pub is_isomorphism: bool,
}

/// One contraction per extremal nef ray, in lexicographic order of the rays.
pub fn nef_ray_contractions(x: &Arc<ToricVariety>) -> Result<Vec<Contraction>> {
    nef_cone_rays(x)?.into_iter().map(|c| contraction_of(x, c)).collect()
}

/// Normal-fan map of the polytope of a nef class.
pub fn contraction_of(x: &Arc<ToricVariety>, class: DivisorClass) -> Result<Contraction> {
    check_smooth_complete(x)?;
    if !is_nef(x, &class)? {
        return Err(ToricError::InvalidArgument("class is not nef".into()));
    }
    let n = x.dim();
    let d = x.divisor_of_class(&class);
    let verts = x.divisor_polytope_vertices(&d)?;
    // group maximal cones by their vertex
    let mut groups: Vec<(Vec<BigRational>, Vec<usize>)> = Vec::new();
    for (idx, (_, m)) in verts.iter().enumerate() {
        match groups.iter_mut().find(|(v, _)| v == m) {
            Some((_, g)) => g.push(idx),
            None => groups.push((m.clone(), vec![idx])),
        }
    }
    if groups.len() == verts.len() {
        return Ok(Contraction { nef_ray: class, morphism: ToricMorphism::identity(x.clone()), is_isomorphism: true });
    }
    // differences of vertices are integral for a smooth variety and a Cartier divisor
    let base = &groups[0].0;
    let diffs: Vec<Vec<i64>> = groups[1..]
        .iter()
        .map(|(v, _)| {
            v.iter()
                .zip(base)
                .map(|(a, b)| crate::linalg::big_to_i64(&(a - b).to_integer()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let perp = integer_kernel(&IntMatrix::from_rows(n, &diffs));
    let saturated = integer_kernel(&perp.transpose());
    let proj = saturated.transpose().to_i64_rows()?;
    let dim_y = proj.len();

    let image = |u: &[i64]| -> Vec<i64> { proj.iter().map(|row| dot(row, u)).collect() };
    let mut target_rays: Vec<Vec<i64>> = Vec::new();
    let mut target_cones: Vec<Vec<usize>> = Vec::new();
    for (_, group) in &groups {
        let mut gens: Vec<Vec<i64>> = Vec::new();
        for &c in group {
            for &r in &x.max_cones()[c] {
                let v = image(&x.rays()[r]);
                if v.iter().any(|&a| a != 0) {
                    let p = primitive_vector(&v)?;
                    if !gens.contains(&p) {
                        gens.push(p);
                    }
                }
            }
        }
        let extremal: Vec<Vec<i64>> = gens
            .iter()
            .filter(|g| {
                let others: Vec<Vec<i64>> = gens.iter().filter(|h| h != g).cloned().collect();
                !in_cone(&others, g)
            })
            .cloned()
            .collect();
        let mut cone = Vec::new();
        for g in extremal {
            let idx = match target_rays.iter().position(|r| *r == g) {
                Some(i) => i,
                None => {
                    target_rays.push(g);
                    target_rays.len() - 1
                }
            };
            cone.push(idx);
        }
        cone.sort_unstable();
        target_cones.push(cone);
    }
    let fan = Fan::new(dim_y, target_rays, target_cones)?;
    let target = Arc::new(ToricVariety::new(fan)?);
    let morphism = ToricMorphism::new(target, x.clone(), proj)?;
    Ok(Contraction { nef_ray: class, morphism, is_isomorphism: false })
}

/// Degree of a divisor class on a wall curve.
pub fn wall_degree(w: &Wall, c: &DivisorClass) -> i64 {
    dot(&w.functional, &c.0)
}
