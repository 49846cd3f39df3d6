//! Higher direct images `R^i f_* O(D)` along toric fibrations.
//!
//! Over the chart `U_sigma` of the target, `R^i f_* O(D)(U_sigma) = H^i(f^{-1} U_sigma, O(D))`,
//! which is graded by `M_X` and computed one character at a time on the preimage subfan.
//! Global sections of the direct image are the kernel of the Cech map between charts and
//! their pairwise overlaps.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::cohomology::SupportComplex;
use crate::contract::is_ample;
use crate::error::{Result, ToricError};
use crate::fan::{mask_of, SubFan};
use crate::lattice::LatticeBox;
use crate::linalg::{big_to_i64, integer_kernel, IntMatrix, RatMatrix};
use crate::maps::{KernelCharacterData, ToricMorphism};
use crate::variety::{combinations, DivisorClass, TDivisor, ToricVariety};

/// Limits for the searches in this module.
#[derive(Clone, Debug)]
pub struct HdiConfig {
    /// Largest multiple of the interior direction tried while waiting for chart dimensions
    /// to stabilize.
    pub stabilization_cap: u32,
    /// Maximum number of classes in a twist box; `None` means `11^rank Cl(Y)`.
    pub twist_box_limit: Option<usize>,
}

impl Default for HdiConfig {
    fn default() -> Self {
        HdiConfig { stabilization_cap: 20, twist_box_limit: None }
    }
}

/// Per-character Cech data for a fixed morphism and degree, cached by support mask.
pub struct HdiEngine<'a> {
    f: &'a ToricMorphism,
    degree: usize,
    charts: Vec<SubFan>,
    overlaps: Vec<(usize, usize, SubFan)>,
    vertical: SubFan,
    cache: Mutex<HashMap<u64, (usize, usize)>>,
}

impl<'a> HdiEngine<'a> {
    pub fn new(f: &'a ToricMorphism, degree: usize) -> Result<HdiEngine<'a>> {
        f.require_fibration()?;
        for v in [f.source(), f.target()] {
            if !(v.is_smooth() && v.is_complete()) {
                return Err(ToricError::NotSmoothComplete);
            }
        }
        let y = f.target();
        let masks: Vec<u64> = y.max_cones().iter().map(|c| mask_of(c)).collect();
        let charts = masks.iter().map(|&s| f.preimage_of_mask(s)).collect();
        let mut overlaps = Vec::new();
        for a in 0..masks.len() {
            for b in a + 1..masks.len() {
                overlaps.push((a, b, f.preimage_of_mask(masks[a] & masks[b])));
            }
        }
        Ok(HdiEngine { f, degree, charts, overlaps, vertical: f.preimage_of_mask(0), cache: Mutex::new(HashMap::new()) })
    }

    pub fn morphism(&self) -> &ToricMorphism {
        self.f
    }

    fn k(&self) -> i64 {
        self.degree as i64 - 1
    }

    /// Dimension of the degree-`m` piece of `R^i f_* O(D)` over the chart of the
    /// `sigma`-th maximal target cone.
    pub fn chart_dim(&self, d: &TDivisor, sigma: usize, m: &[i64]) -> usize {
        let w = self.f.source().negative_mask(d, m);
        SupportComplex::new(&self.charts[sigma], w).reduced_cohomology(self.k()).dim()
    }

    /// `(global sections, torsion sections)` in the degree with support mask `w`.
    fn cech(&self, w: u64) -> (usize, usize) {
        if let Some(v) = self.cache.lock().expect("cache").get(&w) {
            return *v;
        }
        let v = self.cech_uncached(w);
        self.cache.lock().expect("cache").insert(w, v);
        v
    }

    fn cech_uncached(&self, w: u64) -> (usize, usize) {
        let k = self.k();
        let chart: Vec<_> = self.charts.iter().map(|s| SupportComplex::new(s, w).reduced_cohomology(k)).collect();
        let offsets: Vec<usize> = chart
            .iter()
            .scan(0, |acc, b| {
                let o = *acc;
                *acc += b.dim();
                Some(o)
            })
            .collect();
        let cols: usize = chart.iter().map(|b| b.dim()).sum();
        if cols == 0 {
            return (0, 0);
        }
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for (a, b, sub) in &self.overlaps {
            let over = SupportComplex::new(sub, w).reduced_cohomology(k);
            if over.dim() == 0 {
                continue;
            }
            let ra = chart[*a].restrict_to(&over);
            let rb = chart[*b].restrict_to(&over);
            for r in 0..over.dim() {
                let mut row = vec![BigRational::from_integer(0.into()); cols];
                for c in 0..chart[*a].dim() {
                    row[offsets[*a] + c] -= &ra[(r, c)];
                }
                for c in 0..chart[*b].dim() {
                    row[offsets[*b] + c] += &rb[(r, c)];
                }
                rows.push(row);
            }
        }
        let rank = if rows.is_empty() { 0 } else { RatMatrix::from_rows(cols, rows.clone()).rank() };
        let generic = SupportComplex::new(&self.vertical, w).reduced_cohomology(k);
        if generic.dim() > 0 {
            for (s, basis) in chart.iter().enumerate() {
                let r = basis.restrict_to(&generic);
                for i in 0..generic.dim() {
                    let mut row = vec![BigRational::from_integer(0.into()); cols];
                    for c in 0..basis.dim() {
                        row[offsets[s] + c] = r[(i, c)].clone();
                    }
                    rows.push(row);
                }
            }
        }
        let rank_t = if rows.is_empty() { 0 } else { RatMatrix::from_rows(cols, rows).rank() };
        (cols - rank, cols - rank_t)
    }

    fn masks_in(&self, d: &TDivisor, bx: &LatticeBox) -> Vec<(Vec<i64>, u64)> {
        let x = self.f.source();
        bx.iter().map(|m| {
            let w = x.negative_mask(d, &m);
            (m, w)
        }).collect()
    }

    fn warm(&self, masks: &[(Vec<i64>, u64)]) {
        let mut unique: Vec<u64> = masks.iter().map(|(_, w)| *w).collect();
        unique.sort_unstable();
        unique.dedup();
        let missing: Vec<u64> = {
            let cache = self.cache.lock().expect("cache");
            unique.into_iter().filter(|w| !cache.contains_key(w)).collect()
        };
        let computed: Vec<(u64, (usize, usize))> = missing.par_iter().map(|&w| (w, self.cech_uncached(w))).collect();
        self.cache.lock().expect("cache").extend(computed);
    }

    /// Per-character `(h0, torsion)` of `R^i f_* O(D)` over a box of characters of `M_X`.
    pub fn graded_sections_in(&self, d: &TDivisor, bx: &LatticeBox) -> Result<BTreeMap<Vec<i64>, (usize, usize)>> {
        self.f.source().check_divisor(d)?;
        let masks = self.masks_in(d, bx);
        self.warm(&masks);
        Ok(masks
            .into_iter()
            .filter_map(|(m, w)| {
                let v = self.cech(w);
                (v.0 > 0).then_some((m, v))
            })
            .collect())
    }

    /// `(h0, torsion)` of `R^i f_* O(D)`, summed over the character box of `D`.
    pub fn global_sections(&self, d: &TDivisor) -> Result<(usize, usize)> {
        let bx = self.f.source().character_box(d)?;
        self.global_sections_in(d, &bx)
    }

    pub fn global_sections_in(&self, d: &TDivisor, bx: &LatticeBox) -> Result<(usize, usize)> {
        let graded = self.graded_sections_in(d, bx)?;
        Ok(graded.values().fold((0, 0), |(a, b), (x, y)| (a + x, b + y)))
    }

    /// Global sections split by kernel character.
    pub fn sections_by_eigencharacter(&self, d: &TDivisor) -> Result<BTreeMap<Vec<i64>, usize>> {
        let kc = self.f.kernel_characters()?;
        let bx = self.f.source().character_box(d)?;
        let mut out = BTreeMap::new();
        for (m, (h, _)) in self.graded_sections_in(d, &bx)? {
            *out.entry(kc.project(&m)).or_insert(0) += h;
        }
        Ok(out)
    }

    /// `D + f^* E` for the canonical representative `E` of a target class.
    pub fn twisted(&self, d: &TDivisor, class: &DivisorClass) -> Result<TDivisor> {
        self.f.target().check_class(class)?;
        let e = self.f.target().divisor_of_class(class);
        Ok(d + &self.f.pullback_divisor(&e)?)
    }
}

/// `dim H^{i}` of the chart of `sigma` in degree `m`.
pub fn chart_sections_dim(f: &ToricMorphism, d: &TDivisor, i: usize, sigma: usize, m: &[i64]) -> Result<usize> {
    let engine = HdiEngine::new(f, i)?;
    if sigma >= f.target().max_cones().len() {
        return Err(ToricError::InvalidArgument(format!("no maximal cone {sigma} in the target")));
    }
    f.source().check_divisor(d)?;
    Ok(engine.chart_dim(d, sigma, m))
}

/// `d -> h^0(Y, R^i f_* O(D) (x) O(d))` over a box of classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistTable {
    pub degree: usize,
    pub divisor: TDivisor,
    pub entries: BTreeMap<Vec<i64>, usize>,
}

impl TwistTable {
    pub fn get(&self, class: &[i64]) -> Option<usize> {
        self.entries.get(class).copied()
    }
}

pub fn hdi_twist_table(f: &ToricMorphism, i: usize, d: &TDivisor, classes: &LatticeBox, cfg: &HdiConfig) -> Result<TwistTable> {
    let engine = HdiEngine::new(f, i)?;
    twist_table_with(&engine, d, classes, cfg)
}

pub fn twist_table_with(engine: &HdiEngine, d: &TDivisor, classes: &LatticeBox, cfg: &HdiConfig) -> Result<TwistTable> {
    let y = engine.f.target();
    if classes.dim() != y.class_rank() {
        return Err(ToricError::ClassLength { expected: y.class_rank(), got: classes.dim() });
    }
    let limit = cfg.twist_box_limit.unwrap_or_else(|| 11usize.saturating_pow(y.class_rank() as u32));
    if classes.len() > limit {
        return Err(ToricError::TwistBoxTooLarge { size: classes.len(), limit });
    }
    engine.f.source().check_divisor(d)?;
    let mut entries = BTreeMap::new();
    for c in classes.iter() {
        let dd = engine.twisted(d, &DivisorClass(c.clone()))?;
        entries.insert(c, engine.global_sections(&dd)?.0);
    }
    Ok(TwistTable { degree: engine.degree, divisor: d.clone(), entries })
}

/// Stabilization data of one kernel character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EigencharacterEntry {
    /// The character of the kernel torus.
    pub character: Vec<i64>,
    /// Its representative `s(u)` in `M_X`.
    pub representative: Vec<i64>,
    /// Stabilized dimension on each maximal target chart, in target cone order.
    pub chart_ranks: Vec<usize>,
    /// `D + div(chi^{s(u)})`, the divisor whose chart cohomology was used.
    pub divisor: TDivisor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigencharacterTable {
    pub degree: usize,
    pub divisor: TDivisor,
    /// Sorted by representative.
    pub entries: Vec<EigencharacterEntry>,
}

impl EigencharacterTable {
    pub fn representatives(&self) -> Vec<Vec<i64>> {
        self.entries.iter().map(|e| e.representative.clone()).collect()
    }

    /// Generic rank: the stabilized ranks summed over characters.
    pub fn rank(&self) -> usize {
        self.entries.iter().map(|e| e.chart_ranks.first().copied().unwrap_or(0)).sum()
    }
}

/// Bounding box of the characters to inspect on one chart.
///
/// Lattice points of a region cut out by the chart's rays decompose as a point near a vertex
/// plus a nonnegative integer combination of at most `n` recession generators; the value
/// and, for finitely many characters, the kernel character are constant along the latter.
fn chart_search_box(x: &ToricVariety, sub: &SubFan, d: &TDivisor) -> Result<LatticeBox> {
    let n = x.dim();
    let rays: Vec<usize> = crate::fan::indices_of(sub.ray_mask());
    if n == 0 {
        return Ok(LatticeBox::new(vec![], vec![]));
    }
    let mut lo = vec![i64::MAX; n];
    let mut hi = vec![i64::MIN; n];
    for subset in combinations(rays.len(), n) {
        let rows: Vec<Vec<i64>> = subset.iter().map(|&j| x.rays()[rays[j]].clone()).collect();
        let Some(inv) = RatMatrix::from_i64_rows(n, &rows).inverse() else { continue };
        for shift in 0u32..(1 << n) {
            let rhs: Vec<BigRational> = subset
                .iter()
                .enumerate()
                .map(|(k, &j)| BigRational::from_integer((-d.0[rays[j]] - i64::from(shift >> k & 1 == 1)).into()))
                .collect();
            let v = inv.mul_vec(&rhs);
            for k in 0..n {
                lo[k] = lo[k].min(big_to_i64(&v[k].floor().to_integer())?);
                hi[k] = hi[k].max(big_to_i64(&v[k].ceil().to_integer())?);
            }
        }
    }
    if lo[0] == i64::MAX {
        return Err(ToricError::InvalidArgument("chart rays do not span the lattice".into()));
    }
    let mut reach = 0i64;
    for subset in combinations(rays.len(), n - 1) {
        let rows: Vec<Vec<i64>> = subset.iter().map(|&j| x.rays()[rays[j]].clone()).collect();
        let ker = integer_kernel(&IntMatrix::from_rows(n, &rows));
        if ker.cols() == 1 {
            for v in ker.to_i64_rows()? {
                reach = reach.max(v[0].abs());
            }
        }
    }
    let pad = n as i64 * reach + 1;
    Ok(LatticeBox::new(lo.iter().map(|v| v - pad).collect(), hi.iter().map(|v| v + pad).collect()))
}

fn dual_interior(y: &ToricVariety, sigma: usize, bump: bool) -> Result<Vec<i64>> {
    let n = y.dim();
    let rows: Vec<Vec<i64>> = y.max_cones()[sigma].iter().map(|&i| y.rays()[i].clone()).collect();
    if n == 0 {
        return Ok(vec![]);
    }
    let inv = RatMatrix::from_i64_rows(n, &rows).inverse().ok_or(ToricError::NotSmoothComplete)?;
    let rhs: Vec<BigRational> =
        (0..n).map(|k| BigRational::from_integer((1 + i64::from(bump && k == 0)).into())).collect();
    inv.mul_vec(&rhs).iter().map(|v| big_to_i64(&v.to_integer())).collect()
}

fn stabilized(engine: &HdiEngine, kc: &KernelCharacterData, d: &TDivisor, u: &[i64], sigma: usize, cap: u32) -> Result<usize> {
    let y = engine.f.target();
    let w = dual_interior(y, sigma, false)?;
    let w2 = dual_interior(y, sigma, true)?;
    let base = kc.lift(u);
    let at = |dir: &[i64], t: i64| -> usize {
        let shift = kc.pull(&dir.iter().map(|v| v * t).collect::<Vec<_>>());
        let m: Vec<i64> = base.iter().zip(&shift).map(|(a, b)| a + b).collect();
        engine.chart_dim(d, sigma, &m)
    };
    let mut prev = at(&w, 1);
    for t in 2..=cap as i64 {
        let cur = at(&w, t);
        if cur == prev && at(&w2, t) == cur {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(ToricError::StabilizationCap)
}

pub fn compute_eigencharacters(f: &ToricMorphism, i: usize, d: &TDivisor, cfg: &HdiConfig) -> Result<EigencharacterTable> {
    let engine = HdiEngine::new(f, i)?;
    eigencharacters_with(&engine, d, cfg)
}

pub fn eigencharacters_with(engine: &HdiEngine, d: &TDivisor, cfg: &HdiConfig) -> Result<EigencharacterTable> {
    let f = engine.f;
    let x = f.source();
    x.check_divisor(d)?;
    let kc = f.kernel_characters()?;
    let mut keys: std::collections::BTreeSet<Vec<i64>> = Default::default();
    if engine.degree <= x.dim() {
        for sub in &engine.charts {
            let bx = chart_search_box(x, sub, d)?;
            let mut by_mask: HashMap<u64, Vec<Vec<i64>>> = HashMap::new();
            for m in bx.iter() {
                by_mask.entry(x.negative_mask(d, &m) & sub.ray_mask()).or_default().push(m);
            }
            let masks: Vec<u64> = by_mask.keys().copied().collect();
            let live: Vec<u64> = masks
                .into_par_iter()
                .filter(|&w| SupportComplex::new(sub, w).reduced_cohomology(engine.k()).dim() > 0)
                .collect();
            for w in live {
                for m in &by_mask[&w] {
                    keys.insert(kc.project(m));
                }
            }
        }
    }
    let charts = f.target().max_cones().len();
    let mut entries = keys
        .into_par_iter()
        .map(|u| {
            let chart_ranks = (0..charts)
                .map(|s| stabilized(engine, &kc, d, &u, s, cfg.stabilization_cap))
                .collect::<Result<Vec<_>>>()?;
            let rep = kc.lift(&u);
            Ok(EigencharacterEntry {
                divisor: d + &x.principal_divisor(&rep),
                representative: rep,
                character: u,
                chart_ranks,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(EigencharacterTable { degree: engine.degree, divisor: d.clone(), entries })
}

/// Rank of `R^i f_* O(D)` at the generic point of the target.
pub fn hdi_rank(f: &ToricMorphism, i: usize, d: &TDivisor, cfg: &HdiConfig) -> Result<usize> {
    Ok(compute_eigencharacters(f, i, d, cfg)?.rank())
}

/// `O(a_1) + ... + O(a_r)` plus a torsion sheaf with `t` sections, on the projective line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingType {
    /// Summand degrees, largest first.
    pub degrees: Vec<i64>,
    pub torsion: usize,
}

impl SplittingType {
    pub fn h0(&self, d: i64) -> usize {
        self.degrees.iter().map(|a| (a + d + 1).max(0) as usize).sum::<usize>() + self.torsion
    }

    pub fn h1(&self, d: i64) -> usize {
        self.degrees.iter().map(|a| (-a - d - 1).max(0) as usize).sum()
    }
}

fn require_p1_target(f: &ToricMorphism) -> Result<()> {
    let y = f.target();
    let mut rays = y.rays().to_vec();
    rays.sort();
    if y.dim() != 1 || rays != vec![vec![-1], vec![1]] {
        return Err(ToricError::TargetNotP1);
    }
    Ok(())
}

pub fn splitting_type_over_p1(f: &ToricMorphism, i: usize, d: &TDivisor, cfg: &HdiConfig) -> Result<SplittingType> {
    require_p1_target(f)?;
    let engine = HdiEngine::new(f, i)?;
    let rank = eigencharacters_with(&engine, d, cfg)?.rank();
    // class 1 is O(1) on P1 in the fixed basis
    let h = |k: i64| -> Result<usize> { Ok(engine.global_sections(&engine.twisted(d, &DivisorClass(vec![k]))?)?.0) };
    let (mut lo, mut hi) = (-4i64, 4i64);
    let mut values: BTreeMap<i64, usize> = BTreeMap::new();
    for _ in 0..8 {
        for k in lo..=hi {
            if !values.contains_key(&k) {
                values.insert(k, h(k)?);
            }
        }
        let bottom = values[&(lo + 1)] == values[&lo];
        let top = values[&hi] - values[&(hi - 1)] == rank;
        if bottom && top {
            break;
        }
        let w = hi - lo;
        lo -= w;
        hi += w;
    }
    let delta = |k: i64| values[&k] as i64 - values[&(k - 1)] as i64;
    if values[&(lo + 1)] != values[&lo] || delta(hi) != rank as i64 {
        return Err(ToricError::NotSplit);
    }
    let mut degrees = Vec::new();
    let mut prev = 0i64;
    for k in lo + 1..=hi {
        let dk = delta(k);
        if dk < prev {
            return Err(ToricError::NotSplit);
        }
        for _ in 0..dk - prev {
            degrees.push(-k);
        }
        prev = dk;
    }
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    let st = SplittingType { degrees, torsion: values[&lo] };
    if st.degrees.len() != rank || values.iter().any(|(&k, &v)| st.h0(k) != v) {
        return Err(ToricError::NotSplit);
    }
    Ok(st)
}

/// Growth of the torsion part of `R^i f_* O(D)` under an ample twist.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TorsionProfile {
    pub rank: usize,
    pub ample: DivisorClass,
    pub multiples: Vec<i64>,
    /// `h0` of the twists.
    pub sections: Vec<usize>,
    /// Sections vanishing at the generic point of the target.
    pub torsion_sections: Vec<usize>,
    /// `h0(twist) - rank * h0(Y, O(k d0))`.
    pub residuals: Vec<i64>,
    /// Degree of growth of the torsion sections, `-1` when there are none.
    pub growth_degree: i64,
}

impl TorsionProfile {
    pub fn has_torsion(&self) -> bool {
        self.growth_degree >= 0
    }
}

pub fn torsion_profile(
    f: &ToricMorphism,
    i: usize,
    d: &TDivisor,
    ample: Option<DivisorClass>,
    multiples: std::ops::RangeInclusive<i64>,
    cfg: &HdiConfig,
) -> Result<TorsionProfile> {
    let engine = HdiEngine::new(f, i)?;
    let y = f.target();
    let ample = match ample {
        Some(c) => c,
        None => y.class_of(&TDivisor(vec![1; y.num_rays()])),
    };
    y.check_class(&ample)?;
    if y.class_rank() > 0 && !is_ample(y, &ample)? {
        return Err(ToricError::InvalidArgument("twisting class is not ample".into()));
    }
    let rank = eigencharacters_with(&engine, d, cfg)?.rank();
    let ks: Vec<i64> = multiples.collect();
    let mut sections = Vec::new();
    let mut torsion = Vec::new();
    let mut residuals = Vec::new();
    for &k in &ks {
        let class = &DivisorClass(ample.0.iter().map(|a| a * k).collect());
        let (h, t) = engine.global_sections(&engine.twisted(d, class)?)?;
        let base = y.count_lattice_points(&y.divisor_of_class(class))?;
        sections.push(h);
        torsion.push(t);
        residuals.push(h as i64 - (rank * base) as i64);
    }
    Ok(TorsionProfile {
        rank,
        ample,
        multiples: ks,
        sections,
        growth_degree: growth_degree(&torsion),
        torsion_sections: torsion,
        residuals,
    })
}

/// Smallest `j` with vanishing `(j+1)`-st finite differences, `-1` for the zero sequence.
pub fn growth_degree(values: &[usize]) -> i64 {
    let mut seq: Vec<i64> = values.iter().map(|&v| v as i64).collect();
    if seq.iter().all(|&v| v == 0) {
        return -1;
    }
    let mut j = 0;
    loop {
        let next: Vec<i64> = seq.windows(2).map(|w| w[1] - w[0]).collect();
        if next.iter().all(|&v| v == 0) || next.len() <= 1 {
            return j;
        }
        seq = next;
        j += 1;
    }
}

/// Both sides of the Leray spectral sequence over the projective line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LerayReport {
    pub direct: Vec<usize>,
    pub spectral: Vec<usize>,
}

impl LerayReport {
    pub fn holds(&self) -> bool {
        self.direct == self.spectral
    }
}

pub fn leray_check_over_p1(f: &ToricMorphism, d: &TDivisor, cfg: &HdiConfig) -> Result<LerayReport> {
    require_p1_target(f)?;
    let n = f.source().dim();
    let direct = crate::cohomology::cohomology_dims(f.source(), d)?;
    let mut spectral = vec![0usize; n + 1];
    for q in 0..=n {
        let st = splitting_type_over_p1(f, q, d, cfg)?;
        spectral[q] += st.h0(0);
        if q < n {
            spectral[q + 1] += st.h1(0);
        } else if st.h1(0) != 0 {
            spectral.push(st.h1(0));
        }
    }
    Ok(LerayReport { direct, spectral })
}

/// `R^1 f_* O(D)` against the dual of `f_* O(K_X - f^* K_Y - D)`.
pub fn relative_duality_check_over_p1(f: &ToricMorphism, d: &TDivisor, cfg: &HdiConfig) -> Result<bool> {
    require_p1_target(f)?;
    if f.source().dim() != 2 {
        return Err(ToricError::InvalidArgument("source must be a surface".into()));
    }
    let x = f.source();
    let ky = f.target().canonical_divisor();
    let dual = &(&x.canonical_divisor() - &f.pullback_divisor(&ky)?) - d;
    let left = splitting_type_over_p1(f, 1, d, cfg)?;
    let right = splitting_type_over_p1(f, 0, &dual, cfg)?;
    if left.torsion != 0 || right.torsion != 0 {
        return Err(ToricError::TorsionPresent);
    }
    let mut neg: Vec<i64> = right.degrees.iter().map(|a| -a).collect();
    neg.sort_unstable_by(|a, b| b.cmp(a));
    Ok(neg == left.degrees)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn phi() -> ToricMorphism {
        let f1 = Arc::new(ToricVariety::hirzebruch(1).unwrap());
        let p1 = Arc::new(ToricVariety::projective_space(1).unwrap());
        ToricMorphism::new(p1, f1, vec![vec![1, 0]]).unwrap()
    }

    #[test]
    fn hirzebruch_projection() {
        let f = phi();
        let d = TDivisor(vec![0, -1, -2, -3]);
        let cfg = HdiConfig::default();
        assert_eq!(hdi_rank(&f, 0, &d, &cfg).unwrap(), 0);
        assert_eq!(hdi_rank(&f, 1, &d, &cfg).unwrap(), 3);
        let st = splitting_type_over_p1(&f, 1, &d, &cfg).unwrap();
        assert_eq!(st, SplittingType { degrees: vec![-2, -3, -4], torsion: 0 });
        assert_eq!(compute_eigencharacters(&f, 1, &d, &cfg).unwrap().entries.len(), 3);
    }

    #[test]
    fn structure_sheaf_pushes_to_structure_sheaf() {
        let f = phi();
        let cfg = HdiConfig::default();
        let t = hdi_twist_table(&f, 0, &TDivisor::zero(4), &LatticeBox::new(vec![-1], vec![3]), &cfg).unwrap();
        assert_eq!(t.entries.values().copied().collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn growth_degrees() {
        assert_eq!(growth_degree(&[0, 0, 0]), -1);
        assert_eq!(growth_degree(&[2, 2, 2, 2]), 0);
        assert_eq!(growth_degree(&[1, 3, 5, 7]), 1);
        assert_eq!(growth_degree(&[1, 4, 9, 16, 25]), 2);
    }
}
