/// Axis-aligned box of lattice points `lo <= x <= hi` (inclusive), iterated lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBox {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl LatticeBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        LatticeBox { lo, hi }
    }

    /// The cube `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: i64, hi: i64) -> Self {
        LatticeBox { lo: vec![lo; dim], hi: vec![hi; dim] }
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn len(&self) -> usize {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| if h < l { 0 } else { (h - l + 1) as usize })
            .product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (l, h))| l <= v && v <= h)
    }

    /// Smallest box containing both.
    pub fn union(&self, other: &LatticeBox) -> LatticeBox {
        LatticeBox {
            lo: self.lo.iter().zip(&other.lo).map(|(a, b)| *a.min(b)).collect(),
            hi: self.hi.iter().zip(&other.hi).map(|(a, b)| *a.max(b)).collect(),
        }
    }

    /// Same centre, each side doubled (rounded outwards).
    pub fn doubled(&self) -> LatticeBox {
        let lo = self.lo.iter().zip(&self.hi).map(|(l, h)| l - (h - l + 1) / 2 - 1).collect();
        let hi = self.lo.iter().zip(&self.hi).map(|(l, h)| h + (h - l + 1) / 2 + 1).collect();
        LatticeBox { lo, hi }
    }

    pub fn iter(&self) -> BoxIter<'_> {
        let done = self.lo.iter().zip(&self.hi).any(|(l, h)| h < l);
        BoxIter { bx: self, cur: self.lo.clone(), done }
    }
}

pub struct BoxIter<'a> {
    bx: &'a LatticeBox,
    cur: Vec<i64>,
    done: bool,
}

impl Iterator for BoxIter<'_> {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let mut k = self.cur.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            if self.cur[k] < self.bx.hi[k] {
                self.cur[k] += 1;
                break;
            }
            self.cur[k] = self.bx.lo[k];
        }
        Some(out)
    }
}
