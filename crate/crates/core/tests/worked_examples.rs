mod common;

use common::*;
use toric_hdi::hdi::{self, HdiConfig};
use toric_hdi::{LatticeBox, TDivisor};

#[test]
fn hirzebruch_projection() {
    let d = TDivisor(vec![0, -1, -2, -3]);
    let cfg = HdiConfig::default();
    assert_eq!(hdi::hdi_rank(&phi(), 0, &d, &cfg).unwrap(), 0);
    let st = hdi::splitting_type_over_p1(&phi(), 1, &d, &cfg).unwrap();
    assert_eq!(st.degrees, vec![-2, -3, -4]);
    assert_eq!(st.torsion, 0);
    assert!(hdi::relative_duality_check_over_p1(&phi(), &d, &cfg).unwrap());
}

#[test]
fn blowup_family_has_torsion_and_rank_one() {
    let (f, d) = theta();
    let cfg = HdiConfig::default();
    let table = hdi::compute_eigencharacters(&f, 1, &d, &cfg).unwrap();
    assert_eq!(table.rank(), 1);
    assert_eq!(table.entries.iter().map(|e| e.character[0]).collect::<Vec<_>>(), vec![-1, 0, 1]);
    let prof = hdi::torsion_profile(&f, 1, &d, None, 1..=6, &cfg).unwrap();
    assert_eq!(prof.growth_degree, 1);
    assert!(prof.torsion_sections.iter().all(|&t| t > 0));
}

#[test]
fn blowdown_ideal_sheaf() {
    let d = TDivisor(vec![0, -2, 0, 0]);
    let cfg = HdiConfig::default();
    let t = hdi::hdi_twist_table(&psi(), 0, &d, &LatticeBox::new(vec![0], vec![6]), &cfg).unwrap();
    let want: Vec<usize> = (0..=6).map(squared_point_ideal_count).collect();
    assert_eq!(t.entries.values().copied().collect::<Vec<_>>(), want);
    assert_eq!(hdi::hdi_rank(&psi(), 0, &d, &cfg).unwrap(), 1);
}

#[test]
fn twist_boxes_are_limited() {
    let cfg = HdiConfig { twist_box_limit: Some(3), ..HdiConfig::default() };
    let d = TDivisor(vec![0, -2, 0, 0]);
    assert!(hdi::hdi_twist_table(&psi(), 0, &d, &LatticeBox::new(vec![0], vec![6]), &cfg).is_err());
}
