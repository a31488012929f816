mod common;

use common::sqrt_diff_oracle;
use gaplab::datasets::ReferenceTable;
use gaplab::{andrica_diff, r_points_from_reference, sqrt_difference, PrimeGap};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn oracle_sanity() {
    assert!(rel(sqrt_diff_oracle(2, 3), 3f64.sqrt() - 2f64.sqrt()) < 1e-15);
    assert!(rel(sqrt_diff_oracle(7, 11), 0.670873479291) < 1e-11);
}

#[test]
fn quotient_form_on_reference_records() {
    let table = ReferenceTable::bundled();
    let pts: Vec<(u64, f64)> = r_points_from_reference(&table);
    for (r, (x, got)) in table.records.iter().zip(pts) {
        assert_eq!(x, r.p);
        let want = sqrt_diff_oracle(r.p, r.p + r.gap);
        assert!(rel(got, want) <= 1e-14, "gap {}: {got} vs {want}", r.gap);
    }
}

#[test]
fn subtraction_form_loses_the_largest_gap() {
    let (p, q) = (1_425_172_824_437_699_411u64, 1_425_172_824_437_700_887u64);
    let want = sqrt_diff_oracle(p, q);
    let quotient: f64 = andrica_diff(&PrimeGap::new(p, q));
    let naive = (q as f64).sqrt() - (p as f64).sqrt();
    assert!(rel(quotient, want) <= 1e-14);
    assert!(rel(naive, want) > 1e-3, "naive {naive} unexpectedly accurate");
}

proptest! {
    #[test]
    fn quotient_form_is_accurate_everywhere(p in 2u64..u64::MAX - 2000, d in 1u64..2000) {
        let got: f64 = sqrt_difference(p, d);
        let want = sqrt_diff_oracle(p, p + d);
        prop_assert!(rel(got, want) <= 1e-14, "p={} d={} got={} want={}", p, d, got, want);
    }
}
