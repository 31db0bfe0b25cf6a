//! Runs the helicoidal, shrinker and offset-axis verifiers and summarizes
//! which coefficient blocks each cell.

use std::collections::BTreeMap;

use stationary::verifiers::{
    helicoidal_nonexistence_scan, offset_axis_suite, shrinker_scan, ScanGrid, SuiteReport, Verdict,
};

fn summary(r: &SuiteReport) {
    let mut by: BTreeMap<String, usize> = BTreeMap::new();
    for c in &r.cells {
        let key = format!("{:?} by {}", c.verdict, c.blocking_coefficient.as_deref().unwrap_or("-"));
        *by.entry(key).or_default() += 1;
    }
    println!("{}: {} cells, {} mismatches", r.suite, r.cells.len(), r.mismatches().count());
    for (k, n) in by {
        println!("    {k}: {n}");
    }
}

fn main() -> stationary::Result<()> {
    let grid = ScanGrid::default();
    let h = helicoidal_nonexistence_scan(&grid)?;
    summary(&h);
    let smallest = h.cells.iter().map(|c| c.max_abs_value).fold(f64::INFINITY, f64::min);
    println!("    smallest blocking value {smallest:.3e}");
    let s = shrinker_scan(&grid)?;
    summary(&s);
    println!("    surviving cells (q1 = 0): {}", s.count(Verdict::Consistent));
    summary(&offset_axis_suite()?);
    Ok(())
}
