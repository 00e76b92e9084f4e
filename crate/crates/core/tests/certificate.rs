use dpfree::certificate::{lower_bound_report, toy_amalgam_check, ReportConfig, Verdict};
use dpfree::presentation::SearchBudget;

#[test]
fn report_for_n3_uses_area_nine() {
    let r = lower_bound_report(3, ReportConfig::default()).unwrap();
    assert_eq!(r.status, "verified");
    assert_eq!((r.distance_lower_bound, r.area_lower_bound), (9, 54));
    let area = r.evidence.iter().find(|e| e.verifier == "abelian_area").unwrap();
    assert_eq!(area.detail["area"], 9);
    assert_eq!(area.detail["regime"]["regime"], "matches_lower_bound");
}

#[test]
fn toy_inequality_on_all_small_instances() {
    for k in 1..=2 {
        for n in 1..=2 {
            let r = toy_amalgam_check(k, n, SearchBudget::default()).unwrap();
            assert_eq!(r.verdict, Verdict::Holds, "{r:?}");
            assert!(r.area.area.unwrap() >= 2 * n * k);
        }
    }
}
