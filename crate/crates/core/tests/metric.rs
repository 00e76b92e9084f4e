use std::time::Instant;

use dpfree::metric::{distortion_table, h_family, h_family_generators, Distance, Metric};
use dpfree::Exec;

#[test]
fn h3_is_not_within_radius_eight() {
    let b = h_family_generators();
    let t = Instant::now();
    let m = Metric::new(&b, 8, Exec::Parallel);
    assert_eq!(m.distance(&h_family(3).unwrap()).unwrap(), Distance::Beyond { radius: 8 });
    eprintln!("radius 8: ball {} in {:?}", m.ball().len(), t.elapsed());
}

#[test]
fn default_radius_table() {
    let t = Instant::now();
    let rows = distortion_table(&[1, 2, 3], 9, Exec::Parallel).unwrap();
    eprintln!("{rows:?} {:?}", t.elapsed());
    assert_eq!((rows[0].status, rows[0].value), ("exact", 1));
    for row in &rows[1..] {
        assert_eq!((row.status, row.value), ("lower_bound", 10));
        assert!(row.value >= row.n * row.n);
    }
}
