use std::fs;

use fig8_core::harness::{
    export, pole_domain_check, read_json, run_sweep, volume_evidence, write_csv, ExportFormat, ReportRow, SweepMode, SweepSpec, CSV_COLUMNS,
};
use fig8_core::Error;

const VOLUME: f64 = 2.029883212819307;

fn spec(big_n: &[u32], n: &[u32], u: &[f64], mode: SweepMode) -> SweepSpec {
    SweepSpec { big_n_list: big_n.to_vec(), n_list: n.to_vec(), u_list: u.to_vec(), mode }
}

fn exact_value(row: &ReportRow) -> f64 {
    let (l, a) = (row.exact_logmag.unwrap(), row.exact_phase.unwrap());
    assert!(a.abs() < 1e-9 || (a.abs() - std::f64::consts::PI).abs() < 1e-9);
    l.exp() * a.cos()
}

#[test]
fn single_term_rows() {
    let rows = run_sweep(&spec(&[1], &[2, 4], &[0.5], SweepMode::Exact), 2).unwrap();
    assert_eq!(rows.len(), 2);
    for r in &rows {
        assert_eq!(r.exact_logmag, Some(0.0));
        assert!(r.growth_exact.unwrap().is_finite());
        assert!(r.error.is_none());
    }
}

#[test]
fn kashaev_anchor_rows() {
    let rows = run_sweep(&spec(&[3, 2], &[2], &[0.0], SweepMode::Exact), 1).unwrap();
    assert_eq!((rows[0].big_n, rows[1].big_n), (2, 3));
    assert!((exact_value(&rows[0]) - 5.0).abs() < 1e-10);
    assert!((exact_value(&rows[1]) - 13.0).abs() < 1e-9);
}

#[test]
fn ratio_column_approaches_one() {
    let rows = run_sweep(&spec(&[500, 1000, 2000], &[2], &[0.5], SweepMode::Both), 3).unwrap();
    let gaps: Vec<f64> = rows.iter().map(|r| (r.ratio_mag.unwrap() - 1.0).abs()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(rows.iter().all(|r| r.growth_predicted.unwrap() > 0.0));
}

#[test]
fn ordering_is_independent_of_jobs() {
    let s = spec(&[40, 10, 20], &[4, 2], &[0.5, 0.3], SweepMode::Exact);
    let one: Vec<_> = run_sweep(&s, 1).unwrap().iter().map(ReportRow::without_timing).collect();
    let many: Vec<_> = run_sweep(&s, 6).unwrap().iter().map(ReportRow::without_timing).collect();
    assert_eq!(one, many);
    let keys: Vec<_> = one.iter().map(|r| (r.n, r.u, r.big_n)).collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)));
    assert_eq!(keys, sorted);
}

#[test]
fn failing_point_does_not_abort() {
    let rows = run_sweep(&spec(&[50], &[2], &[0.0, 0.5], SweepMode::Both), 2).unwrap();
    assert!(rows[0].error.is_some() && rows[0].exact_logmag.is_some() && rows[0].rhs_logmag.is_none());
    assert!(rows[1].error.is_none() && rows[1].ratio_mag.is_some());
    let rows = run_sweep(&spec(&[8, 65], &[2], &[0.5], SweepMode::QdilogCheck), 2).unwrap();
    assert!(rows[0].error.is_none() && (rows[0].ratio_mag.unwrap() - 1.0).abs() < 1e-6);
    assert!(rows[1].error.is_some());
}

#[test]
fn residue_and_pole_modes() {
    let rows = run_sweep(&spec(&[4], &[2, 4], &[0.5], SweepMode::ResidueCheck), 2).unwrap();
    for r in &rows {
        assert!((r.ratio_mag.unwrap() - 1.0).abs() < 1e-5 && r.ratio_phase.unwrap().abs() < 1e-5);
    }
    let rows = run_sweep(&spec(&[20], &[4], &[0.5], SweepMode::PoleDomain), 1).unwrap();
    let poles = rows[0].poles.as_ref().unwrap();
    assert_eq!(poles.len(), 3);
    assert!(poles[2].inside == poles[2].total && poles[0].inside < poles[0].total);
}

#[test]
fn invalid_specs() {
    for s in [
        spec(&[], &[2], &[0.5], SweepMode::Exact),
        spec(&[10], &[3], &[0.5], SweepMode::Exact),
        spec(&[0], &[2], &[0.5], SweepMode::Exact),
        spec(&[10], &[2], &[0.97], SweepMode::Exact),
        spec(&[10], &[2], &[-0.1], SweepMode::Exact),
    ] {
        assert!(matches!(run_sweep(&s, 1), Err(Error::InvalidParams(_))), "{s:?}");
    }
}

#[test]
fn volume_examples() {
    let v = volume_evidence(2, 2000).unwrap();
    assert!((v / VOLUME - 1.0).abs() < 0.02, "{v}");
    let e100 = (volume_evidence(2, 100).unwrap() - VOLUME).abs();
    let e200 = (volume_evidence(2, 200).unwrap() - VOLUME).abs();
    assert!(e200 < e100);
    assert!(matches!(volume_evidence(2, 49), Err(Error::InvalidArgument(_))));
}

#[test]
#[ignore = "n=4 at N=1000 gives 2.2161, 9.2% above the volume; the excess falls like (5/2) log N / N"]
fn volume_for_n4_within_five_percent() {
    let v = volume_evidence(4, 1000).unwrap();
    assert!((v / VOLUME - 1.0).abs() < 0.05, "{v}");
}

#[test]
fn volume_for_n4_improves_with_level() {
    let errs: Vec<f64> = [250, 500, 1000, 2000].iter().map(|&m| volume_evidence(4, m).unwrap() / VOLUME - 1.0).collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0] && w[1] > 0.0), "{errs:?}");
}

#[test]
fn pole_examples() {
    let c = pole_domain_check(20, 4, 2, 0.5).unwrap();
    assert_eq!((c.total, c.inside), (20, 20));
    let c = pole_domain_check(20, 4, 0, 0.5).unwrap();
    assert!(c.inside < c.total);
    let c = pole_domain_check(20, 2, 0, 0.5).unwrap();
    assert_eq!(c.inside, c.total);
    assert_eq!(pole_domain_check(20, 4, 2, 0.0), Err(Error::UndefinedDomain));
}

#[test]
fn smallest_admissible_shift() {
    for n in [2u32, 4, 6, 8] {
        for big_n in [5, 20, 50, 200] {
            for u in [0.1, 0.5, 0.9] {
                let full = (0..=n - 2).find(|&a| {
                    let c = pole_domain_check(big_n, n, a, u).unwrap();
                    c.inside == c.total
                });
                assert_eq!(full, Some(n - 2), "N={big_n} n={n} u={u}");
            }
        }
    }
}

fn sample_rows() -> Vec<ReportRow> {
    let mut rows = run_sweep(&spec(&[30, 60], &[2, 4], &[0.0, 0.4], SweepMode::Both), 2).unwrap();
    rows.extend(run_sweep(&spec(&[10], &[4], &[0.5], SweepMode::PoleDomain), 1).unwrap());
    rows
}

#[test]
fn empty_and_single_row_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.csv");
    export(&[], ExportFormat::Csv, &path).unwrap();
    assert_eq!(fs::read_to_string(&path).unwrap(), format!("{}\n", CSV_COLUMNS.join(",")));
    let rows = run_sweep(&spec(&[5], &[2], &[0.3], SweepMode::Exact), 1).unwrap();
    export(&rows, ExportFormat::Csv, &path).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 2);
    let fields: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(fields.len(), 12);
    assert_eq!(fields[1], "2.9999999999999999e-1");
    assert_eq!(fields[1].parse::<f64>().unwrap(), 0.3);
    assert_eq!(fields[5], "");
    let digits = fields[3].split('e').next().unwrap().replace(['-', '.'], "");
    assert_eq!(digits.len(), 17);
}

#[test]
fn csv_is_byte_reproducible() {
    let once = |rows: Vec<ReportRow>| {
        let mut buf = Vec::new();
        write_csv(&rows.iter().map(ReportRow::without_timing).collect::<Vec<_>>(), &mut buf).unwrap();
        buf
    };
    assert_eq!(once(sample_rows()), once(sample_rows()));
}

#[test]
fn json_round_trip() {
    let rows = sample_rows();
    assert!(rows.iter().any(|r| r.error.is_some()));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.json");
    export(&rows, ExportFormat::Json, &path).unwrap();
    assert_eq!(read_json(&path).unwrap(), rows);
}

#[test]
fn unwritable_path_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    match export(&[], ExportFormat::Csv, &path) {
        Err(Error::Io(msg)) => assert!(msg.contains("missing"), "{msg}"),
        other => panic!("{other:?}"),
    }
}
