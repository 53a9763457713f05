// Replays the checked-in fuzz corpus through the same checks as the fuzz
// targets, so seeds stay meaningful without a nightly toolchain.

use std::path::PathBuf;

use tropreal::parse::parse_poly;
use tropreal::zzlinalg::smith_normal_form;
use tropreal::Ring;
use tropreal_cli::problem::{parse_fan, parse_matrix, parse_problem};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<(String, String)> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (
                p.display().to_string(),
                std::fs::read_to_string(&p).unwrap(),
            )
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

#[test]
fn poly_seeds_round_trip() {
    let ring = Ring::new(&["c1", "c2"], &["x", "y"]).unwrap();
    let mut parsed = 0;
    for (name, src) in seeds("parse_poly") {
        if let Ok(p) = parse_poly(&ring, &src) {
            let shown = ring.fmt_poly(&p);
            assert_eq!(parse_poly(&ring, &shown).unwrap(), p, "{name}");
            parsed += 1;
        }
    }
    assert!(parsed >= 4);
}

#[test]
fn problem_seeds() {
    let mut parsed = 0;
    for (_, src) in seeds("parse_problem") {
        if let Ok(p) = parse_problem(&src) {
            assert_eq!(p.ideal.ring().nvars(), p.ring.nvars());
            parsed += 1;
        }
        let _ = parse_fan(&src, 2);
    }
    assert!(parsed >= 7);
}

#[test]
fn matrix_seeds() {
    let mut parsed = 0;
    for (name, src) in seeds("parse_matrix") {
        if let Ok(m) = parse_matrix(&src) {
            let s = smith_normal_form(&m);
            assert_eq!(s.p.mul(&m).unwrap().mul(&s.q).unwrap(), s.d, "{name}");
            parsed += 1;
        }
    }
    assert_eq!(parsed, 3);
}
