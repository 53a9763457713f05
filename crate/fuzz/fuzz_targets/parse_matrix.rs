#![no_main]
use libfuzzer_sys::fuzz_target;
use tropreal::zzlinalg::smith_normal_form;
use tropreal_cli::problem::parse_matrix;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(m) = parse_matrix(src) else {
        return;
    };
    if m.rows() * m.cols() > 36 {
        return;
    }
    let s = smith_normal_form(&m);
    assert!(s.p.is_unimodular() && s.q.is_unimodular());
    assert_eq!(s.p.mul(&m).unwrap().mul(&s.q).unwrap(), s.d);
});
