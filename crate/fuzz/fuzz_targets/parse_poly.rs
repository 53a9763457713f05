#![no_main]
use libfuzzer_sys::fuzz_target;
use tropreal::parse::parse_poly;
use tropreal::Ring;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    let ring = Ring::new(&["c1", "c2"], &["x", "y"]).unwrap();
    if let Ok(p) = parse_poly(&ring, src) {
        // printing and parsing again must give the same polynomial
        let shown = ring.fmt_poly(&p);
        let back = parse_poly(&ring, &shown).expect("printed polynomial parses");
        assert_eq!(back, p, "{src:?} -> {shown:?}");
    }
});
