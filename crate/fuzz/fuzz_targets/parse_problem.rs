#![no_main]
use libfuzzer_sys::fuzz_target;
use tropreal_cli::problem::{parse_fan, parse_problem};

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = parse_problem(src) {
        assert_eq!(p.ideal.ring().nvars(), p.ring.nvars());
        if let Some(fan) = &p.fan {
            assert!(fan.rays().iter().all(|(v, m)| v.len() == p.ring.nvars() && *m > 0));
        }
    }
    let _ = parse_fan(src, 2);
});
