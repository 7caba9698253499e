#![no_main]
use capitula::survey::parse_residue;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok((a, m)) = parse_residue(s) {
        assert!(m > 0 && a < m);
        assert_eq!(parse_residue(&format!("{a}:{m}")).unwrap(), (a, m));
    }
});
