#![no_main]
use capitula::cycunits::{parse_table_line, render_line};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(Some(rec)) = parse_table_line(s, 1) {
        // rendering is canonical: it parses back to the same record
        let line = render_line(&rec);
        assert_eq!(parse_table_line(&line, 1).unwrap(), Some(rec.clone()));
        let _ = rec.ideal();
    }
});
