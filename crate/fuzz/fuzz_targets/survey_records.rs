#![no_main]
use capitula::survey::{parse_records_csv, parse_records_json, render_report, Format};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    for rows in [parse_records_csv(s), parse_records_json(s)].into_iter().flatten() {
        let csv = render_report(&rows, Format::Csv).unwrap();
        assert_eq!(parse_records_csv(&csv).unwrap(), rows);
        let _ = render_report(&rows, Format::MdTable);
    }
});
