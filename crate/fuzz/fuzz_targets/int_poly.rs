#![no_main]
use capitula::iwasawa::{ring_make, IntPoly};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = IntPoly::parse(s) {
        assert_eq!(IntPoly::parse(&p.to_string()).unwrap(), p);
    }
    // the same text as an element of two small rings
    for (p, n, c, prec) in [(3, 2, 2, 3), (2, 2, 3, 3)] {
        let r = ring_make(p, n, c, prec).unwrap();
        if let Ok(x) = r.parse(s) {
            assert_eq!(r.parse(&r.render(&x)).unwrap(), x);
        }
    }
});
