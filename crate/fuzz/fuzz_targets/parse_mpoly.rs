#![no_main]

use libfuzzer_sys::fuzz_target;
use shtukalab_core::parse::{parse_mpoly, parse_poly};
use shtukalab_core::poly::ring_r;
use shtukalab_core::Fq;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for q in [2, 3] {
        let fq = Fq::prime(q).unwrap();
        let _ = parse_mpoly(&fq, text, &["z", "x0", "x1"]);
        if let Ok(p) = parse_poly(&ring_r(&fq), text) {
            // printing and reparsing is the identity
            let r = ring_r(&fq);
            let again = parse_poly(&r, &shtukalab_core::Ring::fmt_elem(&r, &p)).unwrap();
            assert_eq!(again, p);
        }
    }
});
