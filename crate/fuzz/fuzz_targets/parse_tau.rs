#![no_main]

use libfuzzer_sys::fuzz_target;
use shtukalab_core::poly::ring_r;
use shtukalab_core::skew::TauRing;
use shtukalab_core::Fq;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let fq = Fq::prime(3).unwrap();
    let tr = TauRing::new(ring_r(&fq));
    if let Ok(p) = tr.parse(text) {
        let _ = tr.fmt(&p);
    }
});
