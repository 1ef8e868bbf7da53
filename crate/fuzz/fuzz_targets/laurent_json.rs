#![no_main]

use libfuzzer_sys::fuzz_target;
use shtukalab_core::laurent::LaurentSeries;
use shtukalab_core::Fq;

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) else { return };
    let fq = Fq::prime(2).unwrap();
    if let Ok(s) = LaurentSeries::from_json(&fq, &v) {
        let back = LaurentSeries::from_json(&fq, &s.to_json()).unwrap();
        assert_eq!(back, s);
    }
});
