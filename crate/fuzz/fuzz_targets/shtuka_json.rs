#![no_main]

use libfuzzer_sys::fuzz_target;
use shtukalab_core::shtuka::POneShtuka;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = POneShtuka::from_json(text) {
        let out = serde_json::to_string(&p.to_json()).unwrap();
        let again = POneShtuka::from_json(&out).unwrap();
        assert_eq!(serde_json::to_string(&again.to_json()).unwrap(), out);
    }
});
