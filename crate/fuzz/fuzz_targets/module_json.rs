#![no_main]

use libfuzzer_sys::fuzz_target;
use shtukalab_core::drinfeld::DrinfeldModule;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(e) = DrinfeldModule::from_json(text) {
        let spec = serde_json::to_string(&e.spec()).unwrap();
        let again = DrinfeldModule::from_json(&spec).unwrap();
        assert_eq!(again.coeffs(), e.coeffs());
    }
});
