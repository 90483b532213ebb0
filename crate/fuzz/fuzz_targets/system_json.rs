#![no_main]

use libfuzzer_sys::fuzz_target;
use pgn::NSystem;

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(s) = serde_json::from_slice::<NSystem>(data) else { return };
    let text = serde_json::to_string(&s).unwrap();
    assert_eq!(serde_json::from_str::<NSystem>(&text).unwrap(), s);
    if s.validate().valid {
        let _ = s.eval(&s.domain.lo);
        let _ = s.canvas();
    }
});
