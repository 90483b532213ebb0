#![no_main]

use libfuzzer_sys::fuzz_target;
use pgn::Canvas;

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(c) = serde_json::from_slice::<Canvas>(data) else { return };
    let text = serde_json::to_string(&c).unwrap();
    assert_eq!(serde_json::from_str::<Canvas>(&text).unwrap(), c);
    if c.points.len() <= 64 && c.validate(false).ok {
        if let Ok(s) = c.build_system() {
            assert!(s.validate().valid);
        }
    }
});
