#![no_main]

use libfuzzer_sys::fuzz_target;
use pgn::spectrum::{construct_path_lower, construct_path_upper, membership, SpectrumPoint6};

fuzz_target!(|data: &[u8]| {
    if data.len() > 2048 {
        return;
    }
    let Ok(a) = serde_json::from_slice::<SpectrumPoint6>(data) else { return };
    if a.lower.dim() != 3 || a.upper.dim() != 3 {
        return;
    }
    let (member, _) = membership(&a);
    let lower = construct_path_lower(&a);
    let upper = construct_path_upper(&a);
    if member {
        assert!(lower.map(|p| p.exists).unwrap_or(false));
        assert!(upper.map(|p| p.exists).unwrap_or(false));
    }
});
