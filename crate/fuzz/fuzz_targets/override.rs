#![no_main]

use ahp_core::Override;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(o) = data.parse::<Override>() {
        assert!((0..=10).contains(&o.rating));
        assert!(!o.alternative.is_empty() && !o.leaf.is_empty());
    }
});
