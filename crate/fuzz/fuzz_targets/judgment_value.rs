#![no_main]

use ahp_core::JudgmentValue;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(v) = data.parse::<JudgmentValue>() {
        assert!(v.0.is_finite() && v.0 > 0.0, "{data:?} parsed to {}", v.0);
        let back: JudgmentValue = v.to_string().parse().expect("display form parses");
        assert_eq!(back.0, v.0);
    }
    let _ = serde_json::from_str::<JudgmentValue>(data);
});
