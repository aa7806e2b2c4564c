#![no_main]

use ahp_core::report::ReportFormat;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let _ = data.parse::<ReportFormat>();
});
