#![no_main]

use ahp_core::matrix::build_matrix;
use ahp_core::{analyze, principal_eigenvector, Judgment, ScaleMode, DEFAULT_THRESHOLD};
use libfuzzer_sys::fuzz_target;

// layout: [n, mode, (row, col, f64 le bytes)*]
fuzz_target!(|data: &[u8]| {
    let [n, mode, rest @ ..] = data else {
        return;
    };
    let n = usize::from(*n % 12);
    let scale = if mode & 1 == 0 { ScaleMode::Strict } else { ScaleMode::Relaxed };
    let judgments: Vec<Judgment> = rest
        .chunks_exact(10)
        .map(|c| {
            let v = f64::from_le_bytes(c[2..10].try_into().unwrap());
            Judgment::new(usize::from(c[0] % 12), usize::from(c[1] % 12), v)
        })
        .collect();
    let labels = (0..n).map(|i| format!("c{i}")).collect();
    let Ok(m) = build_matrix(n, labels, &judgments, scale) else {
        return;
    };
    if let Ok((p, report)) = analyze(&m, DEFAULT_THRESHOLD) {
        assert!((p.sum() - 1.0).abs() < 1e-9);
        assert!(report.cr.is_finite() && report.cr >= 0.0);
    }
    let _ = principal_eigenvector(&m, 1e-12, 1000);
});
