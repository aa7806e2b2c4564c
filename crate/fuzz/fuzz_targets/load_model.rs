#![no_main]

use ahp_core::{evaluate, load_model, save_model};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(model) = load_model(data) else {
        return;
    };
    // a model that loads must survive its own serialization
    let saved = save_model(&model.document);
    let again = load_model(&saved).expect("saved document reloads");
    assert_eq!(again.document, model.document);
    let _ = evaluate(&model, None);
});
