use heun_core::acceptance::run_all;

#[test]
fn acceptance() {
    let results = run_all();
    let mut all_ok = true;
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {:02} [{}]: {} — {} ({:.1}s)",
            r.id, r.anchor, status, r.detail, r.seconds
        );
        all_ok &= r.passed;
    }
    assert!(all_ok, "one or more acceptance criteria failed");
}
