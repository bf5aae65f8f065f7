//! One line per criterion. Known-unattainable criteria may fail; anything
//! else failing makes the target fail.

use combquot::acceptance::{format_line, run_all, KNOWN_UNATTAINABLE};

fn main() {
    let outcomes = run_all();
    let mut unexpected = Vec::new();
    for o in &outcomes {
        let known = KNOWN_UNATTAINABLE.contains(&o.id);
        let tag = if !o.passed && known {
            "  (known unattainable)"
        } else {
            ""
        };
        println!("{}{tag}", format_line(o));
        if !o.passed && !known {
            unexpected.push(o.id);
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("acceptance: {passed}/{} criteria pass", outcomes.len());
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
