//! Runs every executable contract at the default configuration.
use quotecas::harness::{check_all, GenConfig};

fn main() {
    let reports = check_all(&GenConfig::default());
    for r in &reports {
        println!("{r}\n");
    }
    if reports.iter().any(|r| !r.passed()) {
        std::process::exit(1);
    }
}
