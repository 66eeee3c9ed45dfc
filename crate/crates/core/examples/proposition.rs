//! A small proposition campaign: full and Hermitian norms of random CP maps.

use cpnorm::campaign::{run_campaign, CampaignConfig, VerifyKind};

pub fn main() {
    let cfg = CampaignConfig {
        trials: 2,
        dims: vec![(2, 2), (2, 3)],
        multistarts: 32,
        ..CampaignConfig::new(VerifyKind::Proposition, 17)
    };
    let report = run_campaign(&cfg).unwrap();
    for r in report.records.iter().take(5) {
        println!("{}", serde_json::to_string(r).unwrap());
    }
    for f in &report.summary.failures {
        println!("failure: {f:?}");
    }
    let s = &report.summary;
    println!(
        "{} cases, max relative gap {:e}, failures {}",
        s.records,
        s.max_gap.unwrap(),
        s.failures.len()
    );
}
