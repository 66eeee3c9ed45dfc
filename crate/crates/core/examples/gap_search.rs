//! Searching maps beyond 2-positivity for a gap between the two norms.

use cpnorm::campaign::{gap_search, replay_witness, GapSearchConfig};

pub fn main() {
    let mut cfg = GapSearchConfig::new(8, 2, 2, 3);
    cfg.multistarts = 16;
    let report = gap_search(&cfg).unwrap();
    let w = &report.witness;
    println!(
        "largest gap {:e} at trial {} (t = {:.3}, {} -> {}, 2-positivity: {:?})",
        report.max_gap, w.trial, w.t, w.p, w.q, w.two_positive
    );
    println!(
        "full {:.10}, hermitian {:.10}",
        w.full.value, w.hermitian.value
    );
    let check = replay_witness(w).unwrap();
    println!(
        "replayed gap {:e} (difference {:e})",
        check.gap, check.gap_error
    );

    cfg.cp_only = true;
    let cp = gap_search(&cfg).unwrap();
    println!("CP-only leg: max gap {:e}", cp.max_gap);
}
