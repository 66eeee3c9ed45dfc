//! Induced p→q norms over all inputs and over Hermitian inputs.

use cpnorm::norm_opt::AscentMethod;
use cpnorm::{
    hermitian_induced_norm, induced_norm, sampling_oracle, NormSpec, OptConfig, Superoperator,
};

pub fn main() {
    let cfg = OptConfig::with_seed(1);

    // The identity channel has norm m^{max(0, 1/q - 1/p)}.
    let id = Superoperator::identity(3).unwrap();
    let (p, q) = (NormSpec::Schatten(3.0), NormSpec::TRACE);
    let est = induced_norm(&id, p, q, &cfg).unwrap();
    println!(
        "identity on M_3, {p} -> {q}: {:.10} (closed form {:.10})",
        est.value,
        3f64.powf(1.0 - 1.0 / 3.0)
    );

    let map = Superoperator::random_cp_map(2, 2, 3, 11).unwrap();
    for (p, q) in [
        (1.0, f64::INFINITY),
        (2.0, 2.0),
        (f64::INFINITY, 1.0),
        (1.5, 3.0),
    ] {
        let (p, q) = (NormSpec::Schatten(p), NormSpec::Schatten(q));
        let full = induced_norm(&map, p, q, &cfg).unwrap();
        let herm = hermitian_induced_norm(&map, p, q, &cfg).unwrap();
        let oracle = sampling_oracle(&map, p, q, 10_000, 1, false).unwrap();
        println!(
            "{p:>14} -> {q:<14} full {:.10}  hermitian {:.10}  sampled {:.6}",
            full.value, herm.value, oracle.value
        );
    }

    // The gradient method reaches the same value, more slowly.
    let slow = OptConfig {
        method: AscentMethod::RetractionGradient,
        multistarts: 16,
        ..cfg.clone()
    };
    let (p, q) = (NormSpec::Schatten(1.5), NormSpec::FROBENIUS);
    let a = induced_norm(&map, p, q, &cfg).unwrap();
    let b = induced_norm(&map, p, q, &slow).unwrap();
    println!(
        "dual power {:.10}, retraction gradient {:.10}",
        a.value, b.value
    );
}
