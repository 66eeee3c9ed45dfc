//! ‖Φ(σ)‖_q² against the product of the norms of the two Hermitian images.

use cpnorm::matrix::random::{ginibre, rng_from_seed};
use cpnorm::norm_opt::hermitian_reduction;
use cpnorm::{NormSpec, Superoperator};

pub fn main() {
    let mut rng = rng_from_seed(6);
    let map = Superoperator::random_cp_map(3, 3, 2, 1).unwrap();
    let sigma = ginibre(&mut rng, 3, 3);
    for q in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
        let c = hermitian_reduction(&map, &sigma, NormSpec::Schatten(q)).unwrap();
        println!(
            "q={q:<4} lhs {:.8} <= bound {:.8} ({})",
            c.lhs, c.bound_product, c.holds
        );
    }
}
