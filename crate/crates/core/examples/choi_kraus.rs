//! Building maps from Kraus operators or Choi matrices and applying them.

use cpnorm::matrix::random::{ginibre, rng_from_seed};
use cpnorm::Superoperator;

pub fn main() {
    let map = Superoperator::random_cp_map(2, 3, 2, 42).unwrap();
    println!(
        "dims {} -> {}, choi {:?}",
        map.dim_in(),
        map.dim_out(),
        map.choi().shape()
    );

    let mut rng = rng_from_seed(3);
    let sigma = ginibre(&mut rng, 2, 2);
    let via_kraus = map.apply_via_kraus(&sigma).unwrap().unwrap();
    let via_choi = map.apply_via_choi(&sigma).unwrap();
    println!(
        "kraus vs choi path difference {:e}",
        via_kraus.max_abs_diff(&via_choi)
    );

    // Only the Choi matrix survives a round trip through that representation.
    let bare = Superoperator::from_choi(2, 3, map.choi().clone()).unwrap();
    println!(
        "choi-only apply difference {:e}",
        bare.apply(&sigma).unwrap().max_abs_diff(&via_kraus)
    );

    let t = Superoperator::transpose_map(2).unwrap();
    println!("transpose map choi (the swap):\n{:?}", t.choi());

    let lifted = map.tensor_with_identity(2).unwrap();
    println!(
        "map ⊗ Id_2 acts on {}x{} inputs",
        lifted.dim_in(),
        lifted.dim_in()
    );

    let json = map.to_json();
    let back = Superoperator::from_json(&json).unwrap();
    println!("json round trip exact: {}", back == map);
}
