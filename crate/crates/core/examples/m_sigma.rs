//! M_{u,v}, M_σ, and their images under Φ ⊗ Id_2 for a CP map.

use cpnorm::matrix::eigh;
use cpnorm::matrix::random::{ginibre, rng_from_seed, unit_vector};
use cpnorm::proof_lab::{build_m_sigma, build_m_uv, m_sigma_reconstruction, tensored_image};
use cpnorm::Superoperator;

pub fn main() {
    let mut rng = rng_from_seed(4);
    let u = unit_vector(&mut rng, 3);
    let v = unit_vector(&mut rng, 3);
    let muv = build_m_uv(&u, &v).unwrap();
    println!("M_uv spectrum {:?}", eigh(&muv.assemble()).unwrap().values);

    let sigma = ginibre(&mut rng, 3, 3);
    let ms = build_m_sigma(&sigma).unwrap();
    println!(
        "M_sigma min eigenvalue {:.3e}",
        ms.min_eigenvalue().unwrap()
    );
    let rec = m_sigma_reconstruction(&sigma).unwrap();
    println!(
        "sum of lambda_j M_(phi_j, psi_j) matches to {:.3e}",
        rec.residual
    );

    let map = Superoperator::random_cp_map(3, 2, 2, 8).unwrap();
    for (name, blocks) in [("M_uv", &muv), ("M_sigma", &ms)] {
        let image = tensored_image(&map, blocks).unwrap();
        println!(
            "(map ⊗ Id_2)({name}) min eigenvalue {:.3e}",
            eigh(&image).unwrap().min_value()
        );
    }
}
