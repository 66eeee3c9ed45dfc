//! Complete positivity and k-positivity, with refutation witnesses.

use cpnorm::Superoperator;

pub fn main() {
    let cp = Superoperator::random_cp_map(3, 3, 2, 5).unwrap();
    let rep = cp.is_completely_positive(1e-9).unwrap();
    println!(
        "random CP map: {:?}, min choi eigenvalue {:.3e}",
        rep.verdict, rep.min_value
    );

    let t2 = Superoperator::transpose_map(2).unwrap();
    let rep = t2.is_k_positive(2, 0, 0).unwrap();
    println!(
        "transpose on M_2, k=2: {:?} (exact: {}), witness value {:?}",
        rep.verdict, rep.exact, rep.witness_value
    );
    if let Some(w) = &rep.witness {
        let value = t2.choi().quadratic_form(w).re;
        println!("replayed <w|C|w> = {value:.12}");
    }

    // Positive but not 2-positive: sampling over product vectors never refutes.
    let t3 = Superoperator::transpose_map(3).unwrap();
    let rep = t3.is_k_positive(1, 10_000, 9).unwrap();
    println!(
        "transpose on M_3, k=1: {:?} over {} trials",
        rep.verdict, rep.trials
    );
    let rep = t3.is_k_positive(2, 10_000, 9).unwrap();
    println!("transpose on M_3, k=2: {:?}", rep.verdict);
}
