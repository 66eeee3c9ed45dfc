//! Unitarily invariant norms from singular values, pinching and polar moduli.

use cpnorm::matrix::random::{ginibre, haar_unitary, rng_from_seed};
use cpnorm::matrix::{diag_pinch_norm, polar_abs, svd, ui_norm};
use cpnorm::NormSpec;

pub fn main() {
    let mut rng = rng_from_seed(1);
    let a = ginibre(&mut rng, 4, 3);
    let d = svd(&a).unwrap();
    println!("singular values {:?}", d.s);

    let specs = [
        "schatten:1",
        "schatten:1.5",
        "schatten:2",
        "schatten:inf",
        "kyfan:2",
    ];
    for s in specs {
        let spec: NormSpec = s.parse().unwrap();
        println!("{spec:>14}  {:.12}", ui_norm(&a, spec).unwrap());
    }

    // Invariance under U·A·V.
    let u = haar_unitary(&mut rng, 4);
    let v = haar_unitary(&mut rng, 3);
    let moved = &(&u * &a) * &v;
    let p = NormSpec::Schatten(3.0);
    println!(
        "schatten:3 before {:.12} after {:.12}",
        ui_norm(&a, p).unwrap(),
        ui_norm(&moved, p).unwrap()
    );

    // The diagonal part never has larger norm.
    let s = ginibre(&mut rng, 4, 4);
    for spec in [NormSpec::TRACE, NormSpec::OPERATOR, NormSpec::KyFan(2)] {
        println!(
            "{spec:>14}  diagonal {:.6} <= full {:.6}",
            diag_pinch_norm(&s, spec).unwrap(),
            ui_norm(&s, spec).unwrap()
        );
    }

    // (σσ†)^{1/2} and (σ†σ)^{1/2} share σ's norms.
    let (left, right) = polar_abs(&s).unwrap();
    let f = NormSpec::FROBENIUS;
    println!(
        "frobenius of sigma {:.12}, left {:.12}, right {:.12}",
        ui_norm(&s, f).unwrap(),
        ui_norm(&left, f).unwrap(),
        ui_norm(&right, f).unwrap()
    );
}
