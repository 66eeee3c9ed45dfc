//! The chain of inequalities bounding ‖B‖² by ‖A‖·‖C‖ for PSD block matrices.

use cpnorm::matrix::random::rng_from_seed;
use cpnorm::proof_lab::{
    gram_block, lemma_bound_check, lemma_chain, minor_bounds, schmidt_basis_change, BlockMatrix2x2,
};
use cpnorm::{ComplexMatrix, NormSpec};

pub fn main() {
    let mut rng = rng_from_seed(2);
    let m = gram_block(&mut rng, 3).unwrap();

    let (m_prime, d) = schmidt_basis_change(&m).unwrap();
    println!("lambdas {:?}", d.s);
    for minor in minor_bounds(&m_prime) {
        println!(
            "j={} lambda {:.6} <= sqrt(ac) {:.6} <= (a+c)/2 {:.6}",
            minor.j, minor.lambda, minor.geometric, minor.arithmetic
        );
    }

    let rep = lemma_chain(&m, NormSpec::Schatten(1.5)).unwrap();
    for link in &rep.links {
        let rel = match link.relation {
            cpnorm::proof_lab::Relation::Equal => "=",
            cpnorm::proof_lab::Relation::AtMost => "<=",
        };
        println!("{:<38} {:.9} {rel} {:.9}", link.name, link.lhs, link.rhs);
    }
    println!("t* = {:?}, chain holds: {}", rep.t_star, rep.holds);

    // Scalar example where the AM-GM sharpening is strict.
    let id = ComplexMatrix::identity(2);
    let m = BlockMatrix2x2::new(id.clone(), id.scale_real(2.0), id.scale_real(4.0)).unwrap();
    let b = lemma_bound_check(&m, NormSpec::OPERATOR).unwrap();
    let rep = lemma_chain(&m, NormSpec::OPERATOR).unwrap();
    println!(
        "A=I, B=2I, C=4I: ||B||^2 = {} = ||A||·||C|| = {}, average bound {} is loose",
        b.lhs, b.rhs, rep.avg_bound
    );
}
