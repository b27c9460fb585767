use odd_arc::arc::OddArcAlgebra;
use odd_arc::center::{odd_center, center_rank_certificate};
use odd_arc::diagram::Arena;

fn main() {
    let t0 = std::time::Instant::now();
    let arena = Arena::new(4).unwrap();
    let alg = OddArcAlgebra::canonical(&arena);
    let center = odd_center(&alg);
    println!("n=4 center rank: {} graded {} ({:?})", center.total_rank(), center.graded_rank().to_poly_string(), t0.elapsed());
    center_rank_certificate(&center, 4).unwrap();
    println!("certificate ok ({:?})", t0.elapsed());
    let qb = odd_arc::springer::quotient_basis(4).unwrap();
    println!("n=4 springer rank: {} graded {} ({:?})", qb.total_rank(), qb.graded_rank().to_poly_string(), t0.elapsed());
}
