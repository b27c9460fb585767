use odd_arc::arc::OddArcAlgebra;
use odd_arc::center::{odd_center, verify_iso, center_rank_certificate};
use odd_arc::diagram::Arena;
use odd_arc::springer::quotient_basis;

fn main() {
    let t0 = std::time::Instant::now();
    let arena = Arena::new(3).unwrap();
    let alg = OddArcAlgebra::canonical(&arena);
    let center = odd_center(&alg);
    println!("center rank: {} graded {} ({:?})", center.total_rank(), center.graded_rank().to_poly_string(), t0.elapsed());
    center_rank_certificate(&center, 3).unwrap();
    let qb = quotient_basis(3).unwrap();
    println!("quotient rank: {} graded {} ({:?})", qb.total_rank(), qb.graded_rank().to_poly_string(), t0.elapsed());
    let report = verify_iso(&alg, &qb, &center).unwrap();
    println!("iso ok: {report:?} ({:?})", t0.elapsed());
}
