use odd_arc::arc::OddArcAlgebra;
use odd_arc::diagram::Arena;
use odd_arc::quasi::{paper_twist_n2, twisted_center};

fn main() {
    let arena = Arena::new(2).unwrap();
    let alg = OddArcAlgebra::canonical(&arena);
    let tw = paper_twist_n2();
    let oz = twisted_center(&alg, &tw, true);
    println!("OZ(OH2_tau) graded rank: {}", oz.graded_rank().to_poly_string());
    for (d, v) in &oz.vectors {
        println!("  deg {d}: {}", oz.to_element(&arena, v));
    }
    let z = twisted_center(&alg, &tw, false);
    println!("Z(OH2_tau) graded rank: {}", z.graded_rank().to_poly_string());
    println!("Z degree-2 rank: {}", z.rank_in_degree(2));
}
