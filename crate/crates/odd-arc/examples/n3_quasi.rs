use odd_arc::arc::OddArcAlgebra;
use odd_arc::diagram::Arena;
use odd_arc::quasi::{solve_twist, verify_twist, Quasi};

fn main() {
    let t0 = std::time::Instant::now();
    let arena = Arena::new(3).unwrap();
    let alg = OddArcAlgebra::canonical(&arena);
    let q = Quasi::new(&alg).unwrap();
    println!("phi table built ({:?})", t0.elapsed());
    let checked = q.verify_cocycle().unwrap();
    println!("cocycle ok, {checked} identities ({:?})", t0.elapsed());
    let tw = solve_twist(&q).unwrap();
    println!("twist solved, {} nonzero values ({:?})", tw.values.len(), t0.elapsed());
    let v = verify_twist(&q, &tw).unwrap();
    println!("twist verified on {v} triples ({:?})", t0.elapsed());
}
