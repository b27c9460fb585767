//! `oddarc`: construct odd arc algebras from chronological-cobordism data,
//! compute centers and the odd Springer cohomology, verify the isomorphism
//! between them, and solve for associativity twists.
//!
//! Exit codes: 0 on success, 1 on a failed verification (with a JSON witness
//! on stdout), 2 on usage errors.

use clap::{Parser, Subcommand, ValueEnum};
use odd_arc::arc::{nonassoc_witness, oh2_table, ArcElement, BasisVector, OddArcAlgebra};
use odd_arc::center::{center_rank_certificate, odd_center, verify_iso};
use odd_arc::chronology::{Chronology, ChoiceC};
use odd_arc::diagram::Arena;
use odd_arc::even::{even_center, mod2_structure_agreement, EvenArcAlgebra};
use odd_arc::quasi::{
    paper_twist_n2, solve_twist, twisted_center, twisted_multiply, verify_twist, Quasi, Twist,
};
use odd_arc::springer::{all_generators, quotient_basis, relation_rows, SkewPoly};
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "oddarc", version, about = "Odd arc algebras, their centers and twists")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgebraKind {
    Odd,
    Even,
    Twisted,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CenterKind {
    Odd,
    Even,
}

#[derive(Subcommand)]
enum Command {
    /// List the crossingless matchings in canonical order.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print a rank-2 multiplication table (odd, even or twisted).
    Table {
        #[arg(long)]
        n: usize,
        /// 'a' (parallel arcs) or 'b' (nested arcs); both if omitted.
        #[arg(long)]
        side: Option<char>,
        #[arg(long, default_value = "canonical")]
        choice: String,
        #[arg(long, value_enum, default_value = "odd")]
        algebra: AlgebraKind,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Multiply two basis vectors, written as "upper:lower:mono" with mono
    /// "1" or like "g1^g3".
    Multiply {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value = "canonical")]
        choice: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compute the odd (or even) center: basis and graded rank.
    Center {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "odd")]
        kind: CenterKind,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// The odd Springer quotient: graded rank and basis monomials.
    Springer {
        #[arg(long)]
        n: usize,
        /// Also dump the per-degree relation matrices to this JSON file.
        #[arg(long)]
        audit_json: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Verify the isomorphism between the Springer quotient and the odd center.
    VerifyIso {
        #[arg(long)]
        n: usize,
    },
    /// Emit the associator data: chronology signs and split counts.
    Associator {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "canonical")]
        choice: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Solve for a twist and write it as JSON.
    Twist {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "canonical")]
        choice: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Verify a twist file: the coboundary equation and twisted associativity.
    VerifyTwist {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tau: String,
        #[arg(long, default_value = "canonical")]
        choice: String,
        #[arg(long, default_value_t = 0xadd0)]
        seed: u64,
    },
    /// Classify the sign classes of choices at n = 2.
    Classify {
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Run every check that applies at this size; exit 0 iff all pass.
    VerifyAll {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0xadd0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(witness) => {
            println!("{}", serde_json::to_string_pretty(&witness).unwrap());
            ExitCode::FAILURE
        }
    }
}

fn fail(kind: &str, detail: impl ToString) -> Value {
    json!({ "failed": kind, "witness": detail.to_string() })
}

fn load_choice(arena: &Arena, spec: &str) -> Result<ChoiceC, Value> {
    let mut choice = ChoiceC::canonical(arena);
    if spec == "canonical" {
        return Ok(choice);
    }
    let data = std::fs::read_to_string(spec)
        .map_err(|e| fail("choice-file", format!("{spec}: {e}")))?;
    let overrides: Vec<Chronology> =
        serde_json::from_str(&data).map_err(|e| fail("choice-file", e))?;
    for ch in overrides {
        odd_arc::chronology::validate(arena.matching(ch.triple.1), &ch.steps)
            .map_err(|e| fail("choice-file", e))?;
        choice = choice.with_override(ch);
    }
    Ok(choice)
}

fn parse_basis(arena: &Arena, s: &str) -> Result<BasisVector, Value> {
    let err = || fail("parse", format!("bad basis vector '{s}'; expected upper:lower:mono"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(err());
    }
    let upper: usize = parts[0].parse().map_err(|_| err())?;
    let lower: usize = parts[1].parse().map_err(|_| err())?;
    if upper >= arena.size() || lower >= arena.size() {
        return Err(fail("parse", format!("matching id out of range in '{s}'")));
    }
    let m = arena.closure(upper, lower).circle_count() as u32;
    let mask = if parts[2] == "1" {
        0u64
    } else {
        let mut mask = 0u64;
        for g in parts[2].split('^') {
            let idx: u32 = g.strip_prefix('g').ok_or_else(err)?.parse().map_err(|_| err())?;
            if idx == 0 || idx > m {
                return Err(fail("parse", format!("circle g{idx} out of range (1..={m})")));
            }
            mask |= 1 << (idx - 1);
        }
        mask
    };
    Ok(BasisVector { upper, lower, mask })
}

fn element_json(e: &ArcElement) -> Value {
    let mut terms = Vec::new();
    for (&(b, a), piece) in e.pieces() {
        for (mask, coeff) in piece.terms() {
            let v = BasisVector { upper: b, lower: a, mask: *mask };
            terms.push(json!([v.to_string(), coeff.to_string()]));
        }
    }
    Value::Array(terms)
}

fn piece_text(e: &ArcElement) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let pieces: Vec<String> = e.pieces().map(|(_, p)| p.to_string()).collect();
    pieces.join(" ; ")
}

fn twist_to_json(tw: &Twist) -> Value {
    let mut entries: Vec<Value> = tw
        .values
        .iter()
        .map(|(&(c, b, a, k, l), &v)| json!({ "pair": [c, b, a], "k": k, "l": l, "value": v }))
        .collect();
    entries.sort_by_key(|e| e.to_string());
    json!({ "tau": entries })
}

fn twist_from_json(data: &str) -> Result<Twist, Value> {
    let v: Value = serde_json::from_str(data).map_err(|e| fail("tau-file", e))?;
    let mut tw = Twist::default();
    let entries = v
        .get("tau")
        .and_then(Value::as_array)
        .ok_or_else(|| fail("tau-file", "missing 'tau' array"))?;
    for e in entries {
        let pair = e.get("pair").and_then(Value::as_array).ok_or_else(|| fail("tau-file", "bad pair"))?;
        let get = |x: &Value| x.as_u64().ok_or_else(|| fail("tau-file", "bad integer"));
        let c = get(&pair[0])? as usize;
        let b = get(&pair[1])? as usize;
        let a = get(&pair[2])? as usize;
        let k = get(e.get("k").unwrap_or(&Value::Null))? as u8;
        let l = get(e.get("l").unwrap_or(&Value::Null))? as u8;
        let val = get(e.get("value").unwrap_or(&Value::Null))? as u8;
        tw.set((c, b, a, k, l), val);
    }
    Ok(tw)
}

fn run(cli: Cli) -> Result<(), Value> {
    match cli.command {
        Command::Enumerate { n, format } => {
            let arena = Arena::new(n).map_err(|e| fail("size", e))?;
            match format {
                Format::Json => {
                    let items: Vec<Value> = arena
                        .matchings()
                        .iter()
                        .enumerate()
                        .map(|(k, m)| {
                            json!({
                                "id": arena.print_id(k),
                                "arcs": m.arcs().iter().map(|&(i, j)| json!([i, j])).collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    println!("{}", serde_json::to_string_pretty(&json!({ "n": n, "matchings": items })).unwrap());
                }
                Format::Text => {
                    for (k, m) in arena.matchings().iter().enumerate() {
                        println!("{}  {}", arena.print_id(k), m);
                    }
                }
            }
            Ok(())
        }
        Command::Table { n, side, choice, algebra, format } => {
            if n != 2 {
                return Err(fail("usage", "tables are defined for n = 2"));
            }
            let arena = Arena::new(2).map_err(|e| fail("size", e))?;
            let choice = load_choice(&arena, &choice)?;
            let alg = OddArcAlgebra::new(&arena, choice);
            let sides: Vec<usize> = match side {
                Some('a') => vec![0],
                Some('b') => vec![1],
                None => vec![0, 1],
                Some(c) => return Err(fail("usage", format!("side must be 'a' or 'b', got '{c}'"))),
            };
            let tw = match algebra {
                AlgebraKind::Twisted => Some(paper_twist_n2()),
                _ => None,
            };
            let even = EvenArcAlgebra::new(&arena);
            for s in sides {
                let table = oh2_table(&alg, s);
                let compute = |x: BasisVector, y: BasisVector| -> ArcElement {
                    match (algebra, &tw) {
                        (AlgebraKind::Twisted, Some(t)) => {
                            twisted_multiply(&alg, t, &alg.basis_element(x), &alg.basis_element(y))
                        }
                        _ => alg.multiply_basis(x, y),
                    }
                };
                match format {
                    Format::Json => {
                        let rows: Vec<String> = table.rows.iter().map(|v| v.to_string()).collect();
                        let cols: Vec<String> = table.cols.iter().map(|v| v.to_string()).collect();
                        let entries: Vec<Vec<Value>> = table
                            .rows
                            .iter()
                            .map(|&x| {
                                table
                                    .cols
                                    .iter()
                                    .map(|&y| match algebra {
                                        AlgebraKind::Even => even_entry_json(&even, x, y),
                                        _ => element_json(&compute(x, y)),
                                    })
                                    .collect()
                            })
                            .collect();
                        let doc = json!({
                            "n": 2,
                            "side": if s == 0 { "a" } else { "b" },
                            "algebra": match algebra { AlgebraKind::Odd => "odd", AlgebraKind::Even => "even", AlgebraKind::Twisted => "twisted" },
                            "rows": rows,
                            "cols": cols,
                            "entries": entries,
                        });
                        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                    }
                    Format::Text => {
                        let cells: Vec<Vec<String>> = table
                            .rows
                            .iter()
                            .map(|&x| {
                                table
                                    .cols
                                    .iter()
                                    .map(|&y| match algebra {
                                        AlgebraKind::Even => even_entry_text(&even, x, y),
                                        _ => piece_text(&compute(x, y)),
                                    })
                                    .collect()
                            })
                            .collect();
                        print_grid(
                            &format!("side {} ({})", if s == 0 { "a" } else { "b" }, match algebra {
                                AlgebraKind::Odd => "odd",
                                AlgebraKind::Even => "even",
                                AlgebraKind::Twisted => "twisted",
                            }),
                            &table.rows,
                            &table.cols,
                            &cells,
                        );
                    }
                }
            }
            Ok(())
        }
        Command::Multiply { n, x, y, choice, format } => {
            let arena = Arena::new(n).map_err(|e| fail("size", e))?;
            let choice = load_choice(&arena, &choice)?;
            let alg = OddArcAlgebra::new(&arena, choice);
            let xv = parse_basis(&arena, &x)?;
            let yv = parse_basis(&arena, &y)?;
            let prod = alg.multiply_basis(xv, yv);
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({ "x": xv.to_string(), "y": yv.to_string(), "product": element_json(&prod) }))
                        .unwrap()
                ),
                Format::Text => println!("{prod}"),
            }
            Ok(())
        }
        Command::Center { n, kind, format } => {
            let arena = Arena::new(n).map_err(|e| fail("size", e))?;
            match kind {
                CenterKind::Odd => {
                    let alg = OddArcAlgebra::canonical(&arena);
                    let c = odd_center(&alg);
                    center_rank_certificate(&c, n).map_err(|e| fail("center", e))?;
                    match format {
                        Format::Json => {
                            let basis: Vec<Value> = c
                                .vectors
                                .iter()
                                .map(|(d, v)| {
                                    json!({
                                        "qdeg": d,
                                        "element": element_json(&c.index.to_element(&arena, v)),
                                    })
                                })
                                .collect();
                            println!(
                                "{}",
                                serde_json::to_string_pretty(&json!({
                                    "n": n,
                                    "kind": "odd",
                                    "rank": c.total_rank(),
                                    "graded_rank": c.graded_rank().to_poly_string(),
                                    "basis": basis,
                                }))
                                .unwrap()
                            );
                        }
                        Format::Text => {
                            println!("OZ(OH^{n}): rank {} = C({}, {})", c.total_rank(), 2 * n, n);
                            println!("graded rank: {}", c.graded_rank().to_poly_string());
                            for (d, v) in &c.vectors {
                                println!("  deg {d}: {}", c.index.to_element(&arena, v));
                            }
                        }
                    }
                }
                CenterKind::Even => {
                    let alg = EvenArcAlgebra::new(&arena);
                    let z = even_center(&alg);
                    match format {
                        Format::Json => println!(
                            "{}",
                            serde_json::to_string_pretty(&json!({
                                "n": n,
                                "kind": "even",
                                "rank": z.graded_rank().total(),
                                "graded_rank": z.graded_rank().to_poly_string(),
                            }))
                            .unwrap()
                        ),
                        Format::Text => {
                            println!("Z(H^{n}): rank {}", z.graded_rank().total());
                            println!("graded rank: {}", z.graded_rank().to_poly_string());
                        }
                    }
                }
            }
            Ok(())
        }
        Command::Springer { n, audit_json, format } => {
            let qb = quotient_basis(n).map_err(|e| fail("springer", e))?;
            if let Some(path) = audit_json {
                let mut degrees = Vec::new();
                for ell in 0..=2 * n {
                    let (monomials, rows) = relation_rows(n, ell);
                    degrees.push(json!({
                        "word_length": ell,
                        "monomials": monomials,
                        "rows": rows
                            .iter()
                            .map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>())
                            .collect::<Vec<_>>(),
                    }));
                }
                std::fs::write(
                    &path,
                    serde_json::to_string_pretty(&json!({ "n": n, "relations": degrees })).unwrap(),
                )
                .map_err(|e| fail("io", e))?;
            }
            let monos: Vec<String> = qb
                .basis_monomials()
                .iter()
                .map(|&m| SkewPoly::monomial(m, 2 * n).to_string())
                .collect();
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "n": n,
                        "rank": qb.total_rank(),
                        "graded_rank": qb.graded_rank().to_poly_string(),
                        "basis": monos,
                    }))
                    .unwrap()
                ),
                Format::Text => {
                    println!("OH(B_{{{n},{n}}}): rank {} = C({}, {})", qb.total_rank(), 2 * n, n);
                    println!("graded rank: {}", qb.graded_rank().to_poly_string());
                    println!("basis: {}", monos.join(", "));
                }
            }
            Ok(())
        }
        Command::VerifyIso { n } => {
            let arena = Arena::new(n).map_err(|e| fail("size", e))?;
            let alg = OddArcAlgebra::canonical(&arena);
            let qb = quotient_basis(n).map_err(|e| fail("springer", e))?;
            let center = odd_center(&alg);
            let report = verify_iso(&alg, &qb, &center).map_err(|e| fail("verify-iso", e))?;
            println!(
                "verify-iso n={n}: OK (rank {}, {} generators killed, {} multiplicative pairs)",
                report.center_rank, report.generators_killed, report.multiplicative_pairs
            );
            Ok(())
        }
        Command::Associator { n, choice, format } => {
            let arena = Arena::new(n).map_err(|e| fail("size", e))?;
            let choice = load_choice(&arena, &choice)?;
            let alg = OddArcAlgebra::new(&arena, choice);
            let q = Quasi::new(&alg).map_err(|e| fail("associator", e))?;
            let size = arena.size();
            let mut items = Vec::new();
            for d in 0..size {
                for c in 0..size {
                    for b in 0..size {
                        for a in 0..size {
                            items.push(json!({
                                "quad": [d, c, b, a],
                                "phi_ch": q.phi_ch(d, c, b, a).unwrap(),
                                "splits_right": odd_arc::tqft::split_count(&arena, c, b, a),
                                "determined": q.is_determined((d, c, b, a)),
                            }));
                        }
                    }
                }
            }
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({ "n": n, "associator": items })).unwrap()
                ),
                Format::Text => {
                    for item in items {
                        println!(
                            "quad {} phi_ch {} (splits of right pair: {}{})",
                            item["quad"], item["phi_ch"], item["splits_right"],
                            if item["determined"] == json!(false) { ", completed" } else { "" }
                        );
                    }
                }
            }
            Ok(())
        }
        Command::Twist { n, choice, out } => {
            let arena = Arena::new(n).map_err(|e| fail("size", e))?;
            let choice = load_choice(&arena, &choice)?;
            let alg = OddArcAlgebra::new(&arena, choice);
            let q = Quasi::new(&alg).map_err(|e| fail("twist", e))?;
            let tw = solve_twist(&q).map_err(|e| fail("twist", e))?;
            verify_twist(&q, &tw).map_err(|e| fail("twist", e))?;
            let doc = twist_to_json(&tw);
            match out {
                Some(path) => {
                    std::fs::write(&path, serde_json::to_string_pretty(&doc).unwrap())
                        .map_err(|e| fail("io", e))?;
                    println!("twist n={n}: solved, {} nonzero values, written to {path}", tw.values.len());
                }
                None => println!("{}", serde_json::to_string_pretty(&doc).unwrap()),
            }
            Ok(())
        }
        Command::VerifyTwist { n, tau, choice, seed } => {
            let arena = Arena::new(n).map_err(|e| fail("size", e))?;
            let choice = load_choice(&arena, &choice)?;
            let alg = OddArcAlgebra::new(&arena, choice);
            let q = Quasi::new(&alg).map_err(|e| fail("verify-twist", e))?;
            let data = std::fs::read_to_string(&tau).map_err(|e| fail("io", e))?;
            let tw = twist_from_json(&data)?;
            let checked = verify_twist(&q, &tw).map_err(|e| fail("verify-twist", e))?;
            let assoc = check_twisted_associativity(&arena, &alg, &tw, seed)?;
            println!("verify-twist n={n}: OK (dtau = psi on {checked} nerve triples, associativity on {assoc} triples)");
            Ok(())
        }
        Command::Classify { n } => {
            if n != 2 {
                return Err(fail("usage", "classification runs at n = 2"));
            }
            classify_cmd()
        }
        Command::VerifyAll { n, seed } => verify_all(n, seed),
    }
}

fn even_entry_json(even: &EvenArcAlgebra, x: BasisVector, y: BasisVector) -> Value {
    let p = even.multiply_basis((x.upper, x.lower, x.mask), (y.upper, y.lower, y.mask));
    let mut terms = Vec::new();
    for (&(b, a), piece) in p.pieces() {
        for (mask, coeff) in piece.terms() {
            let v = BasisVector { upper: b, lower: a, mask: *mask };
            terms.push(json!([v.to_string(), coeff.to_string()]));
        }
    }
    Value::Array(terms)
}

fn even_entry_text(even: &EvenArcAlgebra, x: BasisVector, y: BasisVector) -> String {
    let p = even.multiply_basis((x.upper, x.lower, x.mask), (y.upper, y.lower, y.mask));
    let mut parts = Vec::new();
    for (_, piece) in p.pieces() {
        for (mask, coeff) in piece.terms() {
            let mono = if *mask == 0 {
                "1".to_string()
            } else {
                let mut names = Vec::new();
                let mut mm = *mask;
                while mm != 0 {
                    let g = mm.trailing_zeros();
                    names.push(format!("X{}", g + 1));
                    mm &= mm - 1;
                }
                names.join("")
            };
            parts.push(format!("{coeff}·{mono}"));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn print_grid(title: &str, rows: &[BasisVector], cols: &[BasisVector], cells: &[Vec<String>]) {
    println!("table {title}");
    let mut widths: Vec<usize> = cols.iter().map(|c| c.to_string().len()).collect();
    for row in cells {
        for (j, cell) in row.iter().enumerate() {
            widths[j] = widths[j].max(cell.len());
        }
    }
    let rw = rows.iter().map(|r| r.to_string().len()).max().unwrap_or(0);
    print!("{:rw$} |", "");
    for (j, c) in cols.iter().enumerate() {
        print!(" {:>w$} |", c.to_string(), w = widths[j]);
    }
    println!();
    for (i, r) in rows.iter().enumerate() {
        print!("{:>rw$} |", r.to_string());
        for (j, cell) in cells[i].iter().enumerate() {
            print!(" {:>w$} |", cell, w = widths[j]);
        }
        println!();
    }
}

fn check_twisted_associativity(
    arena: &Arena,
    alg: &OddArcAlgebra,
    tw: &Twist,
    seed: u64,
) -> Result<usize, Value> {
    let size = arena.size();
    let mut checked = 0usize;
    let mut run_one = |x: BasisVector, y: BasisVector, z: BasisVector| -> Result<(), Value> {
        let (xe, ye, ze) = (alg.basis_element(x), alg.basis_element(y), alg.basis_element(z));
        let l = twisted_multiply(alg, tw, &twisted_multiply(alg, tw, &xe, &ye), &ze);
        let r = twisted_multiply(alg, tw, &xe, &twisted_multiply(alg, tw, &ye, &ze));
        if l != r {
            return Err(fail(
                "twisted-associativity",
                format!("({x}) . ({y}) . ({z}): {l} vs {r}"),
            ));
        }
        checked += 1;
        Ok(())
    };
    if arena.n() <= 2 {
        let basis = alg.basis_vectors();
        for &x in &basis {
            for &y in &basis {
                if x.lower != y.upper {
                    continue;
                }
                for &z in &basis {
                    if y.lower != z.upper {
                        continue;
                    }
                    run_one(x, y, z)?;
                }
            }
        }
    } else {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..100_000 {
            let (d, c, b, a) = (
                rng.gen_range(0..size),
                rng.gen_range(0..size),
                rng.gen_range(0..size),
                rng.gen_range(0..size),
            );
            let x = BasisVector { upper: d, lower: c, mask: rng.gen_range(0..(1u64 << arena.closure(d, c).circle_count())) };
            let y = BasisVector { upper: c, lower: b, mask: rng.gen_range(0..(1u64 << arena.closure(c, b).circle_count())) };
            let z = BasisVector { upper: b, lower: a, mask: rng.gen_range(0..(1u64 << arena.closure(b, a).circle_count())) };
            run_one(x, y, z)?;
        }
    }
    Ok(checked)
}

fn classify_cmd() -> Result<(), Value> {
    use odd_arc::quasi::{classify_sigma, triple_sign, ClassifyOutcome, SigmaClass};
    use odd_arc::tqft::enumerate_triple_choices;
    let arena = Arena::new(2).map_err(|e| fail("size", e))?;
    // Collect the per-triple sign structure.
    let mut split_triples = Vec::new();
    let mut total_choices = 1usize;
    for c in 0..2 {
        for b in 0..2 {
            for a in 0..2 {
                let choices = enumerate_triple_choices(&arena, (c, b, a)).unwrap();
                total_choices *= choices.len();
                let mut signs = std::collections::BTreeSet::new();
                for ch in &choices {
                    signs.insert(triple_sign(&arena, ch).map_err(|e| fail("classify", e))?);
                }
                if signs.len() == 2 {
                    split_triples.push((c, b, a));
                }
            }
        }
    }
    println!("n=2: {total_choices} choices C collapse onto {} sign classes", 1 << split_triples.len());
    let mut classes: Vec<SigmaClass> = Vec::new();
    for bits in 0..(1u32 << split_triples.len()) {
        let mut sigma = SigmaClass::new();
        for (k, &t) in split_triples.iter().enumerate() {
            if bits >> k & 1 == 1 {
                sigma.insert(t, 1);
            }
        }
        classes.push(sigma);
    }
    let mut iso = 0;
    let mut differ = 0;
    for (i, si) in classes.iter().enumerate() {
        for (j, sj) in classes.iter().enumerate() {
            match classify_sigma(&arena, si, sj).map_err(|e| fail("classify", e))? {
                ClassifyOutcome::Isomorphic { lambda } => {
                    iso += 1;
                    let support: Vec<String> =
                        lambda.iter().map(|(&(b, a), _)| format!("({b},{a})")).collect();
                    println!(
                        "classes {i} ~ {j}: isomorphic via lambda supported on [{}]",
                        support.join(", ")
                    );
                }
                ClassifyOutcome::AssociatorsDiffer => {
                    differ += 1;
                    println!("classes {i} !~ {j}: associators differ");
                }
            }
        }
    }
    println!("classify n=2: {iso} isomorphic pairs, {differ} with differing associators; all twisted pairs isomorphic");
    Ok(())
}

fn verify_all(n: usize, seed: u64) -> Result<(), Value> {
    let arena = Arena::new(n).map_err(|e| fail("size", e))?;
    let alg = OddArcAlgebra::canonical(&arena);

    // Mod-2 agreement with the even algebra.
    let even = EvenArcAlgebra::new(&arena);
    let pairs = mod2_structure_agreement(&alg, &even).map_err(|e| fail("mod2", e))?;
    println!("PASS mod2-agreement ({pairs} basis pairs)");

    // Nonassociativity witness.
    if n >= 2 {
        let (_, _, _, xy_z, x_yz) = nonassoc_witness(&alg);
        if xy_z.is_zero() || xy_z != x_yz.neg() {
            return Err(fail("nonassoc", format!("(xy)z = {xy_z}, x(yz) = {x_yz}")));
        }
        println!("PASS nonassociativity witness ((xy)z = -x(yz) != 0)");
    }

    // Odd center rank and certificate.
    let center = odd_center(&alg);
    center_rank_certificate(&center, n).map_err(|e| fail("center", e))?;
    println!(
        "PASS odd center (rank {} = C({},{}), graded {})",
        center.total_rank(),
        2 * n,
        n,
        center.graded_rank().to_poly_string()
    );

    // Springer quotient.
    let qb = quotient_basis(n).map_err(|e| fail("springer", e))?;
    for g in all_generators(n) {
        if !qb.normal_form(&g).is_zero() {
            return Err(fail("springer", format!("generator {g} does not reduce to 0")));
        }
    }
    println!(
        "PASS springer quotient (rank {}, graded {})",
        qb.total_rank(),
        qb.graded_rank().to_poly_string()
    );

    // The isomorphism.
    let report = verify_iso(&alg, &qb, &center).map_err(|e| fail("verify-iso", e))?;
    println!(
        "PASS verify-iso ({} generators killed, {} multiplicative pairs)",
        report.generators_killed, report.multiplicative_pairs
    );

    // Associator cocycle and twist (guarded: the nerve grows fast).
    if n <= 3 {
        let q = Quasi::new(&alg).map_err(|e| fail("associator", e))?;
        let ids = q.verify_cocycle().map_err(|e| fail("cocycle", e))?;
        println!("PASS cocycle identity ({ids} instances)");
        let tw = solve_twist(&q).map_err(|e| fail("twist", e))?;
        let nerve = verify_twist(&q, &tw).map_err(|e| fail("twist", e))?;
        let assoc = check_twisted_associativity(&arena, &alg, &tw, seed)?;
        println!("PASS twist (dtau = psi on {nerve} nerve triples, associativity on {assoc} triples)");
        if n == 2 {
            let paper = paper_twist_n2();
            verify_twist(&q, &paper).map_err(|e| fail("paper-twist", e))?;
            let oz = twisted_center(&alg, &paper, true);
            if oz.graded_rank().to_poly_string() != "1 + 2q^2 + 2q^4" {
                return Err(fail("twisted-center", oz.graded_rank().to_poly_string()));
            }
            let z_tau = twisted_center(&alg, &paper, false);
            if z_tau.rank_in_degree(2) != 0 {
                return Err(fail("twisted-center", "degree-2 part of Z(OH^2_tau) is nonzero"));
            }
            println!("PASS twisted centers (OZ = 1 + 2q^2 + 2q^4, deg-2 of Z = 0)");
            classify_cmd()?;
        }
    }
    println!("verify-all n={n}: all checks passed");
    Ok(())
}
