use trisig::dataset::length_histogram;
use trisig::graph::{generate, Budget};
use trisig::moves::MoveSet;
use trisig::seeds;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let depth: u16 = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(6);
    for (name, seed) in [
        ("S3", seeds::S3),
        ("T3", seeds::T3),
        ("L(7,1)", seeds::L71),
        ("L(7,2)", seeds::L72),
    ] {
        let budget = Budget::new(8_000_000);
        let t = std::time::Instant::now();
        match generate(seed, MoveSet::EXCHANGE, depth, &budget) {
            Ok(g) => {
                let hist = length_histogram(&g);
                let l30 = hist.get(&30).copied().unwrap_or(0);
                println!(
                    "{name} depth {depth}: nodes {} edges {} len30 {} ({:?})",
                    g.node_count(),
                    g.edge_count(),
                    l30,
                    t.elapsed()
                );
            }
            Err(e) => println!("{name} depth {depth}: {e}"),
        }
    }
}
