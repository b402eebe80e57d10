//! Breadth-first exhaustive generation of move graphs.
//!
//! Nodes are canonical signatures; the seed has index 0 and every other node
//! gets the next index at discovery. Expansion proceeds level by level:
//! parents in index order, children in enumeration order, so node indices are
//! reproducible. Workers expand a level in parallel but children are
//! committed through a single in-order merge, which keeps the indexing
//! identical to a sequential run. Nodes at the depth bound are not expanded,
//! so edges with both endpoints on the final level are not discovered; this
//! matches generating to that bound directly.

use crate::isosig::{decode, encode, IsoSig, ParseError};
use crate::moves::{neighbors, MoveSet};
use crate::skeleton::vertex_count;
use rayon::prelude::*;
use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicUsize, Ordering};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMeta {
    pub seed: IsoSig,
    pub kinds: MoveSet,
    pub depth: u16,
}

/// An undirected graph over canonical signatures with insertion-order node
/// indices and per-node depth and size attributes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PachnerGraph {
    pub meta: GraphMeta,
    nodes: Vec<IsoSig>,
    tet_counts: Vec<u16>,
    vertex_counts: Vec<u16>,
    depths: Vec<u16>,
    /// Normalised `(u, v)` with `u < v`, sorted.
    edges: Vec<(u32, u32)>,
}

#[derive(Error, Debug)]
pub enum GenerateError {
    #[error("seed signature does not parse: {0}")]
    BadSeed(#[from] ParseError),
    #[error("node budget exceeded while expanding depth {completed_depth}; partial graph kept")]
    Budget {
        completed_depth: u16,
        partial: Box<PachnerGraph>,
    },
}

/// A shared node budget for one generation run or a whole batch.
pub struct Budget {
    used: AtomicUsize,
    cap: usize,
}

impl Budget {
    pub fn new(cap: usize) -> Budget {
        Budget {
            used: AtomicUsize::new(0),
            cap,
        }
    }

    fn try_take(&self, n: usize) -> bool {
        let prev = self.used.fetch_add(n, Ordering::Relaxed);
        if prev + n > self.cap {
            self.used.fetch_sub(n, Ordering::Relaxed);
            false
        } else {
            true
        }
    }

    fn give_back(&self, n: usize) {
        self.used.fetch_sub(n, Ordering::Relaxed);
    }
}

/// Generates the graph reachable from `seed` in at most `depth` moves.
///
/// On budget breach the error carries the graph truncated to the last fully
/// completed depth.
pub fn generate(
    seed: &str,
    kinds: MoveSet,
    depth: u16,
    budget: &Budget,
) -> Result<PachnerGraph, GenerateError> {
    let tri = decode(seed)?;
    let sig = encode(&tri).expect("decoded signatures are connected");

    let mut nodes = vec![sig.clone()];
    let mut tet_counts = vec![tri.tet_count() as u16];
    let mut vertex_counts = vec![vertex_count(&tri) as u16];
    let mut depths = vec![0u16];
    let mut index: HashMap<IsoSig, u32> = HashMap::new();
    index.insert(sig.clone(), 0);
    let mut edge_set: HashSet<(u32, u32)> = HashSet::new();

    if !budget.try_take(1) {
        return Err(GenerateError::Budget {
            completed_depth: 0,
            partial: Box::new(PachnerGraph {
                meta: GraphMeta {
                    seed: sig,
                    kinds,
                    depth: 0,
                },
                nodes: Vec::new(),
                tet_counts: Vec::new(),
                vertex_counts: Vec::new(),
                depths: Vec::new(),
                edges: Vec::new(),
            }),
        });
    }

    // Expanding a level in bounded chunks keeps the buffered children (and
    // so peak memory) proportional to the chunk, not the frontier.
    const EXPANSION_CHUNK: usize = 16 * 1024;

    let mut frontier: Vec<u32> = vec![0];
    let mut level = 0u16;
    while level < depth && !frontier.is_empty() {
        let node_mark = nodes.len();
        let mut next_frontier: Vec<u32> = Vec::new();
        let mut new_nodes = 0usize;
        let mut fits = true;

        'level: for chunk in frontier.chunks(EXPANSION_CHUNK) {
            // Parallel expansion; collect preserves parent order. The index
            // is frozen while workers run, so reads need no locks. Children
            // carry the parent's vertex count adjusted by the move's fixed
            // delta.
            let expansions: Vec<Vec<(IsoSig, u16, u16)>> = chunk
                .par_iter()
                .map(|&p| {
                    let tri =
                        decode(nodes[p as usize].as_str()).expect("stored signatures decode");
                    let parent_verts = vertex_counts[p as usize] as i32;
                    neighbors(&tri, kinds)
                        .into_iter()
                        .map(|(h, child)| {
                            let sig = encode(&child).expect("children stay connected");
                            let tets = child.tet_count() as u16;
                            let verts = (parent_verts + h.kind.vertex_delta()) as u16;
                            (sig, tets, verts)
                        })
                        .collect()
                })
                .collect();

            for (parent, children) in chunk.iter().zip(&expansions) {
                for (sig, tets, verts) in children {
                    let id = match index.get(sig) {
                        Some(&id) => id,
                        None => {
                            if !budget.try_take(1) {
                                fits = false;
                                break 'level;
                            }
                            new_nodes += 1;
                            let id = nodes.len() as u32;
                            nodes.push(sig.clone());
                            tet_counts.push(*tets);
                            vertex_counts.push(*verts);
                            depths.push(level + 1);
                            index.insert(sig.clone(), id);
                            next_frontier.push(id);
                            id
                        }
                    };
                    let (a, b) = if *parent < id { (*parent, id) } else { (id, *parent) };
                    edge_set.insert((a, b));
                }
            }
        }

        if !fits {
            // Roll back the partial level: the kept graph is exactly the
            // one generated to the completed depth.
            for sig in nodes.drain(node_mark..) {
                index.remove(&sig);
            }
            tet_counts.truncate(node_mark);
            vertex_counts.truncate(node_mark);
            depths.truncate(node_mark);
            budget.give_back(new_nodes);
            edge_set.retain(|(a, b)| (*a as usize) < node_mark && (*b as usize) < node_mark);
            let mut edges: Vec<(u32, u32)> = edge_set.into_iter().collect();
            edges.sort_unstable();
            // Edges discovered during the aborted level are not part of the
            // completed-depth graph.
            edges.retain(|(a, b)| {
                (depths[*a as usize].min(depths[*b as usize])) < level
            });
            return Err(GenerateError::Budget {
                completed_depth: level,
                partial: Box::new(PachnerGraph {
                    meta: GraphMeta {
                        seed: sig,
                        kinds,
                        depth: level,
                    },
                    nodes,
                    tet_counts,
                    vertex_counts,
                    depths,
                    edges,
                }),
            });
        }

        frontier = next_frontier;
        level += 1;
    }

    let mut edges: Vec<(u32, u32)> = edge_set.into_iter().collect();
    edges.sort_unstable();
    Ok(PachnerGraph {
        meta: GraphMeta {
            seed: sig,
            kinds,
            depth,
        },
        nodes,
        tet_counts,
        vertex_counts,
        depths,
        edges,
    })
}

impl PachnerGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node(&self, i: usize) -> &IsoSig {
        &self.nodes[i]
    }

    pub fn nodes(&self) -> &[IsoSig] {
        &self.nodes
    }

    pub fn tet_count(&self, i: usize) -> u16 {
        self.tet_counts[i]
    }

    pub fn tet_counts(&self) -> &[u16] {
        &self.tet_counts
    }

    pub fn vertex_count(&self, i: usize) -> u16 {
        self.vertex_counts[i]
    }

    pub fn depth(&self, i: usize) -> u16 {
        self.depths[i]
    }

    pub fn depths(&self) -> &[u16] {
        &self.depths
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Sorted adjacency lists.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Node counts per depth and the density of each depth truncation.
    ///
    /// The truncation at depth `d` is the graph `generate` would have
    /// produced with bound `d`: its edges are those discovered while
    /// expanding levels below `d`.
    pub fn growth_profile(&self) -> GrowthProfile {
        let max_depth = self.meta.depth as usize;
        let mut per_depth = vec![0usize; max_depth + 1];
        for &d in &self.depths {
            per_depth[d as usize] += 1;
        }
        let mut cumulative = Vec::with_capacity(max_depth + 1);
        let mut acc = 0usize;
        for &c in &per_depth {
            acc += c;
            cumulative.push(acc);
        }
        let mut edge_by_min_depth = vec![0usize; max_depth + 1];
        for &(u, v) in &self.edges {
            let d = self.depths[u as usize].min(self.depths[v as usize]) as usize;
            edge_by_min_depth[d] += 1;
        }
        let mut densities = Vec::with_capacity(max_depth + 1);
        let mut edges_so_far = 0usize;
        for d in 0..=max_depth {
            if d > 0 {
                edges_so_far += edge_by_min_depth[d - 1];
            }
            let n = cumulative[d];
            let pairs = n * n.saturating_sub(1) / 2;
            densities.push(if pairs == 0 {
                0.0
            } else {
                edges_so_far as f64 / pairs as f64
            });
        }
        GrowthProfile {
            nodes_per_depth: per_depth,
            cumulative_nodes: cumulative,
            densities,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthProfile {
    pub nodes_per_depth: Vec<usize>,
    pub cumulative_nodes: Vec<usize>,
    pub densities: Vec<f64>,
}

/// Outcome of one seed in a batch run.
#[derive(Debug)]
pub struct SeedRecord<T> {
    pub seed: String,
    pub result: Result<T, GenerateError>,
}

/// Generates one graph per seed under a shared budget, mapping each finished
/// graph through `summarise` before dropping it. Seeds run in parallel;
/// output order matches input order. Per-seed failures are recorded and the
/// batch continues.
pub fn batch_generate<T: Send>(
    seeds: &[String],
    kinds: MoveSet,
    depth: u16,
    budget: &Budget,
    summarise: impl Fn(&PachnerGraph) -> T + Sync,
) -> Vec<SeedRecord<T>> {
    seeds
        .par_iter()
        .map(|seed| {
            let result = generate(seed, kinds, depth, budget).map(|g| {
                let t = summarise(&g);
                budget.give_back(g.node_count());
                t
            });
            if let Err(GenerateError::Budget { partial, .. }) = &result {
                budget.give_back(partial.node_count());
            }
            SeedRecord {
                seed: seed.clone(),
                result,
            }
        })
        .collect()
}

#[derive(Error, Debug)]
pub enum GraphFileError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("node {0} repeats an earlier signature")]
    DuplicateNode(usize),
}

/// Serialises a graph: a header line, one line per node, an `edges`
/// sentinel, then one line per edge.
pub fn export(g: &PachnerGraph, mut w: impl std::io::Write) -> std::io::Result<()> {
    writeln!(
        w,
        "pachner v1 {} {} {}",
        g.meta.seed, g.meta.kinds, g.meta.depth
    )?;
    for i in 0..g.node_count() {
        writeln!(w, "{} {} {} {}", i, g.nodes[i], g.tet_counts[i], g.depths[i])?;
    }
    writeln!(w, "edges")?;
    for &(u, v) in &g.edges {
        writeln!(w, "{} {}", u, v)?;
    }
    Ok(())
}

/// Reads a graph file written by [`export`]. Node vertex counts are
/// recomputed from the signatures.
pub fn import(r: impl std::io::BufRead) -> Result<PachnerGraph, GraphFileError> {
    let mut meta: Option<GraphMeta> = None;
    let mut nodes: Vec<IsoSig> = Vec::new();
    let mut tet_counts: Vec<u16> = Vec::new();
    let mut depths: Vec<u16> = Vec::new();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut seen: HashSet<IsoSig> = HashSet::new();
    let mut in_edges = false;

    let malformed = |line: usize, message: &str| GraphFileError::Malformed {
        line,
        message: message.to_owned(),
    };

    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        let n = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if meta.is_none() {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 5 || parts[0] != "pachner" || parts[1] != "v1" {
                return Err(malformed(n, "expected header `pachner v1 <seed> <kinds> <depth>`"));
            }
            let seed = IsoSig::parse(parts[2])
                .map_err(|e| malformed(n, &format!("bad seed: {e}")))?;
            let kinds = MoveSet::parse(parts[3])
                .ok_or_else(|| malformed(n, "bad move kinds"))?;
            let depth: u16 = parts[4]
                .parse()
                .map_err(|_| malformed(n, "bad depth"))?;
            meta = Some(GraphMeta { seed, kinds, depth });
            continue;
        }
        if line == "edges" {
            in_edges = true;
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if in_edges {
            if parts.len() != 2 {
                return Err(malformed(n, "expected `<u> <v>`"));
            }
            let u: u32 = parts[0].parse().map_err(|_| malformed(n, "bad index"))?;
            let v: u32 = parts[1].parse().map_err(|_| malformed(n, "bad index"))?;
            if u >= v {
                return Err(malformed(n, "edges must satisfy u < v"));
            }
            if v as usize >= nodes.len() {
                return Err(malformed(n, "edge endpoint out of range"));
            }
            edges.push((u, v));
        } else {
            if parts.len() != 4 {
                return Err(malformed(n, "expected `<index> <isosig> <tetCount> <depth>`"));
            }
            let idx: usize = parts[0].parse().map_err(|_| malformed(n, "bad index"))?;
            if idx != nodes.len() {
                return Err(malformed(n, "node indices must be sequential"));
            }
            let sig = IsoSig::parse(parts[1])
                .map_err(|e| malformed(n, &format!("bad signature: {e}")))?;
            if !seen.insert(sig.clone()) {
                return Err(GraphFileError::DuplicateNode(n));
            }
            let tets: u16 = parts[2].parse().map_err(|_| malformed(n, "bad tet count"))?;
            let depth: u16 = parts[3].parse().map_err(|_| malformed(n, "bad depth"))?;
            nodes.push(sig);
            tet_counts.push(tets);
            depths.push(depth);
        }
    }

    let meta = meta.ok_or_else(|| malformed(0, "missing header"))?;
    let vertex_counts: Vec<u16> = nodes
        .iter()
        .map(|s| {
            decode(s.as_str())
                .map(|t| vertex_count(&t) as u16)
                .map_err(|e| GraphFileError::Malformed {
                    line: 0,
                    message: format!("signature {s} does not decode: {e}"),
                })
        })
        .collect::<Result<_, _>>()?;
    edges.sort_unstable();
    edges.dedup();
    Ok(PachnerGraph {
        meta,
        nodes,
        tet_counts,
        vertex_counts,
        depths,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeds;

    fn big_budget() -> Budget {
        Budget::new(10_000_000)
    }

    #[test]
    fn depth_zero_is_a_single_node() {
        let b = big_budget();
        let g = generate(seeds::S3, MoveSet::EXCHANGE, 0, &b).unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.depth(0), 0);
        assert_eq!(g.node(0).as_str(), seeds::S3);
        assert_eq!(g.growth_profile().nodes_per_depth, vec![1]);
    }

    #[test]
    fn bad_seed_is_reported() {
        let b = big_budget();
        assert!(matches!(
            generate("!!", MoveSet::EXCHANGE, 1, &b),
            Err(GenerateError::BadSeed(_))
        ));
    }

    #[test]
    fn generation_is_deterministic() {
        let b1 = big_budget();
        let g1 = generate(seeds::S3, MoveSet::EXCHANGE, 3, &b1).unwrap();
        let b2 = big_budget();
        let g2 = generate(seeds::S3, MoveSet::EXCHANGE, 3, &b2).unwrap();
        assert_eq!(g1, g2);
    }

    #[test]
    fn depths_are_bfs_distances() {
        let b = big_budget();
        let g = generate(seeds::S3, MoveSet::EXCHANGE, 3, &b).unwrap();
        // Every edge connects depths differing by at most one, and every
        // non-seed node has a neighbour one level shallower.
        let adj = g.adjacency();
        for &(u, v) in g.edges() {
            let du = g.depth(u as usize) as i32;
            let dv = g.depth(v as usize) as i32;
            assert!((du - dv).abs() <= 1);
        }
        for i in 1..g.node_count() {
            let d = g.depth(i);
            assert!(adj[i].iter().any(|&n| g.depth(n as usize) + 1 == d));
        }
    }

    #[test]
    fn budget_truncates_to_completed_depth() {
        let unlimited = big_budget();
        let full = generate(seeds::S3, MoveSet::EXCHANGE, 2, &unlimited).unwrap();
        let depth1 = generate(seeds::S3, MoveSet::EXCHANGE, 1, &big_budget()).unwrap();
        // A cap between the depth-1 and depth-2 sizes must truncate to the
        // depth-1 graph exactly.
        let cap = Budget::new(full.node_count() - 1);
        match generate(seeds::S3, MoveSet::EXCHANGE, 2, &cap) {
            Err(GenerateError::Budget {
                completed_depth,
                partial,
            }) => {
                assert_eq!(completed_depth, 1);
                assert_eq!(partial.node_count(), depth1.node_count());
                assert_eq!(partial.edges(), depth1.edges());
                assert_eq!(partial.meta.depth, 1);
            }
            other => panic!("expected budget error, got {:?}", other.map(|g| g.node_count())),
        }
    }

    #[test]
    fn export_import_round_trip() {
        let b = big_budget();
        let g = generate(seeds::S3, MoveSet::EXCHANGE, 3, &b).unwrap();
        let mut buf = Vec::new();
        export(&g, &mut buf).unwrap();
        let back = import(std::io::Cursor::new(&buf)).unwrap();
        assert_eq!(back, g);
        // Node 0 line carries the seed signature.
        let text = String::from_utf8(buf).unwrap();
        let node0 = text.lines().nth(1).unwrap();
        assert!(node0.starts_with(&format!("0 {}", seeds::S3)));
    }

    #[test]
    fn import_rejects_duplicate_nodes() {
        let text = "pachner v1 cMcabbgqs 23,32 1\n0 cMcabbgqs 2 0\n1 cMcabbgqs 2 1\nedges\n";
        assert!(matches!(
            import(std::io::Cursor::new(text)),
            Err(GraphFileError::DuplicateNode(_))
        ));
    }

    #[test]
    fn batch_reports_in_input_order() {
        let seeds: Vec<String> = seeds::CLOSED
            .iter()
            .map(|(_, s)| s.to_string())
            .collect();
        let b = big_budget();
        let records = batch_generate(&seeds, MoveSet::EXCHANGE, 2, &b, |g| g.node_count());
        assert_eq!(records.len(), seeds.len());
        for (r, s) in records.iter().zip(&seeds) {
            assert_eq!(&r.seed, s);
            assert!(r.result.is_ok());
        }
    }

    #[test]
    fn empty_batch_is_empty() {
        let b = big_budget();
        let records = batch_generate(&[], MoveSet::EXCHANGE, 2, &b, |g| g.node_count());
        assert!(records.is_empty());
    }

    #[test]
    fn mixed_move_sets_track_vertex_counts() {
        let b = big_budget();
        let g = generate(seeds::S3, MoveSet::ALL, 1, &b).unwrap();
        // 1-4 children gain a vertex, 2-3 children keep the single vertex.
        assert!(
            (0..g.node_count()).any(|i| g.vertex_count(i) == 2),
            "a cone move child should have two vertices"
        );
        assert!((0..g.node_count()).any(|i| g.vertex_count(i) == 1));
    }
}
