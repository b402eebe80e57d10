//! Move semantics: applicability counts against brute-force scans of the
//! gluing table, inverse pairs through the canonical codec, and validity
//! sweeps over the seed catalog.

use trisig::isosig::{decode, encode};
use trisig::moves::{apply_move, enumerate_moves, neighbors, MoveHandle, MoveKind, MoveLocus, MoveSet};
use trisig::skeleton::{compute_skeleton, vertex_count};
use trisig::tri::{FaceRef, Triangulation};

fn only(kind: MoveKind) -> MoveSet {
    MoveSet::empty().with(kind)
}

/// Brute-force oracle for 2-3 loci: scan all 4N faces of the gluing table
/// and count internal faces whose two sides are distinct tetrahedra.
fn brute_force_23_count(tri: &Triangulation) -> usize {
    let mut count = 0;
    for t in 0..tri.tet_count() as u32 {
        for f in 0..4u8 {
            let face = FaceRef::new(t, f);
            if let Some(g) = tri.gluing(face) {
                if g.dest_tet != t && face < g.dest_face(f) {
                    count += 1;
                }
            }
        }
    }
    count
}

#[test]
fn m23_handles_match_face_scan() {
    // The minimal sphere seed has one self-gluing in each tetrahedron and
    // two faces joining the distinct pair, so the scan finds 2 loci.
    let tri = decode("cMcabbgqs").unwrap();
    assert_eq!(brute_force_23_count(&tri), 2);
    let handles = enumerate_moves(&tri, only(MoveKind::M23));
    assert_eq!(handles.len(), brute_force_23_count(&tri));

    for (_, seed) in trisig::seeds::CLOSED {
        let tri = decode(seed).unwrap();
        assert_eq!(
            enumerate_moves(&tri, only(MoveKind::M23)).len(),
            brute_force_23_count(&tri),
            "{seed}"
        );
    }
}

#[test]
fn m14_handles_one_per_tetrahedron() {
    for (_, seed) in trisig::seeds::CLOSED {
        let tri = decode(seed).unwrap();
        let handles = enumerate_moves(&tri, only(MoveKind::M14));
        assert_eq!(handles.len(), tri.tet_count());
    }
}

#[test]
fn lone_tetrahedron_has_no_32_moves() {
    let tri = Triangulation::new(1, vec![None; 4]).unwrap();
    assert!(enumerate_moves(&tri, only(MoveKind::M32)).is_empty());
    assert!(enumerate_moves(&tri, only(MoveKind::M41)).is_empty());
}

#[test]
fn enumeration_order_is_kind_then_locus() {
    let tri = decode("cMcabbgqs").unwrap();
    let handles = enumerate_moves(&tri, MoveSet::ALL);
    let kind_rank = |k: MoveKind| MoveKind::ALL.iter().position(|x| *x == k).unwrap();
    for w in handles.windows(2) {
        assert!(kind_rank(w[0].kind) <= kind_rank(w[1].kind));
    }
}

#[test]
fn m23_changes_counts_and_stays_valid() {
    let tri = decode("cMcabbgqs").unwrap();
    for h in enumerate_moves(&tri, only(MoveKind::M23)) {
        let out = apply_move(&tri, &h).unwrap();
        assert_eq!(out.validate(), Ok(()));
        assert_eq!(out.tet_count(), 3);
        assert_eq!(vertex_count(&out), 1);
    }
}

#[test]
fn m23_then_inverse_restores_signature() {
    for (_, seed) in trisig::seeds::CLOSED {
        let tri = decode(seed).unwrap();
        let sig = encode(&tri).unwrap();
        for h in enumerate_moves(&tri, only(MoveKind::M23)) {
            let up = apply_move(&tri, &h).unwrap();
            // Some 3-2 move on the result must return to the original.
            let mut restored = false;
            for h2 in enumerate_moves(&up, only(MoveKind::M32)) {
                let down = apply_move(&up, &h2).unwrap();
                assert_eq!(down.validate(), Ok(()));
                if encode(&down).unwrap() == sig {
                    restored = true;
                }
            }
            assert!(restored, "no 3-2 inverse found for {seed}");
        }
    }
}

#[test]
fn m14_then_inverse_restores_signature() {
    for (_, seed) in trisig::seeds::CLOSED {
        let tri = decode(seed).unwrap();
        let sig = encode(&tri).unwrap();
        let before = vertex_count(&tri);
        for h in enumerate_moves(&tri, only(MoveKind::M14)) {
            let up = apply_move(&tri, &h).unwrap();
            assert_eq!(up.validate(), Ok(()));
            assert_eq!(up.tet_count(), tri.tet_count() + 3);
            assert_eq!(vertex_count(&up), before + 1);
            let mut restored = false;
            for h2 in enumerate_moves(&up, only(MoveKind::M41)) {
                let down = apply_move(&up, &h2).unwrap();
                assert_eq!(down.validate(), Ok(()));
                if encode(&down).unwrap() == sig {
                    restored = true;
                }
            }
            assert!(restored, "no 4-1 inverse found for {seed}");
        }
    }
}

#[test]
fn m14_on_lone_tetrahedron_adds_a_vertex() {
    let tri = Triangulation::new(1, vec![None; 4]).unwrap();
    let h = MoveHandle {
        kind: MoveKind::M14,
        locus: MoveLocus::Tet(0),
    };
    let out = apply_move(&tri, &h).unwrap();
    assert_eq!(out.validate(), Ok(()));
    assert_eq!(out.tet_count(), 4);
    // 4 original corners plus the barycentre.
    assert_eq!(vertex_count(&out), vertex_count(&tri) + 1);
}

#[test]
fn inapplicable_handles_error() {
    let tri = decode("cMcabbgqs").unwrap();
    // Face (0,0) is a self-gluing, so no 2-3 move applies there.
    let h = MoveHandle {
        kind: MoveKind::M23,
        locus: MoveLocus::Face(FaceRef::new(0, 0)),
    };
    assert!(apply_move(&tri, &h).is_err());
    let h = MoveHandle {
        kind: MoveKind::M14,
        locus: MoveLocus::Tet(99),
    };
    assert!(apply_move(&tri, &h).is_err());
    let h = MoveHandle {
        kind: MoveKind::M23,
        locus: MoveLocus::Tet(0),
    };
    assert!(apply_move(&tri, &h).is_err());
}

/// Exhaustive depth-2 sweep over every seed: every enumerated handle of
/// every reachable triangulation applies cleanly and preserves the move
/// deltas and 1-vertex invariant.
#[test]
fn depth_two_sweep_stays_valid() {
    for (_, seed) in trisig::seeds::CLOSED {
        let tri = decode(seed).unwrap();
        let v0 = vertex_count(&tri);
        let mut frontier = vec![tri];
        for _ in 0..2 {
            let mut next = Vec::new();
            for t in &frontier {
                for (h, child) in neighbors(t, MoveSet::EXCHANGE) {
                    assert_eq!(child.validate(), Ok(()), "{seed}");
                    assert_eq!(
                        child.tet_count() as i32 - t.tet_count() as i32,
                        h.kind.tet_delta()
                    );
                    assert_eq!(vertex_count(&child), v0, "2-3/3-2 keep vertices");
                    next.push(child);
                }
            }
            frontier = next;
        }
    }
}

#[test]
fn degree_three_edges_with_repeated_tetrahedra_are_rejected() {
    // Every edge orbit of degree 3 listed by the skeleton either yields an
    // applicable handle (three distinct tetrahedra) or is skipped; check the
    // enumeration agrees with a direct scan.
    for (_, seed) in trisig::seeds::CLOSED {
        let tri = decode(seed).unwrap();
        let skel = compute_skeleton(&tri);
        let handles = enumerate_moves(&tri, only(MoveKind::M32));
        for h in &handles {
            let MoveLocus::EdgeOrbit(orbit) = h.locus else {
                panic!("3-2 locus must be an edge orbit");
            };
            let slots = skel.edge_orbit_slots(orbit).unwrap();
            assert_eq!(slots.len(), 3);
            assert!(slots[0].0 != slots[1].0 && slots[1].0 != slots[2].0 && slots[0].0 != slots[2].0);
        }
    }
}
