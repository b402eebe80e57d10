//! The isomorphism-signature codec.
//!
//! A signature encodes, in order: the tetrahedron count, the type sequence
//! (three two-bit values per character), the destination characters for
//! type-2 entries, and the permutation characters for type-2 entries.
//! Encoding walks every canonical labelling (each start tetrahedron with each
//! of the 24 vertex labellings) and keeps the ASCII-lexicographically
//! smallest string; decoding replays the face scan.

use crate::perm::{Perm4, S4};
use crate::tri::{FaceRef, Gluing, Triangulation};
use thiserror::Error;

/// The 64-character alphabet in value order.
pub const ALPHABET: &[u8; 64] =
    b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789+-";

/// Value -> character. Panics if `n > 63`.
pub fn alphabet_encode(n: u8) -> char {
    ALPHABET[n as usize] as char
}

/// Character -> value, `None` for characters outside the alphabet.
pub fn alphabet_decode(c: char) -> Option<u8> {
    match c {
        'a'..='z' => Some(c as u8 - b'a'),
        'A'..='Z' => Some(c as u8 - b'A' + 26),
        '0'..='9' => Some(c as u8 - b'0' + 52),
        '+' => Some(62),
        '-' => Some(63),
        _ => None,
    }
}

/// A canonical signature string. Values produced by [`encode`] are canonical:
/// decoding and re-encoding reproduces the exact same text.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsoSig {
    text: String,
}

impl IsoSig {
    /// Wraps a string after checking every character is in the alphabet.
    /// Canonicity is not checked here; use `encode(&decode(s)?)` for that.
    pub fn parse(text: &str) -> Result<IsoSig, ParseError> {
        if text.is_empty() {
            return Err(ParseError::Empty);
        }
        for (pos, ch) in text.chars().enumerate() {
            if alphabet_decode(ch).is_none() {
                return Err(ParseError::BadChar { ch, pos });
            }
        }
        Ok(IsoSig {
            text: text.to_owned(),
        })
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }
}

impl std::fmt::Display for IsoSig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.text)
    }
}

impl std::fmt::Debug for IsoSig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.text)
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("empty signature")]
    Empty,
    #[error("invalid character {ch:?} at position {pos}")]
    BadChar { ch: char, pos: usize },
    #[error("signature truncated at position {pos}")]
    Truncated { pos: usize },
    #[error("signature declares zero tetrahedra")]
    ZeroTetrahedra,
    #[error("declared tetrahedron count is implausible for the input length")]
    SizeTooLarge,
    #[error("invalid type value at position {pos}")]
    BadType { pos: usize },
    #[error("type sequence covers more faces than exist (position {pos})")]
    TypeOverrun { pos: usize },
    #[error("nonzero padding in type sequence at position {pos}")]
    BadPadding { pos: usize },
    #[error("destination tetrahedron out of range at position {pos}")]
    BadDest { pos: usize },
    #[error("permutation index out of range at position {pos}")]
    BadPerm { pos: usize },
    #[error("face glued to itself (permutation at position {pos})")]
    SelfGluing { pos: usize },
    #[error("conflicting gluings at position {pos}")]
    Conflict { pos: usize },
    #[error("tetrahedron {tet} is never attached")]
    Unattached { tet: usize },
    #[error("trailing characters at position {pos}")]
    Trailing { pos: usize },
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("triangulation is disconnected; the canonical scan cannot reach every tetrahedron")]
    Disconnected,
    #[error("triangulation is empty")]
    Empty,
}

/// Number of characters used for each encoded integer, given the
/// tetrahedron count.
fn int_width(n: usize) -> usize {
    if n < 63 {
        1
    } else {
        let mut d = 0;
        let mut v = n;
        while v > 0 {
            d += 1;
            v /= 64;
        }
        d
    }
}

fn push_prefix(out: &mut Vec<u8>, n: usize) {
    if n < 63 {
        out.push(ALPHABET[n]);
    } else {
        let d = int_width(n);
        out.push(ALPHABET[63]);
        out.push(ALPHABET[d]);
        let mut v = n;
        for _ in 0..d {
            out.push(ALPHABET[v % 64]);
            v /= 64;
        }
    }
}

/// Emits candidate bytes while comparing against the best candidate so far.
/// `push` reports false as soon as the candidate is strictly worse.
struct Candidate<'a> {
    buf: Vec<u8>,
    best: Option<&'a [u8]>,
    /// Still byte-for-byte equal to `best`.
    tied: bool,
}

impl<'a> Candidate<'a> {
    fn new(capacity: usize, best: Option<&'a [u8]>) -> Candidate<'a> {
        Candidate {
            buf: Vec::with_capacity(capacity),
            best,
            tied: best.is_some(),
        }
    }

    #[inline]
    fn push(&mut self, byte: u8) -> bool {
        if self.tied {
            let b = self.best.unwrap()[self.buf.len()];
            if byte > b {
                return false;
            }
            if byte < b {
                self.tied = false;
            }
        }
        self.buf.push(byte);
        true
    }
}

/// The canonical-labelling scan for one start choice. `vmap0` maps the new
/// vertex labels of the start tetrahedron to its original labels. Returns the
/// encoded bytes, or `None` when pruned against `best`.
fn scan_labelling(
    tri: &Triangulation,
    start: u32,
    vmap0: Perm4,
    best: Option<&[u8]>,
) -> Option<Vec<u8>> {
    let n = tri.tet_count();
    let width = int_width(n);

    let mut cand = Candidate::new(2 + 4 * n, best);
    // The size prefix is identical for every candidate; pushing it straight
    // into the buffer keeps positions aligned with `best` for comparison.
    push_prefix(&mut cand.buf, n);

    // tets[k] = original index of new tetrahedron k; vmap[k] maps new vertex
    // labels of k to original labels.
    let mut tets: Vec<u32> = Vec::with_capacity(n);
    let mut vmaps: Vec<Perm4> = Vec::with_capacity(n);
    let mut image: Vec<u32> = vec![u32::MAX; n];
    tets.push(start);
    vmaps.push(vmap0);
    image[start as usize] = 0;

    let mut done = vec![false; 4 * n];
    let mut dests: Vec<u32> = Vec::new();
    let mut perms: Vec<u8> = Vec::new();

    // Type values are packed three per character, low bits first.
    let mut acc: u8 = 0;
    let mut acc_len: u8 = 0;
    macro_rules! push_type {
        ($cand:expr, $t:expr) => {{
            acc |= $t << (2 * acc_len);
            acc_len += 1;
            if acc_len == 3 {
                if !$cand.push(ALPHABET[acc as usize]) {
                    return None;
                }
                acc = 0;
                acc_len = 0;
            }
        }};
    }

    let mut k = 0usize;
    while k < tets.len() {
        let t = tets[k];
        let vmap = vmaps[k];
        for f in 0..4u8 {
            if done[k * 4 + f as usize] {
                continue;
            }
            done[k * 4 + f as usize] = true;
            let orig_face = vmap.apply(f);
            match tri.gluing(FaceRef::new(t, orig_face)) {
                None => push_type!(cand, 0),
                Some(g) => {
                    let u = g.dest_tet as usize;
                    if image[u] == u32::MAX {
                        // First sight: the new tetrahedron inherits labels so
                        // that the gluing becomes the identity.
                        let m = tets.len();
                        image[u] = m as u32;
                        tets.push(g.dest_tet);
                        vmaps.push(g.perm.compose(&vmap));
                        done[m * 4 + f as usize] = true;
                        push_type!(cand, 1);
                    } else {
                        let j = image[u];
                        let rho = vmaps[j as usize]
                            .inverse()
                            .compose(&g.perm.compose(&vmap));
                        done[j as usize * 4 + rho.apply(f) as usize] = true;
                        dests.push(j);
                        perms.push(rho.index());
                        push_type!(cand, 2);
                    }
                }
            }
        }
        k += 1;
    }

    if tets.len() != n {
        // Unreachable tetrahedra; callers treat any candidate failing this
        // way as a disconnected input.
        return None;
    }
    if acc_len > 0 {
        if !cand.push(ALPHABET[acc as usize]) {
            return None;
        }
    }
    for &d in &dests {
        let mut v = d as usize;
        for _ in 0..width {
            if !cand.push(ALPHABET[v % 64]) {
                return None;
            }
            v /= 64;
        }
    }
    for &p in &perms {
        if !cand.push(ALPHABET[p as usize]) {
            return None;
        }
    }
    Some(cand.buf)
}

/// Encodes the canonical labelling determined by one start tetrahedron and
/// start vertex labelling, without minimising over the other choices.
/// `start_perm` maps the new vertex labels of the start tetrahedron to its
/// current labels.
pub fn encode_labelling(
    tri: &Triangulation,
    start: u32,
    start_perm: Perm4,
) -> Result<String, EncodeError> {
    if tri.tet_count() == 0 {
        return Err(EncodeError::Empty);
    }
    match scan_labelling(tri, start, start_perm, None) {
        Some(bytes) => Ok(String::from_utf8(bytes).unwrap()),
        None => Err(EncodeError::Disconnected),
    }
}

/// Encodes a triangulation as its isomorphism signature: the smallest
/// encoding over every start tetrahedron and start labelling, compared in
/// raw ASCII byte order.
pub fn encode(tri: &Triangulation) -> Result<IsoSig, EncodeError> {
    let n = tri.tet_count();
    if n == 0 {
        return Err(EncodeError::Empty);
    }
    if !tri.is_connected() {
        return Err(EncodeError::Disconnected);
    }
    let mut best: Option<Vec<u8>> = None;
    for start in 0..n as u32 {
        for perm in &S4 {
            if let Some(bytes) = scan_labelling(tri, start, *perm, best.as_deref()) {
                debug_assert!(best.as_ref().map_or(true, |b| bytes <= *b));
                best = Some(bytes);
            }
        }
    }
    let bytes = best.expect("connected triangulation always yields a candidate");
    Ok(IsoSig {
        text: String::from_utf8(bytes).unwrap(),
    })
}

/// Entry state while rebuilding the gluing table.
#[derive(Clone, Copy, PartialEq)]
enum Slot {
    Open,
    Bound,
    Glued(Gluing),
}

/// Decodes a signature string into a triangulation.
pub fn decode(s: &str) -> Result<Triangulation, ParseError> {
    let bytes = s.as_bytes();
    let mut vals: Vec<u8> = Vec::with_capacity(bytes.len());
    for (pos, &b) in bytes.iter().enumerate() {
        match alphabet_decode(b as char) {
            Some(v) => vals.push(v),
            None => {
                return Err(ParseError::BadChar {
                    ch: b as char,
                    pos,
                })
            }
        }
    }
    if vals.is_empty() {
        return Err(ParseError::Empty);
    }

    // Size prefix.
    let mut pos = 0usize;
    let first = vals[pos];
    pos += 1;
    let (n, width) = if first < 63 {
        (first as usize, 1usize)
    } else {
        let d = *vals.get(pos).ok_or(ParseError::Truncated { pos })? as usize;
        pos += 1;
        if d == 0 {
            return Err(ParseError::SizeTooLarge);
        }
        let mut n: usize = 0;
        for i in 0..d {
            let v = *vals.get(pos).ok_or(ParseError::Truncated { pos })? as usize;
            pos += 1;
            // Each type character accounts for at most six faces, so any
            // plausible count is small compared to the input length; this
            // guard keeps the multiplication and the table allocation sane.
            if i >= 11 && v != 0 {
                return Err(ParseError::SizeTooLarge);
            }
            if i < 11 {
                n += v << (6 * i);
            }
        }
        (n, d)
    };
    if n == 0 {
        return Err(ParseError::ZeroTetrahedra);
    }
    if n > 6 * bytes.len() {
        return Err(ParseError::SizeTooLarge);
    }

    // Phase 1: unpack type values until they account for all 4N faces.
    // A boundary entry covers one face, a gluing entry covers two.
    let faces = 4 * n;
    let mut types: Vec<(u8, usize)> = Vec::new();
    let mut accounted = 0usize;
    while accounted < faces {
        let v = *vals.get(pos).ok_or(ParseError::Truncated { pos })?;
        let char_pos = pos;
        pos += 1;
        let mut rest = v;
        for _ in 0..3 {
            let t = rest & 3;
            rest >>= 2;
            if accounted == faces {
                if t != 0 {
                    return Err(ParseError::BadPadding { pos: char_pos });
                }
                continue;
            }
            if t == 3 {
                return Err(ParseError::BadType { pos: char_pos });
            }
            accounted += if t == 0 { 1 } else { 2 };
            if accounted > faces {
                return Err(ParseError::TypeOverrun { pos: char_pos });
            }
            types.push((t, char_pos));
        }
    }

    // Phase 2: destinations and permutations for the type-2 entries.
    let two_count = types.iter().filter(|(t, _)| *t == 2).count();
    let dest_start = pos;
    let perm_start = dest_start + two_count * width;
    let end = perm_start + two_count;
    if end > vals.len() {
        return Err(ParseError::Truncated { pos: vals.len() });
    }
    if end < vals.len() {
        return Err(ParseError::Trailing { pos: end });
    }

    let mut slots = vec![Slot::Open; faces];
    let mut allocated = 1usize; // tetrahedron 0 is implicitly first
    let mut ti = 0usize;
    let mut di = dest_start;
    let mut pi = perm_start;

    for t in 0..n {
        if t >= allocated {
            return Err(ParseError::Unattached { tet: t });
        }
        for f in 0..4u8 {
            let slot = t * 4 + f as usize;
            if slots[slot] != Slot::Open {
                continue;
            }
            let (ty, ty_pos) = types[ti];
            ti += 1;
            match ty {
                0 => slots[slot] = Slot::Bound,
                1 => {
                    if allocated >= n {
                        return Err(ParseError::TypeOverrun { pos: ty_pos });
                    }
                    let u = allocated;
                    allocated += 1;
                    slots[slot] = Slot::Glued(Gluing {
                        dest_tet: u as u32,
                        perm: Perm4::IDENTITY,
                    });
                    slots[u * 4 + f as usize] = Slot::Glued(Gluing {
                        dest_tet: t as u32,
                        perm: Perm4::IDENTITY,
                    });
                }
                _ => {
                    let mut dest = 0usize;
                    for i in 0..width {
                        dest += (vals[di + i] as usize) << (6 * i);
                    }
                    let dest_pos = di;
                    di += width;
                    let pval = vals[pi];
                    let perm_pos = pi;
                    pi += 1;
                    if dest > allocated || dest >= n {
                        return Err(ParseError::BadDest { pos: dest_pos });
                    }
                    if dest == allocated {
                        allocated += 1;
                    }
                    let perm = Perm4::from_index(pval)
                        .ok_or(ParseError::BadPerm { pos: perm_pos })?;
                    let g = f;
                    let dest_face = perm.apply(g);
                    let partner = dest * 4 + dest_face as usize;
                    if partner == slot {
                        return Err(ParseError::SelfGluing { pos: perm_pos });
                    }
                    if slots[partner] != Slot::Open {
                        return Err(ParseError::Conflict { pos: perm_pos });
                    }
                    slots[slot] = Slot::Glued(Gluing {
                        dest_tet: dest as u32,
                        perm,
                    });
                    slots[partner] = Slot::Glued(Gluing {
                        dest_tet: t as u32,
                        perm: perm.inverse(),
                    });
                }
            }
        }
    }

    let gluings: Vec<Option<Gluing>> = slots
        .into_iter()
        .map(|s| match s {
            Slot::Open => unreachable!("every face is determined by the scan"),
            Slot::Bound => None,
            Slot::Glued(g) => Some(g),
        })
        .collect();
    Ok(Triangulation::new_unchecked(gluings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skeleton;

    fn bipyramid() -> Triangulation {
        let mut gluings = vec![None; 8];
        gluings[3] = Some(Gluing {
            dest_tet: 1,
            perm: Perm4::IDENTITY,
        });
        gluings[7] = Some(Gluing {
            dest_tet: 0,
            perm: Perm4::IDENTITY,
        });
        Triangulation::new(2, gluings).unwrap()
    }

    #[test]
    fn alphabet_anchors() {
        assert_eq!(alphabet_encode(0), 'a');
        assert_eq!(alphabet_encode(25), 'z');
        assert_eq!(alphabet_encode(26), 'A');
        assert_eq!(alphabet_encode(52), '0');
        assert_eq!(alphabet_encode(62), '+');
        assert_eq!(alphabet_encode(63), '-');
        for k in 0..64u8 {
            assert_eq!(alphabet_decode(alphabet_encode(k)), Some(k));
        }
        assert_eq!(alphabet_decode('!'), None);
    }

    #[test]
    fn bipyramid_encodes_as_caba() {
        let tri = bipyramid();
        // The worked canonical labelling: start at either tetrahedron with
        // the identity labelling.
        assert_eq!(
            encode_labelling(&tri, 0, Perm4::IDENTITY).unwrap(),
            "caba"
        );
        assert_eq!(encode(&tri).unwrap().as_str(), "caba");
    }

    #[test]
    fn lone_tetrahedron_encodes_as_baa() {
        let tri = Triangulation::new(1, vec![None; 4]).unwrap();
        assert_eq!(encode(&tri).unwrap().as_str(), "baa");
    }

    #[test]
    fn decode_caba_matches_worked_gluings() {
        let tri = decode("caba").unwrap();
        assert_eq!(tri.tet_count(), 2);
        let boundary = (0..8)
            .filter(|&s| tri.gluing(FaceRef::new(s / 4, (s % 4) as u8)).is_none())
            .count();
        assert_eq!(boundary, 6);
        let g = tri.gluing(FaceRef::new(0, 3)).unwrap();
        assert_eq!(g.dest_tet, 1);
        assert_eq!(g.perm, Perm4::IDENTITY);
    }

    #[test]
    fn decode_validates_known_seed() {
        let tri = decode("cMcabbgqs").unwrap();
        assert_eq!(tri.tet_count(), 2);
        assert!(tri.is_closed());
        assert_eq!(tri.validate(), Ok(()));
        assert_eq!(skeleton::vertex_count(&tri), 1);
    }

    #[test]
    fn truncated_input_is_an_error() {
        assert!(matches!(decode("c"), Err(ParseError::Truncated { .. })));
        assert!(matches!(decode("cM"), Err(ParseError::Truncated { .. })));
    }

    #[test]
    fn trailing_characters_are_an_error() {
        assert!(matches!(
            decode("cabaa"),
            Err(ParseError::Trailing { .. }) | Err(ParseError::BadPadding { .. })
        ));
    }

    #[test]
    fn roundtrip_on_published_strings() {
        for s in crate::seeds::ALL_SEEDS {
            let tri = decode(s).expect(s);
            assert_eq!(tri.validate(), Ok(()), "{s}");
            assert_eq!(encode(&tri).unwrap().as_str(), *s, "roundtrip of {s}");
        }
    }

    #[test]
    fn relabelling_invariance_exhaustive_for_small() {
        for s in ["cMcabbgqs", "caba", "dLQbcccaekv"] {
            let tri = decode(s).unwrap();
            let sig = encode(&tri).unwrap();
            let n = tri.tet_count();
            let orders: Vec<Vec<u32>> = if n == 2 {
                vec![vec![0, 1], vec![1, 0]]
            } else {
                vec![vec![0, 1, 2], vec![2, 0, 1], vec![1, 2, 0], vec![2, 1, 0]]
            };
            for order in orders {
                for pi in [0u8, 5, 11, 17, 23] {
                    let vmaps: Vec<Perm4> = (0..n)
                        .map(|t| Perm4::from_index((pi + t as u8 * 7) % 24).unwrap())
                        .collect();
                    let relab = tri.relabelled(&order, &vmaps);
                    assert_eq!(encode(&relab).unwrap(), sig);
                }
            }
        }
    }

    #[test]
    fn large_count_prefix_round_trips() {
        // A chain of 70 tetrahedra: tet i face 1 glued to tet i+1 face 0
        // by the transposition (0 1).
        let n = 70;
        let swap = Perm4::from_image([1, 0, 2, 3]);
        let mut gluings = vec![None; 4 * n];
        for i in 0..n - 1 {
            gluings[i * 4 + 1] = Some(Gluing {
                dest_tet: (i + 1) as u32,
                perm: swap,
            });
            gluings[(i + 1) * 4] = Some(Gluing {
                dest_tet: i as u32,
                perm: swap,
            });
        }
        let tri = Triangulation::new(n, gluings).unwrap();
        let sig = encode(&tri).unwrap();
        assert_eq!(&sig.as_str()[0..1], "-");
        // d = 2 for 63 <= n < 4096.
        assert_eq!(sig.as_str().as_bytes()[1], b'c');
        let back = decode(sig.as_str()).unwrap();
        assert_eq!(back.tet_count(), n);
        assert_eq!(encode(&back).unwrap(), sig);
    }

    #[test]
    fn first_character_is_the_count_for_small_n() {
        for s in crate::seeds::ALL_SEEDS {
            let tri = decode(s).unwrap();
            assert_eq!(
                alphabet_decode(s.chars().next().unwrap()).unwrap() as usize,
                tri.tet_count()
            );
        }
    }
}
