//! Permutations of `{0,1,2,3}` with the fixed index enumeration used by the
//! signature codec.
//!
//! Indices follow the lexicographic order of image tuples, so the identity
//! is index 0 and `(0,1,3,2)` is index 1.

/// A permutation of the four vertex labels of a tetrahedron.
///
/// Stored by its image tuple: `image[i]` is where label `i` is sent.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Perm4 {
    image: [u8; 4],
}

/// All 24 permutations in index order.
pub const S4: [Perm4; 24] = [
    Perm4::from_image([0, 1, 2, 3]),
    Perm4::from_image([0, 1, 3, 2]),
    Perm4::from_image([0, 2, 1, 3]),
    Perm4::from_image([0, 2, 3, 1]),
    Perm4::from_image([0, 3, 1, 2]),
    Perm4::from_image([0, 3, 2, 1]),
    Perm4::from_image([1, 0, 2, 3]),
    Perm4::from_image([1, 0, 3, 2]),
    Perm4::from_image([1, 2, 0, 3]),
    Perm4::from_image([1, 2, 3, 0]),
    Perm4::from_image([1, 3, 0, 2]),
    Perm4::from_image([1, 3, 2, 0]),
    Perm4::from_image([2, 0, 1, 3]),
    Perm4::from_image([2, 0, 3, 1]),
    Perm4::from_image([2, 1, 0, 3]),
    Perm4::from_image([2, 1, 3, 0]),
    Perm4::from_image([2, 3, 0, 1]),
    Perm4::from_image([2, 3, 1, 0]),
    Perm4::from_image([3, 0, 1, 2]),
    Perm4::from_image([3, 0, 2, 1]),
    Perm4::from_image([3, 1, 0, 2]),
    Perm4::from_image([3, 1, 2, 0]),
    Perm4::from_image([3, 2, 0, 1]),
    Perm4::from_image([3, 2, 1, 0]),
];

impl Perm4 {
    /// The identity permutation.
    pub const IDENTITY: Perm4 = Perm4::from_image([0, 1, 2, 3]);

    /// Builds a permutation from its image tuple. `image` must be a
    /// bijection of `{0,1,2,3}`; this is checked with a debug assertion.
    pub const fn from_image(image: [u8; 4]) -> Perm4 {
        Perm4 { image }
    }

    /// The transposition swapping `a` and `b`.
    pub fn transposition(a: u8, b: u8) -> Perm4 {
        let mut image = [0u8, 1, 2, 3];
        image[a as usize] = b;
        image[b as usize] = a;
        Perm4 { image }
    }

    /// Looks up the permutation with the given index (0..24).
    pub fn from_index(index: u8) -> Option<Perm4> {
        S4.get(index as usize).copied()
    }

    /// The index of this permutation in the fixed enumeration.
    pub fn index(&self) -> u8 {
        // 24 entries, linear scan is fine and keeps the table the single
        // source of truth.
        S4.iter()
            .position(|p| p == self)
            .expect("image is a bijection of {0,1,2,3}") as u8
    }

    pub fn image(&self) -> [u8; 4] {
        self.image
    }

    /// Applies the permutation to one label.
    #[inline]
    pub fn apply(&self, v: u8) -> u8 {
        self.image[v as usize]
    }

    /// The inverse permutation.
    pub fn inverse(&self) -> Perm4 {
        let mut image = [0u8; 4];
        for v in 0..4u8 {
            image[self.image[v as usize] as usize] = v;
        }
        Perm4 { image }
    }

    /// Composition `self ∘ other`: applies `other` first, then `self`.
    pub fn compose(&self, other: &Perm4) -> Perm4 {
        let mut image = [0u8; 4];
        for v in 0..4 {
            image[v] = self.image[other.image[v] as usize];
        }
        Perm4 { image }
    }

    /// True if the image tuple really is a bijection.
    pub fn is_valid(&self) -> bool {
        let mut seen = [false; 4];
        for &v in &self.image {
            if v > 3 || seen[v as usize] {
                return false;
            }
            seen[v as usize] = true;
        }
        true
    }

    /// Sign of the permutation: `true` for even.
    pub fn is_even(&self) -> bool {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.image[i] > self.image[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 0
    }
}

impl std::fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({}{}{}{})",
            self.image[0], self.image[1], self.image[2], self.image[3]
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_entries_are_bijections() {
        for p in &S4 {
            assert!(p.is_valid());
        }
    }

    #[test]
    fn index_round_trips() {
        for i in 0..24u8 {
            let p = Perm4::from_index(i).unwrap();
            assert_eq!(p.index(), i);
        }
        assert!(Perm4::from_index(24).is_none());
    }

    #[test]
    fn fixed_anchors() {
        assert_eq!(Perm4::from_index(0).unwrap().image(), [0, 1, 2, 3]);
        assert_eq!(Perm4::from_index(1).unwrap().image(), [0, 1, 3, 2]);
    }

    /// The table must list all image tuples in lexicographic order.
    #[test]
    fn table_matches_construction_rule() {
        let mut all: Vec<[u8; 4]> = Vec::new();
        for a in 0..4u8 {
            for b in 0..4u8 {
                for c in 0..4u8 {
                    for d in 0..4u8 {
                        let im = [a, b, c, d];
                        if Perm4::from_image(im).is_valid() {
                            all.push(im);
                        }
                    }
                }
            }
        }
        assert_eq!(all.len(), 24);
        for (i, im) in all.iter().enumerate() {
            assert_eq!(S4[i].image(), *im);
        }
    }

    #[test]
    fn inverse_and_compose() {
        for p in &S4 {
            let inv = p.inverse();
            assert_eq!(p.compose(&inv), Perm4::IDENTITY);
            assert_eq!(inv.compose(p), Perm4::IDENTITY);
            for q in &S4 {
                let c = p.compose(q);
                for v in 0..4u8 {
                    assert_eq!(c.apply(v), p.apply(q.apply(v)));
                }
            }
        }
    }

    #[test]
    fn transpositions() {
        let t = Perm4::transposition(1, 3);
        assert_eq!(t.image(), [0, 3, 2, 1]);
        assert_eq!(t.compose(&t), Perm4::IDENTITY);
    }
}
