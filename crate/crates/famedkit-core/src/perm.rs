//! Permutations of the four vertex labels of a tetrahedron.

use core::fmt;

/// A permutation of `{0,1,2,3}`, stored as its image list: `self.0[v]` is the
/// image of vertex `v`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm4(pub [u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    /// The order-reversing permutation `0123 -> 3210`.
    pub const REVERSAL: Perm4 = Perm4([3, 2, 1, 0]);

    /// Builds a permutation from an image list, checking bijectivity.
    pub fn new(images: [u8; 4]) -> Option<Perm4> {
        let mut seen = [false; 4];
        for &v in &images {
            if v > 3 || seen[v as usize] {
                return None;
            }
            seen[v as usize] = true;
        }
        Some(Perm4(images))
    }

    #[inline]
    pub fn apply(&self, v: u8) -> u8 {
        self.0[v as usize]
    }

    pub fn inverse(&self) -> Perm4 {
        let mut inv = [0u8; 4];
        for v in 0..4 {
            inv[self.0[v] as usize] = v as u8;
        }
        Perm4(inv)
    }

    /// Composition: first `other`, then `self`.
    pub fn compose(&self, other: &Perm4) -> Perm4 {
        let mut out = [0u8; 4];
        for v in 0..4 {
            out[v] = self.0[other.0[v] as usize];
        }
        Perm4(out)
    }

    /// Sign of the permutation: `+1` for even, `-1` for odd.
    pub fn sign(&self) -> i8 {
        let mut inversions = 0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// True if the permutation is monotone on the three vertices of the face
    /// opposite `skip` (the smallest is sent to the smallest, etc.).
    pub fn monotone_off(&self, skip: u8) -> bool {
        let mut prev: i16 = -1;
        for v in 0..4u8 {
            if v == skip {
                continue;
            }
            let img = self.apply(v) as i16;
            if img <= prev {
                return false;
            }
            prev = img;
        }
        true
    }

    /// All 24 permutations, in lexicographic order of their image lists.
    pub fn all() -> impl Iterator<Item = Perm4> {
        const ALL: [[u8; 4]; 24] = [
            [0, 1, 2, 3],
            [0, 1, 3, 2],
            [0, 2, 1, 3],
            [0, 2, 3, 1],
            [0, 3, 1, 2],
            [0, 3, 2, 1],
            [1, 0, 2, 3],
            [1, 0, 3, 2],
            [1, 2, 0, 3],
            [1, 2, 3, 0],
            [1, 3, 0, 2],
            [1, 3, 2, 0],
            [2, 0, 1, 3],
            [2, 0, 3, 1],
            [2, 1, 0, 3],
            [2, 1, 3, 0],
            [2, 3, 0, 1],
            [2, 3, 1, 0],
            [3, 0, 1, 2],
            [3, 0, 2, 1],
            [3, 1, 0, 2],
            [3, 1, 2, 0],
            [3, 2, 0, 1],
            [3, 2, 1, 0],
        ];
        ALL.into_iter().map(Perm4)
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}{}{}{})",
            self.0[0], self.0[1], self.0[2], self.0[3]
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_compose() {
        for p in Perm4::all() {
            assert_eq!(p.compose(&p.inverse()), Perm4::IDENTITY);
            assert_eq!(p.inverse().compose(&p), Perm4::IDENTITY);
        }
    }

    #[test]
    fn sign_is_multiplicative() {
        for p in Perm4::all() {
            for q in Perm4::all() {
                assert_eq!(p.compose(&q).sign(), p.sign() * q.sign());
            }
        }
    }

    #[test]
    fn monotone_detection() {
        assert!(Perm4([0, 2, 3, 1]).monotone_off(3));
        assert!(!Perm4([0, 2, 3, 1]).monotone_off(0));
        assert!(Perm4::IDENTITY.monotone_off(2));
    }
}
