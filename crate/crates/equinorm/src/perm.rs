//! Permutations of `{0, ..., n-1}` and the block calculus used when
//! juggling inputs of multi-ary operations.
//!
//! Conventions, fixed once and used everywhere:
//! * `p.apply(i)` is `p(i)`, stored as `p.images[i]`.
//! * `p.compose(&q)` is the function `i -> p(q(i))`, so `q` acts first.
//! * `Perm::block(&delta, &sizes)` rearranges `sizes.len()` consecutive
//!   blocks, sending the whole of block `j` to the slot `delta(j)` while
//!   preserving the order inside each block.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Perm {
    images: Vec<usize>,
}

impl std::fmt::Debug for Perm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::BadPermutation(images.clone(), n));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self.compose(&q)` maps `i` to `self(q(i))`: `q` is applied first.
    pub fn compose(&self, q: &Perm) -> Perm {
        assert_eq!(self.degree(), q.degree(), "composing perms of unequal degree");
        Perm {
            images: q.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Perm { images }
    }

    /// Disjoint juxtaposition: the first summand acts on the first
    /// `parts[0].degree()` points, the next on the following block, and so on.
    pub fn direct_sum(parts: &[Perm]) -> Perm {
        let mut images = Vec::with_capacity(parts.iter().map(Perm::degree).sum());
        let mut offset = 0;
        for p in parts {
            images.extend(p.images.iter().map(|&i| offset + i));
            offset += p.degree();
        }
        Perm { images }
    }

    /// The block permutation `delta(sizes)`: a permutation of
    /// `sizes.iter().sum()` points moving block `j` (of length `sizes[j]`)
    /// to the `delta(j)`-th slot, order-preserving inside blocks.  The slot
    /// widths of the result are the sizes rearranged by `delta`, i.e. slot
    /// `i` has width `sizes[delta^{-1}(i)]`.
    pub fn block(delta: &Perm, sizes: &[usize]) -> Perm {
        let n = delta.degree();
        assert_eq!(n, sizes.len(), "block permutation needs one size per block");
        let inv = delta.inverse();
        // starts of the source blocks
        let mut src_start = vec![0; n];
        for j in 1..n {
            src_start[j] = src_start[j - 1] + sizes[j - 1];
        }
        // starts of the target slots, whose widths are the rearranged sizes
        let mut dst_start = vec![0; n];
        for i in 1..n {
            dst_start[i] = dst_start[i - 1] + sizes[inv.apply(i - 1)];
        }
        let total: usize = sizes.iter().sum();
        let mut images = vec![0; total];
        for j in 0..n {
            let slot = delta.apply(j);
            for t in 0..sizes[j] {
                images[src_start[j] + t] = dst_start[slot] + t;
            }
        }
        Perm { images }
    }

    /// The wreath-style composite `delta[[d_0, ..., d_{n-1}]]`: first act by
    /// each `d_j` inside its own block, then move the blocks by `delta`.
    /// Equals `Perm::block(delta, sizes).compose(&Perm::direct_sum(inner))`
    /// with `sizes[j] = inner[j].degree()`.
    pub fn block_wreath(delta: &Perm, inner: &[Perm]) -> Perm {
        let sizes: Vec<usize> = inner.iter().map(Perm::degree).collect();
        Perm::block(delta, &sizes).compose(&Perm::direct_sum(inner))
    }

    /// All permutations of degree `n` in lexicographic order of their image
    /// vectors.  Intended for the small degrees exhaustive checks run at.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn rec(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Perm>) {
            if current.len() == n {
                out.push(Perm {
                    images: current.clone(),
                });
                return;
            }
            for i in 0..n {
                if !used[i] {
                    used[i] = true;
                    current.push(i);
                    rec(n, current, used, out);
                    current.pop();
                    used[i] = false;
                }
            }
        }
        rec(n, &mut current, &mut used, &mut out);
        out
    }
}
