//! Linear algebra over GF(2) on bit-packed vectors of length at most 64.
//!
//! Coordinate `i` of a vector is bit `i` of a `u64`. Subspaces keep a fully
//! reduced echelon basis, so reduction modulo a subspace is a linear map and
//! gives canonical coset representatives.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 64;

/// Mask with the low `dim` bits set.
pub fn mask(dim: usize) -> u64 {
    if dim >= 64 {
        u64::MAX
    } else {
        (1u64 << dim) - 1
    }
}

/// A vector in GF(2)^len.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Gf2Vec {
    bits: u64,
    len: usize,
}

impl Gf2Vec {
    pub fn zero(len: usize) -> Self {
        assert!(len <= MAX_DIM);
        Gf2Vec { bits: 0, len }
    }

    pub fn from_bits(bits: u64, len: usize) -> Self {
        assert!(len <= MAX_DIM);
        Gf2Vec {
            bits: bits & mask(len),
            len,
        }
    }

    pub fn unit(i: usize, len: usize) -> Self {
        assert!(i < len);
        Gf2Vec::from_bits(1 << i, len)
    }

    /// Parses a string such as `"0110"`; the first character is coordinate 0.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() > MAX_DIM {
            return Err(Error::Parse(format!("bit string longer than {MAX_DIM}: {s}")));
        }
        let mut bits = 0u64;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return Err(Error::Parse(format!("invalid bit string '{s}'"))),
            }
        }
        Ok(Gf2Vec {
            bits,
            len: s.chars().count(),
        })
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn get(&self, i: usize) -> bool {
        (self.bits >> i) & 1 == 1
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn add(&self, other: &Gf2Vec) -> Gf2Vec {
        assert_eq!(self.len, other.len, "GF(2) vector length mismatch");
        Gf2Vec {
            bits: self.bits ^ other.bits,
            len: self.len,
        }
    }

    pub fn dot(&self, other: &Gf2Vec) -> bool {
        (self.bits & other.bits).count_ones() % 2 == 1
    }

    /// The coordinates `start..start+len` as a vector of length `len`.
    pub fn segment(&self, start: usize, len: usize) -> Gf2Vec {
        Gf2Vec::from_bits(self.bits >> start, len)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }
}

impl fmt::Display for Gf2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Serialize for Gf2Vec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Dot product of raw bit vectors.
pub fn dot(a: u64, b: u64) -> bool {
    (a & b).count_ones() % 2 == 1
}

/// A subspace of GF(2)^dim stored as a reduced echelon basis.
///
/// Each basis vector has a distinct pivot (its lowest set bit) and no other
/// basis vector has that pivot bit set.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    dim: usize,
    basis: Vec<u64>,
}

impl Subspace {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_DIM);
        Subspace {
            dim,
            basis: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        Subspace::span(dim, (0..dim).map(|i| 1u64 << i))
    }

    pub fn span<I: IntoIterator<Item = u64>>(dim: usize, gens: I) -> Self {
        let mut s = Subspace::zero(dim);
        for g in gens {
            s.insert(g);
        }
        s
    }

    pub fn span_vecs<'a, I: IntoIterator<Item = &'a Gf2Vec>>(dim: usize, gens: I) -> Self {
        Subspace::span(dim, gens.into_iter().map(|v| v.bits()))
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Number of elements, `2^rank`.
    pub fn order(&self) -> u128 {
        1u128 << self.rank()
    }

    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    pub fn basis_vecs(&self) -> Vec<Gf2Vec> {
        self.basis
            .iter()
            .map(|&b| Gf2Vec::from_bits(b, self.dim))
            .collect()
    }

    /// Canonical representative of `v + self`: all pivot bits cleared.
    pub fn reduce(&self, v: u64) -> u64 {
        let mut v = v & mask(self.dim);
        for &b in &self.basis {
            let p = b.trailing_zeros();
            if (v >> p) & 1 == 1 {
                v ^= b;
            }
        }
        v
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    /// Adds a vector; returns true when the rank grew.
    pub fn insert(&mut self, v: u64) -> bool {
        let r = self.reduce(v);
        if r == 0 {
            return false;
        }
        let p = r.trailing_zeros();
        for b in &mut self.basis {
            if (*b >> p) & 1 == 1 {
                *b ^= r;
            }
        }
        self.basis.push(r);
        self.basis.sort_unstable_by_key(|b| b.trailing_zeros());
        true
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|&b| other.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.dim, other.dim);
        let mut s = self.clone();
        for &b in &other.basis {
            s.insert(b);
        }
        s
    }

    /// Orthogonal complement for the standard dot product.
    pub fn annihilator(&self) -> Subspace {
        let pivots: u64 = self
            .basis
            .iter()
            .fold(0, |acc, b| acc | (1u64 << b.trailing_zeros()));
        let mut gens = Vec::new();
        for j in 0..self.dim {
            if (pivots >> j) & 1 == 1 {
                continue;
            }
            // Free coordinate j: set it, then fix each pivot coordinate so the
            // corresponding basis vector pairs to zero.
            let mut v = 1u64 << j;
            for &b in &self.basis {
                if (b >> j) & 1 == 1 {
                    v |= 1u64 << b.trailing_zeros();
                }
            }
            gens.push(v);
        }
        Subspace::span(self.dim, gens)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        self.annihilator()
            .sum(&other.annihilator())
            .annihilator()
    }

    /// All elements in increasing order of their coefficient index.
    pub fn elements(&self) -> Vec<u64> {
        assert!(self.rank() <= 24, "refusing to enumerate a huge subspace");
        (0u64..(1u64 << self.rank()))
            .map(|c| self.combination(c))
            .collect()
    }

    /// The element whose coordinates in the stored basis are the bits of `c`.
    pub fn combination(&self, c: u64) -> u64 {
        self.basis
            .iter()
            .enumerate()
            .filter(|(i, _)| (c >> i) & 1 == 1)
            .fold(0, |acc, (_, b)| acc ^ b)
    }

    /// A vector of `self` that is not in `other`, if any.
    pub fn witness_not_in(&self, other: &Subspace) -> Option<u64> {
        self.basis.iter().copied().find(|&b| !other.contains(b))
    }
}

/// A GF(2)-linear map given by the images of the standard basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    src_dim: usize,
    dst_dim: usize,
    cols: Vec<u64>,
}

impl LinearMap {
    pub fn new(src_dim: usize, dst_dim: usize, cols: Vec<u64>) -> Self {
        assert_eq!(cols.len(), src_dim);
        assert!(dst_dim <= MAX_DIM);
        let m = mask(dst_dim);
        LinearMap {
            src_dim,
            dst_dim,
            cols: cols.into_iter().map(|c| c & m).collect(),
        }
    }

    pub fn src_dim(&self) -> usize {
        self.src_dim
    }

    pub fn dst_dim(&self) -> usize {
        self.dst_dim
    }

    pub fn apply(&self, v: u64) -> u64 {
        self.cols
            .iter()
            .enumerate()
            .filter(|(i, _)| (v >> i) & 1 == 1)
            .fold(0, |acc, (_, c)| acc ^ c)
    }

    pub fn image(&self) -> Subspace {
        Subspace::span(self.dst_dim, self.cols.iter().copied())
    }

    pub fn image_of(&self, s: &Subspace) -> Subspace {
        Subspace::span(self.dst_dim, s.basis().iter().map(|&b| self.apply(b)))
    }

    pub fn kernel(&self) -> Subspace {
        self.preimage(&Subspace::zero(self.dst_dim))
    }

    /// `{ x : f(x) ∈ target }`, by elimination on the pairs (f(e_i) mod target, e_i).
    pub fn preimage(&self, target: &Subspace) -> Subspace {
        let mut rows: Vec<(u64, u64)> = Vec::new();
        let mut kernel = Subspace::zero(self.src_dim);
        for (i, &c) in self.cols.iter().enumerate() {
            let mut img = target.reduce(c);
            let mut src = 1u64 << i;
            for &(ri, rs) in &rows {
                let p = ri.trailing_zeros();
                if (img >> p) & 1 == 1 {
                    img ^= ri;
                    src ^= rs;
                }
            }
            if img == 0 {
                kernel.insert(src);
            } else {
                rows.push((img, src));
            }
        }
        kernel
    }

    pub fn compose(&self, inner: &LinearMap) -> LinearMap {
        assert_eq!(inner.dst_dim, self.src_dim);
        LinearMap::new(
            inner.src_dim,
            self.dst_dim,
            inner.cols.iter().map(|&c| self.apply(c)).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        let v = Gf2Vec::parse("0110").unwrap();
        assert_eq!(v.bits(), 0b0110);
        assert_eq!(v.to_string(), "0110");
        assert!(Gf2Vec::parse("01x").is_err());
    }

    #[test]
    fn echelon_reduce_is_canonical() {
        let s = Subspace::span(4, [0b0011, 0b0110]);
        assert_eq!(s.rank(), 2);
        assert_eq!(s.reduce(0b0101), 0);
        assert_eq!(s.reduce(0b1000), s.reduce(0b1011));
    }

    #[test]
    fn annihilator_pairs_to_zero() {
        let s = Subspace::span(5, [0b10011, 0b01100]);
        let a = s.annihilator();
        assert_eq!(a.rank(), 3);
        for &x in s.basis() {
            for &y in a.basis() {
                assert!(!dot(x, y));
            }
        }
    }

    #[test]
    fn intersection_matches_enumeration() {
        let a = Subspace::span(5, [0b00011, 0b00110, 0b11000]);
        let b = Subspace::span(5, [0b00101, 0b10000, 0b01000]);
        let i = a.intersection(&b);
        let brute: Vec<u64> = (0..32u64).filter(|&v| a.contains(v) && b.contains(v)).collect();
        assert_eq!(i.order() as usize, brute.len());
        assert!(brute.iter().all(|&v| i.contains(v)));
    }

    #[test]
    fn preimage_matches_enumeration() {
        let f = LinearMap::new(4, 3, vec![0b001, 0b011, 0b010, 0b000]);
        let t = Subspace::span(3, [0b001]);
        let p = f.preimage(&t);
        for v in 0..16u64 {
            assert_eq!(p.contains(v), t.contains(f.apply(v)));
        }
        assert_eq!(f.kernel().rank(), 4 - f.image().rank());
    }
}
