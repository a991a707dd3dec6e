//! Lattice embeddings between flats of GF(q)^m and GF(q)^n.
//!
//! Flats of the full linear space are exactly its subspaces (the zero
//! vector is a loop contained in every flat). Vectors are indexed as in
//! [`GaloisField::all_vectors`](crate::field::GaloisField::all_vectors).

use super::{closure_bits, LinearMatroid};
use crate::error::{Error, Result};
use crate::setfn::{bit_iter, SubsetMask};

fn space(q: u32, dim: usize) -> Result<LinearMatroid> {
    LinearMatroid::full_space(q, dim)
}

fn require_flat(m: &LinearMatroid, flat: &SubsetMask) -> Result<()> {
    use super::Matroid;
    if flat.width() != m.ground_size() {
        return Err(Error::MaskWidth {
            expected: m.ground_size(),
            found: flat.width(),
        });
    }
    if closure_bits(m, flat.bits()) != flat.bits() {
        return Err(Error::Invalid(format!("{flat:?} is not a flat")));
    }
    Ok(())
}

/// `{(x_1, …, x_t) : x_j ∈ A_j}` as a subset of GF(q)^{Σ dims}, blocks
/// laid out in order.
fn product(q: u32, blocks: &[(usize, u64)], width: usize) -> Result<SubsetMask> {
    let mut indices = vec![0usize];
    let mut place = 1usize;
    for &(dim, members) in blocks {
        let mut next = Vec::with_capacity(indices.len() * members.count_ones() as usize);
        for &base in &indices {
            for v in bit_iter(members) {
                next.push(base + v * place);
            }
        }
        indices = next;
        place *= (q as usize).pow(dim as u32);
    }
    SubsetMask::from_elements(width, indices)
}

/// `A ↦ A ⊕ 0`: rank preserving, injective, preserves joins and meets.
pub fn gfqn_rank_preserving_embed(q: u32, m: usize, n: usize, flat: &SubsetMask) -> Result<SubsetMask> {
    if m > n {
        return Err(Error::EmbedDimension { m, n });
    }
    let source = space(q, m)?;
    let target = space(q, n)?;
    require_flat(&source, flat)?;
    use super::Matroid;
    product(q, &[(m, flat.bits()), (n - m, 1)], target.ground_size())
}

/// `A ↦ A ⊕ … ⊕ A` with `n/m` blocks: multiplies rank by `n/m`, so the
/// normalized rank is preserved.
pub fn gfqn_stretch_embed(q: u32, m: usize, n: usize, flat: &SubsetMask) -> Result<SubsetMask> {
    if m == 0 || n % m != 0 {
        return Err(Error::Divisibility { m, n });
    }
    let source = space(q, m)?;
    let target = space(q, n)?;
    require_flat(&source, flat)?;
    use super::Matroid;
    let blocks = vec![(m, flat.bits()); n / m];
    product(q, &blocks, target.ground_size())
}

/// `A ⊕ B` inside GF(q)^{a+b} for flats `A` of GF(q)^a and `B` of GF(q)^b.
///
/// The two zero vectors are identified with the common zero, which is the
/// only sense in which the direct sum of the two matroids sits inside the
/// bigger space.
pub fn gfq_direct_sum_flat(
    q: u32,
    a: usize,
    flat_a: &SubsetMask,
    b: usize,
    flat_b: &SubsetMask,
) -> Result<SubsetMask> {
    let left = space(q, a)?;
    let right = space(q, b)?;
    let target = space(q, a + b)?;
    require_flat(&left, flat_a)?;
    require_flat(&right, flat_b)?;
    use super::Matroid;
    product(
        q,
        &[(a, flat_a.bits()), (b, flat_b.bits())],
        target.ground_size(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{enumerate_flats, Matroid};

    #[test]
    fn identity_when_dimensions_match() {
        let m = LinearMatroid::full_space(2, 2).unwrap();
        for f in enumerate_flats(&m).unwrap() {
            assert_eq!(gfqn_rank_preserving_embed(2, 2, 2, &f.mask).unwrap(), f.mask);
            assert_eq!(gfqn_stretch_embed(2, 2, 2, &f.mask).unwrap(), f.mask);
        }
    }

    #[test]
    fn append_zero_coordinate() {
        // GF(2)^1 full line {0, 1} ↦ {00, 10}: indices 0 and 1
        let line = SubsetMask::full(2);
        let img = gfqn_rank_preserving_embed(2, 1, 2, &line).unwrap();
        assert_eq!(img.bits(), 0b0011);
    }

    #[test]
    fn line_into_three_space_keeps_rank() {
        let plane = LinearMatroid::full_space(2, 2).unwrap();
        let cube = LinearMatroid::full_space(2, 3).unwrap();
        // zero and (0,1), which sits at index 2
        let line = SubsetMask::new(4, 0b0101).unwrap();
        let img = gfqn_rank_preserving_embed(2, 2, 3, &line).unwrap();
        assert_eq!(img.bits(), 0b0000_0101);
        assert_eq!(cube.rank_bits(img.bits()), plane.rank_bits(line.bits()));
    }

    #[test]
    fn stretch_line_to_plane() {
        let img = gfqn_stretch_embed(2, 1, 2, &SubsetMask::full(2)).unwrap();
        assert_eq!(img.bits(), 0b1111);
        let plane = LinearMatroid::full_space(2, 2).unwrap();
        assert_eq!(plane.rank_bits(img.bits()), 2);
    }

    #[test]
    fn stretch_line_into_four_space() {
        let line = SubsetMask::new(4, 0b0011).unwrap();
        let img = gfqn_stretch_embed(2, 2, 4, &line).unwrap();
        let four = LinearMatroid::full_space(2, 4).unwrap();
        assert_eq!(four.rank_bits(img.bits()), 2);
        assert_eq!(img.len(), 4);
    }

    #[test]
    fn errors() {
        let line = SubsetMask::full(2);
        assert_eq!(
            gfqn_stretch_embed(2, 2, 3, &SubsetMask::full(4)),
            Err(Error::Divisibility { m: 2, n: 3 })
        );
        assert_eq!(
            gfqn_rank_preserving_embed(2, 3, 2, &SubsetMask::full(8)),
            Err(Error::EmbedDimension { m: 3, n: 2 })
        );
        // {01} alone misses the zero vector, so it is not a flat
        let not_flat = SubsetMask::new(2, 0b10).unwrap();
        assert!(gfqn_rank_preserving_embed(2, 1, 2, &not_flat).is_err());
        assert!(gfqn_rank_preserving_embed(2, 1, 2, &line).is_ok());
    }

    #[test]
    fn direct_sum_of_lines_is_plane() {
        let line = SubsetMask::full(2);
        let img = gfq_direct_sum_flat(2, 1, &line, 1, &line).unwrap();
        assert_eq!(img.bits(), 0b1111);
        let zero = SubsetMask::new(2, 0b01).unwrap();
        let img = gfq_direct_sum_flat(2, 1, &line, 1, &zero).unwrap();
        assert_eq!(img.bits(), 0b0011);
    }
}
