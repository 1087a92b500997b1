#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "polarkit/channel.hpp"
#include "polarkit/gf2.hpp"

namespace polarkit {

/// One level of channel splitting. All indices are 0-based; index i is the
/// synthesized channel seen by input u_i under successive cancellation.
/// Every split first brings the kernel to its unit-diagonal column order
/// (unit_diagonalize); synthesized channels are invariant under column
/// permutations up to relabeling outputs.

/// The channel u_i -> y_1^l with u_0..u_{i-1} fixed to zero and the later
/// inputs marginalized uniformly. Requires a symmetric W (witness stored or
/// discoverable by is_symmetric). Output is merged and carries a witness.
BinaryChannel split_tilde(const BinaryChannel& w, const BitMatrix& g, std::size_t i, std::size_t cap = kAlphabetCap);

/// The full synthesized channel u_i -> (y_1^l, u_0..u_{i-1}), unmerged.
/// Output index = prefix * m^l + y, prefix bits little-endian (u_0 is bit 0).
/// Defined for any W.
BinaryChannel split_joint(const BinaryChannel& w, const BitMatrix& g, std::size_t i, std::size_t cap = kAlphabetCap);

struct SplitResult {
    std::vector<BinaryChannel> subchannels;
    std::vector<InfoPair> info;
    ColumnPermutation column_perm;  // unit-diagonalizing permutation applied to G
};

/// All l synthesized channels. Verifies the chain rule (mean of I equals
/// I(W) within 1e-9) and throws Error if it does not hold.
SplitResult split_all(const BinaryChannel& w, const BitMatrix& g, std::size_t cap = kAlphabetCap);

/// Leaf (I, Z) pairs of the level-by-level recursion with kernels[t] at
/// level t; leaf index digits are most significant first. Throws
/// CapacityError (with the number of completed levels) once an
/// intermediate alphabet exceeds `cap`.
std::vector<InfoPair> recursive_polarize(const BinaryChannel& w, std::span<const BitMatrix> kernels,
                                         std::size_t cap = kAlphabetCap);
std::vector<InfoPair> recursive_polarize(const BinaryChannel& w, const BitMatrix& g, std::size_t levels,
                                         std::size_t cap = kAlphabetCap);

}  // namespace polarkit
