#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace polarkit {

// Largest output alphabet any exact channel operation may produce.
inline constexpr std::size_t kAlphabetCap = 1'000'000;

using Permutation = std::vector<std::size_t>;

/// Binary-input channel with a finite output alphabet {0, ..., m-1}, stored
/// as the two rows W(y|0) and W(y|1).
///
/// An optional symmetry witness is an involution pi on the outputs with
/// W(y|0) == W(pi(y)|1) for every y, bit-for-bit as stored. Construction
/// validates both rows (non-negative, each summing to 1 within 1e-12) and
/// the witness; every channel object in circulation is therefore valid.
class BinaryChannel {
public:
    BinaryChannel(std::vector<double> p0, std::vector<double> p1, std::optional<Permutation> symmetry = std::nullopt);

    std::size_t output_count() const noexcept { return p0_.size(); }
    std::span<const double> p0() const noexcept { return p0_; }
    std::span<const double> p1() const noexcept { return p1_; }
    double likelihood(unsigned input, std::size_t y) const { return input ? p1_[y] : p0_[y]; }
    const std::optional<Permutation>& symmetry() const noexcept { return symmetry_; }

    friend bool operator==(const BinaryChannel&, const BinaryChannel&) = default;

private:
    std::vector<double> p0_;
    std::vector<double> p1_;
    std::optional<Permutation> symmetry_;
};

struct InfoPair {
    double mutual_info = 0.0;
    double bhattacharyya = 0.0;

    // I^2 + Z^2 <= 1 and I + Z >= 1, both within `tol`.
    bool within_bounds(double tol = 1e-9) const noexcept;
};

BinaryChannel make_bsc(double epsilon);
// Outputs are ordered {0, erasure, 1}.
BinaryChannel make_bec(double epsilon);

double symmetric_capacity(const BinaryChannel& w);
double bhattacharyya(const BinaryChannel& w);
InfoPair info_pair(const BinaryChannel& w);

/// k independent uses of `w` on the same input. Output tuples are indexed
/// row-major with the first use most significant. Throws CapacityError when
/// m^k exceeds `cap`.
BinaryChannel product_channel(const BinaryChannel& w, std::size_t k, std::size_t cap = kAlphabetCap);

/// Merges outputs whose normalized likelihood pairs agree within relative
/// tolerance 1e-12 and drops zero-probability outputs. Lossless for I and Z.
/// Merged outputs are ordered by increasing posterior W(y|0)/(W(y|0)+W(y|1)).
/// A symmetry witness is carried over (and the stored rows made exactly
/// mirror-consistent) whenever the merged channel has one.
BinaryChannel merge_equivalent_outputs(const BinaryChannel& w);

double binary_entropy(double p);
// Preimage of t in [0, 1/2], by bisection.
double inverse_binary_entropy(double t);

// Capacity of two independent uses of BSC(epsilon): 1 + h(2 eps (1-eps)) - 2 h(eps).
double bsc_pair_capacity(double epsilon);

// h(2 eps (1-eps)) - h(eps) with eps = h^-1(1 - capacity); capacity in (0, 1).
double capacity_gap_lower_bound(double capacity);

/// Mixture of `subchannel_count` BSCs with weights uniform on the simplex and
/// crossovers uniform on [0, 1/2]. Output 2j+b is "sub-channel j, received b".
BinaryChannel random_symmetric_channel(std::uint64_t seed, std::size_t subchannel_count);

/// Returns an involution pi with p0[y] == p1[pi(y)] (within 1e-12) if one
/// exists, found by pairing the outputs sorted by (p0, p1) against the
/// outputs sorted by (p1, p0).
std::optional<Permutation> is_symmetric(const BinaryChannel& w);

/// `w` with a stored symmetry witness: `w` itself if it already has one,
/// otherwise the is_symmetric permutation with W(.|1) rewritten as the exact
/// mirror image of W(.|0). std::nullopt for asymmetric channels.
std::optional<BinaryChannel> with_symmetry(const BinaryChannel& w);

/// Erasure probability if `w` is (after merging) a BEC or a noiseless
/// channel; std::nullopt otherwise.
std::optional<double> as_bec(const BinaryChannel& w);

}  // namespace polarkit
