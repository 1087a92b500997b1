#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "polarkit/channel.hpp"
#include "polarkit/gf2.hpp"

namespace polarkit {

// How per-index reliabilities were obtained: exact BEC(eps) evolution, or a
// caller-supplied vector of Bhattacharyya parameters.
struct Design {
    enum class Kind { Bec, Explicit };

    Kind kind = Kind::Bec;
    double eps = 0.5;
    std::vector<double> z;

    static Design bec(double eps) { return {Kind::Bec, eps, {}}; }
    static Design explicit_z(std::vector<double> z) { return {Kind::Explicit, 0.0, std::move(z)}; }
};

/// Polar code over the transform G_1 (x) ... (x) G_n (kernel t acts on
/// index digit t, most significant first). Frozen inputs are zero.
class PolarCode {
public:
    /// Validates: kernels invertible, mask and design sized to N, and no
    /// unfrozen index less reliable than a frozen one.
    PolarCode(std::vector<BitMatrix> kernels, Bits frozen_mask, std::vector<double> design_z, Design design);

    /// Freezes the N - K indices with the largest design Z (ties: larger
    /// index frozen first). Kernels are stored in unit-diagonal column order.
    static PolarCode construct(std::vector<BitMatrix> kernels, const Design& design, std::size_t message_bits);

    const std::vector<BitMatrix>& kernels() const noexcept { return kernels_; }
    std::size_t length() const noexcept { return frozen_mask_.size(); }
    std::size_t message_length() const noexcept { return information_set_.size(); }
    const Bits& frozen_mask() const noexcept { return frozen_mask_; }
    const Bits& frozen_values() const noexcept { return frozen_values_; }
    const std::vector<double>& design_z() const noexcept { return design_z_; }
    const Design& design() const noexcept { return design_; }
    // Unfrozen indices in increasing order; message bit k goes to information_set()[k].
    const std::vector<std::size_t>& information_set() const noexcept { return information_set_; }

private:
    std::vector<BitMatrix> kernels_;
    Bits frozen_mask_;
    Bits frozen_values_;
    std::vector<double> design_z_;
    Design design_;
    std::vector<std::size_t> information_set_;
};

// Design Z vector for `kernels` under `design`.
std::vector<double> design_reliabilities(std::span<const BitMatrix> kernels, const Design& design);

Bits encode(const PolarCode& code, std::span<const std::uint8_t> message, OpCounter* counter = nullptr);

struct LikelihoodPair {
    double p0 = 0.5;  // P(y | x = 0)
    double p1 = 0.5;  // P(y | x = 1)
};

struct DecodeOptions {
    // Genie-aided mode: true input bits, fed back in place of decisions.
    std::span<const std::uint8_t> genie;
    OpCounter* counter = nullptr;
    // Receives the normalized belief for every u_i at decision time.
    std::vector<LikelihoodPair>* leaf_beliefs = nullptr;
};

struct DecodeResult {
    Bits u_hat;
    Bits message;
    std::optional<std::size_t> genie_first_error;
};

/// Successive cancellation over arbitrary kernels. At a node of arity l the
/// belief in its a-th child input is the sum over all 2^(l-1-a) completions
/// of the later inputs of the product of the l input beliefs, given the
/// already-decided earlier children. Beliefs are renormalized pairs;
/// decisions take the larger belief with ties to 0.
DecodeResult sc_decode(const PolarCode& code, std::span<const LikelihoodPair> channel, const DecodeOptions& options = {});

// Sum of design Z over the information set.
double union_bound(const PolarCode& code);

struct SimulationStats {
    std::size_t trials = 0;
    std::size_t frame_errors = 0;
    std::size_t bit_errors = 0;
    double fer = 0.0;
    double ber = 0.0;
    double fer_stderr = 0.0;
    double union_bound = 0.0;
    std::vector<std::size_t> trial_bit_errors;
    // Genie mode: count of trials whose first wrong decision was at index i.
    std::vector<std::size_t> first_error_histogram;
};

/// Monte Carlo transmission of uniformly random messages through `channel`.
/// Trial t draws from derive_seed(seed, t); results are independent of the
/// thread count.
SimulationStats simulate_fer(const PolarCode& code, const BinaryChannel& channel, std::size_t trials, std::uint64_t seed,
                             bool genie = false);

}  // namespace polarkit
