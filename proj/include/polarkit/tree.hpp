#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "polarkit/channel.hpp"
#include "polarkit/gf2.hpp"

namespace polarkit {

/// One realization of W_{t+1} = W_t^(B_{t+1}) with uniform branches.
/// branches[t] is the 0-based branch taken into level t+1; info_trace[t]
/// is (I_t, Z_t) for t = 0..depth.
struct PathTrace {
    std::vector<std::size_t> branches;
    std::vector<InfoPair> info_trace;
    std::uint64_t seed = 0;

    std::size_t depth() const noexcept { return branches.size(); }
};

/// Samples one path. BEC inputs follow the exact scalar erasure recursion
/// (every synthesized channel of a BEC is again a BEC); other channels are
/// split exactly and merged at every step. A CapacityError carries the
/// depth reached.
PathTrace sample_path(const BinaryChannel& w, const BitMatrix& g, std::size_t levels, std::uint64_t seed,
                      std::size_t cap = kAlphabetCap);

/// `paths` independent traces; path p uses derive_seed(seed, p), so the
/// result does not depend on evaluation order or thread count.
std::vector<PathTrace> sample_paths(const BinaryChannel& w, const BitMatrix& g, std::size_t levels, std::size_t paths,
                                    std::uint64_t seed, std::size_t cap = kAlphabetCap);

struct LevelStats {
    std::size_t level = 0;
    double mean_info = 0.0;
    double var_info = 0.0;
    double frac_high = 0.0;  // I_t > 1 - delta
    double frac_low = 0.0;   // I_t < delta
    double frac_mid = 0.0;
    double mean_abs_step = 0.0;  // E|I_t - I_{t-1}|, zero at t = 0
};

struct EnsembleSummary {
    std::size_t paths = 0;
    double delta = 0.1;
    std::vector<LevelStats> levels;
    std::vector<std::size_t> final_histogram;  // I_n in ten bins of width 0.1
};

EnsembleSummary summarize(std::span<const PathTrace> traces, double delta);
EnsembleSummary ensemble_stats(const BinaryChannel& w, const BitMatrix& g, std::size_t levels, std::size_t paths,
                               std::uint64_t seed, double delta = 0.1, std::size_t cap = kAlphabetCap);

// |(1/l) sum_i I^(i) - I(W)| from an exact split.
double martingale_residual(const BinaryChannel& w, const BitMatrix& g);

struct ZBoundReport {
    std::size_t steps = 0;
    std::vector<std::size_t> violating_steps;  // Z_{t+1} > l Z_t + 1e-9
    std::vector<std::size_t> squaring_steps;   // Z_{t+1} <= Z_t^2 + 1e-12
    double squaring_frequency = 0.0;

    std::size_t violations() const noexcept { return violating_steps.size(); }
};

ZBoundReport z_bound_check(const PathTrace& trace, std::size_t ell);

}  // namespace polarkit
