#pragma once

#include <span>
#include <string>
#include <vector>

#include "polarkit/bec.hpp"
#include "polarkit/io.hpp"
#include "polarkit/polar_code.hpp"
#include "polarkit/split.hpp"
#include "polarkit/tree.hpp"

namespace polarkit {

inline constexpr const char* kCsvHeader = "# polarkit-csv v1\n";

// Shortest round-trip decimal form, locale independent.
std::string format_double(double v);

struct PolarizationLevel {
    std::size_t level = 0;
    double fraction_mid = 0.0;
    double rate_stat = 0.0;
    double mean_eps = 0.0;
};

/// Exact BEC evolution through every prefix of `kernels`; levels[t] holds
/// the leaves after t splitting levels (levels[0] is the single root).
std::vector<ErasureVector> bec_levels(std::span<const BitMatrix> kernels, double eps0);
std::vector<PolarizationLevel> summarize_levels(std::span<const ErasureVector> levels, double delta, double beta);

// Leaf rows (leaf_index, path_digits, eps, I, Z) followed by a per-level summary block.
std::string polarize_csv(const ErasureVector& leaves, std::span<const PolarizationLevel> summary);
std::string polarize_leaves_csv(std::span<const InfoPair> leaves, std::span<const std::size_t> radices);
std::string split_csv(const SplitResult& split);
std::string tree_csv(std::span<const PathTrace> traces);
Json ensemble_json(const EnsembleSummary& summary, const std::vector<ZBoundReport>& bounds);
std::string simulation_csv(const SimulationStats& stats);
Json simulation_json(const SimulationStats& stats);

/// Self-contained SVG: one histogram panel per level of the leaf mutual
/// informations, 20 bins on [0, 1], bar height = fraction of leaves.
std::string histogram_svg(std::span<const std::vector<double>> info_per_level, const std::string& title,
                          bool non_polarizing);

}  // namespace polarkit
