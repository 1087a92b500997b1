#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "polarkit/gf2.hpp"

namespace polarkit {

// Largest number of leaves bec_polarize will materialize.
inline constexpr std::size_t kLeafCap = 10'000'000;

/// Erasure probability of synthesized channel i for BEC(eps), by direct
/// enumeration of the 2^l erasure patterns: u_i is erased exactly when it is
/// not recoverable from the unerased coordinates given u_0..u_{i-1}.
double bec_split_one(const BitMatrix& g, std::size_t i, double eps);
std::vector<double> bec_split_all(const BitMatrix& g, double eps);

/// Precomputed recoverability table for one kernel: for every index i and
/// erasure count e, the number of size-e erasure patterns that leave u_i
/// undetermined. Evaluating a split is then O(l^2) per index.
class BecKernel {
public:
    explicit BecKernel(const BitMatrix& g);

    std::size_t size() const noexcept { return l_; }
    void split(double eps, std::span<double> out) const;

private:
    std::size_t l_;
    std::vector<std::vector<double>> unrecoverable_;
};

/// Leaf erasure probabilities after `level()` splitting levels. Leaf index
/// digits are most significant first; digit t is the branch taken at level
/// t with a kernel of size radices[t].
struct ErasureVector {
    std::vector<std::size_t> radices;
    std::vector<double> eps;

    std::size_t level() const noexcept { return radices.size(); }
    std::size_t size() const noexcept { return eps.size(); }
    double mean() const;
};

ErasureVector bec_initial(double eps0);
ErasureVector bec_step(const ErasureVector& parent, const BitMatrix& g);
ErasureVector bec_polarize(const BitMatrix& g, double eps0, std::size_t levels);
ErasureVector bec_polarize(std::span<const BitMatrix> kernels, double eps0);

// Base-l digits of `leaf`, most significant first, e.g. "0112".
std::string path_digits(const ErasureVector& v, std::size_t leaf);

// Fraction of leaves with I = 1 - eps strictly inside (delta, 1 - delta).
double polarization_fraction(const ErasureVector& v, double delta);

// Fraction of leaves with eps <= 2^(-N^beta), N the number of leaves.
double rate_statistic(const ErasureVector& v, double beta);

}  // namespace polarkit
