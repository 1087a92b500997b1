#pragma once

// Brute-force reference computations used only by the tests. Nothing here
// calls into the code paths it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "polarkit/channel.hpp"
#include "polarkit/gf2.hpp"

namespace oracle {

using polarkit::BinaryChannel;
using polarkit::BitMatrix;

struct Measures {
    double info;
    double z;
};

inline Measures measures(const std::vector<double>& p0, const std::vector<double>& p1)
{
    double info = 0.0;
    double z = 0.0;
    for (std::size_t y = 0; y < p0.size(); ++y) {
        const double m = 0.5 * (p0[y] + p1[y]);
        if (p0[y] > 0)
            info += 0.5 * p0[y] * std::log2(p0[y] / m);
        if (p1[y] > 0)
            info += 0.5 * p1[y] * std::log2(p1[y] / m);
        z += std::sqrt(p0[y] * p1[y]);
    }
    return {info, z};
}

inline std::vector<int> times(const std::vector<int>& u, const BitMatrix& g)
{
    std::vector<int> x(g.cols(), 0);
    for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t c = 0; c < g.cols(); ++c)
            x[c] ^= u[r] & static_cast<int>(g.get(r, c));
    return x;
}

/// W^(i) (0-based i) straight from its definition: enumerate every input
/// vector u, every output tuple, and accumulate into (y, u_0..u_{i-1}).
inline Measures joint_split(const BinaryChannel& w, const BitMatrix& g, std::size_t i)
{
    const std::size_t l = g.rows();
    const std::size_t m = w.output_count();
    std::size_t tuples = 1;
    for (std::size_t j = 0; j < l; ++j)
        tuples *= m;
    const std::size_t outputs = tuples << i;
    std::vector<double> p0(outputs, 0.0);
    std::vector<double> p1(outputs, 0.0);
    for (std::size_t bits = 0; bits < (std::size_t{1} << l); ++bits) {
        std::vector<int> u(l);
        for (std::size_t j = 0; j < l; ++j)
            u[j] = static_cast<int>((bits >> j) & 1U);
        const auto x = times(u, g);
        std::size_t prefix = bits & ((std::size_t{1} << i) - 1);
        for (std::size_t y = 0; y < tuples; ++y) {
            double prob = 1.0;
            std::size_t rest = y;
            for (std::size_t j = l; j-- > 0;) {
                prob *= w.likelihood(static_cast<unsigned>(x[j]), rest % m);
                rest /= m;
            }
            auto& row = u[i] ? p1 : p0;
            row[prefix * tuples + y] += prob / std::ldexp(1.0, static_cast<int>(l - 1));
        }
    }
    return measures(p0, p1);
}

/// Is u_i (0-based) determined by the unerased coordinates of x = uG when
/// u_0..u_{i-1} are zero? Compares all completions pairwise.
inline bool recoverable(const BitMatrix& g, std::size_t i, std::uint64_t unerased)
{
    const std::size_t l = g.rows();
    const std::size_t free = l - i;
    std::vector<std::pair<std::uint64_t, int>> seen;
    for (std::size_t v = 0; v < (std::size_t{1} << free); ++v) {
        std::vector<int> u(l, 0);
        for (std::size_t t = 0; t < free; ++t)
            u[i + t] = static_cast<int>((v >> t) & 1U);
        const auto x = times(u, g);
        std::uint64_t visible = 0;
        for (std::size_t j = 0; j < l; ++j)
            if ((unerased >> j) & 1U)
                visible |= static_cast<std::uint64_t>(x[j]) << j;
        seen.emplace_back(visible, u[i]);
    }
    for (const auto& a : seen)
        for (const auto& b : seen)
            if (a.first == b.first && a.second != b.second)
                return false;
    return true;
}

inline bool invertible(const BitMatrix& g)
{
    // Injective on all 2^l inputs.
    const std::size_t l = g.rows();
    std::vector<bool> hit(std::size_t{1} << l, false);
    for (std::size_t bits = 0; bits < hit.size(); ++bits) {
        std::vector<int> u(l);
        for (std::size_t j = 0; j < l; ++j)
            u[j] = static_cast<int>((bits >> j) & 1U);
        const auto x = times(u, g);
        std::size_t key = 0;
        for (std::size_t j = 0; j < l; ++j)
            key |= static_cast<std::size_t>(x[j]) << j;
        if (hit[key])
            return false;
        hit[key] = true;
    }
    return true;
}

inline BitMatrix from_code(std::size_t l, std::uint64_t code)
{
    BitMatrix g(l, l);
    for (std::size_t r = 0; r < l; ++r)
        for (std::size_t c = 0; c < l; ++c)
            g.set(r, c, (code >> (r * l + c)) & 1U);
    return g;
}

inline std::vector<BitMatrix> all_invertible(std::size_t l)
{
    std::vector<BitMatrix> out;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << (l * l)); ++code) {
        BitMatrix g = from_code(l, code);
        if (invertible(g))
            out.push_back(std::move(g));
    }
    return out;
}

// One representative per column-permutation class: columns sorted.
inline std::vector<BitMatrix> invertible_up_to_column_permutation(std::size_t l)
{
    std::vector<BitMatrix> out;
    for (auto& g : all_invertible(l)) {
        bool sorted = true;
        for (std::size_t c = 0; c + 1 < l && sorted; ++c) {
            std::uint64_t a = 0, b = 0;
            for (std::size_t r = 0; r < l; ++r) {
                a = (a << 1) | g.get(r, c);
                b = (b << 1) | g.get(r, c + 1);
            }
            sorted = a < b;
        }
        if (sorted)
            out.push_back(std::move(g));
    }
    return out;
}

inline bool permutable_to_upper_triangular(const BitMatrix& g)
{
    const std::size_t l = g.rows();
    std::vector<std::size_t> perm(l);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool upper = true;
        for (std::size_t r = 0; r < l && upper; ++r)
            for (std::size_t c = 0; c < r && upper; ++c)
                upper = !g.get(r, perm[c]);
        for (std::size_t r = 0; r < l && upper; ++r)
            upper = g.get(r, perm[r]);
        if (upper)
            return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

}  // namespace oracle
