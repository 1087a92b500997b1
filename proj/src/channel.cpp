#include "polarkit/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "polarkit/error.hpp"
#include "polarkit/numeric.hpp"
#include "polarkit/rng.hpp"

namespace polarkit {

namespace {

constexpr double kRowSumTolerance = 1e-12;
constexpr double kMergeTolerance = 1e-12;
constexpr double kSymmetryTolerance = 1e-12;

double row_sum(std::span<const double> row)
{
    CompensatedSum s;
    for (double v : row)
        s.add(v);
    return s.value();
}

bool is_involution(const Permutation& perm)
{
    for (std::size_t y = 0; y < perm.size(); ++y)
        if (perm[y] >= perm.size() || perm[perm[y]] != y)
            return false;
    return true;
}

bool close_relative(double a, double b)
{
    return std::fabs(a - b) <= kMergeTolerance * std::max(a, b);
}

void require_probability(double p, double hi, const char* what)
{
    if (!(p >= 0.0 && p <= hi))
        throw InvalidArgument(std::string(what) + " out of range: " + std::to_string(p));
}

// Rewrites p1 from p0 through `perm` so that p0[y] == p1[perm[y]] holds
// bit-for-bit. Fixed points get the average of their two entries.
void mirror_rows(std::vector<double>& p0, std::vector<double>& p1, const Permutation& perm)
{
    for (std::size_t y = 0; y < perm.size(); ++y) {
        const std::size_t z = perm[y];
        if (z == y) {
            const double avg = 0.5 * (p0[y] + p1[y]);
            p0[y] = avg;
            p1[y] = avg;
        } else if (y < z) {
            p1[z] = p0[y];
            p1[y] = p0[z];
        }
    }
}

}  // namespace

BinaryChannel::BinaryChannel(std::vector<double> p0, std::vector<double> p1, std::optional<Permutation> symmetry)
    : p0_(std::move(p0)), p1_(std::move(p1)), symmetry_(std::move(symmetry))
{
    if (p0_.empty() || p0_.size() != p1_.size())
        throw InvalidArgument("channel rows must be non-empty and of equal length");
    for (std::size_t y = 0; y < p0_.size(); ++y)
        if (!(p0_[y] >= 0.0) || !(p1_[y] >= 0.0) || !std::isfinite(p0_[y]) || !std::isfinite(p1_[y]))
            throw InvalidArgument("channel probabilities must be finite and non-negative");
    if (std::fabs(row_sum(p0_) - 1.0) > kRowSumTolerance || std::fabs(row_sum(p1_) - 1.0) > kRowSumTolerance)
        throw InvalidArgument("channel rows must each sum to 1");
    if (symmetry_) {
        const Permutation& pi = *symmetry_;
        if (pi.size() != p0_.size() || !is_involution(pi))
            throw InvalidArgument("symmetry witness must be an involution on the outputs");
        for (std::size_t y = 0; y < pi.size(); ++y)
            if (p0_[y] != p1_[pi[y]])
                throw InvalidArgument("symmetry witness does not map W(.|0) onto W(.|1)");
    }
}

bool InfoPair::within_bounds(double tol) const noexcept
{
    return mutual_info * mutual_info + bhattacharyya * bhattacharyya <= 1.0 + tol && mutual_info + bhattacharyya >= 1.0 - tol;
}

BinaryChannel make_bsc(double epsilon)
{
    require_probability(epsilon, 0.5, "BSC crossover");
    return BinaryChannel({1.0 - epsilon, epsilon}, {epsilon, 1.0 - epsilon}, Permutation{1, 0});
}

BinaryChannel make_bec(double epsilon)
{
    require_probability(epsilon, 1.0, "BEC erasure probability");
    return BinaryChannel({1.0 - epsilon, epsilon, 0.0}, {0.0, epsilon, 1.0 - epsilon}, Permutation{2, 1, 0});
}

double symmetric_capacity(const BinaryChannel& w)
{
    CompensatedSum sum;
    for (std::size_t y = 0; y < w.output_count(); ++y) {
        const double a = w.p0()[y];
        const double b = w.p1()[y];
        const double avg = 0.5 * (a + b);
        if (a > 0.0)
            sum.add(0.5 * a * std::log2(a / avg));
        if (b > 0.0)
            sum.add(0.5 * b * std::log2(b / avg));
    }
    return std::clamp(sum.value(), 0.0, 1.0);
}

double bhattacharyya(const BinaryChannel& w)
{
    CompensatedSum sum;
    for (std::size_t y = 0; y < w.output_count(); ++y)
        sum.add(std::sqrt(w.p0()[y] * w.p1()[y]));
    return std::clamp(sum.value(), 0.0, 1.0);
}

InfoPair info_pair(const BinaryChannel& w)
{
    return {symmetric_capacity(w), bhattacharyya(w)};
}

BinaryChannel product_channel(const BinaryChannel& w, std::size_t k, std::size_t cap)
{
    if (k == 0)
        throw InvalidArgument("product_channel needs k >= 1");
    const std::size_t m = w.output_count();
    std::size_t size = 1;
    for (std::size_t j = 0; j < k; ++j) {
        if (size > cap / m)
            throw CapacityError("product channel alphabet exceeds cap of " + std::to_string(cap) + " outputs");
        size *= m;
    }

    std::vector<double> p0{1.0};
    std::vector<double> p1{1.0};
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<double> n0(p0.size() * m);
        std::vector<double> n1(p1.size() * m);
        for (std::size_t idx = 0; idx < p0.size(); ++idx)
            for (std::size_t y = 0; y < m; ++y) {
                n0[idx * m + y] = p0[idx] * w.p0()[y];
                n1[idx * m + y] = p1[idx] * w.p1()[y];
            }
        p0 = std::move(n0);
        p1 = std::move(n1);
    }

    std::optional<Permutation> symmetry;
    if (const auto& pi = w.symmetry()) {
        Permutation composed(size);
        for (std::size_t idx = 0; idx < size; ++idx) {
            std::size_t rest = idx;
            std::size_t image = 0;
            std::size_t weight = 1;
            for (std::size_t j = 0; j < k; ++j) {
                image += (*pi)[rest % m] * weight;
                rest /= m;
                weight *= m;
            }
            composed[idx] = image;
        }
        symmetry = std::move(composed);
    }
    return BinaryChannel(std::move(p0), std::move(p1), std::move(symmetry));
}

BinaryChannel merge_equivalent_outputs(const BinaryChannel& w)
{
    const std::size_t m = w.output_count();
    struct Entry {
        std::size_t y;
        double r;  // posterior of input 0
        double q;  // posterior of input 1
    };
    std::vector<Entry> entries;
    entries.reserve(m);
    for (std::size_t y = 0; y < m; ++y) {
        const double s = w.p0()[y] + w.p1()[y];
        if (s > 0.0)
            entries.push_back({y, w.p0()[y] / s, w.p1()[y] / s});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.r != b.r ? a.r < b.r : a.y < b.y;
    });

    constexpr std::size_t kDropped = static_cast<std::size_t>(-1);
    std::vector<std::size_t> group_of(m, kDropped);
    std::vector<CompensatedSum> s0;
    std::vector<CompensatedSum> s1;
    std::size_t leader = 0;
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const Entry& e = entries[k];
        if (k == 0 || !close_relative(entries[leader].r, e.r) || !close_relative(entries[leader].q, e.q)) {
            leader = k;
            s0.emplace_back();
            s1.emplace_back();
        }
        group_of[e.y] = s0.size() - 1;
        s0.back().add(w.p0()[e.y]);
        s1.back().add(w.p1()[e.y]);
    }

    const std::size_t groups = s0.size();
    std::vector<double> p0(groups);
    std::vector<double> p1(groups);
    for (std::size_t g = 0; g < groups; ++g) {
        p0[g] = s0[g].value();
        p1[g] = s1[g].value();
    }

    if (!w.symmetry())
        return BinaryChannel(std::move(p0), std::move(p1));

    // Mirror map on groups induced by the input witness; it must be a
    // well-defined involution for the witness to carry over.
    const Permutation& pi = *w.symmetry();
    Permutation mirror(groups, kDropped);
    bool consistent = true;
    for (std::size_t y = 0; y < m && consistent; ++y) {
        if (group_of[y] == kDropped)
            continue;
        const std::size_t image = group_of[pi[y]];
        std::size_t& slot = mirror[group_of[y]];
        if (image == kDropped || (slot != kDropped && slot != image))
            consistent = false;
        else
            slot = image;
    }
    consistent = consistent && is_involution(mirror);

    if (!consistent) {
        BinaryChannel unwitnessed(p0, p1);
        auto found = is_symmetric(unwitnessed);
        if (!found)
            return unwitnessed;
        mirror = std::move(*found);
    }
    mirror_rows(p0, p1, mirror);
    return BinaryChannel(std::move(p0), std::move(p1), std::move(mirror));
}

double binary_entropy(double p)
{
    require_probability(p, 1.0, "entropy argument");
    if (p == 0.0 || p == 1.0)
        return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double inverse_binary_entropy(double t)
{
    require_probability(t, 1.0, "inverse entropy argument");
    if (t == 0.0)
        return 0.0;
    if (t == 1.0)
        return 0.5;
    double lo = 0.0;
    double hi = 0.5;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (binary_entropy(mid) < t)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double bsc_pair_capacity(double epsilon)
{
    require_probability(epsilon, 0.5, "BSC crossover");
    return 1.0 + binary_entropy(2.0 * epsilon * (1.0 - epsilon)) - 2.0 * binary_entropy(epsilon);
}

double capacity_gap_lower_bound(double capacity)
{
    if (!(capacity > 0.0 && capacity < 1.0))
        throw InvalidArgument("capacity_gap_lower_bound needs capacity in (0, 1)");
    const double eps = inverse_binary_entropy(1.0 - capacity);
    return binary_entropy(2.0 * eps * (1.0 - eps)) - binary_entropy(eps);
}

BinaryChannel random_symmetric_channel(std::uint64_t seed, std::size_t subchannel_count)
{
    if (subchannel_count == 0)
        throw InvalidArgument("random_symmetric_channel needs at least one sub-channel");
    CounterRng rng(seed);
    std::vector<double> weights(subchannel_count);
    std::vector<double> crossovers(subchannel_count);
    for (std::size_t j = 0; j < subchannel_count; ++j) {
        // Normalized unit exponentials are uniform on the simplex.
        weights[j] = -std::log1p(-rng.uniform());
        crossovers[j] = 0.5 * rng.uniform();
    }
    CompensatedSum total;
    for (double v : weights)
        total.add(v);
    const double norm = total.value();

    std::vector<double> p0(2 * subchannel_count);
    std::vector<double> p1(2 * subchannel_count);
    Permutation flip(2 * subchannel_count);
    for (std::size_t j = 0; j < subchannel_count; ++j) {
        const double q = weights[j] / norm;
        const double eps = crossovers[j];
        p0[2 * j] = q * (1.0 - eps);
        p0[2 * j + 1] = q * eps;
        p1[2 * j] = q * eps;
        p1[2 * j + 1] = q * (1.0 - eps);
        flip[2 * j] = 2 * j + 1;
        flip[2 * j + 1] = 2 * j;
    }
    return BinaryChannel(std::move(p0), std::move(p1), std::move(flip));
}

std::optional<Permutation> is_symmetric(const BinaryChannel& w)
{
    const std::size_t m = w.output_count();
    const auto p0 = w.p0();
    const auto p1 = w.p1();
    std::vector<std::size_t> by_p0(m);
    std::iota(by_p0.begin(), by_p0.end(), 0);
    std::vector<std::size_t> by_p1 = by_p0;
    std::sort(by_p0.begin(), by_p0.end(), [&](std::size_t a, std::size_t b) {
        if (p0[a] != p0[b])
            return p0[a] < p0[b];
        if (p1[a] != p1[b])
            return p1[a] < p1[b];
        return a < b;
    });
    std::sort(by_p1.begin(), by_p1.end(), [&](std::size_t a, std::size_t b) {
        if (p1[a] != p1[b])
            return p1[a] < p1[b];
        if (p0[a] != p0[b])
            return p0[a] < p0[b];
        return a < b;
    });

    Permutation pi(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t y = by_p0[k];
        const std::size_t z = by_p1[k];
        if (std::fabs(p0[y] - p1[z]) > kSymmetryTolerance || std::fabs(p1[y] - p0[z]) > kSymmetryTolerance)
            return std::nullopt;
        pi[y] = z;
    }
    if (!is_involution(pi))
        return std::nullopt;
    return pi;
}

std::optional<BinaryChannel> with_symmetry(const BinaryChannel& w)
{
    if (w.symmetry())
        return w;
    auto pi = is_symmetric(w);
    if (!pi)
        return std::nullopt;
    std::vector<double> p0(w.p0().begin(), w.p0().end());
    std::vector<double> p1(w.p1().begin(), w.p1().end());
    mirror_rows(p0, p1, *pi);
    return BinaryChannel(std::move(p0), std::move(p1), std::move(*pi));
}

std::optional<double> as_bec(const BinaryChannel& w)
{
    CompensatedSum erasure0;
    CompensatedSum erasure1;
    CompensatedSum clear0;
    CompensatedSum clear1;
    for (std::size_t y = 0; y < w.output_count(); ++y) {
        const double a = w.p0()[y];
        const double b = w.p1()[y];
        if (b == 0.0)
            clear0.add(a);
        else if (a == 0.0)
            clear1.add(b);
        else if (close_relative(a, b)) {
            erasure0.add(a);
            erasure1.add(b);
        } else
            return std::nullopt;
    }
    const double eps = erasure0.value();
    if (std::fabs(eps - erasure1.value()) > kSymmetryTolerance || std::fabs(clear0.value() - clear1.value()) > kSymmetryTolerance)
        return std::nullopt;
    return std::clamp(eps, 0.0, 1.0);
}

}  // namespace polarkit
