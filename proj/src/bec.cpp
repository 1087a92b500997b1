#include "polarkit/bec.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <unordered_map>

#include "polarkit/error.hpp"
#include "polarkit/numeric.hpp"

namespace polarkit {

namespace {

void require_erasure(double eps)
{
    if (!(eps >= 0.0 && eps <= 1.0))
        throw InvalidArgument("erasure probability out of range: " + std::to_string(eps));
}

void require_bec_kernel(const BitMatrix& g)
{
    if (!g.square() || g.rows() > 20)
        throw InvalidArgument("BEC evolution supports square kernels up to 20x20");
    if (!is_invertible(g))
        throw PreconditionError("kernel is not invertible over GF(2)");
}

std::uint64_t full_mask(std::size_t l) { return l == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << l) - 1; }

}  // namespace

double bec_split_one(const BitMatrix& g, std::size_t i, double eps)
{
    require_bec_kernel(g);
    require_erasure(eps);
    if (i >= g.rows())
        throw InvalidArgument("channel index out of range");
    const std::size_t l = g.rows();
    CompensatedSum total;
    for (std::uint64_t erased = 0; erased <= full_mask(l); ++erased) {
        if (is_recoverable(g, i, full_mask(l) & ~erased))
            continue;
        const int e = std::popcount(erased);
        total.add(std::pow(eps, e) * std::pow(1.0 - eps, static_cast<int>(l) - e));
    }
    return total.value();
}

std::vector<double> bec_split_all(const BitMatrix& g, double eps)
{
    std::vector<double> out(g.rows());
    for (std::size_t i = 0; i < g.rows(); ++i)
        out[i] = bec_split_one(g, i, eps);
    return out;
}

BecKernel::BecKernel(const BitMatrix& g) : l_(g.rows()), unrecoverable_(g.rows(), std::vector<double>(g.rows() + 1, 0.0))
{
    require_bec_kernel(g);
    for (std::size_t i = 0; i < l_; ++i)
        for (std::uint64_t erased = 0; erased <= full_mask(l_); ++erased)
            if (!is_recoverable(g, i, full_mask(l_) & ~erased))
                unrecoverable_[i][static_cast<std::size_t>(std::popcount(erased))] += 1.0;
}

void BecKernel::split(double eps, std::span<double> out) const
{
    std::vector<double> erased_pow(l_ + 1, 1.0);
    std::vector<double> clear_pow(l_ + 1, 1.0);
    for (std::size_t e = 1; e <= l_; ++e) {
        erased_pow[e] = erased_pow[e - 1] * eps;
        clear_pow[e] = clear_pow[e - 1] * (1.0 - eps);
    }
    for (std::size_t i = 0; i < l_; ++i) {
        CompensatedSum sum;
        for (std::size_t e = 0; e <= l_; ++e)
            if (unrecoverable_[i][e] != 0.0)
                sum.add(unrecoverable_[i][e] * erased_pow[e] * clear_pow[l_ - e]);
        out[i] = std::min(sum.value(), 1.0);
    }
}

double ErasureVector::mean() const
{
    CompensatedSum sum;
    for (double e : eps)
        sum.add(e);
    return sum.value() / static_cast<double>(eps.size());
}

ErasureVector bec_initial(double eps0)
{
    require_erasure(eps0);
    return ErasureVector{{}, {eps0}};
}

ErasureVector bec_step(const ErasureVector& parent, const BitMatrix& g)
{
    const BecKernel kernel(g);
    const std::size_t l = kernel.size();
    if (parent.size() > kLeafCap / l)
        throw CapacityError("BEC evolution exceeds " + std::to_string(kLeafCap) + " leaves", parent.level());

    ErasureVector child;
    child.radices = parent.radices;
    child.radices.push_back(l);
    child.eps.resize(parent.size() * l);

    // Leaves with bit-identical erasure probabilities share one evaluation.
    std::unordered_map<std::uint64_t, std::size_t> seen;
    for (std::size_t p = 0; p < parent.size(); ++p) {
        std::uint64_t key;
        std::memcpy(&key, &parent.eps[p], sizeof key);
        const auto [it, fresh] = seen.try_emplace(key, p);
        std::span<double> out(child.eps.data() + p * l, l);
        if (fresh)
            kernel.split(parent.eps[p], out);
        else
            std::copy_n(child.eps.begin() + static_cast<std::ptrdiff_t>(it->second * l), l, out.begin());
    }
    return child;
}

ErasureVector bec_polarize(std::span<const BitMatrix> kernels, double eps0)
{
    ErasureVector v = bec_initial(eps0);
    for (const auto& g : kernels)
        v = bec_step(v, g);
    return v;
}

ErasureVector bec_polarize(const BitMatrix& g, double eps0, std::size_t levels)
{
    std::vector<BitMatrix> kernels(levels, g);
    return bec_polarize(kernels, eps0);
}

std::string path_digits(const ErasureVector& v, std::size_t leaf)
{
    std::string digits(v.level(), '0');
    for (std::size_t t = v.level(); t-- > 0;) {
        const std::size_t d = leaf % v.radices[t];
        digits[t] = static_cast<char>(d < 10 ? '0' + d : 'a' + (d - 10));
        leaf /= v.radices[t];
    }
    return digits;
}

double polarization_fraction(const ErasureVector& v, double delta)
{
    if (!(delta > 0.0 && delta < 0.5))
        throw InvalidArgument("delta must lie in (0, 1/2)");
    std::size_t mid = 0;
    for (double e : v.eps) {
        const double info = 1.0 - e;
        if (info > delta && info < 1.0 - delta)
            ++mid;
    }
    return static_cast<double>(mid) / static_cast<double>(v.size());
}

double rate_statistic(const ErasureVector& v, double beta)
{
    if (!(beta > 0.0))
        throw InvalidArgument("beta must be positive");
    // eps <= 2^(-N^beta), compared in the log domain so tiny thresholds do not underflow.
    const double exponent = std::pow(static_cast<double>(v.size()), beta);
    std::size_t good = 0;
    for (double e : v.eps)
        if (e == 0.0 || std::log2(e) <= -exponent)
            ++good;
    return static_cast<double>(good) / static_cast<double>(v.size());
}

}  // namespace polarkit
