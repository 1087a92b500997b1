#include "polarkit/split.hpp"

#include <cmath>
#include <string>

#include "polarkit/error.hpp"
#include "polarkit/numeric.hpp"

namespace polarkit {

namespace {

std::size_t checked_alphabet(std::size_t m, std::size_t l, std::size_t prefix_bits, std::size_t cap)
{
    std::size_t size = 1;
    for (std::size_t j = 0; j < l + prefix_bits; ++j) {
        const std::size_t factor = j < l ? m : 2;
        if (size > cap / factor)
            throw CapacityError("split output alphabet exceeds cap of " + std::to_string(cap) + " outputs");
        size *= factor;
    }
    return size;
}

BinaryChannel require_symmetry(const BinaryChannel& w)
{
    if (auto witnessed = with_symmetry(w))
        return std::move(*witnessed);
    throw PreconditionError("channel splitting without conditioning outputs requires a symmetric channel");
}

// Codewords (u G) for u = (prefix, b, v) as v runs over the free inputs
// after position i; `base` is the contribution of (prefix, b).
std::vector<std::uint64_t> coset(const BitMatrix& g, std::uint64_t base, std::size_t i)
{
    const std::size_t free = g.rows() - 1 - i;
    std::vector<std::uint64_t> words(std::size_t{1} << free);
    for (std::size_t v = 0; v < words.size(); ++v) {
        std::uint64_t x = base;
        for (std::size_t t = 0; t < free; ++t)
            if ((v >> t) & 1U)
                x ^= g.row_mask(i + 1 + t);
        words[v] = x;
    }
    return words;
}

// Walks y_1^l in row-major order (first coordinate most significant),
// accumulating sum over the coset of prod_j W(y_j | x_j).
class TupleWalker {
public:
    TupleWalker(const BinaryChannel& w, std::size_t l) : w_(w), digits_(l, 0) {}

    double marginal(const std::vector<std::uint64_t>& codewords) const
    {
        CompensatedSum sum;
        for (std::uint64_t x : codewords) {
            double term = 1.0;
            for (std::size_t j = 0; j < digits_.size(); ++j)
                term *= w_.likelihood(static_cast<unsigned>((x >> j) & 1U), digits_[j]);
            sum.add(term);
        }
        return sum.value();
    }

    // Index of the tuple with the witness applied on coordinates in `support`.
    std::size_t mirrored_index(const Permutation& pi, std::uint64_t support) const
    {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < digits_.size(); ++j) {
            const std::size_t d = ((support >> j) & 1U) ? pi[digits_[j]] : digits_[j];
            idx = idx * w_.output_count() + d;
        }
        return idx;
    }

    void advance()
    {
        for (std::size_t j = digits_.size(); j-- > 0;) {
            if (++digits_[j] < w_.output_count())
                return;
            digits_[j] = 0;
        }
    }

private:
    const BinaryChannel& w_;
    std::vector<std::size_t> digits_;
};

BitMatrix diagonal_form(const BitMatrix& g, std::size_t i)
{
    if (!g.square() || g.rows() > 64)
        throw InvalidArgument("kernel must be square with at most 64 rows");
    if (i >= g.rows())
        throw InvalidArgument("channel index " + std::to_string(i) + " out of range");
    return permute_columns(g, unit_diagonalize(g));
}

}  // namespace

BinaryChannel split_tilde(const BinaryChannel& input, const BitMatrix& g, std::size_t i, std::size_t cap)
{
    const BitMatrix gd = diagonal_form(g, i);
    const BinaryChannel w = require_symmetry(input);
    const Permutation& pi = *w.symmetry();
    const std::size_t l = gd.rows();
    const std::size_t total = checked_alphabet(w.output_count(), l, 0, cap);

    const std::uint64_t row = gd.row_mask(i);
    const auto zero_coset = coset(gd, 0, i);
    const auto one_coset = coset(gd, row, i);
    const double scale = std::ldexp(1.0, -static_cast<int>(l - 1 - i));

    std::vector<double> p0(total);
    std::vector<double> p1(total);
    Permutation mirror(total);
    TupleWalker walker(w, l);
    for (std::size_t y = 0; y < total; ++y) {
        p0[y] = walker.marginal(zero_coset) * scale;
        p1[y] = walker.marginal(one_coset) * scale;
        mirror[y] = walker.mirrored_index(pi, row);
        walker.advance();
    }
    return merge_equivalent_outputs(BinaryChannel(std::move(p0), std::move(p1), std::move(mirror)));
}

BinaryChannel split_joint(const BinaryChannel& w, const BitMatrix& g, std::size_t i, std::size_t cap)
{
    const BitMatrix gd = diagonal_form(g, i);
    const std::size_t l = gd.rows();
    const std::size_t block = checked_alphabet(w.output_count(), l, 0, cap);
    const std::size_t total = checked_alphabet(w.output_count(), l, i, cap);
    const double scale = std::ldexp(1.0, -static_cast<int>(l - 1));
    const std::uint64_t row = gd.row_mask(i);

    std::vector<double> p0(total);
    std::vector<double> p1(total);
    std::optional<Permutation> mirror;
    if (w.symmetry())
        mirror.emplace(total);

    for (std::size_t prefix = 0; prefix < (std::size_t{1} << i); ++prefix) {
        std::uint64_t base = 0;
        for (std::size_t t = 0; t < i; ++t)
            if ((prefix >> t) & 1U)
                base ^= gd.row_mask(t);
        const auto zero_coset = coset(gd, base, i);
        const auto one_coset = coset(gd, base ^ row, i);
        TupleWalker walker(w, l);
        for (std::size_t y = 0; y < block; ++y) {
            const std::size_t out = prefix * block + y;
            p0[out] = walker.marginal(zero_coset) * scale;
            p1[out] = walker.marginal(one_coset) * scale;
            if (mirror)
                (*mirror)[out] = prefix * block + walker.mirrored_index(*w.symmetry(), row);
            walker.advance();
        }
    }
    return BinaryChannel(std::move(p0), std::move(p1), std::move(mirror));
}

SplitResult split_all(const BinaryChannel& w, const BitMatrix& g, std::size_t cap)
{
    SplitResult result;
    result.column_perm = unit_diagonalize(g);
    const std::size_t l = g.rows();
    CompensatedSum total;
    for (std::size_t i = 0; i < l; ++i) {
        result.subchannels.push_back(split_tilde(w, g, i, cap));
        result.info.push_back(info_pair(result.subchannels.back()));
        total.add(result.info.back().mutual_info);
    }
    if (std::fabs(total.value() / static_cast<double>(l) - symmetric_capacity(w)) > 1e-9)
        throw Error("chain rule violated by split: mean I^(i) differs from I(W)");
    return result;
}

std::vector<InfoPair> recursive_polarize(const BinaryChannel& w, std::span<const BitMatrix> kernels, std::size_t cap)
{
    std::vector<BinaryChannel> level{w};
    for (std::size_t t = 0; t < kernels.size(); ++t) {
        std::vector<BinaryChannel> next;
        next.reserve(level.size() * kernels[t].rows());
        try {
            for (const auto& channel : level) {
                auto split = split_all(channel, kernels[t], cap);
                for (auto& sub : split.subchannels)
                    next.push_back(std::move(sub));
            }
        } catch (const CapacityError& e) {
            throw CapacityError(std::string(e.what()) + " at level " + std::to_string(t + 1), t);
        }
        level = std::move(next);
    }
    std::vector<InfoPair> leaves;
    leaves.reserve(level.size());
    for (const auto& channel : level)
        leaves.push_back(info_pair(channel));
    return leaves;
}

std::vector<InfoPair> recursive_polarize(const BinaryChannel& w, const BitMatrix& g, std::size_t levels, std::size_t cap)
{
    std::vector<BitMatrix> kernels(levels, g);
    return recursive_polarize(w, kernels, cap);
}

}  // namespace polarkit
