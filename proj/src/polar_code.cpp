#include "polarkit/polar_code.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "polarkit/bec.hpp"
#include "polarkit/error.hpp"
#include "polarkit/numeric.hpp"
#include "polarkit/parallel.hpp"
#include "polarkit/rng.hpp"

namespace polarkit {

namespace {

std::size_t blocklength(std::span<const BitMatrix> kernels)
{
    std::size_t n = 1;
    for (const auto& g : kernels) {
        if (!g.square() || g.rows() < 2 || g.rows() > 16)
            throw InvalidArgument("code kernels must be square, between 2x2 and 16x16");
        if (n > kLeafCap / g.rows())
            throw CapacityError("blocklength exceeds " + std::to_string(kLeafCap));
        n *= g.rows();
    }
    return n;
}

// Per-kernel tables for the decoder: rows as masks and, for each child a,
// the codeword contributions of every completion of the inputs after a.
struct KernelTables {
    std::size_t l = 0;
    std::vector<std::uint64_t> rows;
    std::vector<std::vector<std::uint64_t>> completions;

    explicit KernelTables(const BitMatrix& g) : l(g.rows()), rows(g.rows()), completions(g.rows())
    {
        for (std::size_t a = 0; a < l; ++a)
            rows[a] = g.row_mask(a);
        for (std::size_t a = 0; a < l; ++a) {
            const std::size_t free = l - 1 - a;
            auto& list = completions[a];
            list.resize(std::size_t{1} << free);
            for (std::size_t w = 0; w < list.size(); ++w) {
                std::uint64_t x = 0;
                for (std::size_t t = 0; t < free; ++t)
                    if ((w >> t) & 1U)
                        x ^= rows[a + 1 + t];
                list[w] = x;
            }
        }
    }
};

class ScDecoder {
public:
    ScDecoder(const PolarCode& code, const DecodeOptions& options) : code_(code), options_(options)
    {
        const auto& kernels = code.kernels();
        levels_ = kernels.size();
        sizes_.assign(levels_ + 1, 1);
        for (std::size_t t = levels_; t-- > 0;)
            sizes_[t] = sizes_[t + 1] * kernels[t].rows();
        for (const auto& g : kernels)
            tables_.emplace_back(g);
        belief_.resize(levels_ + 1);
        decided_.resize(levels_ + 1);
        children_.resize(levels_ + 1);
        for (std::size_t t = 0; t <= levels_; ++t) {
            belief_[t].resize(sizes_[t]);
            decided_[t].resize(sizes_[t]);
            children_[t].resize(sizes_[t]);
        }
        u_hat_.assign(code.length(), 0);
    }

    DecodeResult run(std::span<const LikelihoodPair> channel)
    {
        for (std::size_t k = 0; k < channel.size(); ++k)
            belief_[0][k] = normalized(channel[k].p0, channel[k].p1);
        decode_node(0, 0);
        DecodeResult result;
        result.message.reserve(code_.message_length());
        for (std::size_t idx : code_.information_set())
            result.message.push_back(u_hat_[idx]);
        result.u_hat = std::move(u_hat_);
        result.genie_first_error = first_error_;
        return result;
    }

private:
    static LikelihoodPair normalized(double p0, double p1)
    {
        const double s = p0 + p1;
        if (!(s > 0.0) || !std::isfinite(s))
            return {0.5, 0.5};
        return {p0 / s, p1 / s};
    }

    void decide_leaf(std::size_t index)
    {
        const LikelihoodPair& b = belief_[levels_][0];
        if (options_.leaf_beliefs)
            (*options_.leaf_beliefs)[index] = b;
        std::uint8_t bit;
        if (code_.frozen_mask()[index]) {
            bit = code_.frozen_values()[index];
        } else {
            bit = b.p1 > b.p0 ? 1 : 0;
            if (!options_.genie.empty()) {
                if (bit != options_.genie[index] && !first_error_)
                    first_error_ = index;
                bit = options_.genie[index];
            }
        }
        u_hat_[index] = bit;
        decided_[levels_][0] = bit;
    }

    void decode_node(std::size_t t, std::size_t u_offset)
    {
        if (t == levels_) {
            decide_leaf(u_offset);
            return;
        }
        const KernelTables& k = tables_[t];
        const std::size_t m = sizes_[t + 1];
        const auto& in = belief_[t];
        auto& kids = children_[t];

        for (std::size_t a = 0; a < k.l; ++a) {
            const auto& completions = k.completions[a];
            for (std::size_t b = 0; b < m; ++b) {
                std::uint64_t prefix = 0;
                for (std::size_t c = 0; c < a; ++c)
                    if (kids[c * m + b])
                        prefix ^= k.rows[c];
                double q[2] = {0.0, 0.0};
                for (unsigned v = 0; v < 2; ++v) {
                    const std::uint64_t head = v ? prefix ^ k.rows[a] : prefix;
                    for (std::uint64_t tail : completions) {
                        const std::uint64_t x = head ^ tail;
                        double term = 1.0;
                        for (std::size_t j = 0; j < k.l; ++j) {
                            const LikelihoodPair& p = in[j * m + b];
                            term *= ((x >> j) & 1U) ? p.p1 : p.p0;
                        }
                        q[v] += term;
                    }
                }
                if (options_.counter)
                    options_.counter->ops += 2 * completions.size() * k.l;
                belief_[t + 1][b] = normalized(q[0], q[1]);
            }
            decode_node(t + 1, u_offset + a * m);
            std::copy_n(decided_[t + 1].begin(), m, kids.begin() + static_cast<std::ptrdiff_t>(a * m));
        }

        // Re-encode the decided children into this node's codeword.
        auto& out = decided_[t];
        for (std::size_t b = 0; b < m; ++b) {
            std::uint64_t x = 0;
            for (std::size_t a = 0; a < k.l; ++a)
                if (kids[a * m + b])
                    x ^= k.rows[a];
            for (std::size_t j = 0; j < k.l; ++j)
                out[j * m + b] = static_cast<std::uint8_t>((x >> j) & 1U);
        }
        if (options_.counter)
            options_.counter->ops += 2 * m * k.l;
    }

    const PolarCode& code_;
    const DecodeOptions& options_;
    std::size_t levels_ = 0;
    std::vector<std::size_t> sizes_;
    std::vector<KernelTables> tables_;
    std::vector<std::vector<LikelihoodPair>> belief_;
    std::vector<Bits> decided_;   // re-encoded codeword of the active node per level
    std::vector<Bits> children_;  // decided child codewords of the active node per level
    Bits u_hat_;
    std::optional<std::size_t> first_error_;
};

}  // namespace

std::vector<double> design_reliabilities(std::span<const BitMatrix> kernels, const Design& design)
{
    const std::size_t n = blocklength(kernels);
    if (design.kind == Design::Kind::Bec)
        return bec_polarize(kernels, design.eps).eps;
    if (design.z.size() != n)
        throw InvalidArgument("explicit design has " + std::to_string(design.z.size()) + " entries, blocklength is " +
                              std::to_string(n));
    for (double z : design.z)
        if (!(z >= 0.0 && z <= 1.0))
            throw InvalidArgument("design Z values must lie in [0, 1]");
    return design.z;
}

PolarCode::PolarCode(std::vector<BitMatrix> kernels, Bits frozen_mask, std::vector<double> design_z, Design design)
    : kernels_(std::move(kernels)),
      frozen_mask_(std::move(frozen_mask)),
      design_z_(std::move(design_z)),
      design_(std::move(design))
{
    const std::size_t n = blocklength(kernels_);
    for (const auto& g : kernels_)
        if (!is_invertible(g))
            throw PreconditionError("code kernel is not invertible over GF(2)");
    if (frozen_mask_.size() != n || design_z_.size() != n)
        throw InvalidArgument("frozen mask and design vector must have blocklength " + std::to_string(n) + " entries");
    frozen_values_.assign(n, 0);

    double worst_unfrozen = -1.0;
    double best_frozen = 2.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (frozen_mask_[i] > 1)
            throw InvalidArgument("frozen mask entries must be 0 or 1");
        if (frozen_mask_[i])
            best_frozen = std::min(best_frozen, design_z_[i]);
        else {
            worst_unfrozen = std::max(worst_unfrozen, design_z_[i]);
            information_set_.push_back(i);
        }
    }
    if (worst_unfrozen > best_frozen)
        throw InvalidArgument("frozen set does not follow the design: an unfrozen index is less reliable than a frozen one");
}

PolarCode PolarCode::construct(std::vector<BitMatrix> kernels, const Design& design, std::size_t message_bits)
{
    for (auto& g : kernels)
        g = permute_columns(g, unit_diagonalize(g));
    std::vector<double> z = design_reliabilities(kernels, design);
    const std::size_t n = z.size();
    if (message_bits > n)
        throw InvalidArgument("message length " + std::to_string(message_bits) + " exceeds blocklength " + std::to_string(n));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return z[a] != z[b] ? z[a] > z[b] : a > b; });
    Bits mask(n, 0);
    for (std::size_t k = 0; k < n - message_bits; ++k)
        mask[order[k]] = 1;
    return PolarCode(std::move(kernels), std::move(mask), std::move(z), design);
}

Bits encode(const PolarCode& code, std::span<const std::uint8_t> message, OpCounter* counter)
{
    if (message.size() != code.message_length())
        throw InvalidArgument("message has " + std::to_string(message.size()) + " bits, code expects " +
                              std::to_string(code.message_length()));
    Bits u = code.frozen_values();
    const auto& info = code.information_set();
    for (std::size_t k = 0; k < info.size(); ++k) {
        if (message[k] > 1)
            throw InvalidArgument("message bits must be 0 or 1");
        u[info[k]] = message[k];
    }
    return kron_encode(code.kernels(), u, counter);
}

DecodeResult sc_decode(const PolarCode& code, std::span<const LikelihoodPair> channel, const DecodeOptions& options)
{
    if (channel.size() != code.length())
        throw InvalidArgument("expected " + std::to_string(code.length()) + " likelihood pairs, got " +
                              std::to_string(channel.size()));
    for (const auto& p : channel)
        if (!(p.p0 >= 0.0) || !(p.p1 >= 0.0) || !std::isfinite(p.p0) || !std::isfinite(p.p1) || p.p0 + p.p1 == 0.0)
            throw InvalidArgument("likelihood pairs must be finite, non-negative and not both zero");
    if (!options.genie.empty() && options.genie.size() != code.length())
        throw InvalidArgument("genie input must have blocklength entries");
    if (options.leaf_beliefs)
        options.leaf_beliefs->assign(code.length(), LikelihoodPair{});
    ScDecoder decoder(code, options);
    return decoder.run(channel);
}

double union_bound(const PolarCode& code)
{
    CompensatedSum sum;
    for (std::size_t i : code.information_set())
        sum.add(code.design_z()[i]);
    return sum.value();
}

SimulationStats simulate_fer(const PolarCode& code, const BinaryChannel& channel, std::size_t trials, std::uint64_t seed,
                             bool genie)
{
    if (trials == 0)
        throw InvalidArgument("simulation needs at least one trial");
    const std::size_t n = code.length();
    const std::size_t k = code.message_length();
    const std::size_t m = channel.output_count();

    std::vector<double> cdf0(m);
    std::vector<double> cdf1(m);
    std::partial_sum(channel.p0().begin(), channel.p0().end(), cdf0.begin());
    std::partial_sum(channel.p1().begin(), channel.p1().end(), cdf1.begin());
    // Inverse-CDF draw; upper_bound only lands on outputs of positive probability.
    auto sample = [&](unsigned x, double r) {
        const auto& cdf = x ? cdf1 : cdf0;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), r * cdf.back());
        if (it != cdf.end())
            return static_cast<std::size_t>(it - cdf.begin());
        std::size_t y = m - 1;
        while (y > 0 && channel.likelihood(x, y) == 0.0)
            --y;
        return y;
    };

    std::vector<std::size_t> bit_errors(trials, 0);
    std::vector<std::uint8_t> frame_error(trials, 0);
    std::vector<std::optional<std::size_t>> first_error(trials);

    parallel_for(trials, [&](std::size_t t) {
        CounterRng rng(derive_seed(seed, t));
        Bits message(k);
        for (auto& bit : message)
            bit = rng.bit() ? 1 : 0;
        Bits u = code.frozen_values();
        for (std::size_t j = 0; j < k; ++j)
            u[code.information_set()[j]] = message[j];
        const Bits x = kron_encode(code.kernels(), u);
        std::vector<LikelihoodPair> received(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t y = sample(x[i], rng.uniform());
            received[i] = {channel.p0()[y], channel.p1()[y]};
        }
        DecodeOptions options;
        if (genie)
            options.genie = u;
        const DecodeResult result = sc_decode(code, received, options);
        std::size_t errors = 0;
        for (std::size_t j = 0; j < k; ++j)
            errors += result.message[j] != message[j];
        bit_errors[t] = errors;
        frame_error[t] = genie ? result.genie_first_error.has_value() : errors > 0;
        first_error[t] = result.genie_first_error;
    });

    SimulationStats stats;
    stats.trials = trials;
    stats.union_bound = union_bound(code);
    stats.trial_bit_errors = bit_errors;
    if (genie)
        stats.first_error_histogram.assign(n, 0);
    for (std::size_t t = 0; t < trials; ++t) {
        stats.bit_errors += bit_errors[t];
        stats.frame_errors += frame_error[t];
        if (first_error[t])
            ++stats.first_error_histogram[*first_error[t]];
    }
    stats.fer = static_cast<double>(stats.frame_errors) / static_cast<double>(trials);
    stats.ber = k == 0 ? 0.0 : static_cast<double>(stats.bit_errors) / static_cast<double>(trials * k);
    stats.fer_stderr = std::sqrt(stats.fer * (1.0 - stats.fer) / static_cast<double>(trials));
    return stats;
}

}  // namespace polarkit
