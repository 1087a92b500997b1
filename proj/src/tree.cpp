#include "polarkit/tree.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "polarkit/bec.hpp"
#include "polarkit/error.hpp"
#include "polarkit/numeric.hpp"
#include "polarkit/parallel.hpp"
#include "polarkit/rng.hpp"
#include "polarkit/split.hpp"

namespace polarkit {

namespace {

PathTrace trace_path(const BinaryChannel& w, const BitMatrix& g, std::size_t levels, std::uint64_t seed,
                     std::size_t cap, const std::optional<double>& bec_eps, const BecKernel* bec_kernel)
{
    CounterRng rng(seed);
    PathTrace trace;
    trace.seed = seed;
    const std::size_t l = g.rows();

    if (bec_eps) {
        double eps = *bec_eps;
        trace.info_trace.push_back({1.0 - eps, eps});
        std::vector<double> children(l);
        for (std::size_t t = 0; t < levels; ++t) {
            const std::size_t b = static_cast<std::size_t>(rng.below(l));
            bec_kernel->split(eps, children);
            eps = children[b];
            trace.branches.push_back(b);
            trace.info_trace.push_back({1.0 - eps, eps});
        }
        return trace;
    }

    BinaryChannel current = w;
    trace.info_trace.push_back(info_pair(current));
    for (std::size_t t = 0; t < levels; ++t) {
        const std::size_t b = static_cast<std::size_t>(rng.below(l));
        try {
            current = split_tilde(current, g, b, cap);
        } catch (const CapacityError& e) {
            throw CapacityError(std::string(e.what()) + " after depth " + std::to_string(t), t);
        }
        trace.branches.push_back(b);
        trace.info_trace.push_back(info_pair(current));
    }
    return trace;
}

}  // namespace

PathTrace sample_path(const BinaryChannel& w, const BitMatrix& g, std::size_t levels, std::uint64_t seed, std::size_t cap)
{
    const auto eps = as_bec(w);
    std::optional<BecKernel> kernel;
    if (eps)
        kernel.emplace(g);
    else if (!is_invertible(g))
        throw PreconditionError("kernel is not invertible over GF(2)");
    return trace_path(w, g, levels, seed, cap, eps, kernel ? &*kernel : nullptr);
}

std::vector<PathTrace> sample_paths(const BinaryChannel& w, const BitMatrix& g, std::size_t levels, std::size_t paths,
                                    std::uint64_t seed, std::size_t cap)
{
    const auto eps = as_bec(w);
    std::optional<BecKernel> kernel;
    if (eps)
        kernel.emplace(g);
    else if (!is_invertible(g))
        throw PreconditionError("kernel is not invertible over GF(2)");
    std::vector<PathTrace> traces(paths);
    parallel_for(paths, [&](std::size_t p) {
        traces[p] = trace_path(w, g, levels, derive_seed(seed, p), cap, eps, kernel ? &*kernel : nullptr);
    });
    return traces;
}

EnsembleSummary summarize(std::span<const PathTrace> traces, double delta)
{
    if (!(delta > 0.0 && delta < 0.5))
        throw InvalidArgument("delta must lie in (0, 1/2)");
    EnsembleSummary summary;
    summary.paths = traces.size();
    summary.delta = delta;
    summary.final_histogram.assign(10, 0);
    if (traces.empty())
        return summary;

    const std::size_t depth = traces.front().depth();
    const double count = static_cast<double>(traces.size());
    for (std::size_t t = 0; t <= depth; ++t) {
        CompensatedSum sum;
        CompensatedSum step;
        std::size_t high = 0;
        std::size_t low = 0;
        for (const auto& trace : traces) {
            const double info = trace.info_trace.at(t).mutual_info;
            sum.add(info);
            if (t > 0)
                step.add(std::fabs(info - trace.info_trace[t - 1].mutual_info));
            high += info > 1.0 - delta;
            low += info < delta;
        }
        LevelStats stats;
        stats.level = t;
        stats.mean_info = sum.value() / count;
        CompensatedSum var;
        for (const auto& trace : traces) {
            const double d = trace.info_trace[t].mutual_info - stats.mean_info;
            var.add(d * d);
        }
        stats.var_info = var.value() / count;
        stats.frac_high = static_cast<double>(high) / count;
        stats.frac_low = static_cast<double>(low) / count;
        stats.frac_mid = 1.0 - stats.frac_high - stats.frac_low;
        stats.mean_abs_step = t > 0 ? step.value() / count : 0.0;
        summary.levels.push_back(stats);
    }
    for (const auto& trace : traces) {
        const double info = trace.info_trace.back().mutual_info;
        const auto bin = std::min<std::size_t>(9, static_cast<std::size_t>(info * 10.0));
        ++summary.final_histogram[bin];
    }
    return summary;
}

EnsembleSummary ensemble_stats(const BinaryChannel& w, const BitMatrix& g, std::size_t levels, std::size_t paths,
                               std::uint64_t seed, double delta, std::size_t cap)
{
    const auto traces = sample_paths(w, g, levels, paths, seed, cap);
    return summarize(traces, delta);
}

double martingale_residual(const BinaryChannel& w, const BitMatrix& g)
{
    const std::size_t l = g.rows();
    CompensatedSum total;
    for (std::size_t i = 0; i < l; ++i)
        total.add(symmetric_capacity(split_tilde(w, g, i)));
    return std::fabs(total.value() / static_cast<double>(l) - symmetric_capacity(w));
}

ZBoundReport z_bound_check(const PathTrace& trace, std::size_t ell)
{
    ZBoundReport report;
    report.steps = trace.depth();
    for (std::size_t t = 0; t + 1 < trace.info_trace.size(); ++t) {
        const double parent = trace.info_trace[t].bhattacharyya;
        const double child = trace.info_trace[t + 1].bhattacharyya;
        if (child > static_cast<double>(ell) * parent + 1e-9)
            report.violating_steps.push_back(t);
        if (child <= parent * parent + 1e-12)
            report.squaring_steps.push_back(t);
    }
    if (report.steps > 0)
        report.squaring_frequency = static_cast<double>(report.squaring_steps.size()) / static_cast<double>(report.steps);
    return report;
}

}  // namespace polarkit
