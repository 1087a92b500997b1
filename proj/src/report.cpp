#include "polarkit/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "polarkit/io.hpp"

namespace polarkit {

namespace {

std::string fixed(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string digits_of(std::size_t leaf, std::span<const std::size_t> radices)
{
    std::string digits(radices.size(), '0');
    for (std::size_t t = radices.size(); t-- > 0;) {
        const std::size_t d = leaf % radices[t];
        digits[t] = static_cast<char>(d < 10 ? '0' + d : 'a' + (d - 10));
        leaf /= radices[t];
    }
    return digits;
}

}  // namespace

std::string format_double(double v)
{
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

std::vector<ErasureVector> bec_levels(std::span<const BitMatrix> kernels, double eps0)
{
    std::vector<ErasureVector> levels{bec_initial(eps0)};
    for (const auto& g : kernels)
        levels.push_back(bec_step(levels.back(), g));
    return levels;
}

std::vector<PolarizationLevel> summarize_levels(std::span<const ErasureVector> levels, double delta, double beta)
{
    std::vector<PolarizationLevel> out;
    for (const auto& v : levels)
        out.push_back({v.level(), polarization_fraction(v, delta), rate_statistic(v, beta), v.mean()});
    return out;
}

std::string polarize_csv(const ErasureVector& leaves, std::span<const PolarizationLevel> summary)
{
    std::string out = kCsvHeader;
    out += "leaf_index,path_digits,eps,I,Z\n";
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        const double e = leaves.eps[i];
        out += std::to_string(i) + ',' + path_digits(leaves, i) + ',' + format_double(e) + ',' + format_double(1.0 - e) + ',' +
               format_double(e) + '\n';
    }
    out += "# summary\nlevel,fraction_mid,rate_stat,mean_eps\n";
    for (const auto& s : summary)
        out += std::to_string(s.level) + ',' + format_double(s.fraction_mid) + ',' + format_double(s.rate_stat) + ',' +
               format_double(s.mean_eps) + '\n';
    return out;
}

std::string polarize_leaves_csv(std::span<const InfoPair> leaves, std::span<const std::size_t> radices)
{
    std::string out = kCsvHeader;
    out += "leaf_index,path_digits,I,Z\n";
    for (std::size_t i = 0; i < leaves.size(); ++i)
        out += std::to_string(i) + ',' + digits_of(i, radices) + ',' + format_double(leaves[i].mutual_info) + ',' +
               format_double(leaves[i].bhattacharyya) + '\n';
    return out;
}

std::string split_csv(const SplitResult& split)
{
    std::string out = kCsvHeader;
    out += "i,I,Z\n";
    for (std::size_t i = 0; i < split.info.size(); ++i)
        out += std::to_string(i + 1) + ',' + format_double(split.info[i].mutual_info) + ',' +
               format_double(split.info[i].bhattacharyya) + '\n';
    return out;
}

std::string tree_csv(std::span<const PathTrace> traces)
{
    std::string out = kCsvHeader;
    out += "path,level,branch,I,Z\n";
    for (std::size_t p = 0; p < traces.size(); ++p) {
        const auto& trace = traces[p];
        for (std::size_t t = 0; t < trace.info_trace.size(); ++t) {
            const std::string branch = t == 0 ? "" : std::to_string(trace.branches[t - 1] + 1);
            out += std::to_string(p) + ',' + std::to_string(t) + ',' + branch + ',' +
                   format_double(trace.info_trace[t].mutual_info) + ',' + format_double(trace.info_trace[t].bhattacharyya) +
                   '\n';
        }
    }
    return out;
}

Json ensemble_json(const EnsembleSummary& summary, const std::vector<ZBoundReport>& bounds)
{
    Json levels = Json::array();
    for (const auto& s : summary.levels)
        levels.push_back({{"level", s.level},
                          {"mean_I", s.mean_info},
                          {"var_I", s.var_info},
                          {"frac_high", s.frac_high},
                          {"frac_low", s.frac_low},
                          {"frac_mid", s.frac_mid},
                          {"mean_abs_step", s.mean_abs_step}});
    std::size_t steps = 0;
    std::size_t violations = 0;
    std::size_t squaring = 0;
    for (const auto& b : bounds) {
        steps += b.steps;
        violations += b.violations();
        squaring += b.squaring_steps.size();
    }
    return Json{{"paths", summary.paths},
                {"delta", summary.delta},
                {"levels", levels},
                {"final_I_histogram", summary.final_histogram},
                {"z_bound", {{"steps", steps},
                             {"violations", violations},
                             {"squaring_steps", squaring},
                             {"squaring_frequency", steps ? static_cast<double>(squaring) / static_cast<double>(steps) : 0.0}}}};
}

std::string simulation_csv(const SimulationStats& stats)
{
    std::string out = kCsvHeader;
    out += "trial,errors\n";
    for (std::size_t t = 0; t < stats.trial_bit_errors.size(); ++t)
        out += std::to_string(t) + ',' + std::to_string(stats.trial_bit_errors[t]) + '\n';
    return out;
}

Json simulation_json(const SimulationStats& stats)
{
    const bool dominated = stats.fer <= stats.union_bound + 3.0 * stats.fer_stderr;
    Json j{{"trials", stats.trials},
           {"frame_errors", stats.frame_errors},
           {"bit_errors", stats.bit_errors},
           {"fer", stats.fer},
           {"ber", stats.ber},
           {"stderr", stats.fer_stderr},
           {"union_bound", stats.union_bound},
           {"union_bound_check", dominated ? "fer <= union_bound + 3 sigma: pass" : "fer <= union_bound + 3 sigma: FAIL"}};
    if (!stats.first_error_histogram.empty()) {
        Json hist = Json::object();
        for (std::size_t i = 0; i < stats.first_error_histogram.size(); ++i)
            if (stats.first_error_histogram[i])
                hist[std::to_string(i)] = stats.first_error_histogram[i];
        j["first_error_histogram"] = hist;
    }
    return j;
}

std::string histogram_svg(std::span<const std::vector<double>> info_per_level, const std::string& title, bool non_polarizing)
{
    constexpr int kBins = 20;
    constexpr double kPanelWidth = 400.0;
    constexpr double kPanelHeight = 80.0;
    constexpr double kLeft = 70.0;
    constexpr double kTop = 40.0;
    constexpr double kGap = 30.0;
    const double height = kTop + static_cast<double>(info_per_level.size()) * (kPanelHeight + kGap) + 30.0;
    const double width = kLeft + kPanelWidth + 30.0;

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(width, 0) + "\" height=\"" + fixed(height, 0) +
           "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::string heading = title;
    if (non_polarizing)
        heading += " (non-polarizing)";
    svg += "<text x=\"" + fixed(kLeft, 0) + "\" y=\"20\" font-size=\"14\">" + heading + "</text>\n";

    for (std::size_t level = 0; level < info_per_level.size(); ++level) {
        const auto& values = info_per_level[level];
        std::vector<std::size_t> counts(kBins, 0);
        for (double v : values)
            ++counts[std::clamp(static_cast<int>(v * kBins), 0, kBins - 1)];
        const double top = kTop + static_cast<double>(level) * (kPanelHeight + kGap);
        const double base = top + kPanelHeight;
        svg += "<text x=\"5\" y=\"" + fixed(top + kPanelHeight / 2, 1) + "\">n = " + std::to_string(level) + "</text>\n";
        svg += "<line x1=\"" + fixed(kLeft, 1) + "\" y1=\"" + fixed(base, 1) + "\" x2=\"" + fixed(kLeft + kPanelWidth, 1) +
               "\" y2=\"" + fixed(base, 1) + "\" stroke=\"black\"/>\n";
        for (int b = 0; b < kBins; ++b) {
            if (counts[b] == 0)
                continue;
            const double frac = static_cast<double>(counts[b]) / static_cast<double>(values.size());
            const double h = frac * kPanelHeight;
            const double bar = kPanelWidth / kBins;
            svg += "<rect x=\"" + fixed(kLeft + b * bar + 1.0, 2) + "\" y=\"" + fixed(base - h, 2) + "\" width=\"" +
                   fixed(bar - 2.0, 2) + "\" height=\"" + fixed(h, 2) + "\" fill=\"steelblue\"/>\n";
        }
        for (int tick = 0; tick <= 4; ++tick) {
            const double x = kLeft + kPanelWidth * tick / 4.0;
            svg += "<text x=\"" + fixed(x - 8.0, 1) + "\" y=\"" + fixed(base + 14.0, 1) + "\">" + fixed(tick / 4.0, 2) +
                   "</text>\n";
        }
    }
    svg += "<text x=\"" + fixed(kLeft + kPanelWidth / 2 - 40.0, 1) + "\" y=\"" + fixed(height - 5.0, 1) +
           "\">leaf I (bits)</text>\n";
    svg += "</svg>\n";
    return svg;
}

}  // namespace polarkit
