#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polarkit/bec.hpp"
#include "polarkit/error.hpp"
#include "polarkit/io.hpp"
#include "polarkit/polar_code.hpp"
#include "polarkit/report.hpp"
#include "polarkit/split.hpp"
#include "polarkit/tree.hpp"

using namespace polarkit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPrecondition = 2;
constexpr int kExitCapacity = 3;

/// JSON config files. Keys are long option names without dashes; a nested
/// object keyed by a subcommand name scopes its keys to that subcommand,
/// and top-level keys apply to whichever subcommand is running.
class JsonConfig : public CLI::Config {
public:
    explicit JsonConfig(const CLI::App& app) : app_(app) {}

    std::string to_config(const CLI::App*, bool, bool, std::string) const override
    {
        return "{}\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override
    {
        Json j;
        try {
            j = Json::parse(input);
        } catch (const Json::exception& e) {
            throw CLI::ConversionError(std::string("config JSON: ") + e.what());
        }
        if (!j.is_object())
            throw CLI::ConversionError("config JSON must be an object");

        std::vector<std::string> active;
        for (const auto* sub : app_.get_subcommands())
            active.push_back(sub->get_name());

        std::vector<CLI::ConfigItem> items;
        for (const auto& [key, value] : j.items()) {
            if (value.is_object()) {
                for (const auto& [inner, v] : value.items())
                    items.push_back(item({key}, inner, v));
            } else {
                items.push_back(item(active, key, value));
            }
        }
        return items;
    }

private:
    static CLI::ConfigItem item(std::vector<std::string> parents, const std::string& name, const Json& value)
    {
        CLI::ConfigItem out;
        out.parents = std::move(parents);
        out.name = name;
        if (value.is_array()) {
            for (const auto& v : value)
                out.inputs.push_back(scalar(v));
        } else {
            out.inputs.push_back(scalar(value));
        }
        return out;
    }

    static std::string scalar(const Json& v)
    {
        if (v.is_string())
            return v.get<std::string>();
        if (v.is_boolean())
            return v.get<bool>() ? "true" : "false";
        return v.dump();
    }

    const CLI::App& app_;
};

void emit(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-")
        std::cout << text;
    else
        write_file(path, text);
}

std::vector<BitMatrix> load_kernels(const std::vector<std::string>& files, std::optional<std::size_t> levels)
{
    if (files.empty())
        throw InvalidArgument("at least one --kernel is required");
    std::vector<BitMatrix> kernels;
    for (const auto& f : files)
        kernels.push_back(load_kernel(f));
    if (!levels)
        return kernels;
    if (kernels.size() == 1)
        return std::vector<BitMatrix>(*levels, kernels.front());
    if (kernels.size() != *levels)
        throw InvalidArgument("--levels must match the number of --kernel files");
    return kernels;
}

std::string permutation_text(const ColumnPermutation& sigma)
{
    std::string out;
    for (std::size_t j = 0; j < sigma.mapping.size(); ++j)
        out += (j ? " " : "") + std::to_string(sigma.mapping[j] + 1);
    return out;
}

// Channel outputs as whitespace/comma separated indices, or one digit per
// output when given as a single token.
std::vector<std::size_t> parse_outputs(const std::string& text, std::size_t n)
{
    std::string spaced = text;
    for (auto& c : spaced)
        if (c == ',')
            c = ' ';
    std::istringstream in(spaced);
    std::vector<std::string> tokens;
    for (std::string t; in >> t;)
        tokens.push_back(t);
    std::vector<std::size_t> out;
    if (tokens.size() == 1 && n > 1) {
        for (char c : tokens.front()) {
            if (c < '0' || c > '9')
                throw InvalidArgument(std::string("bad output symbol '") + c + "'");
            out.push_back(static_cast<std::size_t>(c - '0'));
        }
    } else {
        for (const auto& t : tokens) {
            if (t.find_first_not_of("0123456789") != std::string::npos)
                throw InvalidArgument("bad output index \"" + t + "\"");
            out.push_back(std::stoul(t));
        }
    }
    if (out.size() != n)
        throw InvalidArgument("received " + std::to_string(out.size()) + " outputs, code length is " + std::to_string(n));
    return out;
}

struct AnalyzeArgs {
    std::string kernel;
    std::string channel;
    std::string out;
};

void run_analyze(const AnalyzeArgs& a)
{
    const BitMatrix g = load_kernel(a.kernel);
    std::string text = "l: " + std::to_string(g.rows()) + "\n";
    text += "invertible: yes\n";
    text += "unit-diagonal permutation: " + permutation_text(unit_diagonalize(g)) + "\n";
    if (is_polarizing(g)) {
        const ReductionWeight rw = last_reduction_weight(g);
        text += "polarizing: yes, i=" + std::to_string(rw.index + 1) + ", k=" + std::to_string(rw.weight) + "\n";
    } else {
        text += "polarizing: no\n";
    }
    if (!a.channel.empty())
        text += split_csv(split_all(parse_channel_spec(a.channel), g));
    emit(a.out, text);
}

struct PolarizeArgs {
    std::vector<std::string> kernels;
    std::optional<std::size_t> levels;
    std::optional<double> bec;
    std::string channel;
    double delta = 0.1;
    double beta = 0.25;
    std::string out;
    std::string svg;
};

void run_polarize(const PolarizeArgs& a)
{
    const auto kernels = load_kernels(a.kernels, a.levels);
    bool polarizing = false;
    for (const auto& g : kernels)
        polarizing = polarizing || is_polarizing(g);
    std::vector<std::vector<double>> info_per_level;
    std::string csv;
    std::string title;

    if (a.bec.has_value() == !a.channel.empty())
        throw InvalidArgument("give exactly one of --bec and --channel");
    if (a.bec) {
        const double eps = *a.bec;
        const auto levels = bec_levels(kernels, eps);
        csv = polarize_csv(levels.back(), summarize_levels(levels, a.delta, a.beta));
        for (const auto& v : levels) {
            std::vector<double> info;
            for (double e : v.eps)
                info.push_back(1.0 - e);
            info_per_level.push_back(std::move(info));
        }
        title = "BEC(" + format_double(eps) + ") leaf I";
    } else {
        if (kernels.size() > 3)
            throw CapacityError("exact splitting of a general channel is limited to 3 levels; use --bec for deeper runs", 0);
        const BinaryChannel w = parse_channel_spec(a.channel);
        std::vector<std::size_t> radices;
        info_per_level.push_back({symmetric_capacity(w)});
        std::vector<InfoPair> leaves{info_pair(w)};
        for (std::size_t t = 1; t <= kernels.size(); ++t) {
            leaves = recursive_polarize(w, std::span(kernels).first(t));
            std::vector<double> info;
            for (const auto& p : leaves)
                info.push_back(p.mutual_info);
            info_per_level.push_back(std::move(info));
        }
        for (const auto& g : kernels)
            radices.push_back(g.rows());
        csv = polarize_leaves_csv(leaves, radices);
        title = a.channel + " leaf I";
    }
    emit(a.out, csv);
    if (!a.svg.empty())
        write_file(a.svg, histogram_svg(info_per_level, title, !polarizing));
}

struct TreeArgs {
    std::string kernel;
    std::string channel;
    std::size_t levels = 10;
    std::size_t paths = 1000;
    std::uint64_t seed = 1;
    double delta = 0.1;
    std::string out;
    std::string json;
};

void run_tree(const TreeArgs& a)
{
    const BitMatrix g = load_kernel(a.kernel);
    const BinaryChannel w = parse_channel_spec(a.channel);
    const auto traces = sample_paths(w, g, a.levels, a.paths, a.seed);
    std::vector<ZBoundReport> bounds;
    for (const auto& t : traces)
        bounds.push_back(z_bound_check(t, g.rows()));
    emit(a.out, tree_csv(traces));
    const std::string summary = ensemble_json(summarize(traces, a.delta), bounds).dump(2) + "\n";
    if (!a.json.empty())
        write_file(a.json, summary);
    else if (!a.out.empty() && a.out != "-")
        std::cout << summary;
}

struct ConstructArgs {
    std::vector<std::string> kernels;
    std::optional<std::size_t> levels;
    std::size_t k = 0;
    std::optional<double> design_bec;
    std::string design_z;
    std::string out;
};

void run_construct(const ConstructArgs& a)
{
    const auto kernels = load_kernels(a.kernels, a.levels);
    if (a.design_bec.has_value() == !a.design_z.empty())
        throw InvalidArgument("give exactly one of --design-bec and --design-z");
    Design design = Design::bec(a.design_bec.value_or(0.5));
    if (!a.design_z.empty()) {
        try {
            design = Design::explicit_z(Json::parse(read_file(a.design_z)).get<std::vector<double>>());
        } catch (const Json::exception& e) {
            throw InvalidArgument(std::string("design Z file: ") + e.what());
        }
    }
    const PolarCode code = PolarCode::construct(kernels, design, a.k);
    emit(a.out, code_to_json(code).dump(2) + "\n");
}

PolarCode load_code(const std::string& path)
{
    try {
        return code_from_json(Json::parse(read_file(path)));
    } catch (const Json::exception& e) {
        throw InvalidArgument("code descriptor: " + std::string(e.what()));
    }
}

struct EncodeArgs {
    std::string code;
    std::string message;
    std::string out;
};

void run_encode(const EncodeArgs& a)
{
    const PolarCode code = load_code(a.code);
    emit(a.out, format_bits(encode(code, parse_bits(a.message))) + "\n");
}

struct DecodeArgs {
    std::string code;
    std::string channel;
    std::string received;
    std::string out;
};

void run_decode(const DecodeArgs& a)
{
    const PolarCode code = load_code(a.code);
    const BinaryChannel w = parse_channel_spec(a.channel);
    const auto outputs = parse_outputs(a.received, code.length());
    std::vector<LikelihoodPair> beliefs;
    for (std::size_t y : outputs) {
        if (y >= w.output_count())
            throw InvalidArgument("output index " + std::to_string(y) + " outside the channel alphabet");
        beliefs.push_back({w.likelihood(0, y), w.likelihood(1, y)});
    }
    emit(a.out, format_bits(sc_decode(code, beliefs).message) + "\n");
}

struct SimulateArgs {
    std::string code;
    std::string channel;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    bool genie = false;
    std::string out;
    std::string json;
};

void run_simulate(const SimulateArgs& a)
{
    const PolarCode code = load_code(a.code);
    const SimulationStats stats = simulate_fer(code, parse_channel_spec(a.channel), a.trials, a.seed, a.genie);
    emit(a.out, simulation_csv(stats));
    const std::string summary = simulation_json(stats).dump(2) + "\n";
    if (!a.json.empty())
        write_file(a.json, summary);
    else if (!a.out.empty() && a.out != "-")
        std::cout << summary;
}

struct ReportArgs {
    std::vector<std::string> kernels;
    std::optional<std::size_t> levels;
    double bec = 0.5;
    double delta = 0.1;
    double beta = 0.25;
    std::string dir = "report";
};

void run_report(const ReportArgs& a)
{
    const auto kernels = load_kernels(a.kernels, a.levels);
    bool polarizing = false;
    for (const auto& g : kernels)
        polarizing = polarizing || is_polarizing(g);
    const auto levels = bec_levels(kernels, a.bec);
    const auto summary = summarize_levels(levels, a.delta, a.beta);

    std::vector<std::vector<double>> info_per_level;
    for (const auto& v : levels) {
        std::vector<double> info;
        for (double e : v.eps)
            info.push_back(1.0 - e);
        info_per_level.push_back(std::move(info));
    }
    Json rows = Json::array();
    for (const auto& s : summary)
        rows.push_back({{"level", s.level}, {"fraction_mid", s.fraction_mid}, {"rate_stat", s.rate_stat}, {"mean_eps", s.mean_eps}});
    const Json j{{"bec", a.bec}, {"delta", a.delta}, {"beta", a.beta}, {"polarizing", polarizing}, {"levels", rows}};

    const std::filesystem::path dir(a.dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "polarize.csv", polarize_csv(levels.back(), summary));
    write_file(dir / "histogram.svg", histogram_svg(info_per_level, "BEC(" + format_double(a.bec) + ") leaf I", !polarizing));
    write_file(dir / "summary.json", j.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"polarkit: channel polarization with arbitrary binary kernels"};
    app.require_subcommand(1);
    app.fallthrough();
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.config_formatter(std::make_shared<JsonConfig>(app));
    app.set_config("--config", "", "JSON file with option values; command-line flags take precedence");

    AnalyzeArgs analyze;
    auto* cmd_analyze = app.add_subcommand("analyze-kernel", "Invertibility, polarization verdict and one-level split");
    cmd_analyze->add_option("--kernel", analyze.kernel, "Kernel file (text or JSON)")->required();
    cmd_analyze->add_option("--channel", analyze.channel, "Channel spec for the split table");
    cmd_analyze->add_option("--out", analyze.out, "Output file (default stdout)");

    PolarizeArgs polarize;
    auto* cmd_polarize = app.add_subcommand("polarize", "Exact leaf channels after several levels");
    cmd_polarize->add_option("--kernel", polarize.kernels, "Kernel file; repeat for mixed kernels")->required();
    cmd_polarize->add_option("--levels", polarize.levels, "Number of levels")->check(CLI::Range(0, 64));
    cmd_polarize->add_option("--bec", polarize.bec, "BEC erasure probability")->check(CLI::Range(0.0, 1.0));
    cmd_polarize->add_option("--channel", polarize.channel, "General channel spec (at most 3 levels)");
    cmd_polarize->add_option("--delta", polarize.delta, "Polarization threshold")->check(CLI::Range(0.0, 0.5));
    cmd_polarize->add_option("--beta", polarize.beta, "Rate statistic exponent")->check(CLI::PositiveNumber);
    cmd_polarize->add_option("--out", polarize.out, "CSV output (default stdout)");
    cmd_polarize->add_option("--svg", polarize.svg, "Histogram SVG output");

    TreeArgs tree;
    auto* cmd_tree = app.add_subcommand("tree", "Sample paths of the tree process");
    cmd_tree->add_option("--kernel", tree.kernel, "Kernel file")->required();
    cmd_tree->add_option("--channel", tree.channel, "Channel spec")->required();
    cmd_tree->add_option("--levels", tree.levels, "Path depth");
    cmd_tree->add_option("--paths", tree.paths, "Number of paths")->check(CLI::PositiveNumber);
    cmd_tree->add_option("--seed", tree.seed, "Random seed");
    cmd_tree->add_option("--delta", tree.delta, "Polarization threshold")->check(CLI::Range(0.0, 0.5));
    cmd_tree->add_option("--out", tree.out, "Per-path CSV (default stdout)");
    cmd_tree->add_option("--json", tree.json, "Ensemble summary JSON");

    ConstructArgs construct;
    auto* cmd_construct = app.add_subcommand("construct", "Build a code descriptor");
    cmd_construct->add_option("--kernel", construct.kernels, "Kernel file; repeat for mixed kernels")->required();
    cmd_construct->add_option("--levels", construct.levels, "Number of levels")->check(CLI::Range(1, 64));
    cmd_construct->add_option("--K", construct.k, "Number of information bits")->required();
    cmd_construct->add_option("--design-bec", construct.design_bec, "Design erasure probability")
        ->check(CLI::Range(0.0, 1.0));
    cmd_construct->add_option("--design-z", construct.design_z, "JSON array of design Bhattacharyya parameters");
    cmd_construct->add_option("--out", construct.out, "Descriptor output (default stdout)");

    EncodeArgs enc;
    auto* cmd_encode = app.add_subcommand("encode", "Encode a message");
    cmd_encode->add_option("--code", enc.code, "Code descriptor")->required();
    cmd_encode->add_option("--message", enc.message, "Message bits, e.g. 0110")->required();
    cmd_encode->add_option("--out", enc.out, "Output file (default stdout)");

    DecodeArgs dec;
    auto* cmd_decode = app.add_subcommand("decode", "Successive cancellation decoding of received outputs");
    cmd_decode->add_option("--code", dec.code, "Code descriptor")->required();
    cmd_decode->add_option("--channel", dec.channel, "Channel spec")->required();
    cmd_decode->add_option("--received", dec.received, "Output indices, one digit each or comma separated")->required();
    cmd_decode->add_option("--out", dec.out, "Output file (default stdout)");

    SimulateArgs sim;
    auto* cmd_simulate = app.add_subcommand("simulate", "Monte Carlo frame error rate");
    cmd_simulate->add_option("--code", sim.code, "Code descriptor")->required();
    cmd_simulate->add_option("--channel", sim.channel, "Channel spec")->required();
    cmd_simulate->add_option("--trials", sim.trials, "Number of frames")->check(CLI::PositiveNumber);
    cmd_simulate->add_option("--seed", sim.seed, "Random seed");
    cmd_simulate->add_flag("--genie", sim.genie, "Genie-aided decoding with first-error histogram");
    cmd_simulate->add_option("--out", sim.out, "Per-trial CSV (default stdout)");
    cmd_simulate->add_option("--json", sim.json, "Summary JSON");

    ReportArgs rep;
    auto* cmd_report = app.add_subcommand("report", "BEC polarization report: CSV, SVG histogram and summary JSON");
    cmd_report->add_option("--kernel", rep.kernels, "Kernel file; repeat for mixed kernels")->required();
    cmd_report->add_option("--levels", rep.levels, "Number of levels")->check(CLI::Range(0, 64));
    cmd_report->add_option("--bec", rep.bec, "BEC erasure probability")->check(CLI::Range(0.0, 1.0));
    cmd_report->add_option("--delta", rep.delta, "Polarization threshold")->check(CLI::Range(0.0, 0.5));
    cmd_report->add_option("--beta", rep.beta, "Rate statistic exponent")->check(CLI::PositiveNumber);
    cmd_report->add_option("--dir", rep.dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (cmd_analyze->parsed())
            run_analyze(analyze);
        else if (cmd_polarize->parsed())
            run_polarize(polarize);
        else if (cmd_tree->parsed())
            run_tree(tree);
        else if (cmd_construct->parsed())
            run_construct(construct);
        else if (cmd_encode->parsed())
            run_encode(enc);
        else if (cmd_decode->parsed())
            run_decode(dec);
        else if (cmd_simulate->parsed())
            run_simulate(sim);
        else if (cmd_report->parsed())
            run_report(rep);
    } catch (const CapacityError& e) {
        std::cerr << "error: " << e.what();
        if (e.achieved_level())
            std::cerr << " (achieved level " << *e.achieved_level() << ")";
        std::cerr << "\n";
        return kExitCapacity;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}
