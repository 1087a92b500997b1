#include "polarkit/io.hpp"

#include <fstream>
#include <sstream>

#include "polarkit/error.hpp"

namespace polarkit {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

template <typename T>
T field(const Json& j, const char* key)
{
    if (!j.contains(key))
        throw InvalidArgument(std::string("missing field \"") + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("bad field \"") + key + "\": " + e.what());
    }
}

double parse_number(std::string_view text, const char* what)
{
    try {
        std::size_t used = 0;
        const std::string s(text);
        const double v = std::stod(s, &used);
        if (used != s.size())
            throw InvalidArgument("");
        return v;
    } catch (const std::exception&) {
        throw InvalidArgument(std::string("cannot parse ") + what + " from \"" + std::string(text) + "\"");
    }
}

}  // namespace

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InvalidArgument("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw InvalidArgument("cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

BitMatrix parse_kernel(std::string_view text)
{
    const std::string_view body = trim(text);
    if (!body.empty() && body.front() == '{') {
        try {
            return kernel_from_json(Json::parse(body));
        } catch (const nlohmann::json::parse_error& e) {
            throw InvalidArgument(std::string("kernel JSON: ") + e.what());
        }
    }
    std::vector<std::string> rows;
    std::istringstream lines{std::string(body)};
    for (std::string line; std::getline(lines, line);) {
        const std::string_view row = trim(line);
        if (row.empty() || row.front() == '#')
            continue;
        rows.emplace_back(row);
    }
    const BitMatrix g = BitMatrix::from_rows(rows);
    if (!g.square())
        throw InvalidArgument("kernel must be square, got " + std::to_string(g.rows()) + "x" + std::to_string(g.cols()));
    return g;
}

Json kernel_to_json(const BitMatrix& g)
{
    return Json{{"l", g.rows()}, {"rows", g.row_strings()}};
}

BitMatrix kernel_from_json(const Json& j)
{
    const auto rows = field<std::vector<std::string>>(j, "rows");
    const BitMatrix g = BitMatrix::from_rows(rows);
    if (!g.square())
        throw InvalidArgument("kernel must be square");
    if (j.contains("l") && field<std::size_t>(j, "l") != g.rows())
        throw InvalidArgument("kernel \"l\" does not match its rows");
    return g;
}

BitMatrix load_kernel(const std::filesystem::path& path)
{
    BitMatrix g = parse_kernel(read_file(path));
    if (!is_invertible(g))
        throw PreconditionError("kernel in " + path.string() + " is not invertible over GF(2)");
    return g;
}

Json channel_to_json(const BinaryChannel& w)
{
    Json j{{"outputs", w.output_count()},
           {"p0", std::vector<double>(w.p0().begin(), w.p0().end())},
           {"p1", std::vector<double>(w.p1().begin(), w.p1().end())}};
    if (w.symmetry())
        j["symmetry"] = *w.symmetry();
    return j;
}

BinaryChannel channel_from_json(const Json& j)
{
    auto p0 = field<std::vector<double>>(j, "p0");
    auto p1 = field<std::vector<double>>(j, "p1");
    if (j.contains("outputs") && field<std::size_t>(j, "outputs") != p0.size())
        throw InvalidArgument("channel \"outputs\" does not match the probability rows");
    std::optional<Permutation> symmetry;
    if (j.contains("symmetry") && !j.at("symmetry").is_null())
        symmetry = field<Permutation>(j, "symmetry");
    return BinaryChannel(std::move(p0), std::move(p1), std::move(symmetry));
}

BinaryChannel parse_channel_spec(std::string_view spec)
{
    if (spec.starts_with("bec:"))
        return make_bec(parse_number(spec.substr(4), "erasure probability"));
    if (spec.starts_with("bsc:"))
        return make_bsc(parse_number(spec.substr(4), "crossover probability"));
    if (spec.starts_with("random:")) {
        const std::string_view rest = spec.substr(7);
        const auto colon = rest.find(':');
        if (colon == std::string_view::npos)
            throw InvalidArgument("random channel spec is random:SEED:COUNT");
        const auto seed = static_cast<std::uint64_t>(parse_number(rest.substr(0, colon), "seed"));
        const auto count = static_cast<std::size_t>(parse_number(rest.substr(colon + 1), "sub-channel count"));
        return random_symmetric_channel(seed, count);
    }
    try {
        return channel_from_json(Json::parse(read_file(std::string(spec))));
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(std::string("channel JSON: ") + e.what());
    }
}

std::string mask_to_hex(const Bits& mask)
{
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string hex;
    for (std::size_t d = 0; d * 4 < mask.size(); ++d) {
        int v = 0;
        for (std::size_t b = 0; b < 4; ++b)
            if (d * 4 + b < mask.size() && mask[d * 4 + b])
                v |= 8 >> b;
        hex.push_back(kDigits[v]);
    }
    return hex;
}

Bits mask_from_hex(std::string_view hex, std::size_t bits)
{
    if (hex.size() != (bits + 3) / 4)
        throw InvalidArgument("hex mask has " + std::to_string(hex.size()) + " digits, expected " + std::to_string((bits + 3) / 4));
    Bits mask(bits, 0);
    for (std::size_t d = 0; d < hex.size(); ++d) {
        const char c = hex[d];
        int v;
        if (c >= '0' && c <= '9')
            v = c - '0';
        else if (c >= 'a' && c <= 'f')
            v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            v = c - 'A' + 10;
        else
            throw InvalidArgument(std::string("bad hex digit '") + c + "'");
        for (std::size_t b = 0; b < 4; ++b) {
            const bool set = (v >> (3 - b)) & 1;
            const std::size_t i = d * 4 + b;
            if (i < bits)
                mask[i] = set;
            else if (set)
                throw InvalidArgument("hex mask has bits set past the blocklength");
        }
    }
    return mask;
}

Json code_to_json(const PolarCode& code)
{
    Json kernels = Json::array();
    for (const auto& g : code.kernels())
        kernels.push_back(g.row_strings());
    Json design;
    if (code.design().kind == Design::Kind::Bec)
        design = {{"type", "bec"}, {"eps", code.design().eps}};
    else
        design = {{"type", "z"}, {"z", code.design().z}};
    return Json{{"kernels", kernels},
                {"N", code.length()},
                {"K", code.message_length()},
                {"frozen_mask", mask_to_hex(code.frozen_mask())},
                {"design", design}};
}

PolarCode code_from_json(const Json& j)
{
    std::vector<BitMatrix> kernels;
    for (const auto& rows : field<std::vector<std::vector<std::string>>>(j, "kernels"))
        kernels.push_back(BitMatrix::from_rows(rows));
    const auto n = field<std::size_t>(j, "N");
    const auto k = field<std::size_t>(j, "K");
    if (!j.contains("design"))
        throw InvalidArgument("missing field \"design\"");
    const Json& d = j.at("design");
    const auto type = field<std::string>(d, "type");
    Design design;
    if (type == "bec")
        design = Design::bec(field<double>(d, "eps"));
    else if (type == "z")
        design = Design::explicit_z(field<std::vector<double>>(d, "z"));
    else
        throw InvalidArgument("unknown design type \"" + type + "\"");

    Bits mask = mask_from_hex(field<std::string>(j, "frozen_mask"), n);
    std::vector<double> z = design_reliabilities(kernels, design);
    PolarCode code(std::move(kernels), std::move(mask), std::move(z), design);
    if (code.length() != n || code.message_length() != k)
        throw InvalidArgument("code descriptor N/K do not match its kernels and frozen mask");
    return code;
}

Bits parse_bits(std::string_view text)
{
    Bits bits;
    for (char c : trim(text)) {
        if (c == '0' || c == '1')
            bits.push_back(static_cast<std::uint8_t>(c - '0'));
        else if (c != ' ' && c != ',')
            throw InvalidArgument(std::string("bit strings may only contain 0 and 1, got '") + c + "'");
    }
    return bits;
}

std::string format_bits(std::span<const std::uint8_t> bits)
{
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits)
        s.push_back(b ? '1' : '0');
    return s;
}

}  // namespace polarkit
