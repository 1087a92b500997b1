#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "polarkit/channel.hpp"
#include "polarkit/gf2.hpp"
#include "polarkit/polar_code.hpp"

namespace polarkit {

using Json = nlohmann::json;

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Kernel text: l lines of l characters in {0,1}. Kernel JSON:
/// {"l": l, "rows": ["110", ...]}. parse_kernel accepts either form; blank
/// lines and lines starting with '#' are ignored in the text form.
BitMatrix parse_kernel(std::string_view text);
Json kernel_to_json(const BitMatrix& g);
BitMatrix kernel_from_json(const Json& j);
// Reads and parses a kernel file; throws PreconditionError if singular.
BitMatrix load_kernel(const std::filesystem::path& path);

/// {"outputs": m, "p0": [...], "p1": [...], "symmetry": [...]} with the
/// symmetry entry optional.
Json channel_to_json(const BinaryChannel& w);
BinaryChannel channel_from_json(const Json& j);

/// "bec:EPS", "bsc:EPS", "random:SEED:COUNT", or a path to a channel JSON file.
BinaryChannel parse_channel_spec(std::string_view spec);

// N bits as ceil(N/4) lowercase hex digits; bit 0 is the high bit of the first digit.
std::string mask_to_hex(const Bits& mask);
Bits mask_from_hex(std::string_view hex, std::size_t bits);

/// {"kernels": [[rows...], ...], "N": N, "K": K, "frozen_mask": hex,
///  "design": {"type": "bec", "eps": e} | {"type": "z", "z": [...]}}
Json code_to_json(const PolarCode& code);
PolarCode code_from_json(const Json& j);

Bits parse_bits(std::string_view text);
std::string format_bits(std::span<const std::uint8_t> bits);

}  // namespace polarkit
