// Serialized forms of configurations.
//
// States pack four edges per byte in flat order, most significant pair
// first: 00 = 0', 01 = 1', 10 = 2' (11 is reserved). The final byte is
// zero-padded. NDJSON records carry the packed bytes in standard base64.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "arboreal/config.hpp"

namespace arboreal {

std::vector<std::uint8_t> pack_states(const std::vector<EdgeState>& states);
/// Throws std::invalid_argument on short input or the reserved code.
std::vector<EdgeState> unpack_states(const std::vector<std::uint8_t>& bytes, std::uint64_t edge_count);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
/// Throws std::invalid_argument on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

}  // namespace arboreal
