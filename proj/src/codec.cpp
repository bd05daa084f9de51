#include "arboreal/codec.hpp"

#include <array>
#include <stdexcept>

namespace arboreal {
namespace {

constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

constexpr std::array<int, 256> make_reverse() {
  std::array<int, 256> table{};
  for (auto& v : table) v = -1;
  for (int i = 0; i < 64; ++i) table[static_cast<unsigned char>(kAlphabet[i])] = i;
  return table;
}
constexpr std::array<int, 256> kReverse = make_reverse();

}  // namespace

std::vector<std::uint8_t> pack_states(const std::vector<EdgeState>& states) {
  std::vector<std::uint8_t> bytes((states.size() + 3) / 4, 0);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const int shift = 6 - 2 * static_cast<int>(i % 4);
    bytes[i / 4] |= static_cast<std::uint8_t>(static_cast<std::uint8_t>(states[i]) << shift);
  }
  return bytes;
}

std::vector<EdgeState> unpack_states(const std::vector<std::uint8_t>& bytes, std::uint64_t edge_count) {
  if (bytes.size() != (edge_count + 3) / 4) throw std::invalid_argument("packed states have the wrong length");
  std::vector<EdgeState> states(edge_count);
  for (std::uint64_t i = 0; i < edge_count; ++i) {
    const int shift = 6 - 2 * static_cast<int>(i % 4);
    const int code = (bytes[i / 4] >> shift) & 3;
    if (code == 3) throw std::invalid_argument("reserved state code 11");
    states[i] = static_cast<EdgeState>(code);
  }
  return states;
}

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  const std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    const std::uint32_t v = bytes[i] << 16;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += "==";
  } else if (rest == 2) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw std::invalid_argument("base64 length is not a multiple of 4");
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int pad = 0;
    std::uint32_t v = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      const char c = text[i + j];
      if (c == '=') {
        if (i + 4 != text.size() || j < 2) throw std::invalid_argument("misplaced base64 padding");
        ++pad;
        v <<= 6;
        continue;
      }
      if (pad > 0) throw std::invalid_argument("misplaced base64 padding");
      const int x = kReverse[static_cast<unsigned char>(c)];
      if (x < 0) throw std::invalid_argument("invalid base64 character");
      v = (v << 6) | static_cast<std::uint32_t>(x);
    }
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(v & 0xff));
  }
  return out;
}

}  // namespace arboreal
