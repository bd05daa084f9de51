#include <gtest/gtest.h>

#include <random>

#include "arboreal/codec.hpp"
#include "arboreal/rational.hpp"

namespace arboreal {
namespace {

TEST(Rational, ParseCanonical) {
  EXPECT_EQ(to_string(parse_rational("3/4")), "3/4");
  EXPECT_EQ(to_string(parse_rational("6/8")), "3/4");
  EXPECT_EQ(to_string(parse_rational("2/2")), "1");
  EXPECT_EQ(to_string(parse_rational("0")), "0");
  EXPECT_EQ(to_string(parse_rational("-1/3")), "-1/3");
}

TEST(Rational, RejectsMalformed) {
  for (const char* bad : {"", "0.5", "1/0", "a/b", "1/", "/2", "1e-3", "1/2/3"}) {
    EXPECT_THROW(parse_rational(bad), std::invalid_argument) << bad;
  }
}

TEST(Rational, RoundTrip) {
  for (const char* text : {"1", "1/3", "22/7", "123456789012345678901234567891/2"}) {
    EXPECT_EQ(to_string(parse_rational(text)), text);
  }
}

TEST(Rational, Pow) {
  EXPECT_EQ(pow(Rational(1, 2), 10), Rational(1, 1024));
  EXPECT_EQ(pow(Rational(5, 3), 0), Rational(1));
}

TEST(Codec, PackLayout) {
  const std::vector<EdgeState> states{EdgeState::open_surviving, EdgeState::closed, EdgeState::open_extinct,
                                      EdgeState::closed, EdgeState::open_extinct};
  const auto bytes = pack_states(states);
  ASSERT_EQ(bytes.size(), 2u);
  EXPECT_EQ(bytes[0], 0b10000100);
  EXPECT_EQ(bytes[1], 0b01000000);
  EXPECT_EQ(unpack_states(bytes, states.size()), states);
}

TEST(Codec, RejectsReservedCodeAndShortInput) {
  EXPECT_THROW(unpack_states({0b11000000}, 1), std::invalid_argument);
  EXPECT_THROW(unpack_states({0}, 5), std::invalid_argument);
}

TEST(Codec, Base64KnownVectors) {
  const std::string text = "foobar";
  for (std::size_t len = 0; len <= text.size(); ++len) {
    const std::vector<std::uint8_t> bytes(text.begin(), text.begin() + len);
    static const char* expected[] = {"", "Zg==", "Zm8=", "Zm9v", "Zm9vYg==", "Zm9vYmE=", "Zm9vYmFy"};
    EXPECT_EQ(base64_encode(bytes), expected[len]);
    EXPECT_EQ(base64_decode(expected[len]), bytes);
  }
  EXPECT_THROW(base64_decode("Zm9"), std::invalid_argument);
  EXPECT_THROW(base64_decode("Zm9*"), std::invalid_argument);
}

TEST(Codec, RandomRoundTrip) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<EdgeState> states(gen() % 200);
    for (auto& s : states) s = static_cast<EdgeState>(gen() % 3);
    const auto decoded = unpack_states(base64_decode(base64_encode(pack_states(states))), states.size());
    ASSERT_EQ(decoded, states);
  }
}

}  // namespace
}  // namespace arboreal
