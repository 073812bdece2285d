#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "toporec/label_codec.hpp"

using namespace toporec;

TEST(Bits, BinaryAndPadding) {
  EXPECT_EQ(binary(0).str(), "0");
  EXPECT_EQ(binary(5).str(), "101");
  EXPECT_EQ(binary_padded(5, 6).str(), "000101");
  EXPECT_THROW(binary_padded(9, 3), std::invalid_argument);
  EXPECT_EQ(to_uint(BitString("000101")), 5u);
  EXPECT_THROW(to_uint(BitString()), MalformedLabel);
  EXPECT_THROW(BitString("012"), ParseError);
}

TEST(Bits, ChunkExample) {
  auto parts = chunk("10000", 4);
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0], (Chunk{1, "1000"}));
  EXPECT_EQ(parts[1], (Chunk{2, "0"}));
  EXPECT_THROW(chunk("", 4), std::invalid_argument);
  EXPECT_THROW(chunk("1", 0), std::invalid_argument);
}

TEST(Bits, UnchunkOrderAndGaps) {
  EXPECT_EQ(unchunk({{2, "0"}, {1, "1000"}}).str(), "10000");
  EXPECT_THROW(unchunk({}), MissingChunk);
  EXPECT_THROW(unchunk({{1, "1"}, {3, "0"}}), MissingChunk);
  EXPECT_THROW(unchunk({{1, "1"}, {1, "0"}}), MissingChunk);
}

TEST(BitsProperty, ChunkRoundTrip) {
  std::mt19937_64 rng(1);
  for (int it = 0; it < 2000; ++it) {
    std::string s(1 + rng() % 40, '0');
    for (auto& c : s) c = rng() % 2 ? '1' : '0';
    std::size_t c = 1 + rng() % 6;
    auto parts = chunk(BitString(s), c);
    ASSERT_EQ(parts.size(), (s.size() + c - 1) / c);
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) ASSERT_EQ(parts[i].bits.size(), c);
    std::shuffle(parts.begin(), parts.end(), rng);
    ASSERT_EQ(unchunk(parts).str(), s);
  }
}

namespace {

StructuredLabel random_label(std::mt19937_64& rng) {
  StructuredLabel l;
  l.kind = static_cast<LabelKind>(rng() % kLabelKinds);
  for (std::size_t f = 0; f < kKindFields[static_cast<std::size_t>(l.kind)]; ++f) {
    std::string bits(rng() % 9, '0');
    for (auto& c : bits) c = rng() % 2 ? '1' : '0';
    l.fields.emplace_back(bits);
  }
  return l;
}

}  // namespace

TEST(CodecProperty, RoundTripAndLength) {
  std::mt19937_64 rng(2);
  for (int it = 0; it < 10000; ++it) {
    auto l = random_label(rng);
    auto bits = encode(l);
    std::size_t want = kTagBits;
    for (const auto& f : l.fields) want += 2 * f.size() + 2;
    ASSERT_EQ(bits.size(), want);
    ASSERT_EQ(decode(bits), l);
  }
}

TEST(Codec, DecodeErrors) {
  EXPECT_THROW(decode("10"), MalformedLabel);                 // shorter than the tag
  EXPECT_THROW(decode("1111"), MalformedLabel);               // unknown tag
  EXPECT_THROW(decode("0010"), MalformedLabel);               // HubD3 needs one field
  EXPECT_THROW(decode("0010110"), MalformedLabel);            // dangling half pair
  EXPECT_THROW(decode("001011"), MalformedLabel);             // unterminated
  EXPECT_THROW(decode("00101001"), MalformedLabel);           // "10" pair
  EXPECT_EQ(decode("00101101").fields.at(0).str(), "1");
  EXPECT_THROW(encode(StructuredLabel{LabelKind::HubD3, {}}), MalformedLabel);
}

TEST(Codec, SchemeLength) {
  std::vector<BitString> ls = {"0001", "000111"};
  EXPECT_EQ(scheme_length(ls), 6u);
  EXPECT_THROW(scheme_length(std::vector<BitString>{}), std::invalid_argument);
}

TEST(Codec, LabelFileRoundTrip) {
  std::mt19937_64 rng(4);
  std::vector<BitString> labels;
  for (int i = 0; i < 20; ++i) labels.push_back(encode(random_label(rng)));
  std::stringstream ss;
  write_labels(ss, labels);
  EXPECT_EQ(read_labels(ss, labels.size()), labels);

  std::istringstream missing("0 RootD3 0001\n");
  EXPECT_THROW(read_labels(missing, 2), ParseError);
  std::istringstream wrong_kind("0 HubD3 0001\n");
  EXPECT_THROW(read_labels(wrong_kind, 1), ParseError);
  std::istringstream dup("0 RootD3 0001\n0 RootD3 0001\n");
  EXPECT_THROW(read_labels(dup, 1), ParseError);
  std::istringstream unknown("3 RootD3 0001\n");
  EXPECT_THROW(read_labels(unknown, 1), ParseError);
}
