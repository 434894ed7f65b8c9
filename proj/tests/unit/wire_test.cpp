#include "test_util.hpp"

#include "whed/wire/encoder_frame.hpp"
#include "whed/wire/pose_record.hpp"

#include <doctest.h>

#include <vector>

using namespace whed;
using namespace whed::wire;

namespace {

using Bytes = std::vector<std::uint8_t>;

Bytes bytes_of(const AdcChannels& ch) {
  const auto f = encode_frame(ch);
  return Bytes(f.begin(), f.end());
}

Bytes concat(std::initializer_list<Bytes> parts) {
  Bytes out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

AdcChannels random_frame(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(0, 4095);
  AdcChannels ch{};
  for (auto& c : ch) c = static_cast<std::uint16_t>(d(rng));
  return ch;
}

std::vector<AdcChannels> decode_all(const Bytes& b) {
  FrameDecoder d;
  return d.feed(b);
}

}  // namespace

TEST_SUITE("wire") {

TEST_CASE("encode_frame byte layout") {
  CHECK(bytes_of({0, 0, 0, 0, 0, 0}) == Bytes{0xAA, 0xBB, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  CHECK(bytes_of({4095, 0, 0, 0, 0, 0}) == Bytes{0xAA, 0xBB, 0xFF, 0x0F, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  CHECK(bytes_of({1, 2, 3, 4, 5, 6}) ==
        Bytes{0xAA, 0xBB, 0x01, 0x00, 0x02, 0x00, 0x03, 0x00, 0x04, 0x00, 0x05, 0x00, 0x06, 0x00});
  CHECK(bytes_of({0x123, 0, 0, 0, 0, 0x0ABC})[2] == 0x23);
  CHECK(bytes_of({0x123, 0, 0, 0, 0, 0x0ABC})[3] == 0x01);
  CHECK(bytes_of({0x123, 0, 0, 0, 0, 0x0ABC})[13] == 0x0A);
  CHECK_THROWS_AS(encode_frame({0, 0, 4096, 0, 0, 0}), EncodeError);
}

TEST_CASE("single frame round-trip and boundary values") {
  for (std::uint16_t a : {0, 1, 2047, 4094, 4095}) {
    for (std::uint16_t b : {0, 4095}) {
      const AdcChannels ch{a, b, a, b, a, b};
      const auto out = decode_all(bytes_of(ch));
      REQUIRE(out.size() == 1);
      CHECK(out[0] == ch);
    }
  }
}

TEST_CASE("garbage byte before two frames") {
  const AdcChannels f1{1, 2, 3, 4, 5, 6};
  const AdcChannels f2{4095, 0, 4095, 0, 4095, 0};
  FrameDecoder d;
  const auto out = d.feed(concat({{0x42}, bytes_of(f1), bytes_of(f2)}));
  REQUIRE(out.size() == 2);
  CHECK(out[0] == f1);
  CHECK(out[1] == f2);
  CHECK(d.stats().skipped_bytes == 1);
  CHECK(d.corrupt_frames() == 1);
}

TEST_CASE("frame split at byte 7 arrives on the second call") {
  const AdcChannels f{10, 20, 30, 40, 50, 60};
  const Bytes b = bytes_of(f);
  FrameDecoder d;
  CHECK(d.feed(std::span(b).first(7)).empty());
  CHECK(d.pending_bytes() == 7);
  const auto out = d.feed(std::span(b).subspan(7));
  REQUIRE(out.size() == 1);
  CHECK(out[0] == f);
  CHECK(d.pending_bytes() == 0);
  CHECK(d.corrupt_frames() == 0);
}

TEST_CASE("byte-at-a-time feeding yields the same frames") {
  std::mt19937_64 rng(7);
  std::vector<AdcChannels> frames;
  Bytes stream;
  for (int i = 0; i < 200; ++i) {
    frames.push_back(random_frame(rng));
    const Bytes b = bytes_of(frames.back());
    stream.insert(stream.end(), b.begin(), b.end());
  }
  FrameDecoder d;
  std::vector<AdcChannels> out;
  for (std::uint8_t byte : stream) {
    for (const auto& f : d.feed(std::span(&byte, 1))) out.push_back(f);
  }
  CHECK(out == frames);
}

TEST_CASE("candidate with an out-of-range channel is rejected, not swallowed") {
  // A false header whose 14 bytes would decode to a channel > 4095, directly
  // followed by a real frame that starts inside that window.
  const AdcChannels good{100, 200, 300, 400, 500, 600};
  const Bytes fake{0xAA, 0xBB, 0xFF, 0xFF};
  FrameDecoder d;
  const auto out = d.feed(concat({fake, bytes_of(good)}));
  REQUIRE(out.size() == 1);
  CHECK(out[0] == good);
  CHECK(d.stats().rejected_candidates == 1);
  CHECK(d.corrupt_frames() == 1);
}

TEST_CASE("intact frames survive a corruption burst") {
  std::mt19937_64 rng(13);
  const AdcChannels a = random_frame(rng);
  const AdcChannels b = random_frame(rng);
  Bytes burst(37);
  for (auto& x : burst) x = static_cast<std::uint8_t>(rng());
  burst.back() = 0x00;  // keep the burst from ending in a partial header
  const auto out = decode_all(concat({bytes_of(a), burst, bytes_of(b), bytes_of(a)}));
  REQUIRE(out.size() >= 3);
  CHECK(out.front() == a);
  CHECK(out[out.size() - 2] == b);
  CHECK(out.back() == a);
}

TEST_CASE("pose record text format") {
  const PoseWireRecord id{Timestamp{0}, RigidTransform::identity()};
  CHECK(encode_pose_record(id) == "0 0 0 0 1 0 0 0\n");
  const auto back = decode_pose_record("0 0 0 0 1 0 0 0");
  CHECK(back.t == Timestamp{0});
  CHECK(back.pose == RigidTransform::identity());
}

TEST_CASE("pose record round-trip") {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<std::int64_t> t(0, 4'000'000'000'000LL);
  for (int i = 0; i < 2000; ++i) {
    const PoseWireRecord r{Timestamp{t(rng)}, test::random_transform(rng, 5.0)};
    const auto back = decode_pose_record(encode_pose_record(r));
    CHECK(back.t == r.t);
    CHECK((back.pose.translation() - r.pose.translation()).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((back.pose.rotation().coeffs() - r.pose.rotation().coeffs()).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("malformed pose records are rejected with a reason") {
  auto reason = [](std::string_view line) {
    try {
      (void)decode_pose_record(line);
    } catch (const PoseDecodeError& e) {
      return e.reason();
    }
    FAIL("record was accepted: " << line);
    return PoseRejectReason::FieldCount;
  };
  CHECK(reason("0 0 0 0 1 0 0") == PoseRejectReason::FieldCount);
  CHECK(reason("0 0 0 0 1 0 0 0 0") == PoseRejectReason::FieldCount);
  CHECK(reason("") == PoseRejectReason::FieldCount);
  CHECK(reason("0  0 0 1 0 0 0") == PoseRejectReason::NonNumeric);
  CHECK(reason("0 0 0 x 1 0 0 0") == PoseRejectReason::NonNumeric);
  CHECK(reason("1.5 0 0 0 1 0 0 0") == PoseRejectReason::NonNumeric);
  CHECK(reason("0 0 0 nan 1 0 0 0") == PoseRejectReason::NonNumeric);
  CHECK(reason("0 0 0 0 1.01 0 0 0") == PoseRejectReason::QuaternionNorm);
  CHECK(reason("0 0 0 0 0 0 0 0") == PoseRejectReason::QuaternionNorm);
  try {
    (void)decode_pose_record("1 2 3");
  } catch (const PoseDecodeError& e) {
    CHECK(std::string(e.what()).find("field count") != std::string::npos);
  }
  // Within 1e-3 of unit norm: accepted and renormalized.
  const auto r = decode_pose_record("5 0 0 0 1.0005 0 0 0\n");
  CHECK(r.pose.rotation().w() == 1.0);
}

TEST_CASE("line splitter reassembles records across chunks") {
  LineSplitter s;
  CHECK(s.feed("0 0 0 0 1 0").empty());
  const auto a = s.feed(" 0 0\n1 0 0 0 1 0 0 0\n2 0");
  REQUIRE(a.size() == 2);
  CHECK(a[0] == "0 0 0 0 1 0 0 0");
  CHECK(a[1] == "1 0 0 0 1 0 0 0");
  CHECK(s.pending_bytes() == 3);
}

}  // TEST_SUITE
