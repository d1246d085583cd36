#include "evfront/mcts_io.hpp"

#include "evfront/event_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace evfront {

namespace {

constexpr std::size_t kDumpHeader = 32;

template <typename T>
void put_le(std::vector<std::byte>& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(std::byte((v >> (8 * i)) & 0xff));
}

template <typename T>
T get_le(const std::byte* p) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= T(std::to_integer<std::uint8_t>(p[i])) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::byte> encode_pgm16(std::span<const float> values, int width, int height) {
  if (values.size() != std::size_t(width) * std::size_t(height)) throw std::invalid_argument("pgm: size mismatch");
  const std::string header = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n65535\n";
  std::vector<std::byte> out;
  out.reserve(header.size() + values.size() * 2);
  for (char c : header) out.push_back(std::byte(c));
  for (float v : values) {
    const auto q = std::uint16_t(std::lround(65535.0 * std::clamp(double(v), 0.0, 1.0)));
    out.push_back(std::byte(q >> 8));
    out.push_back(std::byte(q & 0xff));
  }
  return out;
}

std::vector<std::string> write_mcts_pgms(const MctsTensor& tensor, const std::string& prefix) {
  std::vector<std::string> paths;
  for (int c = 0; c < tensor.channels.channels; ++c) {
    char suffix[32];
    std::snprintf(suffix, sizeof suffix, "_ch%02d.pgm", c);
    paths.push_back(prefix + suffix);
    write_file(paths.back(), encode_pgm16(tensor.channels.plane(c), tensor.channels.width, tensor.channels.height));
  }
  return paths;
}

std::vector<std::byte> encode_mcts_dump(const MctsTensor& tensor) {
  const auto K = std::uint32_t(tensor.K());
  if (tensor.channels.channels != int(2 * K)) throw std::invalid_argument("mcts dump: channel count is not 2K");
  std::vector<std::byte> out;
  out.reserve(kDumpHeader + 8 * K + tensor.channels.data.size() * 4);
  for (char c : {'M', 'C', 'T', 'S'}) out.push_back(std::byte(c));
  put_le(out, K);
  put_le(out, std::uint32_t(tensor.channels.height));
  put_le(out, std::uint32_t(tensor.channels.width));
  put_le(out, std::uint64_t(tensor.tau));
  put_le(out, std::uint64_t(0));
  for (Timestamp dt : tensor.window_durations) put_le(out, std::uint64_t(dt));
  for (float v : tensor.channels.data) put_le(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

MctsTensor decode_mcts_dump(std::span<const std::byte> bytes) {
  if (bytes.size() < kDumpHeader || std::memcmp(bytes.data(), "MCTS", 4) != 0)
    throw std::runtime_error("mcts dump: bad header");
  const auto K = get_le<std::uint32_t>(bytes.data() + 4);
  const auto h = get_le<std::uint32_t>(bytes.data() + 8);
  const auto w = get_le<std::uint32_t>(bytes.data() + 12);
  if (K == 0 || h == 0 || w == 0 || K > 1024 || h > 65535 || w > 65535)
    throw std::runtime_error("mcts dump: implausible dimensions");
  const std::size_t values = std::size_t(2 * K) * h * w;
  if (bytes.size() != kDumpHeader + 8 * std::size_t(K) + 4 * values)
    throw std::runtime_error("mcts dump: size does not match header");

  MctsTensor t;
  t.tau = Timestamp(get_le<std::uint64_t>(bytes.data() + 16));
  const std::byte* p = bytes.data() + kDumpHeader;
  for (std::uint32_t k = 0; k < K; ++k, p += 8) t.window_durations.push_back(Timestamp(get_le<std::uint64_t>(p)));
  t.channels = Tensor3(int(2 * K), int(h), int(w));
  for (float& v : t.channels.data) {
    v = std::bit_cast<float>(get_le<std::uint32_t>(p));
    p += 4;
  }
  return t;
}

}  // namespace evfront
