#include "evfront/superlite.hpp"

#include <bit>
#include <cstring>

namespace evfront {

namespace {

constexpr std::size_t kHeaderSize = 4 + 4 * 7;

void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(std::byte((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const std::byte* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(std::to_integer<std::uint8_t>(p[i])) << (8 * i);
  return v;
}

// Visits every tensor of a bundle in file order.
template <typename Bundle, typename Fn>
void for_each_tensor(Bundle& b, Fn&& fn) {
  for (auto& layer : b.encoder) {
    fn(layer.conv.weight);
    fn(layer.conv.bias);
    fn(layer.norm.scale);
    fn(layer.norm.shift);
    fn(layer.norm.mean);
    fn(layer.norm.variance);
    fn(layer.norm.epsilon);
  }
  fn(b.detector_head.weight);
  fn(b.detector_head.bias);
  fn(b.descriptor_head.weight);
  fn(b.descriptor_head.bias);
}

}  // namespace

std::vector<std::byte> save_weights(const WeightBundle& bundle) {
  validate_weights(bundle);
  std::vector<std::byte> out;
  for (char c : {'S', 'L', 'W', 'T'}) out.push_back(std::byte(c));
  put_u32(out, std::uint32_t(bundle.spec.input_channels));
  for (int w : bundle.spec.encoder_widths) put_u32(out, std::uint32_t(w));
  put_u32(out, std::uint32_t(bundle.spec.descriptor_dim));
  put_u32(out, std::uint32_t(bundle.spec.cell()));

  auto put = [&out](const auto& t) {
    if constexpr (std::is_same_v<std::decay_t<decltype(t)>, float>) {
      put_u32(out, std::bit_cast<std::uint32_t>(t));
    } else {
      for (float v : t) put_u32(out, std::bit_cast<std::uint32_t>(v));
    }
  };
  for_each_tensor(bundle, put);
  return out;
}

WeightBundle load_weights(std::span<const std::byte> bytes) {
  using Kind = WeightFormatError::Kind;
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "SLWT", 4) != 0)
    throw WeightFormatError(Kind::BadMagic, "weights: magic mismatch, expected SLWT");
  if (bytes.size() < kHeaderSize) throw WeightFormatError(Kind::ShapeMismatch, "weights: truncated header");

  SuperLiteSpec spec;
  const std::byte* p = bytes.data() + 4;
  spec.input_channels = int(get_u32(p));
  for (int l = 0; l < SuperLiteSpec::kLayers; ++l) spec.encoder_widths[l] = int(get_u32(p + 4 * (l + 1)));
  spec.descriptor_dim = int(get_u32(p + 20));
  const auto cell = get_u32(p + 24);
  constexpr std::uint32_t kMaxDim = 1u << 16;
  bool ok = spec.input_channels >= 1 && spec.descriptor_dim >= 1 && std::uint32_t(spec.input_channels) <= kMaxDim &&
            std::uint32_t(spec.descriptor_dim) <= kMaxDim;
  for (int w : spec.encoder_widths) ok = ok && w >= 1 && std::uint32_t(w) <= kMaxDim;
  if (!ok) throw WeightFormatError(Kind::InvalidSpec, "weights: header declares an empty or oversized network");
  if (cell != std::uint32_t(spec.cell()))
    throw WeightFormatError(Kind::InvalidSpec, "weights: cell size " + std::to_string(cell) + " does not match 4 layers");

  std::uint64_t floats = 0;
  std::uint64_t in = std::uint64_t(spec.input_channels);
  for (int w : spec.encoder_widths) {
    const auto out = std::uint64_t(w);
    floats += out * in * 9 + 5 * out + 1;
    in = out;
  }
  floats += (std::uint64_t(spec.detector_head_channels()) + std::uint64_t(spec.descriptor_dim)) * (in + 1);
  if (bytes.size() != kHeaderSize + 4 * floats)
    throw WeightFormatError(Kind::ShapeMismatch, "weights: expected " + std::to_string(kHeaderSize + 4 * floats) +
                                                     " bytes for the declared shapes, got " +
                                                     std::to_string(bytes.size()));

  WeightBundle bundle = zero_weights(spec);
  const std::byte* cursor = bytes.data() + kHeaderSize;
  auto take = [&cursor]() {
    const float v = std::bit_cast<float>(get_u32(cursor));
    cursor += 4;
    return v;
  };
  for_each_tensor(bundle, [&take](auto& t) {
    if constexpr (std::is_same_v<std::decay_t<decltype(t)>, float>) {
      t = take();
    } else {
      for (float& v : t) v = take();
    }
  });
  return bundle;
}

}  // namespace evfront
