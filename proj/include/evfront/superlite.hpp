#pragma once

#include "evfront/keypoints.hpp"
#include "evfront/surface.hpp"
#include "evfront/tensor.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace evfront {

/// Four conv/batch-norm/ReLU/max-pool stages, a cell-softmax detector head
/// with a dustbin channel, and a 1×1 descriptor head.
struct SuperLiteSpec {
  static constexpr int kLayers = 4;

  int input_channels = 8;
  std::array<int, kLayers> encoder_widths = {32, 64, 128, 128};
  int descriptor_dim = 64;

  int cell() const { return 1 << kLayers; }
  int detector_head_channels() const { return cell() * cell() + 1; }

  friend bool operator==(const SuperLiteSpec&, const SuperLiteSpec&) = default;
};

void validate_spec(const SuperLiteSpec& spec);

struct ConvLayer {
  int out_channels = 0;
  int in_channels = 0;
  int kernel = 1;
  std::vector<float> weight;  // [out][in][kernel][kernel]
  std::vector<float> bias;    // [out]

  friend bool operator==(const ConvLayer&, const ConvLayer&) = default;
};

struct BatchNorm {
  std::vector<float> scale, shift, mean, variance;
  float epsilon = 1e-5f;

  friend bool operator==(const BatchNorm&, const BatchNorm&) = default;
};

struct EncoderLayer {
  ConvLayer conv;  // 3×3, stride 1, padding 1
  BatchNorm norm;

  friend bool operator==(const EncoderLayer&, const EncoderLayer&) = default;
};

struct WeightBundle {
  SuperLiteSpec spec;
  std::array<EncoderLayer, SuperLiteSpec::kLayers> encoder;
  ConvLayer detector_head;    // 1×1 → c²+1
  ConvLayer descriptor_head;  // 1×1 → D

  friend bool operator==(const WeightBundle&, const WeightBundle&) = default;
};

/// Throws std::invalid_argument if any tensor disagrees with `bundle.spec`.
void validate_weights(const WeightBundle& bundle);

/// Convolutions uniform in ±1/sqrt(fan_in); batch-norm statistics drawn near
/// the identity transform.
WeightBundle random_weights(const SuperLiteSpec& spec, std::uint64_t seed);

/// Every parameter zero except unit batch-norm scale and variance.
WeightBundle zero_weights(const SuperLiteSpec& spec);

struct ForwardOutput {
  Heatmap heatmap;
  DescriptorMap descriptors;
};

class SuperLite {
public:
  explicit SuperLite(WeightBundle weights);

  const SuperLiteSpec& spec() const { return weights_.spec; }
  const WeightBundle& weights() const { return weights_; }

  /// Final encoder map, widths[3] × H/c × W/c.
  Tensor3 encode(const Tensor3& input) const;
  Tensor3 detector_logits(const Tensor3& features) const;
  Tensor3 descriptor_head(const Tensor3& features) const;

  ForwardOutput forward(const Tensor3& input) const;
  ForwardOutput forward(const MctsTensor& input) const { return forward(input.channels); }

private:
  WeightBundle weights_;
};

/// Per-position softmax across channels.
Tensor3 cell_softmax(const Tensor3& logits);

/// Drops the last (dustbin) channel and unfolds each c²-vector into a c×c
/// pixel block, channel index = dy·c + dx.
Heatmap depth_to_space(const Tensor3& probabilities, int cell);

// Building blocks, exposed for tests and benchmarks.
Tensor3 conv2d(const Tensor3& input, const ConvLayer& layer);
void batch_norm_relu(Tensor3& x, const BatchNorm& norm);
Tensor3 max_pool2(const Tensor3& input);

/// Binary "SLWT": magic, u32 input_channels, 4×u32 encoder widths, u32 D,
/// u32 cell, then every tensor in declaration order as little-endian f32.
std::vector<std::byte> save_weights(const WeightBundle& bundle);
WeightBundle load_weights(std::span<const std::byte> bytes);

class WeightFormatError : public std::runtime_error {
public:
  enum class Kind { BadMagic, InvalidSpec, ShapeMismatch };
  WeightFormatError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

}  // namespace evfront
