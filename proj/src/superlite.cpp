#include "evfront/superlite.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace evfront {

void validate_spec(const SuperLiteSpec& spec) {
  if (spec.input_channels < 1 || spec.descriptor_dim < 1)
    throw std::invalid_argument("SuperLiteSpec: input channels and descriptor dim must be >= 1");
  for (int w : spec.encoder_widths)
    if (w < 1) throw std::invalid_argument("SuperLiteSpec: encoder widths must be >= 1");
}

namespace {

void check_conv(const ConvLayer& c, int out, int in, int kernel, const char* name) {
  const auto expect = std::size_t(out) * std::size_t(in) * std::size_t(kernel) * std::size_t(kernel);
  if (c.out_channels != out || c.in_channels != in || c.kernel != kernel || c.weight.size() != expect ||
      c.bias.size() != std::size_t(out))
    throw std::invalid_argument(std::string("weight shape mismatch in ") + name);
}

void check_norm(const BatchNorm& n, int channels, const char* name) {
  const auto c = std::size_t(channels);
  if (n.scale.size() != c || n.shift.size() != c || n.mean.size() != c || n.variance.size() != c)
    throw std::invalid_argument(std::string("batch-norm shape mismatch in ") + name);
}

ConvLayer make_conv(int out, int in, int kernel) {
  ConvLayer c;
  c.out_channels = out;
  c.in_channels = in;
  c.kernel = kernel;
  c.weight.assign(std::size_t(out) * in * kernel * kernel, 0.f);
  c.bias.assign(std::size_t(out), 0.f);
  return c;
}

BatchNorm make_norm(int channels) {
  BatchNorm n;
  n.scale.assign(std::size_t(channels), 1.f);
  n.shift.assign(std::size_t(channels), 0.f);
  n.mean.assign(std::size_t(channels), 0.f);
  n.variance.assign(std::size_t(channels), 1.f);
  return n;
}

}  // namespace

void validate_weights(const WeightBundle& b) {
  validate_spec(b.spec);
  int in = b.spec.input_channels;
  for (int l = 0; l < SuperLiteSpec::kLayers; ++l) {
    const int out = b.spec.encoder_widths[l];
    check_conv(b.encoder[l].conv, out, in, 3, "encoder conv");
    check_norm(b.encoder[l].norm, out, "encoder");
    in = out;
  }
  check_conv(b.detector_head, b.spec.detector_head_channels(), in, 1, "detector head");
  check_conv(b.descriptor_head, b.spec.descriptor_dim, in, 1, "descriptor head");
}

WeightBundle zero_weights(const SuperLiteSpec& spec) {
  validate_spec(spec);
  WeightBundle b;
  b.spec = spec;
  int in = spec.input_channels;
  for (int l = 0; l < SuperLiteSpec::kLayers; ++l) {
    b.encoder[l].conv = make_conv(spec.encoder_widths[l], in, 3);
    b.encoder[l].norm = make_norm(spec.encoder_widths[l]);
    in = spec.encoder_widths[l];
  }
  b.detector_head = make_conv(spec.detector_head_channels(), in, 1);
  b.descriptor_head = make_conv(spec.descriptor_dim, in, 1);
  return b;
}

WeightBundle random_weights(const SuperLiteSpec& spec, std::uint64_t seed) {
  WeightBundle b = zero_weights(spec);
  std::mt19937_64 rng(seed);
  auto fill_conv = [&rng](ConvLayer& c) {
    const float bound = 1.f / std::sqrt(float(c.in_channels * c.kernel * c.kernel));
    std::uniform_real_distribution<float> u(-bound, bound);
    for (float& w : c.weight) w = u(rng);
    for (float& w : c.bias) w = u(rng);
  };
  auto uniform = [&rng](float lo, float hi) { return std::uniform_real_distribution<float>(lo, hi)(rng); };
  for (auto& layer : b.encoder) {
    fill_conv(layer.conv);
    for (std::size_t i = 0; i < layer.norm.scale.size(); ++i) {
      layer.norm.scale[i] = uniform(0.5f, 1.5f);
      layer.norm.shift[i] = uniform(-0.1f, 0.1f);
      layer.norm.mean[i] = uniform(-0.1f, 0.1f);
      layer.norm.variance[i] = uniform(0.5f, 1.5f);
    }
  }
  fill_conv(b.detector_head);
  fill_conv(b.descriptor_head);
  return b;
}

Tensor3 conv2d(const Tensor3& input, const ConvLayer& layer) {
  if (input.channels != layer.in_channels) throw std::invalid_argument("conv2d: input channel mismatch");
  const int H = input.height, W = input.width, k = layer.kernel, pad = k / 2;
  Tensor3 out(layer.out_channels, H, W);
  for (int oc = 0; oc < layer.out_channels; ++oc) {
    auto dst = out.plane(oc);
    std::fill(dst.begin(), dst.end(), layer.bias[std::size_t(oc)]);
    for (int ic = 0; ic < layer.in_channels; ++ic) {
      const float* src = input.plane(ic).data();
      const float* wk = layer.weight.data() + (std::size_t(oc) * layer.in_channels + ic) * std::size_t(k * k);
      for (int ky = 0; ky < k; ++ky) {
        const int dy = ky - pad;
        const int y0 = std::max(0, -dy), y1 = std::min(H, H - dy);
        for (int kx = 0; kx < k; ++kx) {
          const int dx = kx - pad;
          const int x0 = std::max(0, -dx), x1 = std::min(W, W - dx);
          const float w = wk[ky * k + kx];
          for (int y = y0; y < y1; ++y) {
            float* o = dst.data() + std::size_t(y) * W;
            const float* s = src + std::size_t(y + dy) * W + dx;
            for (int x = x0; x < x1; ++x) o[x] += w * s[x];
          }
        }
      }
    }
  }
  return out;
}

void batch_norm_relu(Tensor3& x, const BatchNorm& norm) {
  for (int c = 0; c < x.channels; ++c) {
    const float inv_std = 1.f / std::sqrt(norm.variance[std::size_t(c)] + norm.epsilon);
    const float mean = norm.mean[std::size_t(c)], scale = norm.scale[std::size_t(c)], shift = norm.shift[std::size_t(c)];
    for (float& v : x.plane(c)) v = std::max(0.f, (v - mean) * inv_std * scale + shift);
  }
}

Tensor3 max_pool2(const Tensor3& input) {
  if (input.height % 2 != 0 || input.width % 2 != 0) throw std::invalid_argument("max_pool2: odd spatial size");
  Tensor3 out(input.channels, input.height / 2, input.width / 2);
  for (int c = 0; c < input.channels; ++c)
    for (int y = 0; y < out.height; ++y)
      for (int x = 0; x < out.width; ++x)
        out.at(c, y, x) = std::max(std::max(input.at(c, 2 * y, 2 * x), input.at(c, 2 * y, 2 * x + 1)),
                                   std::max(input.at(c, 2 * y + 1, 2 * x), input.at(c, 2 * y + 1, 2 * x + 1)));
  return out;
}

Tensor3 cell_softmax(const Tensor3& logits) {
  Tensor3 out(logits.channels, logits.height, logits.width);
  const std::size_t n = logits.plane_size();
  std::vector<float> column(std::size_t(logits.channels));
  for (std::size_t i = 0; i < n; ++i) {
    float peak = -INFINITY;
    for (int c = 0; c < logits.channels; ++c) peak = std::max(peak, logits.data[std::size_t(c) * n + i]);
    float sum = 0.f;
    for (int c = 0; c < logits.channels; ++c) {
      column[std::size_t(c)] = std::exp(logits.data[std::size_t(c) * n + i] - peak);
      sum += column[std::size_t(c)];
    }
    for (int c = 0; c < logits.channels; ++c) out.data[std::size_t(c) * n + i] = column[std::size_t(c)] / sum;
  }
  return out;
}

Heatmap depth_to_space(const Tensor3& probabilities, int cell) {
  if (probabilities.channels != cell * cell + 1) throw std::invalid_argument("depth_to_space: expected c²+1 channels");
  Heatmap h{probabilities.width * cell, probabilities.height * cell, {}};
  h.scores.assign(std::size_t(h.width) * h.height, 0.f);
  for (int cy = 0; cy < probabilities.height; ++cy)
    for (int cx = 0; cx < probabilities.width; ++cx)
      for (int dy = 0; dy < cell; ++dy)
        for (int dx = 0; dx < cell; ++dx)
          h.scores[std::size_t(cy * cell + dy) * h.width + std::size_t(cx * cell + dx)] =
              probabilities.at(dy * cell + dx, cy, cx);
  return h;
}

SuperLite::SuperLite(WeightBundle weights) : weights_(std::move(weights)) { validate_weights(weights_); }

Tensor3 SuperLite::encode(const Tensor3& input) const {
  const int c = spec().cell();
  if (input.channels != spec().input_channels) throw std::invalid_argument("forward: input channel count mismatch");
  if (input.height % c != 0 || input.width % c != 0 || input.height == 0 || input.width == 0)
    throw std::invalid_argument("forward: input height and width must be positive multiples of " + std::to_string(c));
  Tensor3 x = input;
  for (const auto& layer : weights_.encoder) {
    x = conv2d(x, layer.conv);
    batch_norm_relu(x, layer.norm);
    x = max_pool2(x);
  }
  return x;
}

Tensor3 SuperLite::detector_logits(const Tensor3& features) const { return conv2d(features, weights_.detector_head); }

Tensor3 SuperLite::descriptor_head(const Tensor3& features) const { return conv2d(features, weights_.descriptor_head); }

ForwardOutput SuperLite::forward(const Tensor3& input) const {
  const Tensor3 features = encode(input);
  ForwardOutput out;
  out.heatmap = depth_to_space(cell_softmax(detector_logits(features)), spec().cell());
  out.descriptors.values = descriptor_head(features);
  return out;
}

}  // namespace evfront
