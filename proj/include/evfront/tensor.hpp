#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace evfront {

/// Dense channel-major (C×H×W) float tensor.
struct Tensor3 {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<float> data;

  Tensor3() = default;
  Tensor3(int c, int h, int w, float fill = 0.f)
    : channels(c), height(h), width(w), data(std::size_t(c) * std::size_t(h) * std::size_t(w), fill) {
    if (c < 0 || h < 0 || w < 0) throw std::invalid_argument("Tensor3: negative dimension");
  }

  std::size_t plane_size() const { return std::size_t(height) * std::size_t(width); }
  float& at(int c, int y, int x) { return data[std::size_t(c) * plane_size() + std::size_t(y) * width + x]; }
  float at(int c, int y, int x) const { return data[std::size_t(c) * plane_size() + std::size_t(y) * width + x]; }
  std::span<float> plane(int c) { return {data.data() + std::size_t(c) * plane_size(), plane_size()}; }
  std::span<const float> plane(int c) const { return {data.data() + std::size_t(c) * plane_size(), plane_size()}; }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;
};

}  // namespace evfront
