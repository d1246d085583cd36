#pragma once

#include "evfront/surface.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace evfront {

/// Binary 16-bit PGM (P5, maxval 65535, big-endian samples), value = round(65535·v).
std::vector<std::byte> encode_pgm16(std::span<const float> values, int width, int height);

/// Writes one PGM per channel as `<prefix>_chNN.pgm` and returns the paths.
std::vector<std::string> write_mcts_pgms(const MctsTensor& tensor, const std::string& prefix);

/// Little-endian dump: 32-byte header ("MCTS", u32 K, u32 height, u32 width,
/// u64 tau, u64 reserved = 0), then K u64 window durations, then 2K·H·W f32.
std::vector<std::byte> encode_mcts_dump(const MctsTensor& tensor);
MctsTensor decode_mcts_dump(std::span<const std::byte> bytes);

}  // namespace evfront
