#pragma once

#include "evfront/types.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace evfront {

enum class EventFormat { BinaryV1, Csv };

/// Decoding failure. `offset` is a byte offset for binary-v1 and a 1-based
/// line number for CSV.
class ParseError : public std::runtime_error {
public:
  enum class Kind { MalformedHeader, TruncatedRecord, MalformedRecord, DecreasingTimestamp, OutOfBounds };

  ParseError(Kind kind, std::size_t offset, const std::string& what)
    : std::runtime_error(what), kind_(kind), offset_(offset) {}

  Kind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

private:
  Kind kind_;
  std::size_t offset_;
};

namespace binary_v1 {
inline constexpr std::size_t header_size = 8;
inline constexpr std::size_t record_size = 13;
}  // namespace binary_v1

/// CSV carries no geometry; pass it here. It is ignored for binary-v1, whose
/// header holds width and height.
EventBatch parse_events(std::span<const std::byte> bytes, EventFormat format,
                        SensorGeometry csv_geometry = {});

std::vector<std::byte> write_events(const EventBatch& batch, EventFormat format);

std::vector<std::byte> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::byte> bytes);

}  // namespace evfront
