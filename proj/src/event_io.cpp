#include "evfront/event_io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string_view>

namespace evfront {

void validate_batch(const EventBatch& batch) {
  if (!batch.geometry.valid()) throw std::invalid_argument("sensor geometry must be at least 1x1");
  for (std::size_t i = 0; i < batch.events.size(); ++i) {
    const Event& e = batch.events[i];
    if (e.t < 0) throw std::invalid_argument("negative timestamp at event " + std::to_string(i));
    if (!batch.geometry.contains(e.x, e.y))
      throw std::invalid_argument("event " + std::to_string(i) + " outside sensor geometry");
    if (i > 0 && e.t < batch.events[i - 1].t)
      throw std::invalid_argument("decreasing timestamp at event " + std::to_string(i));
  }
}

namespace {

template <typename T>
T load_le(const std::byte* p) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= T(std::to_integer<std::uint8_t>(p[i])) << (8 * i);
  return v;
}

template <typename T>
void store_le(std::vector<std::byte>& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(std::byte((v >> (8 * i)) & 0xff));
}

EventBatch parse_binary(std::span<const std::byte> bytes) {
  using namespace binary_v1;
  if (bytes.size() < header_size)
    throw ParseError(ParseError::Kind::MalformedHeader, 0, "binary-v1: header shorter than 8 bytes");
  if (std::memcmp(bytes.data(), "EVT1", 4) != 0)
    throw ParseError(ParseError::Kind::MalformedHeader, 0, "binary-v1: bad magic, expected EVT1");

  EventBatch batch;
  batch.geometry.width = load_le<std::uint16_t>(bytes.data() + 4);
  batch.geometry.height = load_le<std::uint16_t>(bytes.data() + 6);
  if (!batch.geometry.valid())
    throw ParseError(ParseError::Kind::MalformedHeader, 4, "binary-v1: zero width or height");

  const std::size_t body = bytes.size() - header_size;
  if (body % record_size != 0) {
    const std::size_t offset = header_size + (body / record_size) * record_size;
    throw ParseError(ParseError::Kind::TruncatedRecord, offset,
                     "binary-v1: truncated record at byte " + std::to_string(offset));
  }

  batch.events.reserve(body / record_size);
  for (std::size_t off = header_size; off < bytes.size(); off += record_size) {
    const std::byte* r = bytes.data() + off;
    const auto t = load_le<std::uint64_t>(r);
    const auto x = load_le<std::uint16_t>(r + 8);
    const auto y = load_le<std::uint16_t>(r + 10);
    const auto p = std::to_integer<std::uint8_t>(r[12]);
    const std::string at = " at byte " + std::to_string(off);
    if (t > std::uint64_t(std::numeric_limits<Timestamp>::max()))
      throw ParseError(ParseError::Kind::MalformedRecord, off, "binary-v1: timestamp overflow" + at);
    if (p > 1) throw ParseError(ParseError::Kind::MalformedRecord, off, "binary-v1: polarity byte not 0/1" + at);
    if (!batch.geometry.contains(x, y))
      throw ParseError(ParseError::Kind::OutOfBounds, off, "binary-v1: coordinate out of bounds" + at);
    if (!batch.events.empty() && Timestamp(t) < batch.events.back().t)
      throw ParseError(ParseError::Kind::DecreasingTimestamp, off, "binary-v1: decreasing timestamp" + at);
    batch.events.push_back({Timestamp(t), x, y, p ? Polarity::Positive : Polarity::Negative});
  }
  return batch;
}

template <typename T>
bool parse_field(std::string_view s, T& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

EventBatch parse_csv(std::span<const std::byte> bytes, SensorGeometry geometry) {
  if (!geometry.valid())
    throw ParseError(ParseError::Kind::MalformedHeader, 0, "csv: geometry must be supplied (width, height >= 1)");
  std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());

  EventBatch batch;
  batch.geometry = geometry;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line_no == 1 && line == "t,x,y,p") continue;

    std::string_view fields[4];
    std::size_t n = 0;
    for (std::size_t start = 0;;) {
      const auto comma = line.find(',', start);
      if (n == 4) { n = 5; break; }
      fields[n++] = line.substr(start, comma == std::string_view::npos ? comma : comma - start);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    const std::string at = " at line " + std::to_string(line_no);
    Timestamp t = 0;
    int x = 0, y = 0, p = 0;
    if (n != 4 || !parse_field(fields[0], t) || !parse_field(fields[1], x) || !parse_field(fields[2], y) ||
        !parse_field(fields[3], p) || t < 0 || (p != 0 && p != 1))
      throw ParseError(ParseError::Kind::MalformedRecord, line_no, "csv: malformed record" + at);
    if (!geometry.contains(x, y))
      throw ParseError(ParseError::Kind::OutOfBounds, line_no, "csv: coordinate out of bounds" + at);
    if (!batch.events.empty() && t < batch.events.back().t)
      throw ParseError(ParseError::Kind::DecreasingTimestamp, line_no, "csv: decreasing timestamp" + at);
    batch.events.push_back({t, std::uint16_t(x), std::uint16_t(y), p ? Polarity::Positive : Polarity::Negative});
  }
  return batch;
}

}  // namespace

EventBatch parse_events(std::span<const std::byte> bytes, EventFormat format, SensorGeometry csv_geometry) {
  return format == EventFormat::BinaryV1 ? parse_binary(bytes) : parse_csv(bytes, csv_geometry);
}

std::vector<std::byte> write_events(const EventBatch& batch, EventFormat format) {
  std::vector<std::byte> out;
  if (format == EventFormat::BinaryV1) {
    if (batch.geometry.width > 0xffff || batch.geometry.height > 0xffff)
      throw std::invalid_argument("binary-v1: geometry exceeds 16-bit range");
    out.reserve(binary_v1::header_size + batch.events.size() * binary_v1::record_size);
    for (char c : std::string_view("EVT1")) out.push_back(std::byte(c));
    store_le(out, std::uint16_t(batch.geometry.width));
    store_le(out, std::uint16_t(batch.geometry.height));
    for (const Event& e : batch.events) {
      store_le(out, std::uint64_t(e.t));
      store_le(out, e.x);
      store_le(out, e.y);
      out.push_back(std::byte(e.p == Polarity::Positive ? 1 : 0));
    }
    return out;
  }

  std::string text = "t,x,y,p\n";
  text.reserve(text.size() + batch.events.size() * 20);
  for (const Event& e : batch.events) {
    text += std::to_string(e.t);
    text += ',';
    text += std::to_string(e.x);
    text += ',';
    text += std::to_string(e.y);
    text += e.p == Polarity::Positive ? ",1\n" : ",0\n";
  }
  out.resize(text.size());
  std::memcpy(out.data(), text.data(), text.size());
  return out;
}

std::vector<std::byte> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::byte> out(raw.size());
  std::memcpy(out.data(), raw.data(), raw.size());
  return out;
}

void write_file(const std::string& path, std::span<const std::byte> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace evfront
