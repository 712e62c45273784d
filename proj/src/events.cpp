// Copyright 2026 The evcorner Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "evcorner/events.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "evcorner/error.hpp"

namespace evcorner {
namespace {

constexpr std::size_t kBinaryRecordSize = 13;

template <typename T>
bool parse_field(std::string_view s, T& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

[[noreturn]] void fail_line(std::size_t line_no, std::string_view line,
                            std::string_view why) {
  std::ostringstream msg;
  msg << "line " << line_no << ": " << why << " in \"" << line << "\"";
  throw ParseError(msg.str());
}

void put_le(std::string& buf, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) {
    buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}

std::uint64_t get_le(const unsigned char* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

void validate(const SensorGeometry& geometry) {
  if (geometry.width < 1 || geometry.height < 1) {
    throw ConfigError("sensor geometry must be at least 1x1, got " +
                      std::to_string(geometry.width) + "x" +
                      std::to_string(geometry.height));
  }
}

SensorGeometry bounding_geometry(std::span<const Event> events) {
  SensorGeometry g{1, 1};
  for (const Event& e : events) {
    g.width = std::max(g.width, e.x + 1);
    g.height = std::max(g.height, e.y + 1);
  }
  return g;
}

StreamFormat parse_format(std::string_view name) {
  if (name == "csv") return StreamFormat::kCsv;
  if (name == "bin" || name == "binary") return StreamFormat::kBinary;
  throw ConfigError("unknown event format '" + std::string(name) +
                    "' (expected csv or bin)");
}

StreamFormat format_for_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return (ext == ".bin" || ext == ".dat") ? StreamFormat::kBinary
                                          : StreamFormat::kCsv;
}

Event parse_csv_event(std::string_view line, std::size_t line_no) {
  std::array<std::string_view, 4> fields;
  std::size_t count = 0;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (count == fields.size()) fail_line(line_no, line, "too many fields");
    fields[count++] = line.substr(start, comma - start);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (count != 4) fail_line(line_no, line, "expected 4 fields x,y,t,p");

  long long x = 0, y = 0, t = 0, p = 0;
  if (!parse_field(fields[0], x) || x < 0 || x > 0xFFFF) {
    fail_line(line_no, line, "bad x");
  }
  if (!parse_field(fields[1], y) || y < 0 || y > 0xFFFF) {
    fail_line(line_no, line, "bad y");
  }
  if (!parse_field(fields[2], t) || t < 0) fail_line(line_no, line, "bad t");
  if (!parse_field(fields[3], p)) fail_line(line_no, line, "bad polarity");
  Event e;
  e.x = static_cast<std::uint16_t>(x);
  e.y = static_cast<std::uint16_t>(y);
  e.t = t;
  if (p == 1) {
    e.p = 1;
  } else if (p == 0 || p == -1) {
    e.p = -1;
  } else {
    fail_line(line_no, line, "polarity must be 0/1 or -1/1");
  }
  return e;
}

void check_monotonic(std::span<const Event> events) {
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].t < events[i - 1].t) {
      throw OrderingError("event " + std::to_string(i) + " at t=" +
                          std::to_string(events[i].t) +
                          " precedes previous t=" +
                          std::to_string(events[i - 1].t) +
                          " (use --sort to reorder)");
    }
  }
}

std::vector<Event> read_stream(const std::filesystem::path& path,
                               const ReadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<Event> events;

  if (options.format == StreamFormat::kCsv) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::string_view view(line);
      if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
      if (view.empty() || view.front() == '#') continue;
      events.push_back(parse_csv_event(view, line_no));
    }
    if (in.bad()) throw IoError("read failure on " + path.string());
  } else {
    const std::string bytes((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failure on " + path.string());
    if (bytes.size() % kBinaryRecordSize != 0) {
      throw ParseError("binary stream truncated at offset " +
                       std::to_string(bytes.size() -
                                      bytes.size() % kBinaryRecordSize));
    }
    events.reserve(bytes.size() / kBinaryRecordSize);
    const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
    for (std::size_t off = 0; off < bytes.size(); off += kBinaryRecordSize) {
      const unsigned char* rec = data + off;
      Event e;
      e.x = static_cast<std::uint16_t>(get_le(rec, 2));
      e.y = static_cast<std::uint16_t>(get_le(rec + 2, 2));
      const std::uint64_t t = get_le(rec + 4, 8);
      const auto p = static_cast<std::int8_t>(rec[12]);
      if (t > static_cast<std::uint64_t>(INT64_MAX)) {
        throw ParseError("timestamp overflow at offset " +
                         std::to_string(off));
      }
      if (p != 1 && p != -1) {
        throw ParseError("polarity " + std::to_string(p) + " at offset " +
                         std::to_string(off));
      }
      e.t = static_cast<Timestamp>(t);
      e.p = p;
      events.push_back(e);
    }
  }

  if (options.sort) {
    std::stable_sort(events.begin(), events.end(),
                     [](const Event& a, const Event& b) { return a.t < b.t; });
  } else {
    check_monotonic(events);
  }
  return events;
}

void write_stream(std::span<const Event> events,
                  const std::filesystem::path& path, StreamFormat format) {
  std::string buf;
  if (format == StreamFormat::kCsv) {
    buf.reserve(events.size() * 20);
    char tmp[32];
    for (const Event& e : events) {
      for (long long v : {static_cast<long long>(e.x),
                          static_cast<long long>(e.y),
                          static_cast<long long>(e.t)}) {
        const auto res = std::to_chars(tmp, tmp + sizeof(tmp), v);
        buf.append(tmp, res.ptr);
        buf.push_back(',');
      }
      buf.push_back(e.p > 0 ? '1' : '0');
      buf.push_back('\n');
    }
  } else {
    buf.reserve(events.size() * kBinaryRecordSize);
    for (const Event& e : events) {
      put_le(buf, e.x, 2);
      put_le(buf, e.y, 2);
      put_le(buf, static_cast<std::uint64_t>(e.t), 8);
      buf.push_back(static_cast<char>(e.p));
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  out.close();
  if (!out) throw IoError("write failure on " + path.string());
}

TrailFilter::TrailFilter(SensorGeometry geometry, Timestamp timeout)
    : geometry_(geometry),
      width_(static_cast<std::size_t>(geometry.width)),
      timeout_(timeout) {
  validate(geometry_);
  if (timeout_ < 0) throw ConfigError("trail timeout must be >= 0");
  last_polarity_.assign(geometry_.pixels(), 0);
  last_time_.assign(geometry_.pixels(), 0);
}

void TrailFilter::reset() {
  std::fill(last_polarity_.begin(), last_polarity_.end(), 0);
  std::fill(last_time_.begin(), last_time_.end(), 0);
}

std::vector<Event> trail_filter(std::span<const Event> events,
                                const SensorGeometry& geometry,
                                Timestamp timeout) {
  TrailFilter filter(geometry, timeout);
  std::vector<Event> kept;
  kept.reserve(events.size() / 2);
  for (const Event& e : events) {
    if (!geometry.contains(e.x, e.y)) {
      throw BoundsError("event (" + std::to_string(e.x) + "," +
                        std::to_string(e.y) + ") outside sensor");
    }
    if (filter.accept(e)) kept.push_back(e);
  }
  return kept;
}

}  // namespace evcorner
