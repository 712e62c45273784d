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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "evcorner/error.hpp"
#include "evcorner/events.hpp"
#include "evcorner/random.hpp"

namespace fs = std::filesystem;
using namespace evcorner;

namespace {

fs::path temp_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "evcorner_test_events";
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

std::vector<Event> random_stream(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<Event> out;
  Timestamp t = 0;
  for (std::size_t i = 0; i < n; ++i) {
    t += static_cast<Timestamp>(uniform_index(rng, 50));
    out.push_back({static_cast<std::uint16_t>(uniform_index(rng, 640)),
                   static_cast<std::uint16_t>(uniform_index(rng, 480)), t,
                   static_cast<std::int8_t>(uniform_index(rng, 2) ? 1 : -1)});
  }
  return out;
}

// Keep rule written out independently of TrailFilter.
std::vector<Event> trail_oracle(const std::vector<Event>& in, Timestamp timeout) {
  std::vector<Event> kept;
  std::vector<Event> out;
  for (const Event& e : in) {
    const Event* last = nullptr;
    for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
      if (it->x == e.x && it->y == e.y) {
        last = &*it;
        break;
      }
    }
    if (!last || last->p != e.p || e.t - last->t >= timeout) {
      kept.push_back(e);
      out.push_back(e);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("csv record maps fields and polarity") {
  CHECK(parse_csv_event("10,20,1000,1") == Event{10, 20, 1000, 1});
  CHECK(parse_csv_event("10,20,1000,0") == Event{10, 20, 1000, -1});
  CHECK(parse_csv_event("10,20,1000,-1") == Event{10, 20, 1000, -1});
}

TEST_CASE("csv record rejects bad polarity and malformed fields") {
  CHECK_THROWS_AS(parse_csv_event("10,20,1000,2"), ParseError);
  CHECK_THROWS_AS(parse_csv_event("10,20,1000"), ParseError);
  CHECK_THROWS_AS(parse_csv_event("a,20,1000,1"), ParseError);
  CHECK_THROWS_AS(parse_csv_event("10,20,-5,1"), ParseError);
  CHECK_THROWS_AS(parse_csv_event("70000,20,5,1"), ParseError);
}

TEST_CASE("parse errors carry the line number") {
  const fs::path p = temp_path("bad_line.csv");
  write_text(p, "1,1,0,1\n1,1,5,1\n1,1,9,7\n");
  try {
    read_stream(p, {});
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }
}

TEST_CASE("empty file yields an empty stream") {
  const fs::path p = temp_path("empty.csv");
  write_text(p, "");
  CHECK(read_stream(p, {}).empty());
  const fs::path b = temp_path("empty.bin");
  write_stream({}, b, StreamFormat::kBinary);
  CHECK(fs::file_size(b) == 0);
  CHECK(read_stream(b, {StreamFormat::kBinary, false}).empty());
}

TEST_CASE("round trip is exact for both formats") {
  const auto events = random_stream(7, 1000);
  for (StreamFormat f : {StreamFormat::kCsv, StreamFormat::kBinary}) {
    const fs::path p = temp_path(f == StreamFormat::kCsv ? "rt.csv" : "rt.bin");
    write_stream(events, p, f);
    CHECK(read_stream(p, {f, false}) == events);
  }
}

TEST_CASE("binary records are 13 bytes and truncation is reported") {
  const auto events = random_stream(3, 10);
  const fs::path p = temp_path("trunc.bin");
  write_stream(events, p, StreamFormat::kBinary);
  CHECK(fs::file_size(p) == 130);
  fs::resize_file(p, 127);
  CHECK_THROWS_AS(read_stream(p, {StreamFormat::kBinary, false}), ParseError);
}

TEST_CASE("write to an unwritable path is an I/O error") {
  CHECK_THROWS_AS(write_stream({}, "/nonexistent_dir/x/y.csv", StreamFormat::kCsv),
                  IoError);
  CHECK_THROWS_AS(read_stream("/nonexistent_dir/none.csv", {}), IoError);
}

TEST_CASE("non-monotonic input is rejected unless sorting is requested") {
  const fs::path p = temp_path("order.csv");
  write_text(p, "1,1,10,1\n2,2,5,0\n3,3,5,1\n");
  CHECK_THROWS_AS(read_stream(p, {}), OrderingError);
  const auto sorted = read_stream(p, {StreamFormat::kCsv, true});
  REQUIRE(sorted.size() == 3);
  CHECK(sorted[0] == Event{2, 2, 5, -1});
  CHECK(sorted[1] == Event{3, 3, 5, 1});
  CHECK(sorted[2] == Event{1, 1, 10, 1});
}

TEST_CASE("format names and extensions") {
  CHECK(parse_format("csv") == StreamFormat::kCsv);
  CHECK(parse_format("bin") == StreamFormat::kBinary);
  CHECK_THROWS_AS(parse_format("xml"), ConfigError);
  CHECK(format_for_path("a.bin") == StreamFormat::kBinary);
  CHECK(format_for_path("a.csv") == StreamFormat::kCsv);
}

TEST_CASE("geometry validation and bounding box") {
  CHECK_THROWS_AS(validate(SensorGeometry{0, 5}), ConfigError);
  const std::vector<Event> ev{{3, 9, 0, 1}, {10, 2, 1, -1}};
  CHECK(bounding_geometry(ev) == SensorGeometry{11, 10});
}

TEST_CASE("trail filter examples") {
  const SensorGeometry g{4, 4};
  SUBCASE("same-polarity burst keeps the first event") {
    const std::vector<Event> in{{1, 1, 0, 1}, {1, 1, 10, 1}, {1, 1, 20, 1}};
    const auto out = trail_filter(in, g, 10000);
    REQUIRE(out.size() == 1);
    CHECK(out[0].t == 0);
  }
  SUBCASE("alternating polarity keeps everything") {
    std::vector<Event> in;
    for (int i = 0; i < 10; ++i) in.push_back({1, 1, i, static_cast<std::int8_t>(i % 2 ? -1 : 1)});
    CHECK(trail_filter(in, g, 10000) == in);
  }
  SUBCASE("timeout elapsed keeps both") {
    const std::vector<Event> in{{1, 1, 0, 1}, {1, 1, 20000, 1}};
    CHECK(trail_filter(in, g, 10000).size() == 2);
  }
  SUBCASE("exactly the timeout passes") {
    const std::vector<Event> in{{1, 1, 0, 1}, {1, 1, 10000, 1}};
    CHECK(trail_filter(in, g, 10000).size() == 2);
  }
  SUBCASE("out-of-sensor event is a bounds error") {
    const std::vector<Event> in{{4, 0, 0, 1}};
    CHECK_THROWS_AS(trail_filter(in, g), BoundsError);
  }
}

TEST_CASE("trail filter matches the keep rule, is idempotent and a subsequence") {
  const SensorGeometry g{8, 8};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    std::vector<Event> in;
    Timestamp t = 0;
    for (int i = 0; i < 400; ++i) {
      t += static_cast<Timestamp>(uniform_index(rng, 3000));
      in.push_back({static_cast<std::uint16_t>(uniform_index(rng, 8)),
                    static_cast<std::uint16_t>(uniform_index(rng, 8)), t,
                    static_cast<std::int8_t>(uniform_index(rng, 2) ? 1 : -1)});
    }
    const auto once = trail_filter(in, g, 10000);
    CHECK(once == trail_oracle(in, 10000));
    CHECK(trail_filter(once, g, 10000) == once);
    std::size_t j = 0;
    for (const Event& e : in) {
      if (j < once.size() && e == once[j]) ++j;
    }
    CHECK(j == once.size());
  }
}
