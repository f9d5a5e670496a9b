#include <doctest.h>

#include <filesystem>

#include "magnon/encoder.hpp"
#include "magnon/io.hpp"
#include "oracles.hpp"

using namespace magnon;
using io::json;

TEST_CASE("state snapshot round trip") {
  const auto psi = ExcitationState<double>(oracle::random_state(17, 12));
  const json doc = io::state_to_json(psi);
  CHECK(doc["version"] == 1);
  CHECK(doc["N"] == 17);
  CHECK(doc["amplitudes"].size() == 17);
  const auto back = io::state_from_json(json::parse(io::dump(doc)));
  CHECK(back.amplitudes() == psi.amplitudes());
  CHECK(io::dump(io::state_to_json(back)) == io::dump(doc));
}

TEST_CASE("state snapshot validation") {
  const json good = io::state_to_json(ExcitationState<double>::basis(3, 2));
  json short_doc = good;
  short_doc["N"] = 4;
  CHECK_THROWS_AS(io::state_from_json(short_doc), ValidationError);
  json unnormalized = good;
  unnormalized["amplitudes"][1] = {0.9, 0.0};
  CHECK_THROWS_AS(io::state_from_json(unnormalized), ValidationError);
  json version = good;
  version["version"] = 2;
  CHECK_THROWS_AS(io::state_from_json(version), ValidationError);
  json extra = good;
  extra["note"] = "x";
  CHECK_THROWS_AS(io::state_from_json(extra), ValidationError);
  json pair = good;
  pair["amplitudes"][0] = {0.0};
  CHECK_THROWS_AS(io::state_from_json(pair), ValidationError);
  CHECK_THROWS_AS(io::state_from_json(json{{"version", 1}}), ValidationError);
}

TEST_CASE("schedule file round trip") {
  const ChainConfig<double> cfg{201, 1.0, 0.125, 101, 0.0};
  const auto s = table1_schedule(StoppingParams<double>{0.5, 3}, cfg);
  const json doc = io::schedule_to_json(s);
  CHECK(doc["convention"] == "kick-then-free");
  const auto back = io::schedule_from_json(doc);
  CHECK(back.entries == s.entries);
  CHECK(back.period == s.period);
  CHECK(back.field_center == s.field_center);

  json bad = doc;
  bad["convention"] = "sideways";
  CHECK_THROWS_AS(io::schedule_from_json(bad), ValidationError);
  bad = doc;
  bad["entries"] = json::array();
  CHECK_THROWS_AS(io::schedule_from_json(bad), ValidationError);
}

TEST_CASE("trajectory CSV") {
  const auto tr = classical_standard_map(0.125, 1.0, 0.5, 3);
  const std::string csv = io::trajectory_csv(tr);
  CHECK(csv.rfind("step,theta,p\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  CHECK(csv == io::trajectory_csv(classical_standard_map(0.125, 1.0, 0.5, 3)));
}

TEST_CASE("text and JSON files") {
  const auto dir = std::filesystem::temp_directory_path() / "magnon_test_io" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  io::write_json(dir / "a.json", json{{"b", 1}, {"a", 2}});
  CHECK(io::read_text(dir / "a.json") == "{\n  \"b\": 1,\n  \"a\": 2\n}\n");
  CHECK(io::read_json(dir / "a.json")["a"] == 2);
  io::write_text(dir / "broken.json", "{");
  CHECK_THROWS_AS(io::read_json(dir / "broken.json"), ValidationError);
  CHECK_THROWS_AS(io::read_text(dir / "none.json"), IoError);
  std::filesystem::remove_all(dir.parent_path());
}
