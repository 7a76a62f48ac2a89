#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "qent/io.hpp"

using namespace qent;
using qent::io::json;

TEST_CASE("state JSON round-trips exactly") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = sample_state(2, 3, HilbertSchmidt{}, seed);
    const json j = json::parse(io::to_json(s).dump());
    const auto back = io::state_from_json(j);
    REQUIRE(back.d1() == 2);
    REQUIRE(back.d2() == 3);
    REQUIRE(back.rho().matrix().matrix() == s.rho().matrix().matrix());
  }
}

TEST_CASE("matrix JSON layout") {
  CMatrixD m(2, 2);
  m << 0.75, std::complex<double>(0.1, 0.2), std::complex<double>(0.1, -0.2), 0.25;
  const json j = io::to_json(Hermitian(m));
  CHECK(j.at("dim") == 2);
  REQUIRE(j.at("entries").size() == 4);
  CHECK(j.at("entries")[1][0] == 0.1);
  CHECK(j.at("entries")[1][1] == 0.2);
  CHECK(j.at("entries")[2][1] == -0.2);
}

TEST_CASE("malformed and invalid state JSON") {
  const json good = io::to_json(maximally_entangled(2));
  json missing = good;
  missing.erase("d1");
  CHECK_THROWS_WITH_AS(io::state_from_json(missing), doctest::Contains("d1"), FormatError);

  json short_entries = good;
  short_entries["matrix"]["entries"].erase(0);
  CHECK_THROWS_AS(io::state_from_json(short_entries), FormatError);

  json wrong_dims = good;
  wrong_dims["d2"] = 3;
  CHECK_THROWS_AS(io::state_from_json(wrong_dims), DomainError);

  json scaled = good;
  for (auto& e : scaled["matrix"]["entries"]) e[0] = e[0].get<double>() * 0.9;
  CHECK_THROWS_WITH_AS(io::state_from_json(scaled), doctest::Contains("unit-trace"), DomainError);

  json indefinite = good;
  indefinite["matrix"]["entries"] = json::array({{1.5, 0}, {0, 0}, {0, 0}, {0, 0},
                                                 {0, 0}, {-0.5, 0}, {0, 0}, {0, 0},
                                                 {0, 0}, {0, 0}, {0, 0}, {0, 0},
                                                 {0, 0}, {0, 0}, {0, 0}, {0, 0}});
  CHECK_THROWS_WITH_AS(io::state_from_json(indefinite), doctest::Contains("PSD"), DomainError);

  json asym = good;
  asym["matrix"]["entries"][1] = json::array({0.3, 0.0});
  CHECK_THROWS_WITH_AS(io::state_from_json(asym), doctest::Contains("Hermitian"), DomainError);
}

TEST_CASE("record JSON carries the documented keys") {
  const auto rec = theorem2_check(maximally_entangled(2), QExp(2.0));
  const json j = io::to_json(rec);
  for (const char* key : {"inequality", "q", "lhs", "rhs", "slack", "pass", "context"}) {
    CHECK(j.contains(key));
  }
  CHECK(j.at("inequality") == "theorem2");
  CHECK(j.at("context").contains("identity_residual"));
}

TEST_CASE("counterexample JSON replays") {
  const auto r = find_violation(QExp(0.5), Direction::kSuperadditivityViolated, 2, 2, 1000, 4);
  REQUIRE(r.counterexample);
  const json j = json::parse(io::to_json(*r.counterexample).dump());
  const auto back = io::counterexample_from_json(j);
  const double replay = direction_slack(AnalyzedState(back.state), QExp(back.q), back.direction);
  CHECK(std::abs(replay - r.counterexample->slack) <= 1e-12);
  CHECK(back.slack == r.counterexample->slack);
}

TEST_CASE("state files load and save") {
  const auto path = std::filesystem::temp_directory_path() / "qent_io_test_state.json";
  const auto s = sample_state(3, 2, SpectrumDirichlet{}, 9);
  io::save_state(s, path.string());
  const auto back = io::load_state(path.string());
  CHECK(back.rho().matrix().matrix() == s.rho().matrix().matrix());
  std::filesystem::remove(path);
  CHECK_THROWS_AS(io::load_state(path.string()), FormatError);
}

TEST_CASE("CSV numbers use 17 significant digits") {
  CHECK(io::format_number(0.1) == "0.10000000000000001");
  CHECK(std::stod(io::format_number(2.0 - std::sqrt(2.0))) == 2.0 - std::sqrt(2.0));
}
