#include "toti/builder.hpp"
#include "toti/bundle.hpp"
#include "toti/errors.hpp"
#include "toti/odometer.hpp"

#include <doctest.h>

#include <filesystem>

using namespace toti;
namespace fs = std::filesystem;

namespace {

Rat R(long p, long q = 1) { return make_rat(p, q); }

const BuildResult& default_build() {
  static const BuildResult res = build(BuildParams{});
  return res;
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("toti_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::vector<std::string> failing(const Report& r) {
  std::vector<std::string> out;
  for (const auto& c : r.clauses)
    if (!c.pass)
      out.push_back(c.name);
  return out;
}

}  // namespace

TEST_CASE("config parsing and validation") {
  auto p = parse_config("# comment\nr = 3\nmuY = 7/10  # trailing\nlevel = 8\n");
  CHECK(p.r == 3);
  CHECK(p.muY == R(7, 10));
  CHECK(p.level == 8);
  CHECK(parse_config(write_config(p)).muY == p.muY);
  CHECK(write_config(parse_config(write_config(p))) == write_config(p));
  CHECK_THROWS_AS(parse_config("muY = 0.6\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("colour = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("muY\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("muY = 1/2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("muY = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("r = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("level = 17\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("precycleC = 1/2\n"), ConfigError);
  try {
    parse_config("muY = 1/3\n");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("1/2<μ(Y)<1") != std::string::npos);
  }
}

TEST_CASE("stages") {
  BuildParams p;
  CHECK(choose_Y(p) == IntervalSet::of(R(0), R(3, 5)));
  auto t = make_T_on_Y(p);
  CHECK(support(t).subset_of(choose_Y(p)));
  CHECK(scale_out(t, p.muY) == odometer_at_level(p.level));
  auto pre = make_precycles(p);
  CHECK(pre.phi.size() == static_cast<std::size_t>(p.r - 1));
  CHECK(pre.U.size() == pre.phi.size());
  CHECK(pre.m0 >= 1);
  for (std::size_t i = 0; i < pre.phi.size(); ++i) {
    CHECK(extends(pre.U[i], pre.phi[i].map));
    CHECK(support(pre.phi[i].map).subset_of(pre.middle));
  }
  auto fin = assemble_finite_actions(p, pre.m0);
  CHECK(fin.balls.size() == static_cast<std::size_t>(p.ballCount));
  CHECK(fin.C == IntervalSet::of(p.muY, R(1)));
  for (const auto& b : fin.balls)
    CHECK(b.g.size >= static_cast<std::size_t>(pre.m0));
}

TEST_CASE("insufficient room") {
  BuildParams p;
  p.precycleC = R(1, 4);
  CHECK_THROWS_AS(build(p), InsufficientRoom);
  BuildParams few;
  few.maxBallVerts = 1;
  few.ballCount = 50;
  CHECK_THROWS_AS(build(few), InsufficientRoom);
}

TEST_CASE("default build passes every check") {
  const auto& res = default_build();
  CHECK(res.Y.measure() == R(3, 5));
  CHECK(check_invariants(res).ok());
  auto s4 = verify_step4(res);
  CHECK(failing(s4).empty());
  auto tot = verify_totipotency(res, 2);
  CHECK(failing(tot).empty());
  CHECK(res.balls.size() == 8);
  for (const auto& a : res.alpha)
    CHECK(a.is_total());
}

TEST_CASE("corruption is caught and localized") {
  auto bad = corrupt_first_block_pair(default_build());
  auto tot = verify_totipotency(bad, 2);
  auto names = failing(tot);
  REQUIRE_FALSE(names.empty());
  for (const auto& n : names)
    CHECK(n.rfind("ball 1:", 0) == 0);
  CHECK_FALSE(check_invariants(bad).ok());
}

TEST_CASE("rank three build") {
  BuildParams p;
  p.r = 3;
  p.ballCount = 4;
  p.maxBallVerts = 5;
  auto res = build(p);
  CHECK(res.alpha.size() == 3);
  CHECK(failing(verify_step4(res)).empty());
  CHECK(failing(verify_totipotency(res, 1)).empty());
}

TEST_CASE("bundle write, load and tamper detection") {
  auto dir = scratch("bundle");
  write_bundle(default_build(), dir, 0.0);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "balls" / "ball_01.dot"));
  auto loaded = load_bundle(dir);
  CHECK(loaded.report.ok());
  CHECK(loaded.result.alpha == default_build().alpha);

  auto files = render_bundle(default_build());
  CHECK(files == render_bundle(build(BuildParams{})));
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

  auto a1 = read_file(dir / "alpha" / "a1.json");
  write_file(dir / "alpha" / "a1.json", a1 + " ");
  CHECK_FALSE(load_bundle(dir).report.ok());
  write_file(dir / "alpha" / "a1.json", a1);
  CHECK(load_bundle(dir).report.ok());
  fs::remove(dir / "config.txt");
  CHECK_THROWS_AS(load_bundle(dir), MissingFile);
  fs::remove_all(dir);
}

TEST_CASE("stabilizer samples") {
  const auto& res = default_build();
  auto s = irs_sample(res, R(7, 10), 2, 4);
  CHECK(s.orbit_points.front() == R(7, 10));
  CHECK(s.orbit_ball.connected());
  auto sub = stabilizer_to_subgroup(s, 2);
  for (const auto& w : s.stab_words)
    CHECK(contains_word(sub, w));
  // Points of Y have an a1 return time dividing 2^L.
  auto y = irs_sample(res, R(1, 10), 1, 2);
  REQUIRE(y.a1_return.has_value());
  CHECK((1L << res.params.level) % *y.a1_return == 0);
  CHECK_THROWS(irs_sample(res, R(1), 1, 2));
}
