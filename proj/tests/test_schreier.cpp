#include "oracles/brute_enum.hpp"

#include "toti/errors.hpp"
#include "toti/schreier.hpp"

#include <doctest.h>

#include <regex>
#include <sstream>

using namespace toti;

namespace {

PartialAction path2() {
  // 0 -a1-> 1 -a2-> 2
  auto g = PartialAction::empty(2, 3);
  g.add_edge(0, 0, 1);
  g.add_edge(1, 1, 2);
  return g;
}

PartialAction parse_dot(const std::string& dot, int rank) {
  std::regex node(R"re(^\s*(\d+)( \[shape=doublecircle\])?;$)re");
  std::regex edge(R"re(^\s*(\d+) -> (\d+) \[label="a(\d+)"\];$)re");
  std::istringstream in(dot);
  std::string line;
  std::size_t n = 0;
  std::vector<std::tuple<int, std::uint32_t, std::uint32_t>> edges;
  std::smatch m;
  while (std::getline(in, line)) {
    if (std::regex_match(line, m, node))
      n = std::max<std::size_t>(n, std::stoul(m[1]) + 1);
    else if (std::regex_match(line, m, edge))
      edges.emplace_back(std::stoi(m[3]) - 1, std::stoul(m[1]), std::stoul(m[2]));
  }
  auto g = PartialAction::empty(rank, n);
  for (auto [gen, v, w] : edges)
    g.add_edge(gen, v, w);
  return g;
}

}  // namespace

TEST_CASE("partial action basics") {
  auto g = path2();
  CHECK(g.connected());
  CHECK_FALSE(g.total());
  CHECK(g.edge_count() == 2);
  CHECK(g.preimage(0, 1) == 0);
  CHECK(g.along(1, 1) == 0);
  CHECK(g.along(2, 1) == 2);
  CHECK(g.along(3, 0) == kHole);
  CHECK_THROWS(g.add_edge(0, 2, 1));
  CHECK_THROWS(g.add_edge(0, 0, 2));
  auto h = PartialAction::empty(2, 2);
  CHECK_FALSE(h.connected());
  CHECK_THROWS_AS(canonical_code(h), Disconnected);
}

TEST_CASE("canonical codes identify isomorphic graphs") {
  auto g = path2();
  auto h = relabel(g, {2, 0, 1});
  CHECK(canonical_code(g) == canonical_code(h));
  CHECK(canonical_form(g) == canonical_form(h));
  auto code = rooted_code(g, 0);
  CHECK(decode(2, code) == g);
  CHECK(bfs_order(h, 2) == std::vector<std::uint32_t>{2, 0, 1});
  auto loop = PartialAction::empty(2, 3);
  loop.add_edge(0, 0, 1);
  loop.add_edge(0, 1, 2);
  CHECK(canonical_code(loop) != canonical_code(g));
}

TEST_CASE("enumeration counts against the brute-force oracle") {
  for (int n = 1; n <= 4; ++n) {
    auto mine = enumerate_partial_actions(2, static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    CHECK(mine.size() == oracle::count_partial_action_classes(n));
  }
  auto all = enumerate_partial_actions(2, 1, 4);
  std::set<CanonicalCode> codes;
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(all[i].connected());
    CHECK_FALSE(all[i].total());
    CHECK(canonical_form(all[i]) == all[i]);
    codes.insert(canonical_code(all[i]));
    if (i > 0)
      CHECK(std::make_pair(all[i - 1].size, canonical_code(all[i - 1])) <
            std::make_pair(all[i].size, canonical_code(all[i])));
  }
  CHECK(codes.size() == all.size());

  std::size_t seen = 0;
  enumerate_partial_actions(2, 1, 5, [&](const PartialAction&) { return ++seen < 10; });
  CHECK(seen == 10);
  CHECK(enumerate_partial_actions(3, 1, 1).size() == 7);
}

TEST_CASE("extend_marked completes and keeps the graph") {
  for (const auto& g : enumerate_partial_actions(2, 1, 4)) {
    auto m = extend_marked(g);
    CHECK(m.action.total());
    CHECK(m.action.size == g.size + 2);
    CHECK(m.delta == g.size);
    CHECK(m.marked == g.size + 1);
    CHECK(m.action.image(1, m.marked) == m.marked);
    CHECK(m.action.image(0, m.delta) == m.marked);
    CHECK(m.action.image(m.ell, m.zeta) == m.delta);
    CHECK(g.image(m.ell, m.zeta) == kHole);
    for (int i = 0; i < 2; ++i)
      for (std::uint32_t v = 0; v < g.size; ++v)
        if (g.image(i, v) != kHole)
          CHECK(m.action.image(i, v) == g.image(i, v));
    CHECK(contains_labeled_copy(m.action, g, std::make_pair(0u, 0u)).has_value());
  }
  auto total = PartialAction::empty(2, 1);
  total.add_edge(0, 0, 0);
  total.add_edge(1, 0, 0);
  CHECK_THROWS_AS(extend_marked(total), NoMissingEdge);
}

TEST_CASE("balls and labeled copies") {
  auto g = PartialAction::empty(2, 4);
  g.add_edge(0, 0, 1);
  g.add_edge(0, 1, 2);
  g.add_edge(0, 2, 3);
  g.add_edge(0, 3, 0);
  auto b = ball_of(g, 0, 1);
  CHECK(b.graph.size == 3);
  CHECK(b.original == std::vector<std::uint32_t>{0, 1, 3});
  CHECK(b.graph.edge_count() == 2);
  auto pattern = path2();
  CHECK_FALSE(contains_labeled_copy(g, pattern).has_value());
  auto line = PartialAction::empty(2, 3);
  line.add_edge(0, 0, 1);
  line.add_edge(0, 1, 2);
  auto emb = contains_labeled_copy(g, line, std::make_pair(0u, 2u));
  REQUIRE(emb.has_value());
  CHECK(*emb == std::vector<std::uint32_t>{2, 3, 0});
}

TEST_CASE("DOT and JSON round trips") {
  for (const auto& g : enumerate_partial_actions(2, 3, 3)) {
    CHECK(parse_dot(to_dot(g), 2) == g);
    CHECK(partial_action_from_json(nlohmann::json::parse(to_json(g).dump())) == g);
  }
  auto m = extend_marked(path2());
  auto dot = to_dot(m.action, m.marked);
  CHECK(dot.find(std::to_string(m.marked) + " [shape=doublecircle];") != std::string::npos);
  CHECK(parse_dot(dot, 2) == m.action);
  auto j = to_json(m);
  CHECK(j["marked"] == m.marked);
  CHECK(j["ell"] == m.ell + 1);

  auto bad = nlohmann::json::parse(to_json(path2()).dump());
  bad["maps"][0][2] = 1;
  CHECK_THROWS(partial_action_from_json(bad));
}
