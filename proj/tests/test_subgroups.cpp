#include "oracles/todd_coxeter.hpp"

#include "toti/errors.hpp"
#include "toti/stallings.hpp"

#include <doctest.h>

#include <random>

using namespace toti;

namespace {

StallingsAutomaton sub(const std::string& gens) { return subgroup_from_generators(2, parse_words(gens)); }

Word random_word(std::mt19937_64& rng, int rank, int max_len) {
  const int len = std::uniform_int_distribution<int>(1, max_len)(rng);
  std::uniform_int_distribution<int> gen(1, rank);
  std::vector<int> letters;
  for (int i = 0; i < len; ++i)
    letters.push_back(rng() % 2 ? gen(rng) : -gen(rng));
  return Word(letters);
}

}  // namespace

TEST_CASE("words") {
  CHECK(Word::parse("a1^2 a2 a1^-1").letters() == std::vector<int>{1, 1, 2, -1});
  CHECK(Word::parse("a1 a1^-1").empty());
  CHECK(Word::parse("e").empty());
  CHECK(Word::parse("a1*a2").length() == 2);
  CHECK(Word::parse("a2^-2").str() == "a2^-2");
  CHECK(Word().str() == "e");
  auto w = Word::parse("a1 a2");
  CHECK((w * w.inverse()).empty());
  CHECK(w.pow(3).length() == 6);
  CHECK(w.pow(-1) == w.inverse());
  CHECK(parse_words("a1, a2^3").size() == 2);
  CHECK_THROWS(Word::parse("b1"));
  CHECK_THROWS(Word::parse("a0"));
  CHECK(letter_slot(-2) == 3);
  CHECK(slot_letter(3) == -2);
}

TEST_CASE("folding and membership") {
  auto a = sub("a1^2, a2, a1 a2 a1^-1");
  CHECK(index(a) == 2u);
  CHECK(contains_word(a, Word::parse("a1^4 a2^3")));
  CHECK_FALSE(contains_word(a, Word::parse("a1")));
  CHECK(read_word(a, 0, Word::parse("a1")) == 1u);
  CHECK(subgroup_rank(a) == 3);

  auto b = sub("a1 a2 a1^-1 a2^-1");
  CHECK_FALSE(index(b).has_value());
  CHECK(in_perfect_kernel(b, 2));
  CHECK(subgroup_rank(b) == 1);

  CHECK(index(sub("a1, a2")) == 1u);
  CHECK(index(sub("")) == std::nullopt);
  CHECK(sub("a1 a2 a2^-1") == sub("a1"));
}

TEST_CASE("basis generates the same subgroup") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Word> gens;
    const int k = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int i = 0; i < k; ++i)
      gens.push_back(random_word(rng, 2, 6));
    auto a = subgroup_from_generators(2, gens);
    auto b = basis(a);
    CHECK(b.size() == subgroup_rank(a));
    CHECK(subgroup_from_generators(2, b) == a);
    for (const auto& g : gens)
      CHECK(contains_word(a, g));
    CHECK(automaton_from_json(nlohmann::json::parse(to_json(a).dump())) == a);
  }
}

TEST_CASE("index against Todd-Coxeter") {
  std::mt19937_64 rng(23);
  int finite = 0;
  std::size_t largest = 0;
  for (int trial = 0; trial < 20000 && finite < 60; ++trial) {
    std::vector<Word> gens;
    std::vector<std::vector<int>> raw;
    // Up to six generators so that indices above 2 occur.
    const int k = std::uniform_int_distribution<int>(1, 6)(rng);
    for (int i = 0; i < k; ++i) {
      gens.push_back(random_word(rng, 2, 4));
      raw.push_back(gens.back().letters());
    }
    auto a = subgroup_from_generators(2, gens);
    auto tc = oracle::todd_coxeter_index(2, raw, 200);
    if (tc.inconclusive) {
      CHECK_FALSE(index(a).has_value());
    } else if (tc.index > 1) {
      ++finite;
      largest = std::max(largest, tc.index);
      CHECK(index(a) == tc.index);
    }
  }
  CHECK(finite == 60);
  CHECK(largest >= 3);
  auto s3 = sub("a1^3, a2, a1 a2 a1^-1, a1^2 a2 a1^-2");
  CHECK(index(s3) == 3u);
  CHECK(oracle::todd_coxeter_index(2, {{1, 1, 1}, {2}, {1, 2, -1}, {1, 1, 2, -1, -1}}).index == 3);
}

TEST_CASE("hall completion") {
  auto a = sub("a1^2, a2 a1 a2^-1");
  auto c = hall_completion(a);
  CHECK(index(c).has_value());
  CHECK(c.size() == a.size());
  for (int i = 0; i < 2; ++i)
    for (std::uint32_t v = 0; v < a.size(); ++v)
      if (a.graph.image(i, v) != kHole)
        CHECK(c.graph.image(i, v) == a.graph.image(i, v));
  CHECK_THROWS_AS(hall_completion(sub("a1, a2")), AlreadyComplete);
}

TEST_CASE("isolation witness: agreement radius grows") {
  for (const char* gens : {"a1 a2 a1^-1 a2^-1", "a1^2", "a2 a1^3 a2^-1, a1 a2^2", ""}) {
    auto a = sub(gens);
    auto w = isolation_witness(a, 16);
    CHECK(w.increasing);
    REQUIRE(w.steps.size() == 15);
    for (std::size_t i = 0; i < w.steps.size(); ++i) {
      CHECK(w.steps[i].n == static_cast<long>(i) + 2);
      CHECK(w.steps[i].infinite_index);
      auto li = subgroup_from_generators(2, w.steps[i].generators);
      CHECK(contains_word(li, w.g.pow(w.steps[i].n)));
      CHECK(ball_agreement(a, li, w.steps[i].agreement) == w.steps[i].agreement);
      if (i > 0)
        CHECK(w.steps[i].agreement > w.steps[i - 1].agreement);
    }
  }
  CHECK_THROWS(isolation_witness(sub("a1, a2"), 4));
}

TEST_CASE("ball agreement and neighborhoods") {
  auto a = sub("a1^2");
  auto b = sub("a1^4");
  CHECK(ball_agreement(a, b, 10) == 1);
  CHECK(ball_agreement(a, a, 10) == 10);
  CHECK(neighborhood_member(a, {{Word::parse("a1^2")}, {Word::parse("a1")}}));
  CHECK_FALSE(neighborhood_member(b, {{Word::parse("a1^2")}, {}}));
  auto dot = to_dot(a);
  CHECK(dot.find("digraph") != std::string::npos);
}
