#include "oracles/grid.hpp"

#include "toti/atoms.hpp"
#include "toti/errors.hpp"
#include "toti/odometer.hpp"
#include "toti/precycle.hpp"

#include <doctest.h>

#include <random>

using namespace toti;

namespace {

Rat R(long p, long q = 1) { return make_rat(p, q); }

}  // namespace

TEST_CASE("is_precycle accepts chains and rejects the rest") {
  // [0,1/4) -> [1/4,1/2) -> [1/2,3/4)
  auto phi = PiecewiseTranslation::translation(R(0), R(1, 2), R(1, 4));
  auto ok = is_precycle(phi, 3);
  CHECK(ok.ok);
  CHECK(ok.basis == IntervalSet::of(R(0), R(1, 4)));
  CHECK_FALSE(is_precycle(phi, 2).ok);
  CHECK_FALSE(is_precycle(phi, 4).ok);
  CHECK_FALSE(is_precycle(PiecewiseTranslation{}, 2).ok);
  // A 2-cycle has no basis.
  auto swap = PiecewiseTranslation::from_pieces({{R(0), R(1, 2), R(1, 2)}, {R(1, 2), R(1), R(-1, 2)}});
  CHECK_FALSE(is_precycle(swap, 2).ok);
  CHECK_THROWS(is_precycle(phi, 1));
  CHECK_THROWS(PreCycle::from_map(phi, 2));
  CHECK(PreCycle::from_map(phi, 3).basis == ok.basis);
}

TEST_CASE("closing cycle of a pre-cycle") {
  auto p = make_precycle(3, R(1, 8), IntervalSet{{R(0), R(1, 8)}, {R(1, 2), R(3, 4)}});
  CHECK(p.basis == IntervalSet::of(R(0), R(1, 8)));
  auto u = closing_cycle(p);
  CHECK(u.is_total());
  CHECK(extends(u, p.map));
  CHECK(power(u, 3) == PiecewiseTranslation::identity());
  CHECK(period(u, 100).value() == 3);
  CHECK(support(u) == support(p.map));
  CHECK(support(u).measure() == 3 * p.basis.measure());
  CHECK_THROWS_AS(make_precycle(5, R(1, 4), IntervalSet::of(R(0), R(1, 2))), InsufficientRoom);
}

TEST_CASE("random pre-cycles: period and supports") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 6)(rng);
    const long q = std::uniform_int_distribution<long>(n + 1, 600)(rng);
    // Random slots: a union of grid intervals of total measure at least n/q.
    auto g = oracle::random_iet(rng, q, 4);
    IntervalSet slots = support(oracle::to_transform(g));
    if (slots.measure() < R(n, q))
      slots = IntervalSet::unit();
    const long blocks = std::uniform_int_distribution<long>(1, static_cast<long>(Rat(slots.measure() * q).get_d()) / n)(rng);
    auto p = make_precycle(n, R(blocks, q), slots);
    CHECK(is_precycle(p.map, n).ok);
    auto u = closing_cycle(p);
    CHECK(period(u, 1000).value() == n);
    CHECK(support(u) == support(p.map));
    CHECK(support(u).measure() == n * p.basis.measure());
    CHECK(precycle_from_json(nlohmann::json::parse(to_json(p).dump())).map == p.map);
  }
}

TEST_CASE("period agrees with the grid oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const long q = std::uniform_int_distribution<long>(2, 512)(rng);
    auto g = oracle::random_iet(rng, q, 6);
    auto t = oracle::to_transform(g);
    const long expected = oracle::grid_period(g);
    auto rep = period(t, 1L << 40);
    REQUIRE_FALSE(rep.exceeded());
    CHECK(rep.value() == expected);
    if (expected > 1)
      CHECK(period(t, expected - 1).exceeded());
    CHECK(power(t, expected) == PiecewiseTranslation::identity());
  }
}

TEST_CASE("kth_root: power and support") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const long q = std::uniform_int_distribution<long>(2, 256)(rng);
    auto u = oracle::to_transform(oracle::random_iet(rng, q, 4));
    const long k = std::uniform_int_distribution<long>(1, 5)(rng);
    auto w = kth_root(u, k);
    CHECK(power(w, k) == u);
    CHECK(support(w) == support(u));
  }
  auto u = odometer_at_level(3);
  CHECK_THROWS_AS(kth_root(u, 2, 7), NotPeriodic);
  CHECK(power(kth_root(u, 2, 8), 2) == u);
  CHECK_THROWS(kth_root(u, 0));
}

TEST_CASE("atom decomposition") {
  auto t = odometer_at_level(3);
  auto atoms = atom_decomposition(t);
  CHECK(atoms.size() == 8);
  CHECK(atoms.cycles().size() == 1);
  CHECK(atoms.order() == 8);
  auto cut = atom_decomposition(PiecewiseTranslation::identity(), {R(1, 3)});
  CHECK(cut.size() == 2);
  CHECK(cut.order() == 1);
}

TEST_CASE("conjugation trick on the dyadic grid") {
  // phi: [0,1/8) -> [1/8,1/4) -> [1/4,3/8), u its closing cycle.
  auto p = make_precycle(3, R(1, 8), IntervalSet::of(R(0), R(3, 8)));
  auto u = closing_cycle(p);
  auto cert = conj_trick_certificate(p, u, 3);
  CHECK(cert.verdict);
  CHECK(cert.level == 3);
  auto off = make_precycle(3, R(1, 7), IntervalSet::of(R(0), R(3, 7)));
  CHECK_THROWS_AS(conj_trick_certificate(off, closing_cycle(off), 3), GridMismatch);
  CHECK_THROWS(conj_trick_certificate(p, PiecewiseTranslation::identity(), 3));
}
