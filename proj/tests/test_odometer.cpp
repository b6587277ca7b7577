#include "oracles/brute_group.hpp"
#include "oracles/grid.hpp"

#include "toti/errors.hpp"
#include "toti/odometer.hpp"
#include "toti/precycle.hpp"

#include <doctest.h>

#include <random>

using namespace toti;

namespace {

Rat R(long p, long q = 1) { return make_rat(p, q); }

std::uint32_t reverse_bits(std::uint32_t x, int n) {
  std::uint32_t r = 0;
  for (int i = 0; i < n; ++i)
    r |= ((x >> i) & 1u) << (n - 1 - i);
  return r;
}

// Adding 1 at the first digit with carry to the right.
std::uint32_t odometer_step(std::uint32_t j, int n) {
  const std::uint32_t mask = (1u << n) - 1;
  return reverse_bits((reverse_bits(j, n) + 1) & mask, n);
}

}  // namespace

TEST_CASE("bit words and cylinders") {
  auto s = BitWord::parse("011");
  CHECK(s.size() == 3);
  CHECK(s.atom_index() == 3);
  CHECK(cylinder(s) == Interval{R(3, 8), R(1, 2)});
  CHECK(cylinder(BitWord::parse("1")) == Interval{R(1, 2), R(1)});
  CHECK_THROWS(BitWord::parse("012"));
}

TEST_CASE("odometer levels against the carry oracle") {
  for (int level = 1; level <= 8; ++level) {
    auto t = odometer_at_level(level);
    CHECK(t.is_total());
    auto perm = atom_permutation(t, level);
    CHECK(perm == odometer_cycle(level));
    const std::uint32_t n = 1u << level;
    for (std::uint32_t j = 0; j < n; ++j)
      CHECK(perm(j) == odometer_step(j, level));
    CHECK(perm.cycles().size() == 1);
    CHECK(period(t, 1L << 20).value() == static_cast<long>(n));
  }
  CHECK(*odometer_at_level(3).apply(R(0)) == R(1, 2));
  CHECK(*odometer_at_level(3).apply(R(7, 8)) == R(0));
}

TEST_CASE("u_n support measure is 2^(1-n)") {
  for (int n = 1; n <= 10; ++n) {
    auto u = u_n(n);
    CHECK(support(u).measure() == dyadic(static_cast<unsigned>(n - 1)));
    CHECK(power(u, 2) == PiecewiseTranslation::identity());
  }
  CHECK(atom_permutation(u_n(3), 3) == upsilon(3));
  CHECK(upsilon(3) == Perm::transposition(8, 1, 6));
  // Disjoint supports for n >= 2.
  for (int n = 2; n <= 6; ++n)
    CHECK(support(u_n(n)).disjoint_from(support(u_n(n + 1))));
}

TEST_CASE("dyadic permutations and lifts agree geometrically") {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 4; ++n)
    for (int p = n; p <= 7; ++p) {
      std::vector<std::uint32_t> img(1u << n);
      std::iota(img.begin(), img.end(), 0u);
      std::shuffle(img.begin(), img.end(), rng);
      Perm sigma(img);
      CHECK(dyadic_permutation({p, lift(sigma, n, p)}) == dyadic_permutation({n, sigma}));
    }
  CHECK(on_dyadic_grid(odometer_at_level(5), 5));
  CHECK_FALSE(on_dyadic_grid(odometer_at_level(5), 4));
  CHECK(dyadic_level(odometer_at_level(5)) == 5);
  CHECK(dyadic_level(PiecewiseTranslation::translation(R(0), R(1, 3), R(1, 3))) == -1);
  CHECK_THROWS_AS(atom_permutation(odometer_at_level(5), 4), GridMismatch);
}

TEST_CASE("conjugates of U_n: certificate against brute closure") {
  for (int n = 2; n <= 3; ++n) {
    auto cert = lemma_conjugates_certificate(n);
    CHECK(cert.verdict);
    CHECK(cert.method == CertMethod::BruteClosure);
    const std::size_t degree = std::size_t{1} << n;
    std::vector<oracle::RawPerm> gens;
    Perm c = odometer_cycle(n);
    for (std::size_t k = 0; k < degree; ++k) {
      Perm ck = c.pow(static_cast<long>(k));
      gens.push_back((ck * upsilon(n) * ck.inverse()).images());
    }
    auto summary = oracle::summarize(oracle::brute_closure(degree, gens));
    CHECK(cert.order == BigInt(static_cast<unsigned long>(summary.order)));
    CHECK(summary.order == (n == 2 ? 24u : 40320u));
    CHECK(summary.odd * 2 == summary.order);
  }
  auto four = lemma_conjugates_certificate(4);
  CHECK(four.verdict);
  CHECK(four.method == CertMethod::StabilizerChain);
  CHECK(*four.order == BigInt{"20922789888000"});
}

TEST_CASE("group_contains on atom permutations across levels") {
  AtomPermutation t{3, odometer_cycle(3)};
  AtomPermutation u{3, upsilon(3)};
  AtomPermutation target{3, lift(Perm::transposition(2, 0, 1), 1, 3)};
  CHECK(group_contains({t, u}, {target}).verdict);
  CHECK_FALSE(group_contains({t}, {target}).verdict);
  CHECK_THROWS_AS(group_contains({t}, {AtomPermutation{1, Perm::transposition(2, 0, 1)}}), LevelMismatch);
}

TEST_CASE("evanescent approximation and certificate") {
  const std::vector<std::pair<long, int>> cases{{1, 3}, {2, 3}, {1, 4}};
  std::mt19937_64 rng(17);
  for (auto [m, n] : cases) {
    for (int variant = 0; variant < 2; ++variant) {
      Transform u = variant == 0 ? PiecewiseTranslation::identity()
                                 : oracle::to_transform(oracle::random_iet(rng, 12, 3));
      const Rat eps = R(1, 4);
      auto ev = build_evanescent_V(u, m, n, eps);
      const long K = period(u, 1L << 20).value();
      CHECK(ev.order == K);
      CHECK(ev.p >= n);
      CHECK(uniform_distance(u, ev.u_tilde) < eps);
      CHECK(power(ev.u_tilde, K * m) == u_n(ev.p));
      CHECK(support(u_n(ev.p)).subset_of(ev.saturation));
      auto cert = evanescent_certificate(ev.u_tilde, m, n);
      CHECK(cert.verdict);
    }
  }
  CHECK_THROWS(build_evanescent_V(PiecewiseTranslation::identity(), 0, 3, R(1, 2)));
  CHECK_THROWS(build_evanescent_V(PiecewiseTranslation::identity(), 1, 3, R(0)));
  CHECK_FALSE(evanescent_certificate(PiecewiseTranslation::identity(), 1, 3).verdict);
  // Rotation by 1/3: only its cube, the identity, is dyadic.
  auto third = PiecewiseTranslation::from_pieces({{R(0), R(2, 3), R(1, 3)}, {R(2, 3), R(1), R(-2, 3)}});
  CHECK_THROWS_AS(evanescent_certificate(third, 1, 3), NotDyadic);
}

TEST_CASE("cost-one strengthening") {
  auto ev = build_evanescent_V(PiecewiseTranslation::identity(), 2, 3, R(1, 4));
  const Transform v = ev.u_tilde;
  // A length-2 pre-cycle away from supp v.
  const IntervalSet free = support(v).complement();
  auto phi = make_precycle(2, R(1, 64), free);
  REQUIRE(support(phi.map).disjoint_from(support(v)));
  const Transform t = odometer_at_level(8);
  for (long n : {1L, 2L, 3L}) {
    auto pair = strengthen_to_cost1_pair(v, t, phi, n);
    CHECK(is_precycle(pair.chain.map, 3).ok);
    CHECK(pair.psi.domain() == phi.map.range());
    CHECK(power(pair.u1, 3) == PiecewiseTranslation::identity());
    CHECK(power(pair.u2, n) == pair.u1);
    CHECK(pair.v2 == compose(v, pair.u2));
    CHECK(power(power(pair.v2, n), 3) == power(v, 3 * n));
    if (pair.psi_power > 0)
      CHECK(pair.psi == power(t, pair.psi_power).restrict_to(phi.map.range()));
  }
  auto bad = make_precycle(2, R(1, 64), support(v));
  CHECK_THROWS_AS(strengthen_to_cost1_pair(v, t, bad, 1), OverlapError);
}
