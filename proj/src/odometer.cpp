#include "toti/odometer.hpp"

#include "toti/atoms.hpp"
#include "toti/errors.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace toti {

BitWord BitWord::parse(std::string_view text) {
  BitWord w;
  for (char c : text) {
    if (c != '0' && c != '1')
      throw std::invalid_argument("BitWord: expected only 0 and 1, got '" + std::string(text) + "'");
    w.bits.push_back(c == '1');
  }
  return w;
}

std::size_t BitWord::atom_index() const {
  std::size_t j = 0;
  for (bool b : bits)
    j = 2 * j + (b ? 1 : 0);
  return j;
}

Interval cylinder(const BitWord& s) {
  const unsigned n = static_cast<unsigned>(s.size());
  Rat width = dyadic(n);
  Rat lo = Rat(static_cast<unsigned long>(s.atom_index())) * width;
  return {lo, lo + width};
}

Transform odometer_at_level(int level) {
  if (level < 1)
    throw std::invalid_argument("odometer_at_level: level must be at least 1");
  std::vector<Piece> pieces;
  // Cylinder 1^(k-1)0 starts at 1 - 2^-(k-1) and has width 2^-k.
  for (int k = 1; k <= level; ++k) {
    Rat lo = Rat(1) - dyadic(k - 1);
    pieces.push_back({lo, lo + dyadic(k), Rat(3) * dyadic(k) - 1});
  }
  Rat last = Rat(1) - dyadic(level);
  pieces.push_back({last, Rat(1), -last});
  return PiecewiseTranslation::from_pieces(std::move(pieces));
}

namespace {

std::size_t grid_degree(int level) {
  if (level < 0 || level > 16)
    throw std::invalid_argument("dyadic level must lie in [0, 16], got " + std::to_string(level));
  return std::size_t{1} << level;
}

std::uint32_t grid_index(const Rat& x, int level) {
  Rat y = x * Rat(static_cast<unsigned long>(grid_degree(level)));
  return static_cast<std::uint32_t>(y.get_num().get_ui());
}

}  // namespace

Transform dyadic_permutation(const AtomPermutation& sigma) {
  const std::size_t degree = grid_degree(sigma.level);
  if (sigma.perm.degree() != degree)
    throw LevelMismatch("dyadic_permutation: permutation degree " +
                        std::to_string(sigma.perm.degree()) + " does not match level " +
                        std::to_string(sigma.level));
  const Rat width = dyadic(static_cast<unsigned>(sigma.level));
  std::vector<Piece> pieces;
  pieces.reserve(degree);
  for (std::uint32_t j = 0; j < degree; ++j) {
    Rat lo = Rat(j) * width;
    Rat offset = (Rat(sigma.perm(j)) - Rat(j)) * width;
    pieces.push_back({lo, lo + width, offset});
  }
  return PiecewiseTranslation::from_pieces(std::move(pieces));
}

int dyadic_level(const PiecewiseTranslation& phi) {
  int level = 0;
  for (const auto& p : phi.pieces())
    for (const Rat* x : {&p.lo, &p.hi, &p.offset}) {
      int e = dyadic_exponent(*x);
      if (e < 0)
        return -1;
      level = std::max(level, e);
    }
  return level;
}

bool on_dyadic_grid(const PiecewiseTranslation& phi, int level) {
  int l = dyadic_level(phi);
  return l >= 0 && l <= level;
}

Perm atom_permutation(const Transform& t, int level) {
  require_total(t, "atom_permutation");
  if (!on_dyadic_grid(t, level))
    throw GridMismatch("atom_permutation: map is off the level-" + std::to_string(level) + " grid");
  const std::size_t degree = grid_degree(level);
  const Rat width = dyadic(static_cast<unsigned>(level));
  std::vector<std::uint32_t> images(degree);
  for (std::uint32_t j = 0; j < degree; ++j)
    images[j] = grid_index(*t.apply(Rat(j) * width), level);
  return Perm(std::move(images));
}

Perm odometer_cycle(int level) { return atom_permutation(odometer_at_level(level), level); }

Perm upsilon(int n) {
  if (n < 1)
    throw std::invalid_argument("upsilon: n must be at least 1");
  const std::size_t degree = grid_degree(n);
  return Perm::transposition(degree, 1, static_cast<std::uint32_t>(degree - 2));
}

Transform u_n(int n) { return dyadic_permutation({n, upsilon(n)}); }

Perm lift(const Perm& sigma, int n, int p) {
  if (p < n)
    throw LevelMismatch("lift: target level below source level");
  if (sigma.degree() != grid_degree(n))
    throw LevelMismatch("lift: permutation degree does not match level " + std::to_string(n));
  const std::uint32_t shift = static_cast<std::uint32_t>(p - n);
  const std::size_t degree = grid_degree(p);
  std::vector<std::uint32_t> images(degree);
  const std::uint32_t mask = (std::uint32_t{1} << shift) - 1;
  for (std::uint32_t j = 0; j < degree; ++j)
    images[j] = (sigma(j >> shift) << shift) | (j & mask);
  return Perm(std::move(images));
}

const char* method_name(CertMethod m) {
  switch (m) {
    case CertMethod::BruteClosure:
      return "BruteClosure";
    case CertMethod::StabilizerChain:
      return "StabilizerChain";
    case CertMethod::TranspositionGraph:
      return "TranspositionGraph";
  }
  return "?";
}

nlohmann::ordered_json to_json(const GroupCertificate& c) {
  nlohmann::ordered_json j;
  if (c.level >= 0)
    j["level"] = c.level;
  j["degree"] = c.degree;
  j["generator_count"] = c.generator_count;
  j["targets"] = c.targets;
  j["verdict"] = c.verdict;
  j["method"] = method_name(c.method);
  if (c.order)
    j["order"] = c.order->get_str();
  if (!c.note.empty())
    j["note"] = c.note;
  return j;
}

namespace {

// Methods that need no stabilizer chain. Only a true verdict is returned
// unless the closure was complete.
std::optional<GroupCertificate> quick_contains(std::size_t degree, const std::vector<Perm>& gens,
                                               const std::vector<Perm>& targets,
                                               const std::string& label) {
  GroupCertificate cert;
  cert.degree = degree;
  cert.generator_count = gens.size();
  cert.targets = label;
  if (degree <= 16) {
    if (auto elems = closure(degree, gens, kBruteClosureCap)) {
      cert.method = CertMethod::BruteClosure;
      cert.order = BigInt(static_cast<unsigned long>(elems->size()));
      cert.verdict = std::all_of(targets.begin(), targets.end(), [&](const Perm& t) {
        return std::binary_search(elems->begin(), elems->end(), t);
      });
      return cert;
    }
    return std::nullopt;
  }
  if (transposition_classes_cover(degree, gens, targets)) {
    cert.method = CertMethod::TranspositionGraph;
    cert.verdict = true;
    return cert;
  }
  return std::nullopt;
}

std::vector<Perm> dedupe(std::vector<Perm> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

GroupCertificate group_contains(std::size_t degree, const std::vector<Perm>& gens,
                                const std::vector<Perm>& targets, std::string target_label) {
  for (const auto* list : {&gens, &targets})
    for (const auto& p : *list)
      if (p.degree() != degree)
        throw LevelMismatch("group_contains: permutation of degree " + std::to_string(p.degree()) +
                            " in a degree-" + std::to_string(degree) + " problem");
  if (auto quick = quick_contains(degree, gens, targets, target_label))
    return *quick;
  StabilizerChain chain(degree, gens);
  GroupCertificate cert;
  cert.degree = degree;
  cert.generator_count = gens.size();
  cert.targets = std::move(target_label);
  cert.method = CertMethod::StabilizerChain;
  cert.order = chain.order();
  cert.verdict = std::all_of(targets.begin(), targets.end(),
                             [&](const Perm& t) { return chain.contains(t); });
  return cert;
}

GroupCertificate group_contains(const std::vector<AtomPermutation>& gens,
                                const std::vector<AtomPermutation>& targets) {
  int level = -1;
  for (const auto* list : {&gens, &targets})
    for (const auto& a : *list) {
      if (level >= 0 && a.level != level)
        throw LevelMismatch("group_contains: levels " + std::to_string(level) + " and " +
                            std::to_string(a.level) + " differ");
      level = a.level;
    }
  if (level < 0)
    level = 0;
  std::vector<Perm> g, t;
  for (const auto& a : gens)
    g.push_back(a.perm);
  for (const auto& a : targets)
    t.push_back(a.perm);
  auto cert = group_contains(grid_degree(level), g, t, std::to_string(t.size()) + " targets");
  cert.level = level;
  return cert;
}

namespace {

// tau^k sigma tau^-k for 0 <= k < 2^level, deduplicated.
std::vector<Perm> odometer_conjugates(const Perm& sigma, int level) {
  const Perm tau = odometer_cycle(level);
  const Perm tau_inv = tau.inverse();
  std::vector<Perm> out;
  Perm c = sigma;
  for (std::size_t k = 0; k < grid_degree(level); ++k) {
    out.push_back(c);
    c = tau * c * tau_inv;
  }
  return dedupe(std::move(out));
}

// Generators of Sym(2^n), lifted to level p.
std::vector<Perm> lifted_symmetric_generators(int n, int p) {
  const std::size_t degree = grid_degree(n);
  std::vector<std::uint32_t> all(degree);
  std::iota(all.begin(), all.end(), 0u);
  std::vector<Perm> out;
  if (degree >= 2) {
    out.push_back(lift(Perm::transposition(degree, 0, 1), n, p));
    out.push_back(lift(Perm::cycle(degree, all), n, p));
  }
  return out;
}

std::string sym_label(int n) { return "lift of Sym(2^" + std::to_string(n) + ")"; }

}  // namespace

GroupCertificate lemma_conjugates_certificate(int n) {
  if (n < 1)
    throw std::invalid_argument("lemma_conjugates_certificate: n must be at least 1");
  auto gens = odometer_conjugates(upsilon(n), n);
  auto cert = group_contains(grid_degree(n), gens, lifted_symmetric_generators(n, n), sym_label(n));
  cert.level = n;
  return cert;
}

GroupCertificate evanescent_certificate(const Transform& v, long m, int n) {
  require_total(v, "evanescent_certificate");
  if (m < 1 || n < 1)
    throw std::invalid_argument("evanescent_certificate: m and n must be positive");
  const Transform w = power(v, m);
  BigInt order = atom_decomposition(w).order();
  if (order > BigInt(1L << 40))
    throw NotPeriodic("evanescent_certificate: v^m has order " + order.get_str());
  const long ord = order.get_si();
  std::vector<long> divisors;
  for (long d = 1; d * d <= ord; ++d)
    if (ord % d == 0) {
      divisors.push_back(d);
      if (d != ord / d)
        divisors.push_back(ord / d);
    }
  std::sort(divisors.begin(), divisors.end());
  if (ord > 1)
    divisors.pop_back();  // w^ord is the identity

  auto setup = [&](const Transform& wj, int& p) {
    p = std::max(dyadic_level(wj), n);
    return odometer_conjugates(atom_permutation(wj, p), p);
  };

  // Cheap methods on every dyadic power; a true verdict on any power is a
  // true verdict for v^m. Up to 16 atoms the answer is exact anyway.
  bool any_dyadic = false;
  for (long j : divisors) {
    Transform wj = power(w, j);
    int lvl = dyadic_level(wj);
    if (lvl < 0)
      continue;
    any_dyadic = true;
    if (std::max(lvl, n) > 12)
      continue;
    int p = 0;
    auto gens = setup(wj, p);
    auto targets = lifted_symmetric_generators(n, p);
    std::optional<GroupCertificate> cert;
    if (grid_degree(p) <= 16)
      cert = group_contains(grid_degree(p), gens, targets, sym_label(n));
    else
      cert = quick_contains(grid_degree(p), gens, targets, sym_label(n));
    if (cert && (cert->verdict || j == 1)) {
      cert->level = p;
      if (j > 1)
        cert->note = "certified through the dyadic power (v^m)^" + std::to_string(j);
      return *cert;
    }
  }
  if (!any_dyadic)
    throw NotDyadic("evanescent_certificate: no nontrivial power of v^m lies on a dyadic grid");
  if (dyadic_level(w) >= 0) {
    int p = 0;
    auto gens = setup(w, p);
    auto cert = group_contains(grid_degree(p), gens, lifted_symmetric_generators(n, p), sym_label(n));
    cert.level = p;
    return cert;
  }
  GroupCertificate cert;
  cert.targets = sym_label(n);
  cert.verdict = false;
  cert.method = CertMethod::TranspositionGraph;
  cert.note = "not certified: v^m is off the dyadic grid and no dyadic power certifies";
  return cert;
}

EvanescentApproximation build_evanescent_V(const Transform& u, long m, int n, const Rat& eps) {
  require_total(u, "build_evanescent_V");
  if (m < 1 || n < 1)
    throw std::invalid_argument("build_evanescent_V: m and n must be positive");
  if (eps <= 0)
    throw std::invalid_argument("build_evanescent_V: eps must be positive");
  BigInt order = atom_decomposition(u).order();
  if (order > BigInt(1L << 40))
    throw NotPeriodic("build_evanescent_V: u has order " + order.get_str() + " above 2^40");
  EvanescentApproximation out;
  out.order = order.get_si();
  int p = n;
  while (dyadic(static_cast<unsigned>(p)) * out.order >= eps / 2)
    ++p;
  out.p = p;
  const Transform up = u_n(p);
  const IntervalSet s = support(up);
  // Cut the atoms of u at the endpoints of S; then S is a union of atoms and
  // its saturation is the union of the cycles that meet it.
  std::vector<Rat> cuts;
  for (const auto& iv : s.intervals()) {
    cuts.push_back(iv.lo);
    cuts.push_back(iv.hi);
  }
  AtomDecomposition atoms = atom_decomposition(u, cuts);
  std::vector<Interval> sat;
  for (const auto& cycle : atoms.cycles()) {
    bool meets = std::any_of(cycle.begin(), cycle.end(),
                             [&](std::size_t i) { return s.contains(atoms.cuts[i]); });
    if (meets)
      for (std::size_t i : cycle)
        sat.push_back(atoms.atom(i));
  }
  out.saturation = IntervalSet(std::move(sat));
  out.root = kth_root(up, out.order * m);
  out.u_tilde = disjoint_union(u.restrict_to(out.saturation.complement()),
                               out.root.restrict_to(out.saturation));
  return out;
}

CostOnePair strengthen_to_cost1_pair(const Transform& v, const Transform& t, const PreCycle& phi,
                                     long n) {
  require_total(v, "strengthen_to_cost1_pair");
  require_total(t, "strengthen_to_cost1_pair");
  if (phi.length != 2)
    throw std::invalid_argument("strengthen_to_cost1_pair: phi must be a pre-cycle of length 2");
  if (n < 1)
    throw std::invalid_argument("strengthen_to_cost1_pair: n must be positive");
  const IntervalSet sv = support(v);
  if (sv.measure() >= 1)
    throw std::invalid_argument("strengthen_to_cost1_pair: supp v must have measure below 1");
  const IntervalSet sphi = support(phi.map);
  if (!sphi.disjoint_from(sv))
    throw OverlapError("strengthen_to_cost1_pair: supp phi meets supp v");
  const IntervalSet forbidden = sv.unite(sphi);
  const IntervalSet rng = phi.map.range();

  CostOnePair out;
  Transform tj = t;
  for (long j = 1; j <= 4096 && !tj.restrict_to(rng).empty(); ++j) {
    if (tj.image(rng).disjoint_from(forbidden)) {
      out.psi = tj.restrict_to(rng);
      out.psi_power = j;
      break;
    }
    tj = compose(t, tj);
    if (tj == PiecewiseTranslation::identity())
      break;
  }
  if (out.psi_power == 0)
    out.psi = transport(rng, forbidden.complement().carve(rng.measure()));
  out.chain = PreCycle::from_map(disjoint_union(phi.map, out.psi), 3);
  out.u1 = closing_cycle(out.chain);
  out.u2 = kth_root(out.u1, n);
  out.v2 = compose(v, out.u2);
  return out;
}

}  // namespace toti
