#include "toti/precycle.hpp"

#include "toti/atoms.hpp"
#include "toti/errors.hpp"
#include "toti/odometer.hpp"

#include <stdexcept>

namespace toti {

PrecycleCheck is_precycle(const PiecewiseTranslation& phi, int n) {
  if (n < 2)
    throw std::invalid_argument("is_precycle: length must be at least 2");
  PrecycleCheck result;
  const IntervalSet dom = phi.domain();
  const IntervalSet rng = phi.range();
  result.basis = dom.subtract(rng);
  if (phi.empty() || result.basis.empty()) {
    result.reason = "empty basis";
    return result;
  }
  std::vector<IntervalSet> layers{result.basis};
  for (int i = 1; i < n; ++i) {
    if (!layers.back().subset_of(dom)) {
      result.reason = "layer " + std::to_string(i - 1) + " leaves the domain";
      return result;
    }
    layers.push_back(phi.image(layers.back()));
  }
  auto tiles = [&](int first, int last, const IntervalSet& whole) {
    IntervalSet u;
    Rat total = 0;
    for (int i = first; i <= last; ++i) {
      u = u.unite(layers[i]);
      total += layers[i].measure();
    }
    return u == whole && total == whole.measure();
  };
  if (!tiles(0, n - 2, dom)) {
    result.reason = "layers 0..n-2 do not partition the domain";
    return result;
  }
  if (!tiles(1, n - 1, rng)) {
    result.reason = "layers 1..n-1 do not partition the range";
    return result;
  }
  result.ok = true;
  return result;
}

PreCycle PreCycle::from_map(PiecewiseTranslation map, int length) {
  auto check = is_precycle(map, length);
  if (!check.ok)
    throw std::invalid_argument("not a pre-cycle of length " + std::to_string(length) + ": " +
                                check.reason);
  return PreCycle{std::move(map), length, std::move(check.basis)};
}

PreCycle make_precycle(int n, const Rat& basis_measure, const IntervalSet& slots) {
  if (n < 2)
    throw std::invalid_argument("make_precycle: length must be at least 2");
  if (basis_measure <= 0)
    throw std::invalid_argument("make_precycle: basis measure must be positive");
  Rat need = basis_measure * n;
  if (slots.measure() < need)
    throw InsufficientRoom("make_precycle: need " + to_string(need) + " but slots hold " +
                           to_string(slots.measure()) + " (deficit " +
                           to_string(need - slots.measure()) + ")");
  std::vector<IntervalSet> blocks;
  IntervalSet rest = slots;
  for (int i = 0; i < n; ++i) {
    blocks.push_back(rest.carve(basis_measure));
    rest = rest.subtract(blocks.back());
  }
  std::vector<Piece> pieces;
  for (int i = 0; i + 1 < n; ++i) {
    const PiecewiseTranslation step = transport(blocks[i], blocks[i + 1]);
    pieces.insert(pieces.end(), step.pieces().begin(), step.pieces().end());
  }
  return PreCycle{PiecewiseTranslation::from_pieces(std::move(pieces)), n, blocks[0]};
}

Transform closing_cycle(const PreCycle& p) {
  const IntervalSet dom = p.map.domain();
  const IntervalSet rng = p.map.range();
  PiecewiseTranslation back = power(invert(p.map), p.length - 1).restrict_to(rng.subtract(dom));
  PiecewiseTranslation cycle = disjoint_union(p.map, back);
  return disjoint_union(cycle, PiecewiseTranslation::identity(dom.unite(rng).complement()));
}

PeriodReport period(const Transform& t, long bound) {
  if (bound < 1)
    throw std::invalid_argument("period: bound must be positive");
  BigInt order = atom_decomposition(t).order();
  PeriodReport r;
  r.bound = bound;
  if (order > bound)
    r.period = ExceedsBound{};
  else
    r.period = order.get_si();
  return r;
}

Transform kth_root(const Transform& u, long k, long bound) {
  require_total(u, "kth_root");
  if (k < 1)
    throw std::invalid_argument("kth_root: k must be positive");
  AtomDecomposition atoms = atom_decomposition(u);
  BigInt order = atoms.order();
  if (order > bound)
    throw NotPeriodic("kth_root: period " + order.get_str() + " exceeds bound " +
                      std::to_string(bound));
  std::vector<Piece> pieces;
  for (const auto& cycle : atoms.cycles()) {
    const std::size_t n = cycle.size();
    if (n == 1) {
      const auto a = atoms.atom(cycle[0]);
      pieces.push_back({a.lo, a.hi, Rat(0)});
      continue;
    }
    const Rat width = atoms.atom(cycle[0]).length() / k;
    auto block_start = [&](std::size_t i, long j) -> Rat { return atoms.cuts[cycle[i]] + width * j; };
    for (std::size_t i = 0; i < n; ++i) {
      for (long j = 0; j < k; ++j) {
        std::size_t ti = i;
        long tj = 0;
        if (j == 0) {
          ti = (i + 1) % n;
          tj = k >= 2 ? 1 : 0;
        } else if (j < k - 1) {
          tj = j + 1;
        }
        Rat lo = block_start(i, j);
        pieces.push_back({lo, lo + width, block_start(ti, tj) - lo});
      }
    }
  }
  return PiecewiseTranslation::from_pieces(std::move(pieces));
}

bool extends(const Transform& t, const PiecewiseTranslation& phi) {
  require_total(t, "extends");
  return t.restrict_to(phi.domain()) == phi;
}

GroupCertificate conj_trick_certificate(const PreCycle& p, const Transform& u, int level) {
  require_total(u, "conj_trick_certificate");
  if (!extends(u, p.map))
    throw std::invalid_argument("conj_trick_certificate: u does not extend the pre-cycle");
  if (!on_dyadic_grid(p.map, level) || !on_dyadic_grid(u, level))
    throw GridMismatch("conj_trick_certificate: breakpoints are off the level-" +
                       std::to_string(level) + " grid");
  const std::size_t degree = std::size_t{1} << level;
  const Rat scale = Rat(static_cast<unsigned long>(degree));
  auto atom_index = [&](const Rat& x) {
    Rat y = x * scale;
    return static_cast<std::uint32_t>(y.get_num().get_ui());
  };
  std::vector<Perm> gens{atom_permutation(u, level)};
  std::vector<Perm> targets;
  for (const auto& iv : p.basis.intervals()) {
    for (std::uint32_t a = atom_index(iv.lo); a < atom_index(iv.hi); ++a) {
      Rat x = Rat(a) / scale;
      std::uint32_t prev = a;
      for (int i = 1; i < p.length; ++i) {
        x = *p.map.apply(x);
        std::uint32_t next = atom_index(x);
        if (i == 1)
          gens.push_back(Perm::transposition(degree, prev, next));
        targets.push_back(Perm::transposition(degree, prev, next));
        prev = next;
      }
    }
  }
  auto cert = group_contains(degree, gens, targets, "Sym of every phi-class");
  cert.level = level;
  return cert;
}

nlohmann::ordered_json to_json(const PreCycle& p) {
  nlohmann::ordered_json j;
  j["length"] = p.length;
  j["map"] = to_json(p.map);
  return j;
}

PreCycle precycle_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("length") || !j.at("length").is_number_integer() ||
      !j.contains("map"))
    throw ParseError("pre-cycle must have integer 'length' and 'map'");
  int n = j.at("length").get<int>();
  if (n < 2)
    throw ParseError("pre-cycle length must be at least 2");
  auto map = piecewise_from_json(j.at("map"));
  auto check = is_precycle(map, n);
  if (!check.ok)
    throw ParseError("not a pre-cycle of length " + std::to_string(n) + ": " + check.reason);
  return PreCycle{std::move(map), n, std::move(check.basis)};
}

}  // namespace toti
