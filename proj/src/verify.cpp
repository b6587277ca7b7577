#include "toti/builder.hpp"

#include "toti/atoms.hpp"
#include "toti/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace toti {

bool Report::ok() const {
  return std::all_of(clauses.begin(), clauses.end(), [](const Clause& c) { return c.pass; });
}

void Report::add(std::string name, bool pass, std::string detail) {
  clauses.push_back({std::move(name), pass, std::move(detail)});
}

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json j;
  j["title"] = title;
  j["ok"] = ok();
  auto list = nlohmann::ordered_json::array();
  for (const auto& c : clauses) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    if (!c.detail.empty())
      cj["detail"] = c.detail;
    list.push_back(cj);
  }
  j["clauses"] = list;
  if (!data.is_null())
    j["data"] = data;
  return j;
}

namespace {

bool commute(const Transform& a, const Transform& b) { return compose(a, b) == compose(b, a); }

std::string ix(int i) { return std::to_string(i); }

long perm_order(const std::vector<std::uint32_t>& images) {
  std::vector<bool> seen(images.size(), false);
  long order = 1;
  for (std::size_t s = 0; s < images.size(); ++s) {
    if (seen[s])
      continue;
    long len = 0;
    for (std::size_t x = s; !seen[x]; x = images[x]) {
      seen[x] = true;
      ++len;
    }
    order = std::lcm(order, len);
  }
  return order;
}

}  // namespace

Report check_invariants(const BuildResult& res) {
  Report rep;
  rep.title = "build invariants";
  const int r = res.params.r;
  bool total = static_cast<int>(res.alpha.size()) == r;
  for (const auto& a : res.alpha)
    total = total && a.is_total();
  rep.add("alpha total", total);
  if (!total)
    return rep;
  rep.add("mu(Y) = muY", res.Y.measure() == res.params.muY, "mu(Y) = " + to_string(res.Y.measure()));
  rep.add("alpha(a1) = T alpha_inf(a1)", res.alpha[0] == compose(res.T, res.alpha_inf[0]));
  rep.add("alpha(a1) on Y is T", res.alpha[0].restrict_to(res.Y) == res.T.restrict_to(res.Y));
  const Transform ia = compose(res.I, res.alpha_inf[1]);
  rep.add("alpha(a2) = V (W U2 W^-1) (I alpha_inf(a2))",
          res.alpha[1] == compose(res.V, compose(compose(res.W, compose(res.U[0], invert(res.W))), ia)));
  const IntervalSet sv = support(res.V), su = support(res.U[0]), si = support(ia);
  rep.add("factor supports disjoint",
          sv.disjoint_from(su) && sv.disjoint_from(si) && su.disjoint_from(si));
  rep.add("alpha(a2) extends phi_2", extends(compose(invert(res.W), compose(res.alpha[1], res.W)),
                                             res.phi[0].map));
  for (int i = 3; i <= r; ++i) {
    rep.add("alpha(a" + ix(i) + ") = U_" + ix(i) + " alpha_inf(a" + ix(i) + ")",
            res.alpha[i - 1] == compose(res.U[i - 2], res.alpha_inf[i - 1]));
    rep.add("alpha(a" + ix(i) + ") extends phi_" + ix(i), extends(res.alpha[i - 1], res.phi[i - 2].map));
  }
  bool extends_psi = true;
  for (const auto& p : res.phi)
    extends_psi = extends_psi && p.map.restrict_to(res.psi.map.domain()) == res.psi.map;
  rep.add("every phi_i extends psi", extends_psi);
  rep.add("I^2 = id and I(A) = B",
          compose(res.I, res.I) == PiecewiseTranslation::identity() && res.I.image(res.A) == res.B);
  rep.add("alpha(a2)(A) = B", res.alpha[1].image(res.A) == res.B);
  rep.add("A inside Y \\ D", res.A.subset_of(res.Y.subtract(res.D)));
  const Rat bound = (Rat(1) - res.params.muY) / res.m0;
  rep.add("mu(B) <= (1-muY)/m0 < eta/2", res.B.measure() <= bound && bound < res.eta / 2,
          "mu(B) = " + to_string(res.B.measure()) + ", (1-muY)/m0 = " + to_string(bound) +
              ", eta/2 = " + to_string(res.eta / 2));
  rep.add("mu(supp V) < eta/2", sv.measure() < res.eta / 2, "mu(supp V) = " + to_string(sv.measure()));
  bool blocks = true;
  for (const auto& e : res.balls) {
    const Rat w = e.region.measure() / static_cast<unsigned long>(e.completed.action.size);
    for (const auto& b : e.blocks)
      blocks = blocks && b.measure() == w && b.subset_of(e.region);
    blocks = blocks && res.alpha_inf[1].restrict_to(e.marked_block()) ==
                           PiecewiseTranslation::identity(e.marked_block());
  }
  rep.add("blocks: mu(B_n^g)|G'_n| = mu(C_n), alpha_inf(a2) fixes B_n", blocks);
  rep.data["Y_measure"] = to_string(res.Y.measure());
  return rep;
}

Report verify_step4(const BuildResult& res, long k, int n0) {
  Report rep;
  rep.title = "decomposition";
  const int nb = static_cast<int>(res.balls.size());
  if (n0 <= 0 || n0 > nb)
    n0 = nb;
  if (k <= 0) {
    BigInt order = atom_decomposition(res.U[0]).order();
    order = lcm(order, atom_decomposition(res.I).order());
    for (int n = 0; n < n0; ++n)
      order = lcm(order, BigInt(perm_order(res.balls[n].completed.action.maps[1])));
    k = order.get_si();
  }
  rep.data["k"] = k;
  rep.data["n0"] = n0;
  const Transform ia = compose(res.I, res.alpha_inf[1]);
  const Transform wuw = compose(res.W, compose(res.U[0], invert(res.W)));
  const std::vector<std::pair<std::string, Transform>> factors{
      {"V", res.V}, {"W U2 W^-1", wuw}, {"I alpha_inf(a2)", ia}};
  for (std::size_t a = 0; a < factors.size(); ++a)
    for (std::size_t b = a + 1; b < factors.size(); ++b) {
      bool disjoint = support(factors[a].second).disjoint_from(support(factors[b].second));
      bool comm = commute(factors[a].second, factors[b].second);
      rep.add("(i) " + factors[a].first + " and " + factors[b].first + " commute", disjoint && comm,
              disjoint ? "" : "supports meet");
    }
  const Transform lhs = power(res.alpha[1], k);
  rep.add("(ii) alpha(a2)^k = V^k alpha_inf(a2)^k",
          lhs == compose(power(res.V, k), power(res.alpha_inf[1], k)));
  IntervalSet head;
  for (int n = 0; n < n0; ++n)
    head = head.unite(res.balls[n].region);
  rep.add("(iii) alpha(a2)^k is the identity on C_1..C_n0",
          lhs.restrict_to(head) == PiecewiseTranslation::identity(head));

  // (iv) Block witnesses: minimal words from xi_n reach every block.
  const int r = res.params.r;
  std::vector<Transform> inv;
  for (const auto& a : res.alpha)
    inv.push_back(invert(a));
  auto act = [&](int letter, const IntervalSet& s) {
    return letter > 0 ? res.alpha[letter - 1].image(s) : inv[-letter - 1].image(s);
  };
  IntervalSet covered = res.Y;
  const IntervalSet ab = res.alpha[1].image(res.A);
  covered = covered.unite(ab);
  bool exact = ab == res.B;
  auto witnesses = nlohmann::ordered_json::array();
  for (std::size_t n = 0; n < res.balls.size(); ++n) {
    const auto& e = res.balls[n];
    const auto& rho = e.completed.action;
    const std::uint32_t xi = e.completed.marked;
    std::vector<std::optional<std::vector<int>>> path(rho.size);
    path[xi] = std::vector<int>{};
    std::vector<std::uint32_t> queue{xi};
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (int slot = 0; slot < 2 * r; ++slot) {
        std::uint32_t w = rho.along(slot, queue[q]);
        if (path[w])
          continue;
        auto p = *path[queue[q]];
        p.push_back(slot_letter(slot));
        path[w] = p;
        queue.push_back(w);
      }
    auto ball_words = nlohmann::ordered_json::array();
    for (std::uint32_t g = 0; g < rho.size; ++g) {
      if (!path[g]) {
        exact = false;
        continue;
      }
      IntervalSet img = e.marked_block();
      for (int x : *path[g])
        img = act(x, img);
      exact = exact && img == e.blocks[g];
      covered = covered.unite(img);
      // Action order: the last step is the leftmost letter.
      std::vector<int> rev(path[g]->rbegin(), path[g]->rend());
      ball_words.push_back(Word(rev).str());
    }
    witnesses.push_back(ball_words);
  }
  rep.data["witness_words"] = witnesses;
  rep.add("(iv) alpha(gamma) B_n = B_n^g along minimal words, alpha(a2) A = B", exact);
  rep.add("(iv) orbit cover alpha(Gamma) Y = X", covered == IntervalSet::unit() && covered.measure() == 1,
          "covered measure " + to_string(covered.measure()));
  return rep;
}

namespace {

// Block graph of alpha on the blocks of one ball: an a_i-edge g -> h when
// alpha(a_i) translates block g onto block h.
PartialAction block_graph(const BuildResult& res, const BallEntry& e) {
  const std::size_t m = e.blocks.size();
  PartialAction h = PartialAction::empty(res.params.r, m);
  std::map<Rat, std::uint32_t> by_start;
  for (std::uint32_t g = 0; g < m; ++g)
    by_start[e.blocks[g].intervals().front().lo] = g;
  for (int i = 0; i < res.params.r; ++i)
    for (std::uint32_t g = 0; g < m; ++g) {
      auto piece = res.alpha[i].restrict_to(e.blocks[g]);
      if (piece.pieces().size() != 1)
        continue;
      auto it = by_start.find(piece.pieces()[0].image_lo());
      if (it != by_start.end() && piece.image(e.blocks[g]) == e.blocks[it->second])
        h.maps[i][g] = it->second;
    }
  return h;
}

struct OrbitBall {
  PartialAction graph;
  std::vector<Rat> points;
};

OrbitBall orbit_ball(const std::vector<Transform>& alpha, const std::vector<Transform>& inv,
                     const Rat& x, int radius) {
  const int r = static_cast<int>(alpha.size());
  OrbitBall out;
  std::map<Rat, std::uint32_t> index{{x, 0}};
  std::vector<int> dist{0};
  out.points.push_back(x);
  for (std::size_t k = 0; k < out.points.size(); ++k) {
    if (dist[k] == radius)
      continue;
    for (int slot = 0; slot < 2 * r; ++slot) {
      const Transform& t = slot % 2 == 0 ? alpha[slot / 2] : inv[slot / 2];
      Rat y = *t.apply(out.points[k]);
      if (index.emplace(y, static_cast<std::uint32_t>(out.points.size())).second) {
        out.points.push_back(y);
        dist.push_back(dist[k] + 1);
      }
    }
  }
  out.graph = PartialAction::empty(r, out.points.size());
  for (int i = 0; i < r; ++i)
    for (std::uint32_t k = 0; k < out.points.size(); ++k) {
      auto it = index.find(*alpha[i].apply(out.points[k]));
      if (it != index.end())
        out.graph.maps[i][k] = it->second;
    }
  return out;
}

}  // namespace

Report verify_totipotency(const BuildResult& res, int radius) {
  Report rep;
  rep.title = "totipotency";
  std::vector<Transform> inv;
  for (const auto& a : res.alpha)
    inv.push_back(invert(a));
  for (std::size_t n = 0; n < res.balls.size(); ++n) {
    const auto& e = res.balls[n];
    const std::string tag = "ball " + std::to_string(n + 1);
    PartialAction h = block_graph(res, e);
    PartialAction expected = e.completed.action;
    expected.maps[1][e.completed.marked] = kHole;
    std::string diff;
    for (int i = 0; i < res.params.r && diff.empty(); ++i)
      for (std::uint32_t g = 0; g < h.size; ++g)
        if (h.maps[i][g] != expected.maps[i][g]) {
          diff = "a" + std::to_string(i + 1) + " at block " + std::to_string(g);
          break;
        }
    rep.add(tag + ": block graph follows rho_n", diff.empty(), diff.empty() ? "" : "differs: " + diff);
    auto emb = contains_labeled_copy(h, e.g, std::pair<std::uint32_t, std::uint32_t>{0, 0});
    bool identity = emb.has_value();
    for (std::uint32_t v = 0; identity && v < e.g.size; ++v)
      identity = (*emb)[v] == v;
    rep.add(tag + ": G_n embeds onto its blocks", identity,
            emb ? (identity ? "" : "embedding is not the block assignment") : "no anchored copy");
    bool balls_ok = true;
    std::string where;
    for (std::uint32_t g = 0; g < e.g.size; ++g) {
      const auto& iv = e.blocks[g].intervals().front();
      const Rat mid = (iv.lo + iv.hi) / 2;
      auto ob = orbit_ball(res.alpha, inv, mid, radius);
      auto predicted = ball_of(h, g, radius);
      auto f = contains_labeled_copy(ob.graph, predicted.graph, std::pair<std::uint32_t, std::uint32_t>{0, 0});
      bool ok = f.has_value();
      for (std::uint32_t k = 0; ok && k < predicted.graph.size; ++k)
        ok = e.blocks[predicted.original[k]].contains(ob.points[(*f)[k]]);
      if (!ok && balls_ok)
        where = "midpoint of block " + std::to_string(g);
      balls_ok = balls_ok && ok;
    }
    rep.add(tag + ": orbit balls of block midpoints match the block graph", balls_ok, where);
  }
  return rep;
}

BuildResult corrupt_first_block_pair(const BuildResult& res) {
  BuildResult bad = res;
  const auto& e = res.balls.front();
  const IntervalSet& b0 = e.blocks[0];
  const IntervalSet& b1 = e.blocks[1];
  Transform swap = complete_by_identity(disjoint_union(transport(b0, b1), transport(b1, b0)));
  bad.alpha[0] = compose(res.alpha[0], swap);
  return bad;
}

StabilizerSample irs_sample(const BuildResult& res, const Rat& x, int radius, int word_len) {
  if (x < 0 || x >= 1)
    throw std::invalid_argument("irs_sample: point must lie in [0,1)");
  StabilizerSample s;
  s.point = x;
  s.radius = radius;
  std::vector<Transform> inv;
  for (const auto& a : res.alpha)
    inv.push_back(invert(a));
  auto ob = orbit_ball(res.alpha, inv, x, radius);
  s.orbit_ball = std::move(ob.graph);
  s.orbit_points = std::move(ob.points);
  // Words grow on the left: y = alpha(w) x, then alpha(l w) x = alpha(l) y.
  const int r = res.params.r;
  std::vector<int> letters;  // letters[0] is the rightmost letter
  auto dfs = [&](auto&& self, const Rat& y) -> void {
    if (static_cast<int>(letters.size()) == word_len)
      return;
    for (int slot = 0; slot < 2 * r; ++slot) {
      int l = slot_letter(slot);
      if (!letters.empty() && letters.back() == -l)
        continue;
      Rat z = *(l > 0 ? res.alpha[l - 1] : inv[-l - 1]).apply(y);
      letters.push_back(l);
      if (z == x)
        s.stab_words.push_back(Word(std::vector<int>(letters.rbegin(), letters.rend())));
      self(self, z);
      letters.pop_back();
    }
  };
  dfs(dfs, x);
  std::sort(s.stab_words.begin(), s.stab_words.end(), [](const Word& a, const Word& b) {
    if (a.length() != b.length())
      return a.length() < b.length();
    return std::lexicographical_compare(
        a.letters().begin(), a.letters().end(), b.letters().begin(), b.letters().end(),
        [](int p, int q) { return letter_slot(p) < letter_slot(q); });
  });
  const long bound = 1L << res.params.level;
  Rat y = x;
  for (long j = 1; j <= bound; ++j) {
    y = *res.alpha[0].apply(y);
    if (y == x) {
      s.a1_return = j;
      break;
    }
  }
  return s;
}

StallingsAutomaton stabilizer_to_subgroup(const StabilizerSample& sample, int rank) {
  return subgroup_from_generators(rank, sample.stab_words);
}

nlohmann::ordered_json to_json(const StabilizerSample& s) {
  nlohmann::ordered_json j;
  j["point"] = to_string(s.point);
  j["radius"] = s.radius;
  auto pts = nlohmann::ordered_json::array();
  for (const auto& p : s.orbit_points)
    pts.push_back(to_string(p));
  j["orbit_points"] = pts;
  j["orbit_ball"] = to_json(s.orbit_ball);
  auto words = nlohmann::ordered_json::array();
  for (const auto& w : s.stab_words)
    words.push_back(w.str());
  j["stabilizing_words"] = words;
  if (s.a1_return)
    j["a1_return_time"] = *s.a1_return;
  else
    j["a1_return_time"] = nullptr;
  return j;
}

}  // namespace toti
