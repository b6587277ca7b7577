#include "toti/builder.hpp"

#include "toti/atoms.hpp"
#include "toti/errors.hpp"
#include "toti/odometer.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace toti {

namespace {

const char* kYConstraint = "1/2<μ(Y)<1";
const char* kPrecycleConstraint = "c(p+2)/p<μ(Y)";

void require(bool ok, const std::string& message) {
  if (!ok)
    throw ConfigError(message);
}

}  // namespace

void validate(const BuildParams& params) {
  require(params.r >= 2 && params.r <= 8, "r must satisfy 2<=r<=8 (got " + std::to_string(params.r) + ")");
  require(params.muY > make_rat(1, 2) && params.muY < 1,
          "muY=" + to_string(params.muY) + " violates " + kYConstraint);
  require(params.level >= 1 && params.level <= 16,
          "level must satisfy 1<=L<=16 (got " + std::to_string(params.level) + ")");
  require(params.ballCount >= 1, "ballCount must be at least 1");
  require(params.maxBallVerts >= 1 && params.maxBallVerts <= 7,
          "maxBallVerts must satisfy 1<=maxBallVerts<=7 (got " +
              std::to_string(params.maxBallVerts) + ")");
  require(params.precycleLength >= 3,
          "precycleLength=p+2 needs p>=1 (got " + std::to_string(params.precycleLength) + ")");
  require(params.precycleC > 0, "precycleC must be positive");
  const Rat bound = params.precycleC * (params.p() + 2) / params.p();
  require(bound < params.muY, "c(p+2)/p=" + to_string(bound) + " violates " + kPrecycleConstraint);
  require(params.evanescentM >= 1, "evanescentM must be at least 1");
  require(params.evanescentN >= 1 && params.evanescentN <= 8,
          "evanescentN must satisfy 1<=n<=8 (got " + std::to_string(params.evanescentN) + ")");
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

long parse_int(const std::string& key, const std::string& value) {
  long v = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || p != value.data() + value.size() || value.empty())
    throw ConfigError("config key '" + key + "' expects an integer, got '" + value + "'");
  return v;
}

Rat parse_config_rat(const std::string& key, const std::string& value) {
  try {
    return parse_rat(value);
  } catch (const ParseError& e) {
    throw ConfigError("config key '" + key + "' expects a reduced rational p/q, got '" + value + "'");
  }
}

}  // namespace

BuildParams parse_config(const std::string& text) {
  BuildParams params;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    line = trim(line);
    if (line.empty())
      continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "r")
      params.r = static_cast<int>(parse_int(key, value));
    else if (key == "muY")
      params.muY = parse_config_rat(key, value);
    else if (key == "level")
      params.level = static_cast<int>(parse_int(key, value));
    else if (key == "ballCount")
      params.ballCount = static_cast<int>(parse_int(key, value));
    else if (key == "maxBallVerts")
      params.maxBallVerts = static_cast<int>(parse_int(key, value));
    else if (key == "precycleLength")
      params.precycleLength = static_cast<int>(parse_int(key, value));
    else if (key == "precycleC")
      params.precycleC = parse_config_rat(key, value);
    else if (key == "evanescentM")
      params.evanescentM = parse_int(key, value);
    else if (key == "evanescentN")
      params.evanescentN = static_cast<int>(parse_int(key, value));
    else
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  validate(params);
  return params;
}

std::string write_config(const BuildParams& params) {
  std::ostringstream out;
  out << "r = " << params.r << "\n"
      << "muY = " << to_string(params.muY) << "\n"
      << "level = " << params.level << "\n"
      << "ballCount = " << params.ballCount << "\n"
      << "maxBallVerts = " << params.maxBallVerts << "\n"
      << "precycleLength = " << params.precycleLength << "\n"
      << "precycleC = " << to_string(params.precycleC) << "\n"
      << "evanescentM = " << params.evanescentM << "\n"
      << "evanescentN = " << params.evanescentN << "\n";
  return out.str();
}

IntervalSet choose_Y(const BuildParams& params) { return IntervalSet::of(Rat(0), params.muY); }

Transform scale_into(const PiecewiseTranslation& t, const Rat& muY) {
  require_total(t, "scale_into");
  std::vector<Piece> pieces;
  for (const auto& p : t.pieces())
    pieces.push_back({p.lo * muY, p.hi * muY, p.offset * muY});
  if (muY < 1)
    pieces.push_back({muY, Rat(1), Rat(0)});
  return PiecewiseTranslation::from_pieces(std::move(pieces));
}

Transform scale_out(const Transform& t, const Rat& muY) {
  require_total(t, "scale_out");
  const IntervalSet y = IntervalSet::of(Rat(0), muY);
  if (!support(t).subset_of(y))
    throw std::invalid_argument("scale_out: map moves points outside Y");
  std::vector<Piece> pieces;
  const Transform inside = t.restrict_to(y);
  for (const auto& p : inside.pieces())
    pieces.push_back({p.lo / muY, p.hi / muY, p.offset / muY});
  return PiecewiseTranslation::from_pieces(std::move(pieces));
}

Transform make_T_on_Y(const BuildParams& params) {
  return scale_into(odometer_at_level(params.level), params.muY);
}

PrecycleStage make_precycles(const BuildParams& params) {
  const int p = params.p();
  const Rat b = params.precycleC / p;
  PrecycleStage out;
  out.middle = IntervalSet::of(params.muY / 4, params.muY * 3 / 4);
  const Rat need = b * (p + 2);
  if (need > out.middle.measure())
    throw InsufficientRoom("pre-cycles need " + to_string(need) + " inside the middle half of Y, which holds " +
                           to_string(out.middle.measure()) + " (deficit " +
                           to_string(need - out.middle.measure()) + ")");
  std::vector<IntervalSet> x;
  IntervalSet rest = out.middle;
  for (int k = 0; k < p + 2; ++k) {
    x.push_back(rest.carve(b));
    rest = rest.subtract(x.back());
  }
  out.psi = PreCycle::from_map(transport(x[0], x[1]), 2);
  for (int i = 2; i <= params.r; ++i) {
    const int rot = (i - 2) % p;
    std::vector<IntervalSet> chain{x[0], x[1]};
    for (int j = 0; j < p; ++j)
      chain.push_back(x[2 + (j + rot) % p]);
    PiecewiseTranslation map;
    for (std::size_t k = 0; k + 1 < chain.size(); ++k)
      map = disjoint_union(map, transport(chain[k], chain[k + 1]));
    out.phi.push_back(PreCycle::from_map(std::move(map), p + 2));
    out.U.push_back(closing_cycle(out.phi.back()));
  }
  out.eta = params.muY - support(out.U[0]).measure();
  // Least m0 with (1 - muY)/m0 < eta/2.
  Rat q = (Rat(1) - params.muY) * 2 / out.eta;
  BigInt fl = q.get_num() / q.get_den();
  out.m0 = fl.get_si() + 1;
  return out;
}

FiniteStage assemble_finite_actions(const BuildParams& params, long m0) {
  FiniteStage out;
  const std::size_t n_balls = static_cast<std::size_t>(params.ballCount);
  std::vector<PartialAction> graphs;
  if (m0 <= params.maxBallVerts)
    enumerate_partial_actions(params.r, static_cast<std::size_t>(m0),
                              static_cast<std::size_t>(params.maxBallVerts),
                              [&](const PartialAction& g) {
                                graphs.push_back(g);
                                return graphs.size() < n_balls;
                              });
  if (graphs.size() < n_balls)
    throw InsufficientRoom("only " + std::to_string(graphs.size()) + " partial actions with " +
                           std::to_string(m0) + " to " + std::to_string(params.maxBallVerts) +
                           " vertices; " + std::to_string(n_balls) + " requested (deficit " +
                           std::to_string(n_balls - graphs.size()) + ")");
  out.C = IntervalSet::of(params.muY, Rat(1));
  const Rat cm = out.C.measure();
  Rat lo = params.muY;
  std::vector<std::vector<Piece>> pieces(static_cast<std::size_t>(params.r));
  for (std::size_t n = 0; n < n_balls; ++n) {
    BallEntry e;
    e.g = graphs[n];
    e.completed = extend_marked(e.g);
    Rat len = n + 1 < n_balls ? Rat(cm * dyadic(static_cast<unsigned>(n + 1))) : Rat(Rat(1) - lo);
    e.region = IntervalSet::of(lo, lo + len);
    const std::size_t m = e.completed.action.size;
    const Rat width = len / static_cast<unsigned long>(m);
    for (std::size_t g = 0; g < m; ++g)
      e.blocks.push_back(IntervalSet::of(lo + width * static_cast<unsigned long>(g),
                                         lo + width * static_cast<unsigned long>(g + 1)));
    for (int i = 0; i < params.r; ++i)
      for (std::uint32_t g = 0; g < m; ++g) {
        const Rat& from = e.blocks[g].intervals().front().lo;
        const Rat& to = e.blocks[e.completed.action.maps[i][g]].intervals().front().lo;
        pieces[i].push_back({from, from + width, to - from});
      }
    lo += len;
    out.balls.push_back(std::move(e));
  }
  for (int i = 0; i < params.r; ++i) {
    pieces[i].push_back({Rat(0), params.muY, Rat(0)});
    out.alpha_inf.push_back(PiecewiseTranslation::from_pieces(std::move(pieces[i])));
  }
  return out;
}

VWIStage choose_V_W_I(const BuildParams& params, const PrecycleStage& pre, const FiniteStage& fin) {
  VWIStage out;
  const int pv = std::max(params.evanescentN, 3);
  const Rat eps = pre.eta / (params.muY * 2);
  auto ev = build_evanescent_V(PiecewiseTranslation::identity(), params.evanescentM, pv, eps);
  out.V_unit = ev.u_tilde;
  out.v_level = ev.p;
  out.V = scale_into(out.V_unit, params.muY);
  out.W = PiecewiseTranslation::identity();
  const IntervalSet su2 = support(pre.U[0]);
  const IntervalSet sv = support(out.V);
  const Rat half_eta = pre.eta / 2;
  if (sv.measure() >= half_eta)
    throw InsufficientRoom("supp V has measure " + to_string(sv.measure()) + ", not below eta/2 = " +
                           to_string(half_eta) + " (deficit " + to_string(sv.measure() - half_eta) + ")");
  if (!sv.disjoint_from(su2))
    throw InsufficientRoom("supp V meets supp U_2 on a set of measure " +
                           to_string(sv.intersect(su2).measure()));
  for (const auto& e : fin.balls)
    out.B = out.B.unite(e.marked_block());
  out.D = su2.unite(sv);
  const IntervalSet free = IntervalSet::of(Rat(0), params.muY).subtract(out.D);
  out.A = free.carve(out.B.measure());
  PiecewiseTranslation swap = disjoint_union(transport(out.A, out.B), transport(out.B, out.A));
  out.I = complete_by_identity(swap);
  return out;
}

namespace {

std::string ball_summary(const BallEntry& e, std::size_t n) {
  std::ostringstream out;
  out << "ball " << n + 1 << ": |G|=" << e.g.size << " |G'|=" << e.completed.action.size
      << " zeta=" << e.completed.zeta << " l=a" << e.completed.ell + 1
      << " delta=" << e.completed.delta << " xi=" << e.completed.marked << " C=" << e.region.str();
  return out.str();
}

}  // namespace

BuildResult build(const BuildParams& params) {
  validate(params);
  BuildResult res;
  res.params = params;
  auto& log = res.log;
  res.Y = choose_Y(params);
  log.push_back("Y = " + res.Y.str() + ", measure " + to_string(res.Y.measure()));
  res.T = make_T_on_Y(params);
  log.push_back("T = level-" + std::to_string(params.level) +
                " odometer conjugated into Y by x -> muY x, identity on [muY,1)");

  auto pre = make_precycles(params);
  res.middle = pre.middle;
  res.phi = pre.phi;
  res.U = pre.U;
  res.psi = pre.psi;
  res.eta = pre.eta;
  res.m0 = pre.m0;
  log.push_back("pre-cycles of length " + std::to_string(params.precycleLength) + " with basis measure " +
                to_string(params.precycleC / params.p()) + " carved from " + pre.middle.str());
  log.push_back("psi = " + pre.psi.map.str());
  for (std::size_t i = 0; i < pre.phi.size(); ++i)
    log.push_back("phi_" + std::to_string(i + 2) + " tail rotation " +
                  std::to_string(i % static_cast<std::size_t>(params.p())) + ", support " +
                  support(pre.phi[i].map).str());
  log.push_back("eta = mu(Y \\ supp U_2) = " + to_string(res.eta));
  log.push_back("m0 = " + std::to_string(res.m0) + " (least m with (1-muY)/m < eta/2)");

  auto fin = assemble_finite_actions(params, res.m0);
  res.C = fin.C;
  res.balls = fin.balls;
  res.alpha_inf = fin.alpha_inf;
  log.push_back("C = " + res.C.str());
  for (std::size_t n = 0; n < res.balls.size(); ++n)
    log.push_back(ball_summary(res.balls[n], n));

  auto vwi = choose_V_W_I(params, pre, fin);
  res.V = vwi.V;
  res.V_unit = vwi.V_unit;
  res.v_level = vwi.v_level;
  res.W = vwi.W;
  res.I = vwi.I;
  res.A = vwi.A;
  res.B = vwi.B;
  res.D = vwi.D;
  log.push_back("V = scaled " + std::to_string(params.evanescentM) + "-th root of U_" +
                std::to_string(res.v_level) + ", support " + support(res.V).str());
  log.push_back("W = identity");
  log.push_back("B = " + res.B.str() + ", measure " + to_string(res.B.measure()));
  log.push_back("D = " + res.D.str());
  log.push_back("A = " + res.A.str());

  res.alpha.push_back(compose(res.T, res.alpha_inf[0]));
  res.alpha.push_back(compose(res.V, compose(res.U[0], compose(res.I, res.alpha_inf[1]))));
  for (int i = 3; i <= params.r; ++i)
    res.alpha.push_back(compose(res.U[i - 2], res.alpha_inf[i - 1]));
  for (int i = 0; i < params.r; ++i)
    log.push_back("alpha(a" + std::to_string(i + 1) + "): " +
                  std::to_string(res.alpha[i].pieces().size()) + " pieces");

  auto inv = check_invariants(res);
  if (!inv.ok()) {
    std::string failed;
    for (const auto& c : inv.clauses)
      if (!c.pass)
        failed += " " + c.name;
    throw std::logic_error("build invariants failed:" + failed);
  }
  return res;
}

}  // namespace toti
