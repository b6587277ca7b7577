#include "toti/piecewise.hpp"

#include "toti/errors.hpp"

#include <algorithm>

namespace toti {

namespace {

bool by_lo(const Piece& a, const Piece& b) { return a.lo < b.lo; }

}  // namespace

PiecewiseTranslation PiecewiseTranslation::canonical(std::vector<Piece> pieces) {
  std::erase_if(pieces, [](const Piece& p) { return p.hi <= p.lo; });
  std::sort(pieces.begin(), pieces.end(), by_lo);
  PiecewiseTranslation out;
  out.pieces_.reserve(pieces.size());
  for (auto& p : pieces) {
    if (!out.pieces_.empty()) {
      auto& last = out.pieces_.back();
      if (last.hi == p.lo && last.offset == p.offset) {
        last.hi = p.hi;
        continue;
      }
    }
    out.pieces_.push_back(std::move(p));
  }
  return out;
}

PiecewiseTranslation PiecewiseTranslation::from_pieces(std::vector<Piece> pieces) {
  for (const auto& p : pieces) {
    if (!(p.lo < p.hi))
      throw std::invalid_argument("piece with empty source [" + to_string(p.lo) + "," +
                                  to_string(p.hi) + ")");
    if (p.lo < 0 || p.hi > 1 || p.image_lo() < 0 || p.image_hi() > 1)
      throw std::invalid_argument("piece [" + to_string(p.lo) + "," + to_string(p.hi) +
                                  ") + " + to_string(p.offset) + " leaves [0,1)");
  }
  std::sort(pieces.begin(), pieces.end(), by_lo);
  for (std::size_t i = 1; i < pieces.size(); ++i)
    if (pieces[i].lo < pieces[i - 1].hi)
      throw OverlapError("overlapping piece sources at " + to_string(pieces[i].lo));
  std::vector<Interval> images;
  images.reserve(pieces.size());
  for (const auto& p : pieces)
    images.push_back({p.image_lo(), p.image_hi()});
  std::sort(images.begin(), images.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < images.size(); ++i)
    if (images[i].lo < images[i - 1].hi)
      throw OverlapError("overlapping piece images at " + to_string(images[i].lo));
  return canonical(std::move(pieces));
}

PiecewiseTranslation PiecewiseTranslation::identity(const IntervalSet& on) {
  std::vector<Piece> pieces;
  for (const auto& iv : on.intervals())
    pieces.push_back({iv.lo, iv.hi, Rat(0)});
  return canonical(std::move(pieces));
}

PiecewiseTranslation PiecewiseTranslation::translation(const Rat& lo, const Rat& hi,
                                                       const Rat& offset) {
  return from_pieces({Piece{lo, hi, offset}});
}

IntervalSet PiecewiseTranslation::domain() const {
  std::vector<Interval> parts;
  parts.reserve(pieces_.size());
  for (const auto& p : pieces_)
    parts.push_back({p.lo, p.hi});
  return IntervalSet(std::move(parts));
}

IntervalSet PiecewiseTranslation::range() const {
  std::vector<Interval> parts;
  parts.reserve(pieces_.size());
  for (const auto& p : pieces_)
    parts.push_back({p.image_lo(), p.image_hi()});
  return IntervalSet(std::move(parts));
}

bool PiecewiseTranslation::is_total() const {
  if (pieces_.empty() || pieces_.front().lo != 0 || pieces_.back().hi != 1)
    return false;
  for (std::size_t i = 1; i < pieces_.size(); ++i)
    if (pieces_[i].lo != pieces_[i - 1].hi)
      return false;
  return true;
}

std::optional<Rat> PiecewiseTranslation::apply(const Rat& x) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                             [](const Rat& v, const Piece& p) { return v < p.lo; });
  if (it == pieces_.begin())
    return std::nullopt;
  const auto& p = *std::prev(it);
  if (x < p.hi)
    return x + p.offset;
  return std::nullopt;
}

IntervalSet PiecewiseTranslation::image(const IntervalSet& s) const {
  if (!s.subset_of(domain()))
    throw std::invalid_argument("image: set " + s.str() + " is not inside the domain");
  return restrict_to(s).range();
}

PiecewiseTranslation PiecewiseTranslation::restrict_to(const IntervalSet& s) const {
  std::vector<Piece> out;
  const auto& parts = s.intervals();
  std::size_t j = 0;
  for (const auto& p : pieces_) {
    while (j < parts.size() && parts[j].hi <= p.lo)
      ++j;
    for (std::size_t k = j; k < parts.size() && parts[k].lo < p.hi; ++k) {
      Rat lo = std::max(p.lo, parts[k].lo);
      Rat hi = std::min(p.hi, parts[k].hi);
      if (lo < hi)
        out.push_back({lo, hi, p.offset});
    }
  }
  return canonical(std::move(out));
}

std::string PiecewiseTranslation::str() const {
  if (pieces_.empty())
    return "(empty map)";
  std::string s;
  for (const auto& p : pieces_) {
    if (!s.empty())
      s += "; ";
    s += "[" + to_string(p.lo) + "," + to_string(p.hi) + ")->" + to_string(p.image_lo());
  }
  return s;
}

void require_total(const PiecewiseTranslation& t, const char* what) {
  if (!t.is_total())
    throw std::invalid_argument(std::string(what) + ": transformation is not total");
}

PiecewiseTranslation compose(const PiecewiseTranslation& s, const PiecewiseTranslation& t) {
  const auto& sp = s.pieces();
  std::vector<Piece> out;
  for (const auto& p : t.pieces()) {
    Rat a = p.image_lo();
    Rat b = p.image_hi();
    auto it = std::partition_point(sp.begin(), sp.end(),
                                   [&](const Piece& q) { return q.hi <= a; });
    for (; it != sp.end() && it->lo < b; ++it) {
      Rat lo = std::max(a, it->lo);
      Rat hi = std::min(b, it->hi);
      if (lo < hi)
        out.push_back({lo - p.offset, hi - p.offset, p.offset + it->offset});
    }
  }
  // Sources are disjoint because t is injective; only canonical merging is needed.
  return PiecewiseTranslation::from_pieces(std::move(out));
}

PiecewiseTranslation invert(const PiecewiseTranslation& phi) {
  std::vector<Piece> out;
  out.reserve(phi.pieces().size());
  for (const auto& p : phi.pieces())
    out.push_back({p.image_lo(), p.image_hi(), -p.offset});
  return PiecewiseTranslation::from_pieces(std::move(out));
}

PiecewiseTranslation power(const PiecewiseTranslation& phi, long k) {
  PiecewiseTranslation base = k < 0 ? invert(phi) : phi;
  unsigned long e = k < 0 ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
  PiecewiseTranslation acc = PiecewiseTranslation::identity();
  while (e > 0) {
    if (e & 1UL)
      acc = compose(base, acc);
    e >>= 1;
    if (e > 0)
      base = compose(base, base);
  }
  return acc;
}

PiecewiseTranslation disjoint_union(const PiecewiseTranslation& phi,
                                    const PiecewiseTranslation& psi) {
  if (!phi.domain().disjoint_from(psi.domain()))
    throw OverlapError("disjoint_union: domains intersect in " +
                       phi.domain().intersect(psi.domain()).str());
  if (!phi.range().disjoint_from(psi.range()))
    throw OverlapError("disjoint_union: ranges intersect in " +
                       phi.range().intersect(psi.range()).str());
  std::vector<Piece> all = phi.pieces();
  all.insert(all.end(), psi.pieces().begin(), psi.pieces().end());
  return PiecewiseTranslation::from_pieces(std::move(all));
}

IntervalSet support(const PiecewiseTranslation& phi) {
  std::vector<Interval> parts;
  for (const auto& p : phi.pieces()) {
    if (p.offset == 0)
      continue;
    parts.push_back({p.lo, p.hi});
    parts.push_back({p.image_lo(), p.image_hi()});
  }
  return IntervalSet(std::move(parts));
}

IntervalSet fix_set(const Transform& t) {
  require_total(t, "fix_set");
  return support(t).complement();
}

Rat uniform_distance(const Transform& s, const Transform& t) {
  require_total(s, "uniform_distance");
  require_total(t, "uniform_distance");
  const auto& a = s.pieces();
  const auto& b = t.pieces();
  Rat disagreement = 0;
  Rat cursor = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const Rat& end = std::min(a[i].hi, b[j].hi);
    if (a[i].offset != b[j].offset)
      disagreement += end - cursor;
    cursor = end;
    if (a[i].hi == cursor)
      ++i;
    if (j < b.size() && b[j].hi == cursor)
      ++j;
  }
  return disagreement;
}

PiecewiseTranslation transport(const IntervalSet& a, const IntervalSet& b) {
  if (a.measure() != b.measure())
    throw MeasureMismatch("transport: measure " + to_string(a.measure()) + " vs " +
                          to_string(b.measure()));
  const auto& src = a.intervals();
  const auto& dst = b.intervals();
  std::vector<Piece> out;
  std::size_t i = 0, j = 0;
  Rat x = src.empty() ? Rat(0) : src[0].lo;
  Rat y = dst.empty() ? Rat(0) : dst[0].lo;
  while (i < src.size() && j < dst.size()) {
    Rat len = std::min(src[i].hi - x, dst[j].hi - y);
    out.push_back({x, x + len, y - x});
    x += len;
    y += len;
    if (x == src[i].hi && ++i < src.size())
      x = src[i].lo;
    if (y == dst[j].hi && ++j < dst.size())
      y = dst[j].lo;
  }
  return PiecewiseTranslation::from_pieces(std::move(out));
}

Transform complete_by_identity(const PiecewiseTranslation& phi) {
  if (phi.domain() != phi.range())
    throw std::invalid_argument("complete_by_identity: domain and range differ");
  return disjoint_union(phi, PiecewiseTranslation::identity(phi.domain().complement()));
}

Rat cost(const Graphing& g) {
  Rat total = 0;
  for (const auto& phi : g)
    total += phi.domain().measure();
  return total;
}

Rat measure(const IntervalSet& a) { return a.measure(); }

nlohmann::ordered_json to_json(const PiecewiseTranslation& phi) {
  nlohmann::ordered_json pieces = nlohmann::ordered_json::array();
  for (const auto& p : phi.pieces()) {
    nlohmann::ordered_json item;
    item["src_start"] = to_string(p.lo);
    item["len"] = to_string(p.hi - p.lo);
    item["dst_start"] = to_string(p.image_lo());
    pieces.push_back(std::move(item));
  }
  nlohmann::ordered_json j;
  j["pieces"] = std::move(pieces);
  return j;
}

namespace {

Rat rat_field(const nlohmann::json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_string())
    throw ParseError(std::string("piece is missing string field '") + key + "'");
  return parse_rat(obj.at(key).get<std::string>());
}

}  // namespace

PiecewiseTranslation piecewise_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("pieces") || !j.at("pieces").is_array())
    throw ParseError("expected an object with a 'pieces' array");
  std::vector<Piece> raw;
  for (const auto& item : j.at("pieces")) {
    if (!item.is_object())
      throw ParseError("piece entries must be objects");
    Rat start = rat_field(item, "src_start");
    Rat len = rat_field(item, "len");
    Rat dst = rat_field(item, "dst_start");
    if (len <= 0)
      throw ParseError("piece at " + to_string(start) + " has non-positive length");
    raw.push_back({start, start + len, dst - start});
  }
  PiecewiseTranslation phi;
  try {
    phi = PiecewiseTranslation::from_pieces(raw);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid map: ") + e.what());
  }
  if (phi.pieces() != raw)
    throw ParseError("map is not in canonical form (pieces must be sorted and maximally merged)");
  return phi;
}

nlohmann::ordered_json to_json(const IntervalSet& s) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& iv : s.intervals())
    arr.push_back({to_string(iv.lo), to_string(iv.hi)});
  return arr;
}

IntervalSet interval_set_from_json(const nlohmann::json& j) {
  if (!j.is_array())
    throw ParseError("interval set must be an array of [lo, hi] pairs");
  std::vector<Interval> parts;
  for (const auto& item : j) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_string() || !item[1].is_string())
      throw ParseError("interval must be a pair of rational strings");
    parts.push_back({parse_rat(item[0].get<std::string>()), parse_rat(item[1].get<std::string>())});
  }
  IntervalSet s(parts);
  if (s.intervals() != parts)
    throw ParseError("interval set is not in canonical form");
  return s;
}

}  // namespace toti
