#include "okamoto/dimension.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

namespace okamoto {

namespace {

Json field_interval_json(const FieldInterval& iv) {
  Json lo = enclosure_json(iv.lo), hi = enclosure_json(iv.hi);
  return Json::array({lo[0], hi[1]});
}

bool inside_domain(const AffineMap& m, const FieldInterval& iv) {
  bool lo_ok = m.lo.closed ? m.lo.value <= iv.lo : m.lo.value < iv.lo;
  bool hi_ok = m.hi.closed ? iv.hi <= m.hi.value : iv.hi < m.hi.value;
  return lo_ok && hi_ok;
}

FieldInterval image(const AffineMap& m, const FieldInterval& iv) {
  FieldElement a = m.apply(iv.lo), b = m.apply(iv.hi);
  if (b < a) std::swap(a, b);
  return {a, b};
}

bool in_interior_J(const QContext& ctx, const FieldInterval& iv) {
  return ctx.inv_q < iv.lo && iv.hi < ctx.inv_q_qm1;
}

bool comparable(const Word& a, const Word& b) { return a.starts_with(b) || b.starts_with(a); }

struct Landing {
  Word w;
  FieldInterval y;
};

// Words of length <= max_len landing in interior(J_q), in shortlex order, reported level by level.
class LandingSearch {
 public:
  LandingSearch(const QContext& ctx, const FieldInterval& x) : sys_(SystemKind::Eq, ctx), ctx_(ctx) {
    frontier_.push_back({Word(Alphabet::Ternary), x});
  }

  // Extends by one level; returns the landings of the new level.
  std::vector<Landing> next_level() {
    std::vector<Landing> next, landed;
    for (const Landing& n : frontier_) {
      for (const AffineMap& m : sys_.maps()) {
        if (!inside_domain(m, n.y)) continue;
        Word w = n.w;
        w.push_back(m.index);
        FieldInterval y = image(m, n.y);
        if (in_interior_J(ctx_, y)) landed.push_back({w, y});
        next.push_back({std::move(w), std::move(y)});
      }
    }
    frontier_ = std::move(next);
    return landed;
  }

  bool exhausted() const { return frontier_.empty(); }

 private:
  DynSystem sys_;
  const QContext& ctx_;
  std::vector<Landing> frontier_;
};

std::optional<BranchingPair> search(const QContext& ctx, const FieldInterval& x, int max_len,
                                    int proxy_levels) {
  LandingSearch bfs(ctx, x);
  std::vector<Landing> found;
  for (int len = 1; len <= max_len && !bfs.exhausted(); ++len) {
    std::vector<Landing> level = bfs.next_level();
    std::sort(level.begin(), level.end(),
              [](const Landing& a, const Landing& b) { return a.w < b.w; });
    std::size_t first_new = found.size();
    for (auto& l : level) found.push_back(std::move(l));
    for (std::size_t j = first_new; j < found.size(); ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        if (comparable(found[i].w, found[j].w)) continue;
        BranchingPair p{x, found[i].w, found[j].w, found[i].y, found[j].y, {}, proxy_levels};
        if (proxy_levels > 0) {
          auto a = search(ctx, p.y0, max_len, proxy_levels - 1);
          if (!a) continue;
          auto b = search(ctx, p.y1, max_len, proxy_levels - 1);
          if (!b) continue;
          p.further = {std::move(*a), std::move(*b)};
        }
        return p;
      }
    }
  }
  return std::nullopt;
}

AlgebraicReal fresh_copy(const AlgebraicReal& q) {
  if (q.is_rational()) return AlgebraicReal::rational(q.rational_value());
  std::vector<Integer> coeffs;
  Integer den = 1;
  for (const Rational& c : q.poly().coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  for (const Rational& c : q.poly().coeffs()) {
    Rational s = c * Rational(den);
    coeffs.push_back(s.get_num());
  }
  RationalInterval iv = q.interval();
  return AlgebraicReal::from_poly(coeffs, iv.lo, iv.hi);
}

FieldElement move_to(const AlgebraicReal& base, const FieldElement& x) {
  return FieldElement::from_poly(base, x.as_poly());
}

FieldInterval move_to(const AlgebraicReal& base, const FieldInterval& x) {
  return {move_to(base, x.lo), move_to(base, x.hi)};
}

BranchingPair move_to(const AlgebraicReal& base, const BranchingPair& p) {
  BranchingPair r{move_to(base, p.x), p.b0, p.b1, move_to(base, p.y0), move_to(base, p.y1), {},
                  p.proxy_levels};
  for (const auto& f : p.further) r.further.push_back(move_to(base, f));
  return r;
}

int default_workers() {
  if (const char* env = std::getenv("OKAMOTO_WORKERS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

struct CellOutcome {
  std::vector<std::pair<FieldInterval, BranchingPair>> cover;
  std::optional<FieldInterval> failed;
};

void cover_cell(const QContext& ctx, const FieldInterval& cell, int max_len, int splits,
                CellOutcome& out) {
  if (auto p = search(ctx, cell, max_len, 0)) {
    out.cover.emplace_back(cell, std::move(*p));
    return;
  }
  if (splits == 0) {
    out.failed = cell;
    return;
  }
  FieldElement mid = (cell.lo + cell.hi) * Rational(1, 2);
  cover_cell(ctx, {cell.lo, mid}, max_len, splits - 1, out);
  if (out.failed) return;
  cover_cell(ctx, {mid, cell.hi}, max_len, splits - 1, out);
}

}  // namespace

Json BranchingPair::to_json() const {
  Json j;
  j["x"] = field_interval_json(x);
  j["b0"] = b0.digits();
  j["b1"] = b1.digits();
  j["y0"] = field_interval_json(y0);
  j["y1"] = field_interval_json(y1);
  j["proxy_levels"] = proxy_levels;
  if (proxy_levels > 0) j["certification"] = "depth-bounded";
  if (!further.empty()) {
    Json f = Json::array();
    for (const auto& p : further) f.push_back(p.to_json());
    j["further"] = f;
  }
  return j;
}

BranchingPair branching_pair_search(const QContext& ctx, const FieldElement& x, int max_len,
                                    int proxy_levels) {
  if (!ctx.in_J(x)) throw Error("InputError", "x must lie in J_q");
  return branching_pair_search(ctx, FieldInterval{x, x}, max_len, proxy_levels);
}

BranchingPair branching_pair_search(const QContext& ctx, const FieldInterval& x, int max_len,
                                    int proxy_levels) {
  if (max_len < 1) throw Error("InputError", "max_len must be >= 1");
  if (proxy_levels < 0) throw Error("InputError", "proxy_levels must be >= 0");
  if (x.hi < x.lo || !ctx.in_J(x.lo) || !ctx.in_J(x.hi))
    throw Error("InputError", "x must lie in J_q");
  auto p = search(ctx, x, max_len, proxy_levels);
  if (!p) throw Error("NotFound", "no branching pair with words of length <= " + std::to_string(max_len));
  return std::move(*p);
}

Json MEstimate::to_json() const {
  Json j;
  if (M) j["M"] = *M;
  else j["M"] = "Unknown";
  j["grid"] = grid;
  j["cells"] = cells;
  j["max_len"] = max_len;
  if (failed_cell) j["failed_cell"] = field_interval_json(*failed_cell);
  return j;
}

MEstimate estimate_M(const QContext& ctx, int grid, int max_len, int max_splits, int workers) {
  if (grid < 1) throw Error("InputError", "grid must be >= 1");
  if (max_len < 1) throw Error("InputError", "max_len must be >= 1");
  if (workers <= 0) workers = default_workers();
  workers = std::max(1, std::min(workers, grid));

  FieldElement width = ctx.inv_q_qm1 - ctx.inv_q;
  std::vector<FieldInterval> cells;
  for (int i = 0; i < grid; ++i)
    cells.push_back({ctx.inv_q + width * Rational(i, grid), ctx.inv_q + width * Rational(i + 1, grid)});

  // Each worker owns a private copy of the field: refinement caches are not shared across threads.
  std::vector<AlgebraicReal> bases;
  for (int w = 0; w < workers; ++w) bases.push_back(fresh_copy(ctx.base));
  std::vector<CellOutcome> outcomes(cells.size());
  std::vector<std::vector<FieldInterval>> local_cells(workers);
  for (int w = 0; w < workers; ++w)
    for (const auto& c : cells) local_cells[w].push_back(move_to(bases[w], c));

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto run = [&](int w) {
    QContext local(bases[w]);
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      if (failed) return;
      cover_cell(local, local_cells[w][i], max_len, max_splits, outcomes[i]);
      if (outcomes[i].failed) failed = true;
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& t : pool) t.join();

  MEstimate r;
  r.grid = grid;
  r.max_len = max_len;
  int M = 0;
  for (const auto& o : outcomes) {
    if (o.failed) {
      r.failed_cell = move_to(ctx.base, *o.failed);
      break;
    }
    for (const auto& [cell, pair] : o.cover) {
      r.cover.emplace_back(move_to(ctx.base, cell), move_to(ctx.base, pair));
      M = std::max(M, pair.max_length());
    }
  }
  r.cells = r.cover.size();
  if (!r.failed_cell) {
    if (r.cells == 0) throw Error("InternalError", "empty cover");
    r.M = M;
  }
  return r;
}

double dimension_lower_bound(int M) {
  if (M < 1) throw Error("InputError", "M must be >= 1");
  return std::log(2.0) / (M * std::log(3.0));
}

double affinity_dimension(const AlgebraicReal& q) {
  require_base(q);
  return 1.0 + std::log(4.0 / q.to_double() - 1.0) / std::log(3.0);
}

std::size_t RTree::index(const Word& eps) {
  std::size_t i = 1;
  for (int s : eps.symbols()) i = 2 * i + static_cast<std::size_t>(s);
  return i;
}

std::vector<Word> RTree::level_words(int k) const {
  std::vector<Word> out;
  for (std::size_t i = std::size_t(1) << k; i < (std::size_t(2) << k); ++i) out.push_back(b[i]);
  return out;
}

Rational RTree::mass(int k) const {
  Rational weight(1, 1);
  weight /= Rational(Integer(1) << k);
  Rational total(0);
  for (std::size_t i = std::size_t(1) << k; i < (std::size_t(2) << k); ++i) total += weight;
  return total;
}

std::vector<std::pair<Rational, Rational>> RTree::cylinders(int k) const {
  std::vector<std::pair<Rational, Rational>> ivs;
  for (const Word& w : level_words(k)) {
    Integer scale;
    Integer three = 3;
    mpz_pow_ui(scale.get_mpz_t(), three.get_mpz_t(), w.size());
    Rational a = project_ternary(w);
    ivs.emplace_back(a, a + Rational(1) / Rational(scale));
  }
  std::sort(ivs.begin(), ivs.end());
  return ivs;
}

Rational RTree::mass_upper(const Rational& lo, const Rational& hi) const {
  if (deepest_.empty()) deepest_ = cylinders(levels);
  // interiors are disjoint, so right ends are sorted too
  auto first = std::lower_bound(deepest_.begin(), deepest_.end(), lo,
                                [](const auto& iv, const Rational& v) { return iv.second < v; });
  auto last = std::upper_bound(deepest_.begin(), deepest_.end(), hi,
                               [](const Rational& v, const auto& iv) { return v < iv.first; });
  Rational n(last > first ? last - first : 0);
  return n / Rational(Integer(1) << levels);
}

Json RTree::to_json() const {
  Json j;
  j["q"] = q.literal();
  j["x"] = enclosure_json(x);
  j["levels"] = levels;
  Json lv = Json::array();
  for (int k = 0; k <= levels; ++k) {
    Json words = Json::array();
    for (const Word& w : level_words(k)) words.push_back(w.digits());
    lv.push_back({{"level", k}, {"mu", rational_str(Rational(1) / Rational(Integer(1) << k))},
                  {"words", words}});
  }
  j["R"] = lv;
  return j;
}

RTree build_r_tree(const QContext& ctx, const FieldElement& x, int levels, int max_len) {
  if (levels < 0 || levels > 20) throw Error("InputError", "levels must be in [0, 20]");
  if (!ctx.in_J(x)) throw Error("InputError", "x must lie in J_q");
  RTree t;
  t.q = ctx.base;
  t.x = x;
  t.levels = levels;
  std::size_t n = std::size_t(2) << levels;
  t.b.assign(n, Word(Alphabet::Ternary));
  t.at.assign(n, x);
  for (int k = 0; k < levels; ++k) {
    for (std::size_t i = std::size_t(1) << k; i < (std::size_t(2) << k); ++i) {
      auto p = search(ctx, FieldInterval{t.at[i], t.at[i]}, max_len, 0);
      if (!p) throw Error("ConstructionStalled", "no branching pair at level " + std::to_string(k));
      t.b[2 * i] = t.b[i] + p->b0;
      t.b[2 * i + 1] = t.b[i] + p->b1;
      t.at[2 * i] = p->y0.lo;
      t.at[2 * i + 1] = p->y1.lo;
    }
  }
  return t;
}

Json RTreeReport::to_json() const {
  return Json{{"alive", alive},   {"prefix_iff", prefix_iff}, {"disjoint", disjoint},
              {"length_bound", length_bound}, {"nested", nested}, {"mass", mass}, {"ok", ok()}};
}

RTreeReport check_r_tree(const QContext& ctx, const RTree& t, int M) {
  RTreeReport r;
  DynSystem sys(SystemKind::Eq, ctx);
  std::size_t n = std::size_t(2) << t.levels;
  auto level_of = [](std::size_t i) {
    int k = 0;
    while (i > 1) i >>= 1, ++k;
    return k;
  };
  // eps prefix of eps' iff the heap index of eps is an ancestor of the index of eps'.
  auto ancestor = [](std::size_t a, std::size_t d) {
    while (d > a) d >>= 1;
    return d == a;
  };

  r.alive = true;
  for (std::size_t i = 1; i < n && r.alive; ++i) {
    auto y = follow(sys, t.x, t.b[i]);
    r.alive = y && *y == t.at[i];
  }

  r.prefix_iff = true;
  for (std::size_t i = 1; i < n && r.prefix_iff; ++i)
    for (std::size_t j = 1; j < n; ++j)
      if (t.b[j].starts_with(t.b[i]) != ancestor(i, j)) {
        r.prefix_iff = false;
        break;
      }

  r.nested = true;
  for (std::size_t i = 2; i < n; ++i)
    if (!t.b[i].starts_with(t.b[i / 2]) || t.b[i].size() <= t.b[i / 2].size()) r.nested = false;

  r.length_bound = true;
  for (std::size_t i = 1; i < n; ++i)
    if (static_cast<long>(t.b[i].size()) > static_cast<long>(level_of(i)) * M) r.length_bound = false;

  r.disjoint = true;
  for (int k = 1; k <= t.levels && r.disjoint; ++k) {
    auto ivs = t.cylinders(k);
    Rational reach = ivs.front().second;
    for (std::size_t i = 1; i < ivs.size(); ++i) {
      if (ivs[i].first < reach) r.disjoint = false;
      reach = std::max(reach, ivs[i].second);
    }
  }

  r.mass = true;
  for (int k = 0; k <= t.levels; ++k)
    if (t.mass(k) != 1) r.mass = false;
  return r;
}

Json BoxEstimate::to_json() const {
  Json c = Json::array();
  for (const auto& [d, n] : counts) c.push_back({{"depth", d}, {"count", n}});
  return Json{{"slope", real_json(slope)}, {"residual", real_json(residual)}, {"counts", c}};
}

BoxEstimate box_dimension_estimate(const std::vector<std::pair<int, std::size_t>>& counts) {
  std::vector<std::pair<int, std::size_t>> pts = counts;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const auto& a, const auto& b) { return a.first == b.first; }),
            pts.end());
  if (pts.size() < 3) throw Error("TooFewDepths", "need cylinder sets at >= 3 depths");
  for (const auto& [d, n] : pts)
    if (n == 0) throw Error("InputError", "empty cylinder set at depth " + std::to_string(d));

  double sx = 0, sy = 0;
  std::vector<double> xs, ys;
  for (const auto& [d, n] : pts) {
    xs.push_back(d * std::log(3.0));
    ys.push_back(std::log(static_cast<double>(n)));
    sx += xs.back();
    sy += ys.back();
  }
  double m = static_cast<double>(xs.size());
  double mx = sx / m, my = sy / m, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  BoxEstimate r;
  r.counts = pts;
  r.slope = sxy / sxx;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double e = ys[i] - (my + r.slope * (xs[i] - mx));
    ss += e * e;
  }
  r.residual = std::sqrt(ss / m);
  return r;
}

BoxEstimate box_dimension_estimate(const std::vector<std::vector<Word>>& cylinders) {
  std::vector<std::pair<int, std::size_t>> counts;
  for (const auto& set : cylinders) {
    if (set.empty()) throw Error("InputError", "empty cylinder set");
    std::size_t d = set.front().size();
    for (const Word& w : set)
      if (w.size() != d) throw Error("InputError", "cylinders of one set must share a depth");
    std::vector<Word> u = set;
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    counts.emplace_back(static_cast<int>(d), u.size());
  }
  return box_dimension_estimate(counts);
}

std::vector<std::pair<int, std::size_t>> slice_box_counts(const QContext& ctx, const FieldElement& y,
                                                          const std::vector<int>& depths,
                                                          std::size_t max_nodes) {
  std::vector<std::pair<int, std::size_t>> out;
  SliceOptions opts;
  opts.max_nodes = max_nodes;
  opts.continuation = 0;
  for (int d : depths) out.emplace_back(d, compute_slice(ctx, y, d, opts).cylinders.size());
  return out;
}

Json real_json(double v, int digits) {
  if (!std::isfinite(v)) throw Error("InputError", "non-finite value");
  double pad = std::abs(v) * 8 * std::numeric_limits<double>::epsilon() +
               std::numeric_limits<double>::denorm_min();
  return Json::array({decimal_floor(Rational(v - pad), digits), decimal_ceil(Rational(v + pad), digits)});
}

}  // namespace okamoto
