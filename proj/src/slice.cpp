#include "okamoto/slice.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

namespace okamoto {

const char* to_string(ClaimType t) {
  switch (t) {
    case ClaimType::ExactlyN: return "ExactlyN";
    case ClaimType::AtLeastN: return "AtLeastN";
    case ClaimType::UncountablePattern: return "UncountablePattern";
    case ClaimType::Unknown: return "Unknown";
  }
  return "?";
}

namespace {

const char* to_string(LeafStatus s) {
  switch (s) {
    case LeafStatus::Unique: return "unique";
    case LeafStatus::BranchesBeyond: return "branches";
    case LeafStatus::Unknown: return "unknown";
  }
  return "?";
}

void require_height(const FieldElement& y, int depth) {
  if (depth < 1) throw Error("InputError", "depth must be >= 1");
  if (y.sign() < 0 || compare(y, FieldElement::from_int(y.base(), 1)) == Ordering::Greater)
    throw Error("InputError", "y must lie in [0,1]");
}

class SliceWalker {
 public:
  SliceWalker(const QContext& ctx, const SliceOptions& opts, SliceResult& out)
      : ctx_(ctx), sys_(SystemKind::Eq, ctx), opts_(opts), out_(out) {}

  // Returns true when the subtree below contains a node with two or more children.
  bool visit(const FieldElement& p, Word& path) {
    if (++out_.nodes > opts_.max_nodes) {
      out_.complete = false;
      return false;
    }
    int level = static_cast<int>(path.size());
    bool branch = ctx_.in_J(p);
    auto [it, fresh] = on_path_.emplace(p, level);
    if (!fresh && j_count_ - j_prefix_[it->second] > 0) out_.recurrent_branch = true;
    j_prefix_.push_back(j_count_);
    if (branch) ++j_count_;

    bool below = false;
    if (level == out_.depth) {
      leaf(p, path);
    } else {
      int kids = 0;
      for (const auto& f : sys_.maps()) {
        if (!out_.complete) break;
        if (!f.in_domain(p)) continue;
        path.push_back(f.index);
        if (visit(f.apply(p), path)) ++kids;
        path = path.prefix(path.size() - 1);
      }
      below = branch || kids > 0;
      if (branch && kids >= 2) pattern_ = true;
    }

    if (branch) --j_count_;
    j_prefix_.pop_back();
    if (fresh) on_path_.erase(p);
    return below;
  }

  bool pattern() const { return pattern_; }

 private:
  const QContext& ctx_;
  DynSystem sys_;
  const SliceOptions& opts_;
  SliceResult& out_;
  std::unordered_map<FieldElement, int, FieldElementHash, FieldElementReprEq> on_path_;
  std::vector<int> j_prefix_;
  int j_count_ = 0;
  bool pattern_ = false;

  void leaf(const FieldElement& p, const Word& path) {
    SurvivingCylinder c;
    c.word = path;
    UniqueResult r = unique_orbit_check(ctx_, p, opts_.continuation);
    if (r.status == UniqueStatus::UniqueCertified) {
      c.status = LeafStatus::Unique;
      if (auto t = periodic_itinerary(r)) {
        c.itinerary = t->prepend(path);
        c.x = project_ternary(*c.itinerary);
      }
    } else if (r.status == UniqueStatus::BranchFoundAt) {
      c.status = LeafStatus::BranchesBeyond;
    }
    out_.cylinders.push_back(std::move(c));
  }
};

void mark_disjoint(std::vector<SurvivingCylinder>& cs, int depth) {
  Rational width = 1;
  for (int i = 0; i < depth; ++i) width /= 3;
  std::vector<Rational> lo(cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) lo[i] = project_ternary(cs[i].word);
  // Words arrive in lexicographic order, so only neighbours can touch.
  for (std::size_t i = 0; i < cs.size(); ++i) {
    bool ok = true;
    for (std::size_t j : {i - 1, i + 1}) {
      if (j >= cs.size()) continue;
      bool touch = lo[j] <= lo[i] + width && lo[i] <= lo[j] + width;
      if (!touch) continue;
      if (cs[i].x && cs[j].x && *cs[i].x != *cs[j].x) continue;
      ok = false;
    }
    cs[i].disjoint = ok;
  }
}

}  // namespace

std::vector<Word> SliceResult::words() const {
  std::vector<Word> out;
  out.reserve(cylinders.size());
  for (const auto& c : cylinders) out.push_back(c.word);
  return out;
}

Json SliceResult::to_json() const {
  Json j;
  j["q"] = q.literal();
  j["y"] = y.is_rational() ? Json(rational_str(y.rational_value())) : enclosure_json(y);
  j["depth"] = depth;
  Json cs = Json::array();
  for (const auto& c : cylinders) cs.push_back(c.word.digits());
  j["cylinders"] = cs;
  Json cl;
  cl["type"] = to_string(claim.type);
  cl["n"] = claim.n;
  cl["certified"] = claim.certified;
  j["claim"] = cl;
  Json detail = Json::array();
  for (const auto& c : cylinders) {
    Json d;
    d["status"] = to_string(c.status);
    d["disjoint"] = c.disjoint;
    if (c.itinerary) d["itinerary"] = c.itinerary->str();
    if (c.x) d["x"] = rational_str(*c.x);
    detail.push_back(d);
  }
  j["cylinder_detail"] = detail;
  j["complete"] = complete;
  return j;
}

SliceResult compute_slice(const QContext& ctx, const FieldElement& y_in, int depth,
                          const SliceOptions& opts) {
  FieldElement y = y_in.is_rational() ? ctx.rational(y_in.rational_value()) : y_in;
  require_height(y, depth);
  SliceResult r;
  r.q = ctx.base;
  r.y = y;
  r.depth = depth;
  SliceWalker walker(ctx, opts, r);
  Word path(Alphabet::Ternary);
  walker.visit(y * ctx.inv_qm1, path);
  mark_disjoint(r.cylinders, depth);

  std::size_t n = r.cylinders.size();
  bool all_unique = n > 0, any_branch = false;
  for (const auto& c : r.cylinders) {
    all_unique = all_unique && c.status == LeafStatus::Unique && c.disjoint;
    any_branch = any_branch || c.status == LeafStatus::BranchesBeyond;
  }
  if (!r.complete) {
    if (walker.pattern())
      r.claim = {ClaimType::UncountablePattern, 0, false};
    else if (n > 0)
      r.claim = {ClaimType::AtLeastN, n, false};
    else
      r.claim = {ClaimType::Unknown, 0, false};
  } else if (all_unique && !r.recurrent_branch) {
    r.claim = {ClaimType::ExactlyN, n, true};
  } else if (walker.pattern()) {
    r.claim = {ClaimType::UncountablePattern, 0, false};
  } else if (any_branch || r.recurrent_branch) {
    r.claim = {ClaimType::AtLeastN, n, false};
  } else {
    r.claim = {ClaimType::ExactlyN, n, false};
  }
  return r;
}

CardinalityClaim classify_cardinality(const QContext& ctx, const FieldElement& y, int depth) {
  return compute_slice(ctx, y, depth).claim;
}

std::pair<FieldElement, FieldElement> u_map(const QContext& ctx, int i) {
  switch (i) {
    case 0: return {ctx.inv_q, ctx.zero};
    case 1: return {ctx.one - ctx.inv_q - ctx.inv_q, ctx.inv_q};
    case 2: return {ctx.inv_q, ctx.one - ctx.inv_q};
  }
  throw Error("InputError", "IFS index must be 0, 1 or 2");
}

std::vector<Word> geometric_slice_oracle(const QContext& ctx, const FieldElement& y_in, int depth) {
  if (depth < 1) throw Error("InputError", "depth must be >= 1");
  FieldElement y = y_in.is_rational() ? ctx.rational(y_in.rational_value()) : y_in;
  std::vector<Word> out;
  if (y.sign() < 0 || y > ctx.one) return out;
  std::array<std::pair<FieldElement, FieldElement>, 3> u{u_map(ctx, 0), u_map(ctx, 1),
                                                         u_map(ctx, 2)};
  struct Frame {
    Word w;
    FieldElement a, b;  // u_w(t) = a*t + b
  };
  std::vector<Frame> stack{{Word(Alphabet::Ternary), ctx.one, ctx.zero}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (static_cast<int>(f.w.size()) == depth) {
      out.push_back(std::move(f.w));
      continue;
    }
    for (int i = 2; i >= 0; --i) {
      FieldElement a = f.a * u[i].first;
      FieldElement b = f.a * u[i].second + f.b;
      FieldElement c = a + b;
      bool inside = a.sign() >= 0 ? (b <= y && y <= c) : (c <= y && y <= b);
      if (!inside) continue;
      Word w = f.w;
      w.push_back(i);
      stack.push_back({std::move(w), std::move(a), std::move(b)});
    }
  }
  return out;
}

std::vector<Word> rte_filter(const QContext& ctx, const FieldElement& y_in,
                             const std::vector<Word>& words) {
  FieldElement y = y_in.is_rational() ? ctx.rational(y_in.rational_value()) : y_in;
  std::array<std::pair<FieldElement, FieldElement>, 3> u{u_map(ctx, 0), u_map(ctx, 1),
                                                         u_map(ctx, 2)};
  std::vector<Word> out;
  for (const auto& w : words) {
    FieldElement a = ctx.one, b = ctx.zero;
    bool keep = true;
    for (int i : w.symbols()) {
      b = a * u[i].second + b;
      a = a * u[i].first;
      // Top edge of a 0- or 1-box belongs to the neighbouring box.
      if (i != 2 && (a + b) == y) {
        keep = false;
        break;
      }
    }
    if (keep) out.push_back(w);
  }
  return out;
}

FieldInterval eval_okamoto(const QContext& ctx, const Rational& x_in, int depth) {
  if (x_in < 0 || x_in > 1) throw Error("InputError", "x must lie in [0,1]");
  if (depth < 0) throw Error("InputError", "depth must be >= 0");
  FieldElement a = ctx.one, b = ctx.zero;
  Rational x = x_in;
  for (int k = 0; k < depth; ++k) {
    int d;
    if (x == 1) {
      d = 2;
    } else {
      Rational t = 3 * x;
      Integer fl;
      mpz_fdiv_q(fl.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
      d = static_cast<int>(fl.get_si());
      x = t - d;
    }
    auto [ua, ub] = u_map(ctx, d);
    b = a * ub + b;
    a = a * ua;
  }
  FieldElement c = a + b;
  if (a.sign() >= 0) return {b, c};
  return {c, b};
}

}  // namespace okamoto
