#include "okamoto/dynamics.hpp"

#include <functional>
#include <unordered_map>

namespace okamoto {

QContext::QContext(const AlgebraicReal& q_in)
    : base(q_in),
      q(FieldElement::generator(q_in)),
      one(FieldElement::from_int(q_in, 1)),
      zero(FieldElement::from_int(q_in, 0)) {
  require_base(q_in);
  inv_q = one / q;
  inv_qm1 = one / (q - one);
  inv_q_qm1 = inv_q * inv_qm1;
  inv_2mq = one / (one + one - q);
}

void require_base(const AlgebraicReal& q) {
  if (q.compare(AlgebraicReal::rational(1)) != Ordering::Greater ||
      q.compare(AlgebraicReal::rational(2)) != Ordering::Less)
    throw Error("InputError", "q must lie in (1,2), got " + q.literal());
}

// ---------------------------------------------------------------- systems

bool AffineMap::in_domain(const FieldElement& x) const {
  Ordering l = compare(x, lo.value);
  if (l == Ordering::Less || (l == Ordering::Equal && !lo.closed)) return false;
  Ordering h = compare(x, hi.value);
  if (h == Ordering::Greater || (h == Ordering::Equal && !hi.closed)) return false;
  return true;
}

DynSystem::DynSystem(SystemKind kind, const QContext& ctx) : kind_(kind), ctx_(ctx) {
  const auto& c = ctx_;
  auto m = [](int i, FieldElement a, FieldElement b, Bound lo, Bound hi) {
    return AffineMap{i, std::move(a), std::move(b), std::move(lo), std::move(hi)};
  };
  FieldElement two_minus_q = c.one + c.one - c.q;
  switch (kind) {
    case SystemKind::Eq:
      maps_.push_back(m(0, c.q, c.zero, {c.zero, true}, {c.inv_q_qm1, false}));
      maps_.push_back(m(1, -(c.q * c.inv_2mq), c.inv_qm1 + c.inv_2mq, {c.inv_q, false},
                        {c.inv_q_qm1, true}));
      maps_.push_back(m(2, c.q, -c.one, {c.inv_q, true}, {c.inv_qm1, true}));
      lo_ = {c.zero, true};
      hi_ = {c.inv_qm1, true};
      break;
    case SystemKind::EqHat:
      maps_.push_back(m(0, c.q, c.zero, {c.zero, true}, {c.inv_q_qm1, true}));
      maps_.push_back(m(1, c.q, -c.one, {c.inv_q, true}, {c.inv_qm1, true}));
      lo_ = {c.zero, true};
      hi_ = {c.inv_qm1, true};
      break;
    case SystemKind::EqStar:
      maps_.push_back(m(-1, c.q, c.one, {-c.inv_qm1, true}, {two_minus_q * c.inv_q_qm1, true}));
      maps_.push_back(m(0, c.q, c.zero, {-c.inv_q_qm1, true}, {c.inv_q_qm1, true}));
      maps_.push_back(m(1, c.q, -c.one, {-(two_minus_q * c.inv_q_qm1), true}, {c.inv_qm1, true}));
      lo_ = {-c.inv_qm1, true};
      hi_ = {c.inv_qm1, true};
      break;
  }
}

const AffineMap& DynSystem::map(int index) const {
  for (const auto& f : maps_)
    if (f.index == index) return f;
  throw Error("InputError", "no map with index " + std::to_string(index));
}

Alphabet DynSystem::alphabet() const {
  switch (kind_) {
    case SystemKind::Eq: return Alphabet::Ternary;
    case SystemKind::EqHat: return Alphabet::Binary;
    case SystemKind::EqStar: return Alphabet::Signed;
  }
  return Alphabet::Ternary;
}

std::variant<FieldElement, OutOfDomain> apply_map(const DynSystem& sys, int index,
                                                  const FieldElement& x) {
  const AffineMap& f = sys.map(index);
  if (f.in_domain(x)) return f.apply(x);
  OutOfDomain o;
  o.map = index;
  Ordering l = compare(x, f.lo.value);
  if (l != Ordering::Greater) {
    o.right = false;
    o.boundary = l == Ordering::Equal;
  } else {
    o.right = true;
    o.boundary = compare(x, f.hi.value) == Ordering::Equal;
  }
  return o;
}

std::optional<FieldElement> follow(const DynSystem& sys, const FieldElement& x, const Word& w) {
  FieldElement p = x;
  for (int i : w.symbols()) {
    const AffineMap& f = sys.map(i);
    if (!f.in_domain(p)) return std::nullopt;
    p = f.apply(p);
  }
  return p;
}

// ---------------------------------------------------------------- projections

Rational project_ternary(const Word& w) {
  Rational r(0);
  for (auto it = w.symbols().rbegin(); it != w.symbols().rend(); ++it) r = (r + *it) / 3;
  return r;
}

Rational project_ternary(const Tail& t) {
  Rational pre = project_ternary(t.preperiod());
  Rational per = project_ternary(t.period());
  Integer scale_pre, scale_per;
  Integer three = 3;
  mpz_pow_ui(scale_pre.get_mpz_t(), three.get_mpz_t(), t.preperiod().size());
  mpz_pow_ui(scale_per.get_mpz_t(), three.get_mpz_t(), t.period().size());
  Rational tail = per * Rational(scale_per) / Rational(scale_per - 1);
  Rational r = pre + tail / Rational(scale_pre);
  r.canonicalize();
  return r;
}

FieldElement project_q(const QContext& ctx, const Word& w) {
  FieldElement r = ctx.zero;
  for (auto it = w.symbols().rbegin(); it != w.symbols().rend(); ++it)
    r = (r + Rational(*it)) * ctx.inv_q;
  return r;
}

FieldElement project_q(const QContext& ctx, const Tail& t) {
  FieldElement pre = project_q(ctx, t.preperiod());
  FieldElement per = project_q(ctx, t.period());
  long p = static_cast<long>(t.period().size());
  long n = static_cast<long>(t.preperiod().size());
  FieldElement tail = per / (ctx.one - ctx.pow(-p));
  return pre + tail * ctx.pow(-n);
}

FieldInterval cylinder_interval(const QContext& ctx, const Word& w) {
  FieldElement lo = project_q(ctx, w);
  return {lo, lo + ctx.pow(-static_cast<long>(w.size())) * ctx.inv_qm1};
}

FieldInterval h_q_interval(const QContext& ctx) {
  FieldElement h = ctx.q / (ctx.q * ctx.q - ctx.one);
  return {-h, h};
}

// ---------------------------------------------------------------- orbit trees

std::vector<Word> OrbitTree::paths_at_depth() const {
  std::vector<Word> out;
  std::vector<std::pair<std::size_t, Word>> stack{{0, Word(alphabet)}};
  while (!stack.empty()) {
    auto [id, w] = std::move(stack.back());
    stack.pop_back();
    if (static_cast<int>(w.size()) == depth) {
      out.push_back(w);
      continue;
    }
    const auto& ch = nodes[id].children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) {
      Word next = w;
      next.push_back(nodes[*it].label);
      stack.emplace_back(*it, std::move(next));
    }
  }
  return out;
}

Json OrbitTree::to_json() const {
  std::function<Json(std::size_t)> rec = [&](std::size_t id) {
    const OrbitNode& n = nodes[id];
    Json j;
    j["label"] = id == 0 ? Json(nullptr) : Json(n.label);
    j["point_interval"] = enclosure_json(n.point);
    j["alive"] = n.alive;
    Json ch = Json::array();
    for (std::size_t c : n.children) ch.push_back(rec(c));
    j["children"] = ch;
    return j;
  };
  return rec(0);
}

OrbitTree enumerate_orbits(const DynSystem& sys, const FieldElement& x, int depth,
                           std::size_t max_nodes) {
  if (depth < 0) throw Error("InputError", "depth must be >= 0");
  OrbitTree tree;
  tree.root = x;
  tree.depth = depth;
  tree.alphabet = sys.alphabet();
  tree.nodes.push_back(OrbitNode{-1, x, true, {}});
  std::vector<std::pair<std::size_t, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [id, level] = stack.back();
    stack.pop_back();
    if (level == depth) continue;
    FieldElement p = tree.nodes[id].point;
    std::vector<std::size_t> kids;
    for (const auto& f : sys.maps()) {
      if (!f.in_domain(p)) continue;
      if (tree.nodes.size() >= max_nodes)
        throw Error("BudgetExceeded", "orbit tree exceeds " + std::to_string(max_nodes) + " nodes");
      tree.nodes.push_back(OrbitNode{f.index, f.apply(p), true, {}});
      kids.push_back(tree.nodes.size() - 1);
    }
    tree.nodes[id].children = kids;
    if (kids.empty()) tree.nodes[id].alive = false;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.emplace_back(*it, level + 1);
  }
  return tree;
}

// ---------------------------------------------------------------- uniqueness

const char* to_string(UniqueStatus s) {
  switch (s) {
    case UniqueStatus::UniqueCertified: return "UniqueCertified";
    case UniqueStatus::BranchFoundAt: return "BranchFoundAt";
    case UniqueStatus::UnknownAtDepth: return "UnknownAtDepth";
  }
  return "?";
}

std::optional<int> symbolic_unique_level(const AlgebraicReal& q, const Tail& t) {
  if (t.alphabet() != Alphabet::Binary) return std::nullopt;
  int k = 1;
  bool equal = false;
  for (int j = 2; j <= 64; ++j) {
    Ordering o = q.compare(bonacci_number(j));
    if (o == Ordering::Less) break;
    k = j;
    equal = o == Ordering::Equal;
    if (equal) break;
  }
  if (k < 2) return std::nullopt;
  if (equal) {
    if (member({SubshiftKind::SHat, k}, t)) return k;
    if (k > 2 && member({SubshiftKind::S, k - 1}, t)) return k - 1;
    return std::nullopt;
  }
  if (member({SubshiftKind::S, k}, t)) return k;
  return std::nullopt;
}

UniqueResult unique_orbit_check(const QContext& ctx, const FieldElement& x, int depth,
                                const std::optional<Tail>& known_expansion) {
  UniqueResult r;
  r.path = Word(Alphabet::Ternary);
  if (known_expansion && compare(project_q(ctx, *known_expansion), x) == Ordering::Equal &&
      symbolic_unique_level(ctx.base, *known_expansion)) {
    r.status = UniqueStatus::UniqueCertified;
    r.method = "symbolic";
    return r;
  }
  DynSystem sys(SystemKind::Eq, ctx);
  std::unordered_map<FieldElement, int, FieldElementHash, FieldElementReprEq> seen;
  FieldElement p = x;
  for (int step = 0; step <= depth; ++step) {
    auto [it, fresh] = seen.emplace(p, step);
    if (!fresh) {
      r.status = UniqueStatus::UniqueCertified;
      r.method = "periodic";
      r.step = step;
      r.cycle_start = it->second;
      return r;
    }
    if (ctx.in_J(p)) {
      r.status = UniqueStatus::BranchFoundAt;
      r.step = step;
      return r;
    }
    if (step == depth) break;
    int index = p < ctx.inv_q ? 0 : 2;
    r.path.push_back(index);
    p = sys.map(index).apply(p);
  }
  r.status = UniqueStatus::UnknownAtDepth;
  r.step = depth;
  return r;
}

std::optional<Tail> periodic_itinerary(const UniqueResult& r) {
  if (r.status != UniqueStatus::UniqueCertified || r.method != "periodic") return std::nullopt;
  std::size_t c = static_cast<std::size_t>(r.cycle_start);
  Word per = r.path.suffix_from(c).prefix(static_cast<std::size_t>(r.step) - c);
  return Tail(r.path.prefix(c), per);
}

Tail d_map(const Tail& t) {
  if (t.alphabet() != Alphabet::Binary) throw Error("AlphabetMismatch", "binary tail required");
  auto twice = [](const Word& w) {
    std::vector<int> s(w.symbols());
    for (int& v : s) v *= 2;
    return Word(Alphabet::Ternary, s);
  };
  const Word& pre = t.preperiod();
  if (t.period() == Word(Alphabet::Binary, {1}) && !pre.empty()) {
    // Canonical form puts a 0 right before the 1^inf tail.
    Word w = pre.prefix(pre.size() - 1);
    return Tail(twice(w) + Word(Alphabet::Ternary, {1}), Word(Alphabet::Ternary, {0}));
  }
  return Tail(twice(pre), twice(t.period()));
}

// ---------------------------------------------------------------- json helpers

Json interval_json(const RationalInterval& iv, int digits) {
  return Json::array({decimal_floor(iv.lo, digits), decimal_ceil(iv.hi, digits)});
}

Json enclosure_json(const FieldElement& x, int digits) {
  Integer scale;
  Integer ten = 10;
  mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(digits + 2));
  return interval_json(x.enclosure(Rational(1) / Rational(scale)), digits);
}

}  // namespace okamoto
