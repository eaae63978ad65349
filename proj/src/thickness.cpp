#include "okamoto/thickness.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_map>

namespace okamoto {

namespace {

FieldElement fmin(const FieldElement& a, const FieldElement& b) { return b < a ? b : a; }
FieldElement fmax(const FieldElement& a, const FieldElement& b) { return a < b ? b : a; }

FieldInterval exact(const FieldElement& v) { return {v, v}; }

Json field_interval_json(const FieldInterval& iv, int digits = 20) {
  Rational eps(1);
  for (int i = 0; i < digits + 2; ++i) eps /= 10;
  return Json::array({decimal_floor(iv.lo.enclosure(eps).lo, digits),
                      decimal_ceil(iv.hi.enclosure(eps).hi, digits)});
}

std::string decimal(const FieldElement& v, int digits = 12) {
  Rational eps(1);
  for (int i = 0; i < digits + 2; ++i) eps /= 10;
  return decimal_floor(v.enclosure(eps).lo, digits);
}

// pi_q of an eventually periodic bit sequence.
FieldElement value(const QContext& ctx, const Tail& t) { return project_q(ctx, t); }

FieldInterval ratio(const FieldInterval& num, const FieldInterval& den) {
  return {num.lo / den.hi, num.hi / den.lo};
}

}  // namespace

// ---------------------------------------------------------------- W2 cover

const std::vector<Word>& w2_words() {
  static const std::vector<Word> words = {
      Word(Alphabet::Signed, {-1, 0}), Word(Alphabet::Signed, {0, -1}),
      Word(Alphabet::Signed, {0, 0}),  Word(Alphabet::Signed, {0, 1}),
      Word(Alphabet::Signed, {1, 0})};
  return words;
}

bool W2Cover::ok() const {
  return left_preserved && right_preserved &&
         std::all_of(overlaps.begin(), overlaps.end(), [](bool b) { return b; });
}

namespace {

// S_w(h) = f*_{i1}^{-1}(f*_{i2}^{-1}(h)) with f*_i(x) = qx - i.
FieldElement s_map(const QContext& ctx, const Word& w, const FieldElement& h) {
  FieldElement v = h;
  for (std::size_t i = w.size(); i-- > 0;) v = (v + ctx.rational(w[i])) * ctx.inv_q;
  return v;
}

bool in_h(const QContext& ctx, const FieldInterval& h, const FieldElement& z) {
  (void)ctx;
  return h.lo <= z && z <= h.hi;
}

}  // namespace

W2Cover w2_cover_check(const QContext& ctx) {
  W2Cover c;
  c.h = h_q_interval(ctx);
  for (const auto& w : w2_words()) {
    FieldInterval img{s_map(ctx, w, c.h.lo), s_map(ctx, w, c.h.hi)};
    if (!(c.h.lo <= img.lo && img.hi <= c.h.hi))
      throw Error("CoverFailure", "image of H_q under S_" + w.str() + " leaves H_q");
    c.images.emplace_back(w, img);
  }
  for (std::size_t i = 0; i + 1 < c.images.size(); ++i)
    c.overlaps.push_back(c.images[i + 1].second.lo <= c.images[i].second.hi);
  c.left_preserved = c.images.front().second.lo == c.h.lo;
  c.right_preserved = c.images.back().second.hi == c.h.hi;
  if (!c.ok()) throw Error("CoverFailure", "W2 images do not cover H_q");
  return c;
}

// ---------------------------------------------------------------- fixed expansion of 1

int one_prefix_length(const AlgebraicReal& q) {
  require_base(q);
  if (q.compare(bonacci_number(2)) != Ordering::Greater) return 0;
  for (int k = 2; k < 400; ++k)
    if (q.compare(bonacci_number(k + 1)) != Ordering::Greater) return k;
  throw Error("InputError", "q too close to 2");
}

std::vector<Word> FixedExpansionOfOne::w2_tail() const {
  std::vector<Word> out;
  for (std::size_t i = static_cast<std::size_t>(M); i + 1 < digits.size(); i += 2)
    out.push_back(Word(Alphabet::Signed, {digits[i], digits[i + 1]}));
  return out;
}

FixedExpansionOfOne fixed_expansion_of_one(const QContext& ctx, int length) {
  FixedExpansionOfOne e;
  e.q = ctx.base;
  e.M = one_prefix_length(ctx.base);
  if (length < e.M) throw Error("InputError", "length must be at least M");
  FieldInterval h = h_q_interval(ctx);
  std::vector<int> d;
  FieldElement z = ctx.one;
  for (int i = 0; i < e.M; ++i) {
    d.push_back(1);
    z = ctx.q * z - ctx.one;
  }
  if (!in_h(ctx, h, z)) throw Error("CoverFailure", "(f*_1)^M(1) is outside H_q");
  while (static_cast<int>(d.size()) < length) {
    bool found = false;
    for (const auto& w : w2_words()) {
      FieldElement next = ctx.q * (ctx.q * z - ctx.rational(w[0])) - ctx.rational(w[1]);
      if (!in_h(ctx, h, next)) continue;
      d.push_back(w[0]);
      d.push_back(w[1]);
      z = next;
      found = true;
      break;
    }
    if (!found) throw Error("CoverFailure", "no W2 word keeps the orbit of 1 in H_q");
  }
  d.resize(static_cast<std::size_t>(length));
  e.digits = Word(Alphabet::Signed, std::move(d));
  return e;
}

// ---------------------------------------------------------------- A_q

const char* to_string(IndexClass c) {
  switch (c) {
    case IndexClass::FixedOne: return "fixed_one";
    case IndexClass::FixedZero: return "fixed_zero";
    case IndexClass::FixedByC: return "fixed_by_c";
    case IndexClass::Free: return "free";
  }
  return "?";
}

int AqFamily::forced_bit(std::size_t j) const {
  if (j < 1 || j > cls.size()) throw Error("InputError", "index outside the computed family");
  switch (cls[j - 1]) {
    case IndexClass::FixedOne: return 1;
    case IndexClass::FixedZero: return 0;
    case IndexClass::FixedByC: return c.digits[j - 1] == 1 ? 1 : 0;
    case IndexClass::Free: return -1;
  }
  return -1;
}

std::vector<std::size_t> AqFamily::indices(IndexClass k) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 1; j <= cls.size(); ++j)
    if (cls[j - 1] == k) out.push_back(j);
  return out;
}

std::vector<std::size_t> AqFamily::free_indices() const { return indices(IndexClass::Free); }

void require_aq_base(const AlgebraicReal& q) {
  require_base(q);
  if (q.compare(bonacci_number(9)) != Ordering::Greater)
    throw Error("BaseTooSmall", "the A_q construction needs q in (q_9, 2)");
}

AqFamily build_aq_family(const QContext& ctx, int length) {
  require_aq_base(ctx.base);
  AqFamily f;
  f.q = ctx.base;
  f.c = fixed_expansion_of_one(ctx, std::max(length, one_prefix_length(ctx.base)));
  int zeros = 0;
  for (std::size_t j = 0; j < f.c.digits.size(); ++j) {
    if (f.c.digits[j] != 0) {
      f.cls.push_back(IndexClass::FixedByC);
      continue;
    }
    int m = zeros++;
    if (m % 2 == 0)
      f.cls.push_back(IndexClass::Free);
    else
      f.cls.push_back(m % 4 == 1 ? IndexClass::FixedOne : IndexClass::FixedZero);
  }
  f.cls.resize(static_cast<std::size_t>(length));
  return f;
}

std::vector<Word> build_aq_prefixes(const QContext& ctx, int k, std::size_t max_words) {
  if (k < 1) throw Error("InputError", "k must be >= 1");
  AqFamily f = build_aq_family(ctx, k);
  std::size_t free = f.free_indices().size();
  if (free >= 63 || (std::size_t{1} << free) > max_words)
    throw Error("BudgetExceeded", "A_q^k has 2^" + std::to_string(free) + " words");
  std::vector<Word> out{Word(Alphabet::Binary)};
  for (std::size_t j = 1; j <= static_cast<std::size_t>(k); ++j) {
    int b = f.forced_bit(j);
    std::vector<Word> next;
    next.reserve(out.size() * (b < 0 ? 2 : 1));
    for (const auto& w : out)
      for (int bit : {0, 1}) {
        if (b >= 0 && bit != b) continue;
        Word x = w;
        x.push_back(bit);
        next.push_back(std::move(x));
      }
    out = std::move(next);
  }
  return out;
}

Word shifted_partner(const AqFamily& f, const Word& a) {
  if (a.alphabet() != Alphabet::Binary) throw Error("AlphabetMismatch", "binary word required");
  if (a.size() > f.length()) throw Error("InputError", "word longer than the computed family");
  std::vector<int> b(a.size());
  for (std::size_t j = 1; j <= a.size(); ++j) {
    int forced = f.forced_bit(j);
    if (forced >= 0 && forced != a[j - 1])
      throw Error("InputError", "word is not in A_q^k at index " + std::to_string(j));
    b[j - 1] = a[j - 1] - f.c.digits[j - 1];
  }
  return Word(Alphabet::Binary, std::move(b));
}

Word shifted_partner(const QContext& ctx, const Word& a) {
  return shifted_partner(build_aq_family(ctx, static_cast<int>(a.size())), a);
}

// ---------------------------------------------------------------- S^k automaton
//
// State 0 is the empty word, 1 and 2 are the leading runs of 0s and 1s (unbounded),
// and 3 + bit*(k-1) + (r-1) is a later run of r copies of bit, r <= k-1.

SkAutomaton::SkAutomaton(int k) : k_(k) {
  if (k < 1) throw Error("InputError", "k must be >= 1");
}

int SkAutomaton::next(int s, int bit) const {
  if (bit != 0 && bit != 1) throw Error("AlphabetMismatch", "binary symbol required");
  auto run = [&](int b, int r) { return r <= k_ - 1 ? 3 + b * (k_ - 1) + (r - 1) : -1; };
  if (s == 0) return 1 + bit;
  if (s == 1 || s == 2) return s - 1 == bit ? s : run(bit, 1);
  int b = (s - 3) / (k_ - 1);
  int r = (s - 3) % (k_ - 1) + 1;
  return b == bit ? run(bit, r + 1) : run(bit, 1);
}

namespace {

Tail greedy_tail(const SkAutomaton& a, int s, int prefer) {
  std::vector<int> bits;
  std::map<int, std::size_t> seen;
  while (!seen.count(s)) {
    seen[s] = bits.size();
    int b = a.next(s, prefer) >= 0 ? prefer : 1 - prefer;
    int t = a.next(s, b);
    if (t < 0) throw Error("InternalError", "dead state in S^k automaton");
    bits.push_back(b);
    s = t;
  }
  std::size_t c = seen[s];
  std::vector<int> pre(bits.begin(), bits.begin() + static_cast<long>(c));
  std::vector<int> per(bits.begin() + static_cast<long>(c), bits.end());
  return Tail(Word(Alphabet::Binary, pre), Word(Alphabet::Binary, per));
}

}  // namespace

Tail SkAutomaton::max_tail(int s) const { return greedy_tail(*this, s, 1); }
Tail SkAutomaton::min_tail(int s) const { return greedy_tail(*this, s, 0); }

// ---------------------------------------------------------------- gap structures

std::string GapFamilySpec::str() const {
  switch (kind) {
    case GapFamily::Aq: return "aq";
    case GapFamily::Sk: return "sk:" + std::to_string(k);
    case GapFamily::ScaledSk: return "scaled-sk:" + std::to_string(k);
  }
  return "?";
}

GapFamilySpec parse_family(const std::string& text) {
  if (text == "aq") return {GapFamily::Aq, 9};
  auto num = [&](std::size_t at) {
    std::string s = text.substr(at);
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 3)
      throw Error("InputError", "bad family '" + text + "'");
    return std::stoi(s);
  };
  if (text.rfind("sk:", 0) == 0) return {GapFamily::Sk, num(3)};
  if (text.rfind("scaled-sk:", 0) == 0) return {GapFamily::ScaledSk, num(10)};
  throw Error("InputError", "family must be aq, sk:<k> or scaled-sk:<k>");
}

std::uint64_t GapStructure::gap_count() const {
  if (classes.empty()) return gaps.size();
  std::uint64_t n = 0;
  for (const auto& c : classes) n += c.count;
  return n;
}

FieldInterval GapStructure::largest_gap() const {
  std::optional<FieldInterval> best;
  auto take = [&](const FieldInterval& len) {
    if (!best)
      best = len;
    else
      best = FieldInterval{fmax(best->lo, len.lo), fmax(best->hi, len.hi)};
  };
  if (!classes.empty())
    for (const auto& c : classes) take(c.length);
  else
    for (const auto& g : gaps) take(g.length);
  if (!best) throw Error("InputError", "gap structure is empty");
  return *best;
}

Json GapStructure::to_json() const {
  Json j;
  j["q"] = q.literal();
  j["family"] = family.str();
  j["level"] = level;
  j["hull"] = Json::array({field_interval_json(hull_lo)[0], field_interval_json(hull_hi)[1]});
  j["gap_count"] = gap_count();
  if (gap_count() > 0) {
    j["largest_gap"] = field_interval_json(largest_gap());
    j["thickness_lower_bound"] = decimal(thickness_lower_bound(*this));
  }
  Json levels = Json::array();
  for (const auto& c : classes) {
    Json l;
    l["level"] = c.level;
    l["count"] = c.count;
    l["length"] = field_interval_json(c.length);
    l["min_left_ratio"] = decimal(c.left_ratio.lo);
    l["min_right_ratio"] = decimal(c.right_ratio.lo);
    levels.push_back(l);
  }
  j["levels"] = levels;
  return j;
}

namespace {

struct RawGap {
  int level;
  Word prefix;
  FieldInterval lo, hi;
};

// Sorts the gaps and attaches bridges for the presentation ordered by level.
// A gap's bridge ends at the nearest gap of the same or a lower level, or at the hull.
void finish_positional(GapStructure& gs, std::vector<RawGap> raw) {
  std::sort(raw.begin(), raw.end(), [](const RawGap& a, const RawGap& b) { return a.lo.lo < b.lo.lo; });
  std::size_t n = raw.size();
  std::vector<long> left(n, -1), right(n, -1);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < n; ++i) {
    while (!stack.empty() && raw[stack.back()].level > raw[i].level) stack.pop_back();
    if (!stack.empty()) left[i] = static_cast<long>(stack.back());
    stack.push_back(i);
  }
  stack.clear();
  for (std::size_t i = n; i-- > 0;) {
    while (!stack.empty() && raw[stack.back()].level > raw[i].level) stack.pop_back();
    if (!stack.empty()) right[i] = static_cast<long>(stack.back());
    stack.push_back(i);
  }

  std::map<int, GapClass> by_level;
  gs.gaps.clear();
  gs.gaps.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Gap g;
    g.level = raw[i].level;
    g.prefix = raw[i].prefix;
    g.lo = raw[i].lo;
    g.hi = raw[i].hi;
    g.length = {g.hi.lo - g.lo.hi, g.hi.hi - g.lo.lo};
    if (g.length.lo.sign() <= 0) throw Error("InternalError", "gap enclosure too wide");
    FieldInterval lend = left[i] < 0 ? gs.hull_lo : raw[static_cast<std::size_t>(left[i])].hi;
    FieldInterval rend = right[i] < 0 ? gs.hull_hi : raw[static_cast<std::size_t>(right[i])].lo;
    g.left_bridge = {g.lo.lo - lend.hi, g.lo.hi - lend.lo};
    g.right_bridge = {rend.lo - g.hi.hi, rend.hi - g.hi.lo};
    FieldInterval lr = ratio(g.left_bridge, g.length), rr = ratio(g.right_bridge, g.length);
    auto it = by_level.find(g.level);
    if (it == by_level.end()) {
      by_level.emplace(g.level, GapClass{g.level, 1, g.length, lr, rr});
    } else {
      GapClass& c = it->second;
      ++c.count;
      c.length = {fmin(c.length.lo, g.length.lo), fmax(c.length.hi, g.length.hi)};
      c.left_ratio = {fmin(c.left_ratio.lo, lr.lo), fmin(c.left_ratio.hi, lr.hi)};
      c.right_ratio = {fmin(c.right_ratio.lo, rr.lo), fmin(c.right_ratio.hi, rr.hi)};
    }
    gs.gaps.push_back(std::move(g));
  }
  gs.classes.clear();
  for (auto& [lvl, c] : by_level) gs.classes.push_back(c);
}

void enumerate_aq(const QContext& ctx, GapStructure& gs, int level, const GapOptions& opts) {
  int depth = level + std::max(opts.pad, 2);
  AqFamily f = build_aq_family(ctx, depth);
  std::size_t D = static_cast<std::size_t>(depth);
  std::vector<FieldElement> qn(D + 2);
  qn[0] = ctx.one;
  for (std::size_t j = 1; j < qn.size(); ++j) qn[j] = qn[j - 1] * ctx.inv_q;
  std::vector<FieldElement> smax(D + 2, ctx.zero), smin(D + 2, ctx.zero);
  for (std::size_t j = D; j >= 1; --j) {
    int b = f.forced_bit(j);
    smax[j] = smax[j + 1] + (b != 0 ? qn[j] : ctx.zero);
    smin[j] = smin[j + 1] + (b == 1 ? qn[j] : ctx.zero);
  }
  FieldElement tail = qn[D] * ctx.inv_qm1;
  auto enc = [&](const FieldElement& v) { return FieldInterval{v, v + tail}; };
  gs.hull_lo = enc(smin[1]);
  gs.hull_hi = enc(smax[1]);

  std::vector<RawGap> raw;
  Word a(Alphabet::Binary);
  std::size_t budget = std::size_t{1} << 22;
  std::function<void(std::size_t, const FieldElement&)> rec = [&](std::size_t n,
                                                                    const FieldElement& p) {
    if (raw.size() > budget) throw Error("BudgetExceeded", "too many A_q gaps");
    if (f.forced_bit(n + 1) < 0 && static_cast<int>(n) + 2 <= level) {
      int ak = f.forced_bit(n + 2);
      if (ak < 0) throw Error("InternalError", "adjacent free zeros");
      FieldElement base = p + (ak ? qn[n + 2] : ctx.zero);
      raw.push_back({static_cast<int>(n) + 2, a, enc(base + smax[n + 3]),
                     enc(base + qn[n + 1] + smin[n + 3])});
    }
    if (static_cast<int>(n) + 1 > level - 2) return;
    int b = f.forced_bit(n + 1);
    for (int bit : {0, 1}) {
      if (b >= 0 && bit != b) continue;
      a.push_back(bit);
      rec(n + 1, bit ? p + qn[n + 1] : p);
      a = a.prefix(a.size() - 1);
    }
  };
  rec(0, ctx.zero);
  finish_positional(gs, std::move(raw));
}

struct Affine {
  FieldElement scale, shift;
  FieldElement operator()(const FieldElement& v) const { return scale * v + shift; }
};

void enumerate_sk_explicit(const QContext& ctx, GapStructure& gs, int level, const Affine& map) {
  SkAutomaton aut(gs.family.k);
  std::vector<FieldElement> vmax(static_cast<std::size_t>(aut.size())),
      vmin(static_cast<std::size_t>(aut.size()));
  for (int s = 0; s < aut.size(); ++s) {
    vmax[static_cast<std::size_t>(s)] = value(ctx, aut.max_tail(s));
    vmin[static_cast<std::size_t>(s)] = value(ctx, aut.min_tail(s));
  }
  std::vector<RawGap> raw;
  Word w(Alphabet::Binary);
  std::function<void(int, int, const FieldElement&, const FieldElement&)> rec =
      [&](int n, int s, const FieldElement& p, const FieldElement& scale) {
        int s0 = aut.next(s, 0), s1 = aut.next(s, 1);
        FieldElement step = scale * ctx.inv_q;
        if (s0 >= 0 && s1 >= 0) {
          FieldElement lo = p + step * vmax[static_cast<std::size_t>(s0)];
          FieldElement hi = p + step * (ctx.one + vmin[static_cast<std::size_t>(s1)]);
          raw.push_back({n + 1, w, exact(map(lo)), exact(map(hi))});
        }
        if (n + 1 >= level) return;
        for (int bit : {0, 1}) {
          int t = aut.next(s, bit);
          if (t < 0) continue;
          w.push_back(bit);
          rec(n + 1, t, bit ? p + step : p, step);
          w = w.prefix(w.size() - 1);
        }
      };
  rec(0, aut.start(), ctx.zero, ctx.one);
  std::vector<GapClass> keep = gs.classes;
  finish_positional(gs, std::move(raw));
  if (!keep.empty()) gs.classes = keep;
}

// Exact class recursion over S^k prefixes. A class is (state, E_L, E_R) where for a
// prefix w, L = q^-|w| (E_L + pi(0 M)) and R = q^-|w| (E_R - pi(1 m)).
void enumerate_sk_classes(const QContext& ctx, GapStructure& gs, int level, const FieldElement& scale) {
  SkAutomaton aut(gs.family.k);
  std::vector<FieldElement> vmax, vmin;
  for (int s = 0; s < aut.size(); ++s) {
    vmax.push_back(value(ctx, aut.max_tail(s)));
    vmin.push_back(value(ctx, aut.min_tail(s)));
  }
  struct Key {
    int s;
    FieldElement el, er;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return (k.el.repr_hash() * 1000003u) ^ k.er.repr_hash() ^ static_cast<std::size_t>(k.s);
    }
  };
  struct KeyEq {
    bool operator()(const Key& a, const Key& b) const {
      return a.s == b.s && a.el.same_repr(b.el) && a.er.same_repr(b.er);
    }
  };
  using Layer = std::unordered_map<Key, std::uint64_t, KeyHash, KeyEq>;
  auto add = [](std::uint64_t& c, std::uint64_t v) { c = c > UINT64_MAX - v ? UINT64_MAX : c + v; };

  Layer cur;
  cur[{aut.start(), -vmin[0], vmax[0]}] = 1;
  FieldElement qn = scale;  // scale * q^-n
  gs.classes.clear();
  for (int n = 0; n < level; ++n) {
    Layer nxt;
    std::optional<GapClass> cls;
    for (const auto& [key, count] : cur) {
      int s0 = aut.next(key.s, 0), s1 = aut.next(key.s, 1);
      bool branch = s0 >= 0 && s1 >= 0;
      if (branch) {
        const FieldElement& M0 = vmax[static_cast<std::size_t>(s0)];
        const FieldElement& m1 = vmin[static_cast<std::size_t>(s1)];
        FieldElement g = (ctx.one + m1 - M0) * ctx.inv_q;
        if (g.sign() <= 0)
          throw Error("OverlappingCylinders", "sibling cylinders of S^" + std::to_string(aut.k()) +
                                                  " overlap at level " + std::to_string(n + 1));
        FieldElement lr = (key.el + M0 * ctx.inv_q) / g;
        FieldElement rr = (key.er - (ctx.one + m1) * ctx.inv_q) / g;
        FieldElement len = qn * g;
        if (!cls) {
          cls = GapClass{n + 1, count, exact(len), exact(lr), exact(rr)};
        } else {
          add(cls->count, count);
          cls->length = {fmin(cls->length.lo, len), fmax(cls->length.hi, len)};
          cls->left_ratio = exact(fmin(cls->left_ratio.lo, lr));
          cls->right_ratio = exact(fmin(cls->right_ratio.lo, rr));
        }
      }
      for (int bit : {0, 1}) {
        int t = bit ? s1 : s0;
        if (t < 0) continue;
        FieldElement el = branch && bit == 1 ? -vmin[static_cast<std::size_t>(s1)]
                                             : ctx.q * key.el + ctx.rational(bit);
        FieldElement er = branch && bit == 0 ? vmax[static_cast<std::size_t>(s0)]
                                             : ctx.q * key.er - ctx.rational(bit);
        add(nxt[{t, el, er}], count);
      }
    }
    if (nxt.size() > 200000) throw Error("BudgetExceeded", "S^k class recursion did not close");
    if (cls) gs.classes.push_back(*cls);
    cur = std::move(nxt);
    qn = qn * ctx.inv_q;
  }
}

}  // namespace

GapStructure enumerate_gaps(const QContext& ctx, const GapFamilySpec& family, int level,
                            const GapOptions& opts) {
  if (level < 1) throw Error("InputError", "level must be >= 1");
  GapStructure gs;
  gs.q = ctx.base;
  gs.family = family;
  gs.level = level;
  if (family.kind == GapFamily::Aq) {
    enumerate_aq(ctx, gs, level, opts);
    return gs;
  }
  require_base(ctx.base);
  if (family.k < 2) throw Error("InputError", "S^k needs k >= 2");
  bool scaled = family.kind == GapFamily::ScaledSk;
  FieldElement two_minus_q = ctx.one + ctx.one - ctx.q;
  Affine map{scaled ? two_minus_q : ctx.one, scaled ? ctx.one : ctx.zero};
  SkAutomaton aut(family.k);
  gs.hull_lo = exact(map(value(ctx, aut.min_tail(aut.start()))));
  gs.hull_hi = exact(map(value(ctx, aut.max_tail(aut.start()))));
  enumerate_sk_classes(ctx, gs, level, map.scale);
  int shown = std::min(level, opts.explicit_level);
  if (shown >= 1) enumerate_sk_explicit(ctx, gs, shown, map);
  return gs;
}

FieldElement thickness_lower_bound(const GapStructure& gs) {
  std::optional<FieldElement> best;
  auto take = [&](const FieldElement& v) { best = best ? fmin(*best, v) : v; };
  if (!gs.classes.empty()) {
    for (const auto& c : gs.classes) {
      take(c.left_ratio.lo);
      take(c.right_ratio.lo);
    }
  } else {
    for (const auto& g : gs.gaps) {
      take(g.left_bridge.lo / g.length.hi);
      take(g.right_bridge.lo / g.length.hi);
    }
  }
  if (!best) throw Error("InputError", "gap structure is empty");
  return *best;
}

// ---------------------------------------------------------------- interleaving

namespace {

bool nested(const GapStructure& inner, const GapStructure& outer, Interleaving& out,
            const std::string& a, const std::string& b) {
  bool inside = outer.hull_lo.hi <= inner.hull_lo.lo && inner.hull_hi.hi <= outer.hull_hi.lo;
  if (!inside) return false;
  FieldElement diam = inner.hull_hi.lo - inner.hull_lo.hi;
  FieldElement gap = outer.gap_count() ? outer.largest_gap().hi : diam - diam;
  if (!(gap < diam)) return false;
  out.witness.push_back("conv(" + a + ") lies inside conv(" + b + ")");
  out.witness.push_back("|conv(" + a + ")| >= " + decimal(diam) + " exceeds the largest gap of " +
                        b + " <= " + decimal(gap));
  return true;
}

}  // namespace

Interleaving interleaving_check(const GapStructure& a, const GapStructure& b) {
  Interleaving r;
  if (a.hull_hi.hi < b.hull_lo.lo || b.hull_hi.hi < a.hull_lo.lo) {
    r.witness.push_back("convex hulls are disjoint");
    return r;
  }
  if (nested(a, b, r, a.family.str(), b.family.str()) ||
      nested(b, a, r, b.family.str(), a.family.str())) {
    r.interleaved = true;
    return r;
  }
  r.witness.push_back("no containment certificate at this level");
  return r;
}

// ---------------------------------------------------------------- Newhouse certificate

bool NewhouseCertificate::ok() const {
  return std::all_of(hypotheses.begin(), hypotheses.end(), [](const Hypothesis& h) { return h.holds; });
}

Json NewhouseCertificate::to_json(int depth) const {
  Json j;
  j["claim"] = "pi_q(A_q) meets (2-q) pi_q(S^9) + 1";
  j["q"] = q.literal();
  Json hs = Json::array();
  for (const auto& h : hypotheses) hs.push_back({{"name", h.name}, {"holds", h.holds}, {"detail", h.detail}});
  j["hypotheses"] = hs;
  j["witness_interval"] = field_interval_json(witness);
  j["level"] = level;
  j["depth"] = depth;
  j["note"] = "finite-level thickness values are estimates; the per-level gap and bridge bounds "
              "checked here give the floors q^-5 and q^6 at every level";
  return j;
}

NewhouseCertificate newhouse_certify(const QContext& ctx, int level) {
  require_aq_base(ctx.base);
  NewhouseCertificate c;
  c.q = ctx.base;
  c.level = level;
  GapStructure aq = enumerate_gaps(ctx, {GapFamily::Aq, 9}, level);
  GapStructure sk = enumerate_gaps(ctx, {GapFamily::ScaledSk, 9}, level, {0, 24});
  c.aq_thickness = thickness_lower_bound(aq);
  c.sk_thickness = thickness_lower_bound(sk);
  c.aq_floor = ctx.pow(-5);
  c.sk_floor = ctx.pow(6);

  bool law = true;
  for (const auto& g : aq.gaps) {
    FieldElement up = ctx.pow(1 - g.level), down = ctx.pow(-g.level), br = ctx.pow(-g.level - 4);
    law = law && down < g.length.lo && g.length.hi < up && br < g.left_bridge.lo && br < g.right_bridge.lo;
  }
  c.hypotheses.push_back({"aq_gap_law", law,
                          "q^-k < |G| < q^(1-k) and bridges > q^(-k-4) for all " +
                              std::to_string(aq.gaps.size()) + " gaps of level <= " + std::to_string(level)});
  c.hypotheses.push_back({"aq_thickness", c.aq_floor < c.aq_thickness,
                          "estimate " + decimal(c.aq_thickness) + " > q^-5 = " + decimal(c.aq_floor)});
  FieldElement two_minus_q = ctx.one + ctx.one - ctx.q;
  FieldElement s9_gap = sk.largest_gap().hi / two_minus_q;
  c.hypotheses.push_back({"s9_largest_gap", s9_gap < ctx.pow(-8),
                          "largest S^9 gap " + decimal(s9_gap, 16) + " < q^-8"});
  c.hypotheses.push_back({"s9_thickness", c.sk_floor < c.sk_thickness,
                          "estimate " + decimal(c.sk_thickness) + " > q^6 = " + decimal(c.sk_floor)});
  c.interleaving = interleaving_check(aq, sk);
  std::string iw;
  for (const auto& w : c.interleaving.witness) iw += (iw.empty() ? "" : "; ") + w;
  c.hypotheses.push_back({"interleaved", c.interleaving.interleaved, iw});
  FieldElement prod = c.aq_thickness * c.sk_thickness;
  c.hypotheses.push_back({"thickness_product", ctx.one < prod && ctx.one < c.aq_floor * c.sk_floor,
                          "estimates give " + decimal(prod) + ", floors give q = " + decimal(ctx.q)});
  c.witness = {aq.hull_lo.lo, aq.hull_hi.hi};

  if (!c.hypotheses[0].holds || !c.hypotheses[1].holds || !c.hypotheses[2].holds ||
      !c.hypotheses[3].holds || !c.hypotheses[5].holds)
    throw Error("ThicknessTooSmall", "thickness hypotheses fail at level " + std::to_string(level));
  if (!c.interleaving.interleaved) throw Error("NotInterleaved", iw);
  return c;
}

// ---------------------------------------------------------------- slice-3 witness

std::optional<std::size_t> uniform_tree_leaves(const QContext& ctx, const FieldInterval& x, int depth) {
  DynSystem sys(SystemKind::Eq, ctx);
  std::size_t leaves = 0, nodes = 0;
  bool ok = true;
  std::function<void(const FieldInterval&, int)> rec = [&](const FieldInterval& iv, int level) {
    if (!ok) return;
    if (++nodes > (std::size_t{1} << 20)) {
      ok = false;
      return;
    }
    if (level == depth) {
      ++leaves;
      return;
    }
    for (const auto& f : sys.maps()) {
      bool a = f.in_domain(iv.lo), b = f.in_domain(iv.hi);
      if (a != b || (!a && iv.lo < f.lo.value && f.hi.value < iv.hi)) {
        ok = false;
        return;
      }
      if (!a) continue;
      FieldElement u = f.apply(iv.lo), v = f.apply(iv.hi);
      rec(u < v ? FieldInterval{u, v} : FieldInterval{v, u}, level + 1);
    }
  };
  rec(x, 0);
  if (!ok) return std::nullopt;
  return leaves;
}

bool Slice3Witness::certified() const {
  return uniform_leaves && *uniform_leaves == 3 && slice.claim.type == ClaimType::ExactlyN &&
         slice.claim.n == 3;
}

Json Slice3Witness::to_json() const {
  Json j;
  j["y_interval"] = field_interval_json(y, 40);
  j["y_rep"] = enclosure_json(y_rep, 40);
  j["a_prefix"] = a_prefix.digits();
  j["b_prefix"] = b_prefix.digits();
  j["refinements"] = refinements;
  j["uniform_depth_leaves"] = uniform_leaves ? Json(*uniform_leaves) : Json(nullptr);
  j["slice"] = slice.to_json();
  j["certified"] = certified();
  return j;
}

namespace {

// Decimal with the fewest digits strictly inside the interval.
Rational shortest_decimal(const FieldInterval& iv) {
  FieldElement width = iv.hi - iv.lo;
  Rational eps = width.enclosure(Rational(1, 1u << 20)).lo / 8;
  if (eps <= 0) throw Error("InternalError", "degenerate witness interval");
  Rational lo = iv.lo.enclosure(eps).hi, hi = iv.hi.enclosure(eps).lo;
  Integer scale = 1;
  for (int d = 0; d < 400; ++d, scale *= 10) {
    Integer n = 0;
    Rational t = lo * scale;
    mpz_fdiv_q(n.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
    Rational cand(n + 1, scale);
    cand.canonicalize();
    if (lo < cand && cand < hi) return cand;
  }
  throw Error("InternalError", "no short decimal in witness interval");
}

}  // namespace

Slice3Witness find_slice3_witness(const QContext& ctx, int depth, std::size_t budget) {
  require_aq_base(ctx.base);
  if (depth < 1) throw Error("InputError", "depth must be >= 1");
  int target = depth + 40;
  std::size_t D = static_cast<std::size_t>(target + 60);
  AqFamily f = build_aq_family(ctx, static_cast<int>(D));
  std::vector<FieldElement> qn(D + 2);
  qn[0] = ctx.one;
  for (std::size_t j = 1; j < qn.size(); ++j) qn[j] = qn[j - 1] * ctx.inv_q;
  std::vector<FieldElement> smax(D + 2, ctx.zero), smin(D + 2, ctx.zero);
  for (std::size_t j = D; j >= 1; --j) {
    int b = f.forced_bit(j);
    smax[j] = smax[j + 1] + (b != 0 ? qn[j] : ctx.zero);
    smin[j] = smin[j + 1] + (b == 1 ? qn[j] : ctx.zero);
  }
  FieldElement tail = qn[D] * ctx.inv_qm1;
  SkAutomaton aut(9);
  std::vector<FieldElement> vmax, vmin;
  for (int s = 0; s < aut.size(); ++s) {
    vmax.push_back(value(ctx, aut.max_tail(s)));
    vmin.push_back(value(ctx, aut.min_tail(s)));
  }
  FieldElement two_minus_q = ctx.one + ctx.one - ctx.q;
  FieldElement width_goal = qn[static_cast<std::size_t>(target)];

  struct ANode {
    std::size_t n;
    FieldElement p;
  };
  struct BNode {
    std::size_t n;
    int s;
    FieldElement p;
  };
  auto a_iv = [&](const ANode& a) {
    return FieldInterval{a.p + smin[a.n + 1], a.p + smax[a.n + 1] + tail};
  };
  auto b_iv = [&](const BNode& b) {
    FieldElement lo = b.p + qn[b.n] * vmin[static_cast<std::size_t>(b.s)];
    FieldElement hi = b.p + qn[b.n] * vmax[static_cast<std::size_t>(b.s)];
    return FieldInterval{two_minus_q * lo + ctx.one, two_minus_q * hi + ctx.one};
  };

  Slice3Witness w;
  Word a(Alphabet::Binary), b(Alphabet::Binary);
  std::optional<FieldInterval> hit;
  std::function<bool(const ANode&, const BNode&)> rec = [&](const ANode& an, const BNode& bn) {
    if (++w.refinements > budget)
      throw Error("RefinementBudgetExceeded",
                  "no nested witness within " + std::to_string(budget) + " refinements");
    FieldInterval ia = a_iv(an), ib = b_iv(bn);
    if (ia.hi < ib.lo || ib.hi < ia.lo) return false;
    FieldElement wa = ia.hi - ia.lo, wb = ib.hi - ib.lo;
    if (wa < width_goal && wb < width_goal) {
      hit = FieldInterval{fmax(ia.lo, ib.lo), fmin(ia.hi, ib.hi)};
      return true;
    }
    if (wb <= wa) {
      if (an.n + 1 >= D) throw Error("RefinementBudgetExceeded", "A_q family exhausted");
      int forced = f.forced_bit(an.n + 1);
      for (int bit : {0, 1}) {
        if (forced >= 0 && bit != forced) continue;
        a.push_back(bit);
        if (rec({an.n + 1, bit ? an.p + qn[an.n + 1] : an.p}, bn)) return true;
        a = a.prefix(a.size() - 1);
      }
      return false;
    }
    for (int bit : {0, 1}) {
      int t = aut.next(bn.s, bit);
      if (t < 0) continue;
      b.push_back(bit);
      if (rec(an, {bn.n + 1, t, bit ? bn.p + qn[bn.n + 1] : bn.p})) return true;
      b = b.prefix(b.size() - 1);
    }
    return false;
  };
  if (!rec({0, ctx.zero}, {0, aut.start(), ctx.zero}))
    throw Error("RefinementBudgetExceeded", "the two sets did not meet at the explored depth");

  // hit encloses qx; slice height is (q-1) x.
  FieldElement k = (ctx.q - ctx.one) * ctx.inv_q;
  w.y = {hit->lo * k, hit->hi * k};
  w.y_rep = ctx.rational(shortest_decimal(w.y));
  w.a_prefix = a;
  w.b_prefix = b;
  w.uniform_leaves = uniform_tree_leaves(ctx, {hit->lo * ctx.inv_q, hit->hi * ctx.inv_q}, depth);
  SliceOptions o;
  o.continuation = 0;
  w.slice = compute_slice(ctx, w.y_rep, depth, o);
  return w;
}

}  // namespace okamoto
