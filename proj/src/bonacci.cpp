#include "okamoto/bonacci.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace okamoto {

namespace {

Word zeros(std::size_t n) { return Word::repeat(Alphabet::Binary, 0, n); }
Word ones(std::size_t n) { return Word::repeat(Alphabet::Binary, 1, n); }

std::string tail_json(const Tail& t) { return t.str(); }

void require_k(int k, int min) {
  if (k < min) throw Error("InputError", "k must be >= " + std::to_string(min));
}

}  // namespace

BonacciBase bonacci_root(int k) {
  require_k(k, 2);
  return {k, bonacci_number(k)};
}

FieldElement x_m_witness(int k, int m, const Tail& delta) {
  require_k(k, 3);
  if (m < 1) throw Error("InputError", "m must be >= 1");
  if (!member({SubshiftKind::STilde, k}, delta))
    throw Error("DeltaNotInSTilde", delta.str() + " is not in the tilde set for k = " + std::to_string(k));
  QContext ctx(bonacci_number(k));
  return project_q(ctx, delta.prepend(Word(Alphabet::Binary, {1}) + zeros(static_cast<std::size_t>(k)).pow(static_cast<std::size_t>(m))));
}

FunnelResult funnel_check(const QContext& ctx, int n, const Tail& alpha) {
  FunnelResult r;
  if (n < 2) {
    r.note = "the funnel containment needs n >= 2";
    return r;
  }
  if (ctx.base.compare(bonacci_number(2)) != Ordering::Greater) {
    r.note = "the funnel containment needs q > G";
    return r;
  }
  DynSystem sys(SystemKind::Eq, ctx);
  auto x = [&](int j) {
    return project_q(ctx, alpha.prepend(ones(static_cast<std::size_t>(j)) + Word(Alphabet::Binary, {0})));
  };
  FieldElement cur = x(n);
  for (int j = n; j >= 2; --j) {
    if (!(ctx.inv_q_qm1 < cur && cur <= ctx.inv_qm1)) {
      r.note = "x_" + std::to_string(j) + " is outside (1/(q(q-1)), 1/(q-1)]";
      return r;
    }
    int applicable = 0;
    for (const auto& f : sys.maps()) applicable += f.in_domain(cur);
    if (applicable != 1 || !sys.map(2).in_domain(cur)) {
      r.note = "more than f2 applies at x_" + std::to_string(j);
      return r;
    }
    FieldElement next = sys.map(2).apply(cur);
    if (next != x(j - 1)) {
      r.note = "f2(x_" + std::to_string(j) + ") differs from x_" + std::to_string(j - 1);
      return r;
    }
    cur = next;
    ++r.steps;
  }
  r.ok = true;
  r.note = "f2 is the only map on x_" + std::to_string(n) + " .. x_2";
  return r;
}

// ---------------------------------------------------------------- odd cardinality

Json OddCardinalityCertificate::to_json() const {
  Json j;
  j["claim"] = "orbit count of x_m is 2m+1";
  j["k"] = k;
  j["m"] = m;
  j["delta"] = delta.str();
  j["x"] = enclosure_json(x, 30);
  j["depth"] = depth;
  j["alive_paths"] = alive_paths;
  j["expected"] = 2 * m + 1;
  Json rec = Json::array();
  for (const auto& b : recursion) {
    Json r;
    r["j"] = b.j;
    r["branch_step"] = b.step;
    r["f0"] = tail_json(b.f0);
    r["f1"] = tail_json(b.f1);
    r["f2"] = tail_json(b.f2);
    r["f1_unique"] = b.f1_unique;
    r["f2_unique"] = b.f2_unique;
    if (b.j == 1)
      r["f0_unique"] = b.f0_unique;
    else
      r["f0_funnels_to"] = "x_" + std::to_string(b.j - 1);
    r["relation"] = b.j == 1 ? "|orbits(x_1)| = 3" : "|orbits(x_" + std::to_string(b.j) +
                                                           ")| = 2 + |orbits(x_" + std::to_string(b.j - 1) + ")|";
    rec.push_back(r);
  }
  j["recursion"] = rec;
  return j;
}

OddCardinalityCertificate verify_odd_cardinality(int k, int m, const Tail& delta, int depth) {
  OddCardinalityCertificate c;
  c.k = k;
  c.m = m;
  c.delta = delta;
  c.depth = depth;
  c.x = x_m_witness(k, m, delta);
  QContext ctx(bonacci_number(k));
  DynSystem sys(SystemKind::Eq, ctx);
  std::size_t K = static_cast<std::size_t>(k);
  auto fail = [&](const std::string& why) {
    throw Error("CertificationFailed", "depth " + std::to_string(depth) + ": " + why);
  };
  if (depth < (m - 1) * k + 1) fail("depth does not reach the last branch point");

  OrbitTree tree = enumerate_orbits(sys, c.x, depth);
  c.alive_paths = tree.leaf_count();
  if (c.alive_paths != static_cast<std::size_t>(2 * m + 1))
    fail(std::to_string(c.alive_paths) + " alive paths");

  Tail dbar = reflect(delta);
  Word down = Word(Alphabet::Ternary, {0}) + Word::repeat(Alphabet::Ternary, 2, K - 1);
  for (int j = m; j >= 1; --j) {
    BranchRecord b;
    b.j = j;
    b.step = (m - j) * k;
    std::size_t J = static_cast<std::size_t>(j);
    FieldElement xj = project_q(ctx, delta.prepend(Word(Alphabet::Binary, {1}) + zeros(K).pow(J)));
    auto reached = follow(sys, c.x, down.pow(static_cast<std::size_t>(m - j)));
    if (!reached || *reached != xj) fail("the f0 f2^(k-1) chain misses x_" + std::to_string(j));
    b.f0 = delta.prepend(ones(K) + zeros(K).pow(J - 1));
    b.f1 = dbar.prepend(ones(K).pow(J - 1));
    b.f2 = delta.prepend(zeros(K).pow(J));
    const Tail* img[3] = {&b.f0, &b.f1, &b.f2};
    for (int i = 0; i < 3; ++i) {
      if (!sys.map(i).in_domain(xj) || sys.map(i).apply(xj) != project_q(ctx, *img[i]))
        fail("f" + std::to_string(i) + "(x_" + std::to_string(j) + ") is not pi_q(" + img[i]->str() + ")");
    }
    auto unique = [&](const Tail& t) {
      return unique_orbit_check(ctx, project_q(ctx, t), depth, t).status == UniqueStatus::UniqueCertified;
    };
    b.f1_unique = unique(b.f1);
    b.f2_unique = unique(b.f2);
    if (!b.f1_unique || !b.f2_unique) fail("a side branch of x_" + std::to_string(j) + " is not certified unique");
    if (j == 1) {
      b.f0_unique = unique(b.f0);
      if (!b.f0_unique) fail("f0(x_1) is not certified unique");
    } else {
      FunnelResult fr = funnel_check(ctx, k, delta.prepend(zeros(K - 1) + zeros(K).pow(J - 2)));
      b.funnel = fr.ok;
      if (!fr.ok) fail(fr.note);
    }
    c.recursion.push_back(b);
  }
  return c;
}

// ---------------------------------------------------------------- null infinite point

Json NullInfiniteCertificate::to_json() const {
  Json j;
  j["claim"] = "x = 1/q_k is a null infinite point";
  j["k"] = k;
  j["depth"] = depth;
  j["branch_steps"] = branch_steps;
  j["alive_by_depth"] = alive_by_depth;
  j["structure"] = "each branch point has children f0 and f2; f2 gives 0, f0 funnels back to 1/q";
  return j;
}

NullInfiniteCertificate null_infinite_probe(int k, int depth) {
  require_k(k, 3);
  if (depth < 1) throw Error("InputError", "depth must be >= 1");
  QContext ctx(bonacci_number(k));
  DynSystem sys(SystemKind::Eq, ctx);
  auto fail = [&](const std::string& why) { throw Error("CertificationFailed", why); };
  NullInfiniteCertificate c;
  c.k = k;
  c.depth = depth;
  FieldElement x = ctx.inv_q;
  if (sys.map(1).in_domain(x)) fail("f1 is defined at 1/q");
  Tail f0_image(ones(static_cast<std::size_t>(k)), zeros(1));
  if (sys.map(0).apply(x) != project_q(ctx, f0_image)) fail("f0(1/q) differs from pi_q(1^k 0^inf)");

  OrbitTree tree = enumerate_orbits(sys, x, depth);
  std::vector<int> level(tree.nodes.size(), 0);
  std::vector<bool> has_branch(tree.nodes.size(), false);
  for (std::size_t i = 0; i < tree.nodes.size(); ++i)
    for (auto ch : tree.nodes[i].children) level[ch] = level[i] + 1;
  for (std::size_t i = tree.nodes.size(); i-- > 0;) {
    has_branch[i] = tree.nodes[i].children.size() > 1;
    for (auto ch : tree.nodes[i].children) has_branch[i] = has_branch[i] || has_branch[ch];
  }
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const OrbitNode& n = tree.nodes[i];
    if (n.children.size() < 2) continue;
    if (n.children.size() != 2) fail("a branch point has three children");
    if (n.point != x) fail("a branch point other than 1/q");
    c.branch_steps.push_back(level[i]);
    int rebranch = 0;
    for (auto ch : n.children) {
      const OrbitNode& child = tree.nodes[ch];
      if (child.label == 2) {
        if (!child.point.is_zero()) fail("f2 child is not 0");
        if (has_branch[ch]) fail("the f2 side branches");
      } else if (child.label == 0) {
        rebranch += has_branch[ch];
        if (!has_branch[ch] && level[i] + k < depth) fail("the f0 side stops branching");
      } else {
        fail("unexpected child f" + std::to_string(child.label));
      }
    }
    if (rebranch > 1) fail("two re-branching children");
  }
  if (c.branch_steps.empty()) fail("no branch point within depth");
  std::sort(c.branch_steps.begin(), c.branch_steps.end());
  for (std::size_t i = 0; i < c.branch_steps.size(); ++i)
    if (c.branch_steps[i] != static_cast<int>(i) * k) fail("branch steps are not spaced by k");
  for (int d = 1; d <= depth; ++d) {
    std::size_t alive = 0;
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) alive += level[i] == d && tree.nodes[i].alive;
    c.alive_by_depth.push_back(alive);
  }
  return c;
}

// ---------------------------------------------------------------- C_2 = U probes

const char* to_string(C2Verdict v) {
  switch (v) {
    case C2Verdict::TwoOrbitsCertified: return "TwoOrbitsCertified";
    case C2Verdict::NotTwo: return "NotTwo";
    case C2Verdict::Unknown: return "Unknown";
  }
  return "?";
}

Json C2Probe::to_json() const {
  Json j;
  j["q"] = q.literal();
  j["verdict"] = to_string(verdict);
  j["detail"] = detail;
  if (expansion) j["unique_expansion_of_one"] = expansion->str();
  if (first) j["expansions_of_one"] = Json::array({first->str(), second->str()});
  if (first_prefix) j["expansion_prefixes_of_one"] = Json::array({first_prefix->digits(), second_prefix->digits()});
  return j;
}

namespace {

struct HatWalk {
  Word digits{Alphabet::Binary};
  std::optional<Tail> tail;
  int branch = -1;  // first step where both digits are allowed
};

// Greedy base-q digits of x, with an optional forced digit at one step.
HatWalk hat_walk(const QContext& ctx, FieldElement x, int depth, int force_step = -1, int force_digit = 0) {
  DynSystem sys(SystemKind::EqHat, ctx);
  HatWalk w;
  std::unordered_map<FieldElement, int, FieldElementHash, FieldElementReprEq> seen;
  for (int step = 0; step < depth; ++step) {
    if (step > force_step) {
      auto [it, fresh] = seen.emplace(x, step);
      if (!fresh) {
        std::size_t c = static_cast<std::size_t>(it->second);
        w.tail = Tail(w.digits.prefix(c), w.digits.suffix_from(c));
        return w;
      }
    }
    bool d0 = sys.map(0).in_domain(x), d1 = sys.map(1).in_domain(x);
    if (d0 && d1 && w.branch < 0) w.branch = step;
    int d = d1 ? 1 : 0;
    if (step == force_step) d = force_digit;
    if (!sys.map(d).in_domain(x)) throw Error("InternalError", "forced digit leaves the interval");
    w.digits.push_back(d);
    x = sys.map(d).apply(x);
  }
  return w;
}

}  // namespace

C2Probe c2_probe(const QContext& ctx, int depth) {
  require_base(ctx.base);
  C2Probe p;
  p.q = ctx.base;
  DynSystem sys(SystemKind::Eq, ctx);
  FieldElement x = ctx.inv_q;
  if (sys.map(1).in_domain(x) || sys.map(0).apply(x) != ctx.one || !sys.map(2).apply(x).is_zero())
    throw Error("InternalError", "unexpected children of 1/q");

  UniqueResult u = unique_orbit_check(ctx, ctx.one, depth);
  if (u.status == UniqueStatus::UniqueCertified) {
    HatWalk g = hat_walk(ctx, ctx.one, depth + 1);
    p.verdict = C2Verdict::TwoOrbitsCertified;
    p.expansion = g.tail;
    p.detail = "the orbit of 1 avoids J_q and closes a cycle at step " + std::to_string(u.step) +
               ", so 1/q has exactly the orbits through 1 and 0";
    return p;
  }
  if (u.status == UniqueStatus::UnknownAtDepth) {
    p.verdict = C2Verdict::Unknown;
    p.detail = "the orbit of 1 avoids J_q for " + std::to_string(depth) + " steps without closing a cycle";
    return p;
  }
  p.verdict = C2Verdict::NotTwo;
  p.detail = "the orbit of 1 meets J_q at step " + std::to_string(u.step) + ", so 1/q has at least 3 orbits";
  HatWalk g = hat_walk(ctx, ctx.one, depth);
  if (g.branch >= 0) {
    HatWalk h = hat_walk(ctx, ctx.one, depth, g.branch, 1 - g.digits[static_cast<std::size_t>(g.branch)]);
    if (g.tail && h.tail && project_q(ctx, *g.tail) == ctx.one && project_q(ctx, *h.tail) == ctx.one) {
      p.first = g.tail;
      p.second = h.tail;
    } else {
      p.first_prefix = g.digits;
      p.second_prefix = h.digits;
    }
  }
  return p;
}

AlgebraicReal base_from_expansion(const Tail& alpha) {
  const Word& u = alpha.preperiod();
  const Word& v = alpha.period();
  std::size_t L = u.size(), P = v.size();
  // q^L (q^P - 1) (1 - pi_q(alpha)) as a polynomial in q.
  std::vector<Rational> c(L + P + 1, Rational(0));
  c[L + P] += 1;
  c[L] -= 1;
  for (std::size_t i = 1; i <= L; ++i) {
    c[L - i + P] -= u[i - 1];
    c[L - i] += u[i - 1];
  }
  for (std::size_t i = 1; i <= P; ++i) c[P - i] -= v[i - 1];
  Poly p(c);
  Poly g = Poly::gcd(p, p.derivative());
  if (g.degree() >= 1) p = p / g;
  p = p.monic();
  Integer den = 1;
  for (const auto& r : p.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), r.get_den_mpz_t());
  std::vector<Integer> ic;
  for (const auto& r : p.coeffs()) {
    Rational s = r * den;
    ic.push_back(s.get_num());
  }
  return AlgebraicReal::from_poly(ic, Rational(1), Rational(2));
}

namespace {

// Lexicographic test on a window: conj(alpha) < shift^n(alpha) < alpha for 1 <= n < window.
bool univoque_shape(const Tail& a, std::size_t window) {
  Word w = a.prefix(window * 2);
  Word bar = reflect(w);
  auto less = [&](std::size_t s1, const Word& x, std::size_t s2, const Word& y) {
    for (std::size_t i = 0; i < window; ++i) {
      if (x[s1 + i] != y[s2 + i]) return x[s1 + i] < y[s2 + i];
    }
    return false;
  };
  for (std::size_t n = 1; n < window; ++n) {
    if (!less(n, w, 0, w)) return false;
    if (!less(0, bar, n, w)) return false;
  }
  return true;
}

void all_words(std::size_t n, const std::function<void(const Word&)>& fn) {
  for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
    std::vector<int> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = static_cast<int>((bits >> (n - 1 - i)) & 1);
    fn(Word(Alphabet::Binary, d));
  }
}

}  // namespace

C2Search search_c2_bases(int max_pre, int max_per, int depth, std::size_t limit) {
  C2Search s;
  std::vector<std::string> seen;
  for (int per = 1; per <= max_per && s.found.size() < limit; ++per)
    for (int pre = 1; pre <= max_pre && s.found.size() < limit; ++pre)
      all_words(static_cast<std::size_t>(pre), [&](const Word& u) {
        if (s.found.size() >= limit || u[0] != 1) return;
        all_words(static_cast<std::size_t>(per), [&](const Word& v) {
          if (s.found.size() >= limit) return;
          Tail a(u, v);
          if (a.preperiod().size() != u.size() || a.period().size() != v.size()) return;
          if (!univoque_shape(a, static_cast<std::size_t>(2 * (pre + per) + 4))) return;
          if (std::find(seen.begin(), seen.end(), a.str()) != seen.end()) return;
          seen.push_back(a.str());
          ++s.tried;
          AlgebraicReal q;
          try {
            q = base_from_expansion(a);
          } catch (const Error&) {
            return;
          }
          if (q.compare(AlgebraicReal::rational(Rational(1))) != Ordering::Greater) return;
          C2Probe p = c2_probe(QContext(q), depth);
          if (p.verdict == C2Verdict::TwoOrbitsCertified) s.found.emplace_back(a, p);
        });
      });
  return s;
}

std::vector<C2Probe> rational_c2_scan(const Rational& lo, int max_den, int depth) {
  std::vector<C2Probe> out;
  for (int r = 2; r <= max_den; ++r)
    for (int n = r + 1; n < 2 * r; ++n) {
      Rational q(n, r);
      q.canonicalize();
      if (q.get_den() != r || q <= lo) continue;
      out.push_back(c2_probe(QContext(AlgebraicReal::rational(q)), depth));
    }
  return out;
}

}  // namespace okamoto
