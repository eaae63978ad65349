#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "okamoto/bonacci.hpp"
#include "okamoto/dimension.hpp"
#include "okamoto/slice.hpp"
#include "okamoto/thickness.hpp"

using namespace okamoto;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;  // 0 = no time limit
  std::function<Outcome()> run;
  // Failure analysed as unattainable; the run still reports FAIL.
  std::string known_failure;
};

QContext rational_q(const Rational& q) { return QContext(AlgebraicReal::rational(q)); }

Rational above(const AlgebraicReal& a, const Rational& eps) { return a.refine(eps).hi; }

std::vector<Word> binary_words(std::size_t n) {
  std::vector<Word> out;
  for (std::size_t bits = 0; bits < (std::size_t(1) << n); ++bits) {
    std::vector<int> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = static_cast<int>((bits >> (n - 1 - i)) & 1);
    out.emplace_back(Alphabet::Binary, s);
  }
  return out;
}

Outcome figure_slice() {
  QContext ctx = rational_q(Rational(5, 3));
  SliceResult r = compute_slice(ctx, ctx.rational(Rational(3, 8)), 48);
  bool ok = r.claim.type == ClaimType::ExactlyN && r.claim.n == 1 && r.claim.certified;
  return {ok, std::string(to_string(r.claim.type)) + "(" + std::to_string(r.claim.n) + ")" +
                  (r.claim.certified ? " certified" : " uncertified")};
}

Outcome odd_cardinalities() {
  std::ostringstream d;
  bool ok = true;
  auto run = [&](int k, int m, const Tail& delta) {
    OddCardinalityCertificate c = verify_odd_cardinality(k, m, delta, 60);
    bool good = c.alive_paths == static_cast<std::size_t>(2 * m + 1);
    ok = ok && good;
    d << "q" << k << " m=" << m << ":" << c.alive_paths << ' ';
  };
  Tail alt = parse_tail("(01)*");
  for (int m = 1; m <= 4; ++m) run(3, m, alt);
  Tail d4 = member({SubshiftKind::STilde, 4}, alt) ? alt : parse_tail("(001)*");
  for (int m = 1; m <= 2; ++m) run(4, m, d4);
  d << "(q4 delta " << d4.str() << ")";
  return {ok, d.str()};
}

Outcome null_infinite() {
  NullInfiniteCertificate c = null_infinite_probe(3, 40);
  bool ok = !c.branch_steps.empty();
  for (std::size_t i = 0; i < c.branch_steps.size(); ++i) ok = ok && c.branch_steps[i] == 3 * static_cast<int>(i);
  for (std::size_t i = 1; i < c.alive_by_depth.size(); ++i)
    ok = ok && c.alive_by_depth[i] >= c.alive_by_depth[i - 1] && c.alive_by_depth[i] <= c.alive_by_depth[i - 1] + 1;
  return {ok, std::to_string(c.branch_steps.size()) + " branch points, " +
                  std::to_string(c.alive_by_depth.back()) + " paths alive at depth 40"};
}

Outcome newhouse_pipeline() {
  QContext ctx = rational_q(parse_rational("1.999"));
  NewhouseCertificate nc = newhouse_certify(ctx, 40);
  Slice3Witness w = find_slice3_witness(ctx, 48);
  bool three = w.slice.claim.type == ClaimType::ExactlyN && w.slice.claim.n == 3;
  std::ostringstream d;
  d << "hypotheses " << (nc.ok() ? "hold" : "fail") << ", aq tau " << nc.aq_thickness.to_double()
    << ", s9 tau " << nc.sk_thickness.to_double() << ", slice " << to_string(w.slice.claim.type) << "("
    << w.slice.claim.n << ")" << (w.certified() ? " certified" : " uncertified");
  return {nc.ok() && w.certified() && three, d.str()};
}

Outcome gap_laws() {
  QContext c = rational_q(parse_rational("1.999"));
  GapStructure aq = enumerate_gaps(c, {GapFamily::Aq, 9}, 40);
  bool ok = !aq.gaps.empty();
  std::size_t bad = 0;
  for (const Gap& g : aq.gaps) {
    bool good = c.pow(-g.level) < g.length.lo && g.length.hi < c.pow(1 - g.level) &&
                c.pow(-g.level - 4) < g.left_bridge.lo && c.pow(-g.level - 4) < g.right_bridge.lo;
    if (!good) ++bad;
  }
  for (const GapClass& k : aq.classes)
    if (!(c.pow(-k.level) < k.length.lo && k.length.hi < c.pow(1 - k.level))) ++bad;
  GapStructure s9 = enumerate_gaps(c, {GapFamily::Sk, 9}, 40);
  bool largest = s9.largest_gap().hi < c.pow(-8);
  ok = ok && bad == 0 && largest;
  return {ok, std::to_string(aq.gaps.size()) + " A_q gaps, " + std::to_string(bad) +
                  " violations; largest S^9 gap " + std::to_string(s9.largest_gap().hi.to_double())};
}

Outcome inequality_suites() {
  std::size_t checks = 0, bad = 0;
  auto expect = [&](bool v) {
    ++checks;
    if (!v) ++bad;
  };
  Word z(Alphabet::Binary, {0}), o(Alphabet::Binary, {1});
  for (int k : {2, 3, 9}) {
    Rational lo = above(bonacci_number(k), Rational(1, 1000000000));
    std::size_t kk = static_cast<std::size_t>(k);
    Word ones = Word::repeat(Alphabet::Binary, 1, kk), zeros = Word::repeat(Alphabet::Binary, 0, kk);
    for (int i = 1; i <= 200; ++i) {
      QContext c = rational_q(lo + (2 - lo) * Rational(i, 201));
      FieldElement two_minus = c.one + c.one - c.q;
      expect(two_minus.sign() > 0);
      expect(two_minus < c.pow(-k));
      FieldElement s = c.pow(k);
      for (int j = 0; j < k; ++j) s -= c.pow(j);
      expect(s.sign() > 0);
      expect(s < c.one);
      FieldElement a = project_q(c, Tail(z + ones, z));
      FieldElement b = project_q(c, Tail(o, z));
      FieldElement d = project_q(c, Tail(z, o));
      FieldElement e = project_q(c, Tail(o + zeros, o));
      expect(a < b);
      expect(b < d);
      expect(d < e);
      expect(project_q(c, Tail(Word(), z + ones.prefix(kk - 1))) < b);
      expect(d < project_q(c, Tail(Word(), o + zeros.prefix(kk - 1))));
    }
  }
  for (int k = 2; k <= 12; ++k) {
    QContext c(bonacci_number(k));
    expect((c.one + c.one - c.q - c.pow(-k)).repr_is_zero());
  }
  return {bad == 0, std::to_string(checks) + " exact checks, " + std::to_string(bad) + " failed"};
}

Outcome consecutive_cylinders() {
  QContext c = rational_q(above(bonacci_number(3), Rational(1, 1000000000)) + Rational(1, 100));
  std::size_t pairs = 0, bad = 0;
  for (std::size_t n = 1; n <= 10; ++n) {
    std::vector<Word> ws;
    for (const auto& w : binary_words(n))
      if (admissible_prefix({SubshiftKind::S, 3}, w)) ws.push_back(w);
    std::vector<FieldInterval> iv;
    for (const auto& w : ws) iv.push_back(cylinder_interval(c, w));
    for (std::size_t i = 0; i < ws.size(); ++i)
      for (std::size_t j = i + 1; j < ws.size(); ++j) {
        ++pairs;
        bool meet = iv[i].lo <= iv[j].hi && iv[j].lo <= iv[i].hi;
        if (meet != lex_consecutive(ws[i], ws[j])) ++bad;
      }
  }
  return {bad == 0, std::to_string(pairs) + " pairs, " + std::to_string(bad) + " mismatches"};
}

Outcome oracle_equivalence() {
  struct Case {
    Rational q, y;
  };
  std::mt19937_64 rng(20261016);
  std::vector<Case> cases;
  std::uniform_int_distribution<int> den(2, 60);
  while (cases.size() < 100) {
    int b = den(rng);
    int a = std::uniform_int_distribution<int>(1, b - 1)(rng);
    int e = den(rng);
    Rational q = 1 + Rational(a, b), y(std::uniform_int_distribution<int>(0, e)(rng), e);
    q.canonicalize();
    y.canonicalize();
    cases.push_back({q, y});
  }
  std::vector<int> result(cases.size(), -1);
  std::mutex mu;
  std::string first_error;
  std::size_t next = 0;
  auto work = [&] {
    while (true) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= cases.size()) return;
        i = next++;
      }
      try {
        QContext c = rational_q(cases[i].q);
        FieldElement y = c.rational(cases[i].y);
        auto geo = rte_filter(c, y, geometric_slice_oracle(c, y, 12));
        SliceOptions o;
        o.continuation = 0;
        o.max_nodes = std::size_t(1) << 28;
        auto dyn = compute_slice(c, y, 12, o).words();
        result[i] = std::set<Word>(geo.begin(), geo.end()) == std::set<Word>(dyn.begin(), dyn.end());
      } catch (const Error& e) {
        std::lock_guard<std::mutex> lock(mu);
        if (first_error.empty()) first_error = e.what();
      }
    }
  };
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  std::size_t mismatches = 0, errors = 0;
  for (int r : result) {
    if (r == 0) ++mismatches;
    if (r < 0) ++errors;
  }
  std::string d = std::to_string(cases.size()) + " cases, " + std::to_string(mismatches) + " mismatches";
  if (errors) d += ", " + std::to_string(errors) + " errors (" + first_error + ")";
  return {mismatches == 0 && errors == 0, d};
}

Rational rpow(const Rational& q, int n) {
  Rational r = 1;
  for (int i = 0; i < n; ++i) r *= q;
  return r;
}

Outcome fixed_expansion() {
  std::mt19937_64 rng(9);
  std::size_t bad = 0;
  std::string first;
  for (int t = 0; t < 50; ++t) {
    int b = std::uniform_int_distribution<int>(2, 1000)(rng);
    int a = std::uniform_int_distribution<int>(1, b - 1)(rng);
    Rational q = 1 + Rational(a, b);
    q.canonicalize();
    FixedExpansionOfOne e = fixed_expansion_of_one(rational_q(q), 60);
    Rational s = 0;
    for (int j = 1; j <= 60; ++j) s += e.digits[static_cast<std::size_t>(j - 1)] / rpow(q, j);
    Rational err = 1 - s;
    if (err < 0) err = -err;
    bool within = err <= 1 / (rpow(q, 60) * (q - 1));
    // M = k on (q_k, q_(k+1)], 0 below the golden ratio
    int expect = 0;
    for (int k = 2; k < 40; ++k) {
      Rational v = rpow(q, k);
      for (int i = 0; i < k; ++i) v -= rpow(q, i);
      if (v > 0) expect = k;
    }
    if (!within || e.M != expect) {
      ++bad;
      if (first.empty()) first = " (first at q = " + rational_str(q) + ")";
    }
  }
  return {bad == 0, "50 bases, " + std::to_string(bad) + " failures" + first};
}

Outcome dimension_pipeline() {
  QContext ctx = rational_q(Rational(3, 2));
  FieldElement x = (ctx.inv_q + ctx.inv_q_qm1) * Rational(1, 2);
  BranchingPair p = branching_pair_search(ctx, x, 12);
  FieldElement y = x * (ctx.q - ctx.one);
  MEstimate m = estimate_M(ctx);
  if (!m.M) return {false, "M unknown"};
  RTree t = build_r_tree(ctx, x, 6);
  RTreeReport rep = check_r_tree(ctx, t, *m.M);
  BoxEstimate box = box_dimension_estimate(slice_box_counts(ctx, y, {8, 9, 10, 11, 12, 13, 14, 15, 16}));
  double s = dimension_lower_bound(*m.M);
  std::ostringstream d;
  d << "pair " << p.b0.digits() << "/" << p.b1.digits() << ", y = " << y.str() << ", M = " << *m.M
    << ", s = " << s << ", box = " << box.slope << " (residual " << box.residual << "), tree "
    << (rep.ok() ? "ok" : "fails");
  return {rep.ok() && s <= box.slope + 0.05, d.str()};
}

Outcome c2_probes() {
  QContext q3(bonacci_number(3));
  C2Probe p = c2_probe(q3);
  bool not_two = p.verdict == C2Verdict::NotTwo && (p.second || p.second_prefix);
  std::vector<C2Probe> scan = rational_c2_scan(Rational(1, 1) + Rational(1, 100), 40, 400);
  std::size_t certified = 0;
  for (const auto& r : scan)
    if (r.verdict == C2Verdict::TwoOrbitsCertified) ++certified;
  C2Search alg = search_c2_bases(3, 3, 400, 1);
  std::ostringstream d;
  d << "q3 " << to_string(p.verdict);
  if (p.second) d << " (second expansion " << p.second->str() << ")";
  d << "; rational scan: " << certified << " of " << scan.size() << " certify two orbits";
  if (!alg.found.empty())
    d << "; algebraic base from " << alg.found.front().first.str() << " certifies";
  return {not_two && certified > 0, d.str()};
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "slice at q=5/3, y=3/8 has exactly one point", 5, figure_slice, ""},
      {2, "odd orbit counts 2m+1 at q3 and q4", 30, odd_cardinalities, ""},
      {3, "1/q3 is a null infinite point", 10, null_infinite, ""},
      {4, "Newhouse pipeline and 3-point slice at q=1.999", 300, newhouse_pipeline, ""},
      {5, "gap and bridge laws at q=1.999", 0, gap_laws, ""},
      {6, "inequality suites on rational grids", 30, inequality_suites, ""},
      {7, "S^3 cylinders meet iff consecutive", 60, consecutive_cylinders, ""},
      {8, "IFS oracle equals orbit dynamics", 0, oracle_equivalence, ""},
      {9, "fixed expansion of one", 0, fixed_expansion, ""},
      {10, "dimension pipeline at q=3/2", 120, dimension_pipeline, ""},
      {11, "two-orbit probes", 60, c2_probes,
       "certifying two orbits needs an eventually periodic expansion of 1, which makes q an "
       "algebraic integer, and no rational q in (1,2) is one"},
  };

  int unexpected = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = c.limit_s == 0 || secs < c.limit_s;
    bool pass = o.pass && in_time;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << "criterion " << c.id << ": " << (pass ? "PASS" : "FAIL") << " [" << timing;
    if (c.limit_s > 0) std::cout << " < " << c.limit_s << "s";
    std::cout << "] " << c.name << " -- " << o.detail;
    if (!pass && !c.known_failure.empty()) std::cout << " -- known: " << c.known_failure;
    std::cout << std::endl;
    if (!pass && c.known_failure.empty()) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
