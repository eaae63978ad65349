#pragma once

#include <optional>
#include <string>
#include <vector>

#include "okamoto/dynamics.hpp"

namespace okamoto {

struct BonacciBase {
  int k = 2;
  AlgebraicReal root;  // q^k = q^(k-1) + ... + q + 1 on (1,2)
};

BonacciBase bonacci_root(int k);

// pi_q(1 (0^k)^m delta) at q = q_k. Throws DeltaNotInSTilde.
FieldElement x_m_witness(int k, int m, const Tail& delta);

struct FunnelResult {
  bool ok = false;
  int steps = 0;  // f2 steps verified
  std::string note;
};

// x_j = pi_q(1^j 0 alpha) for j = n..2: only f2 applies and f2(x_j) = x_{j-1}.
FunnelResult funnel_check(const QContext& ctx, int n, const Tail& alpha);

struct BranchRecord {
  int j = 0;     // the point is x_j
  int step = 0;  // depth of the branch in the orbit tree
  Tail f0, f1, f2;
  bool f0_unique = false;  // only at j = 1; otherwise the funnel leads to x_{j-1}
  bool f1_unique = false, f2_unique = false, funnel = false;
};

struct OddCardinalityCertificate {
  int k = 3, m = 1, depth = 0;
  Tail delta;
  FieldElement x;
  std::size_t alive_paths = 0;
  std::vector<BranchRecord> recursion;  // j = m, m-1, ..., 1
  Json to_json() const;
};

// Throws CertificationFailed when the tree or a uniqueness step does not check out.
OddCardinalityCertificate verify_odd_cardinality(int k, int m, const Tail& delta, int depth);

struct NullInfiniteCertificate {
  int k = 3, depth = 0;
  std::vector<int> branch_steps;
  std::vector<std::size_t> alive_by_depth;
  Json to_json() const;
};

NullInfiniteCertificate null_infinite_probe(int k, int depth);

enum class C2Verdict { TwoOrbitsCertified, NotTwo, Unknown };
const char* to_string(C2Verdict v);

struct C2Probe {
  AlgebraicReal q;
  C2Verdict verdict = C2Verdict::Unknown;
  std::string detail;
  std::optional<Tail> expansion;         // certified unique expansion of 1
  std::optional<Tail> first, second;     // two distinct expansions of 1
  std::optional<Word> first_prefix, second_prefix;  // when they are not eventually periodic
  Json to_json() const;
};

C2Probe c2_probe(const QContext& ctx, int depth = 400);

// Bases q in (1,2) with 1 = pi_q(alpha), alpha = pre per^inf, whose probe certifies two orbits.
struct C2Search {
  std::vector<std::pair<Tail, C2Probe>> found;
  std::size_t tried = 0;
};
C2Search search_c2_bases(int max_pre, int max_per, int depth = 400, std::size_t limit = 4);

// Algebraic q in (1,2) with pi_q(alpha) = 1.
AlgebraicReal base_from_expansion(const Tail& alpha);

// c2_probe over p/r in (lo, 2) with r <= max_den.
std::vector<C2Probe> rational_c2_scan(const Rational& lo, int max_den, int depth = 400);

}  // namespace okamoto
