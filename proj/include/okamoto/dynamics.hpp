#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "okamoto/numeric.hpp"
#include "okamoto/words.hpp"

namespace okamoto {

using Json = nlohmann::ordered_json;

// Constants of the base q shared by all dynamics.
struct QContext {
  AlgebraicReal base;
  FieldElement q, one, zero;
  FieldElement inv_q;            // 1/q
  FieldElement inv_qm1;          // 1/(q-1)
  FieldElement inv_q_qm1;        // 1/(q(q-1))
  FieldElement inv_2mq;          // 1/(2-q)

  explicit QContext(const AlgebraicReal& q);
  FieldElement rational(const Rational& r) const { return FieldElement::from_rational(base, r); }
  FieldElement pow(long n) const { return q.pow(n); }
  bool in_J(const FieldElement& x) const { return inv_q <= x && x <= inv_q_qm1; }
};

// Requires 1 < q < 2.
void require_base(const AlgebraicReal& q);

enum class SystemKind { Eq, EqHat, EqStar };

struct Bound {
  FieldElement value;
  bool closed = true;
};

struct AffineMap {
  int index = 0;
  FieldElement a, b;  // x -> a*x + b
  Bound lo, hi;

  bool in_domain(const FieldElement& x) const;
  FieldElement apply(const FieldElement& x) const { return a * x + b; }
};

struct OutOfDomain {
  int map = 0;
  bool right = false;     // excluded on the right (else left)
  bool boundary = false;  // x is exactly the open endpoint
};

class DynSystem {
 public:
  DynSystem(SystemKind kind, const QContext& ctx);

  SystemKind kind() const { return kind_; }
  const QContext& ctx() const { return ctx_; }
  const std::vector<AffineMap>& maps() const { return maps_; }
  const AffineMap& map(int index) const;
  const Bound& ambient_lo() const { return lo_; }
  const Bound& ambient_hi() const { return hi_; }
  Alphabet alphabet() const;

 private:
  SystemKind kind_;
  QContext ctx_;
  std::vector<AffineMap> maps_;
  Bound lo_, hi_;
};

std::variant<FieldElement, OutOfDomain> apply_map(const DynSystem& sys, int index,
                                                  const FieldElement& x);
// Applies the maps of w in order; nullopt when some step leaves a domain.
std::optional<FieldElement> follow(const DynSystem& sys, const FieldElement& x, const Word& w);

Rational project_ternary(const Tail& t);
Rational project_ternary(const Word& w);
// Sum of t_j q^-j for any integer digits.
FieldElement project_q(const QContext& ctx, const Tail& t);
FieldElement project_q(const QContext& ctx, const Word& w);

struct FieldInterval {
  FieldElement lo, hi;
};

FieldInterval cylinder_interval(const QContext& ctx, const Word& w);
// [-q/(q^2-1), q/(q^2-1)]
FieldInterval h_q_interval(const QContext& ctx);

struct OrbitNode {
  int label = -1;
  FieldElement point;
  bool alive = true;
  std::vector<std::size_t> children;
};

struct OrbitTree {
  FieldElement root;
  int depth = 0;
  Alphabet alphabet = Alphabet::Ternary;
  std::vector<OrbitNode> nodes;  // nodes[0] is the root

  std::vector<Word> paths_at_depth() const;
  std::size_t leaf_count() const { return paths_at_depth().size(); }
  Json to_json() const;
};

OrbitTree enumerate_orbits(const DynSystem& sys, const FieldElement& x, int depth,
                           std::size_t max_nodes = 1u << 22);

enum class UniqueStatus { UniqueCertified, BranchFoundAt, UnknownAtDepth };
const char* to_string(UniqueStatus s);

struct UniqueResult {
  UniqueStatus status = UniqueStatus::UnknownAtDepth;
  int step = 0;          // branch step, or the step where the cycle closed
  std::string method;    // "periodic" or "symbolic" when certified
  Word path;             // E_q map indices followed
  int cycle_start = -1;  // first step of the cycle for "periodic"
};

// Symbolic certificate: t in S^k with q > q_k or in the hat set with q >= q_k.
std::optional<int> symbolic_unique_level(const AlgebraicReal& q, const Tail& t);

UniqueResult unique_orbit_check(const QContext& ctx, const FieldElement& x, int depth,
                                const std::optional<Tail>& known_expansion = std::nullopt);

// Ternary index sequence of the single E_q orbit through a certified periodic trajectory.
std::optional<Tail> periodic_itinerary(const UniqueResult& r);

Tail d_map(const Tail& t);

// Decimal interval strings for JSON output.
Json interval_json(const RationalInterval& iv, int digits = 20);
Json enclosure_json(const FieldElement& x, int digits = 20);

}  // namespace okamoto
