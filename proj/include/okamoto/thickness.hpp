#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "okamoto/dynamics.hpp"
#include "okamoto/slice.hpp"

namespace okamoto {

// ---------------------------------------------------------------- extended dynamics

struct W2Cover {
  FieldInterval h;
  std::vector<std::pair<Word, FieldInterval>> images;  // S_w(H_q) in W2 order
  std::vector<bool> overlaps;                          // consecutive images meet
  bool left_preserved = false, right_preserved = false;
  bool ok() const;
};

// W2 words in tie-break order (-1 0) < (0 -1) < (0 0) < (0 1) < (1 0).
const std::vector<Word>& w2_words();
W2Cover w2_cover_check(const QContext& ctx);

// M from the k-Bonacci bracket of q: 0 on (1, G], k on (q_k, q_{k+1}].
int one_prefix_length(const AlgebraicReal& q);

struct FixedExpansionOfOne {
  AlgebraicReal q;
  int M = 0;
  Word digits;  // signed alphabet, c_1 ... c_n

  Word prefix() const { return digits.prefix(static_cast<std::size_t>(M)); }
  std::vector<Word> w2_tail() const;
};

FixedExpansionOfOne fixed_expansion_of_one(const QContext& ctx, int length);

// ---------------------------------------------------------------- A_q

enum class IndexClass { FixedOne, FixedZero, FixedByC, Free };
const char* to_string(IndexClass c);

struct AqFamily {
  AlgebraicReal q;
  FixedExpansionOfOne c;
  std::vector<IndexClass> cls;  // cls[j-1] classifies index j

  std::size_t length() const { return cls.size(); }
  // Bit every member carries at index j (1-based), or -1 at a free zero.
  int forced_bit(std::size_t j) const;
  std::vector<std::size_t> free_indices() const;
  std::vector<std::size_t> indices(IndexClass c) const;
};

// Requires q in (q_9, 2); throws BaseTooSmall otherwise.
void require_aq_base(const AlgebraicReal& q);
AqFamily build_aq_family(const QContext& ctx, int length);
std::vector<Word> build_aq_prefixes(const QContext& ctx, int k, std::size_t max_words = 1u << 22);
Word shifted_partner(const AqFamily& f, const Word& a);
Word shifted_partner(const QContext& ctx, const Word& a);

// ---------------------------------------------------------------- S^k

class SkAutomaton {
 public:
  explicit SkAutomaton(int k);
  int k() const { return k_; }
  int start() const { return 0; }
  int size() const { return 3 + 2 * (k_ - 1); }
  int next(int state, int bit) const;  // -1 when the bit is forbidden
  Tail max_tail(int state) const;
  Tail min_tail(int state) const;

 private:
  int k_;
};

// ---------------------------------------------------------------- gaps and thickness

enum class GapFamily { Aq, Sk, ScaledSk };

struct GapFamilySpec {
  GapFamily kind = GapFamily::Aq;
  int k = 9;
  std::string str() const;
};
GapFamilySpec parse_family(const std::string& text);

struct Gap {
  int level = 0;
  Word prefix;                 // a_1 .. a_{level-2}
  FieldInterval lo, hi;        // enclosures of the endpoints
  FieldInterval length;
  FieldInterval left_bridge, right_bridge;
};

struct GapClass {
  int level = 0;
  std::uint64_t count = 0;
  FieldInterval length;
  FieldInterval left_ratio, right_ratio;
};

struct GapStructure {
  AlgebraicReal q;
  GapFamilySpec family;
  int level = 0;
  FieldInterval hull_lo, hull_hi;
  std::vector<Gap> gaps;          // positional, sorted left to right
  std::vector<GapClass> classes;  // every gap of level <= level, grouped

  std::uint64_t gap_count() const;
  FieldInterval largest_gap() const;
  Json to_json() const;
};

struct GapOptions {
  int explicit_level = 12;  // S^k gaps listed positionally up to this level
  int pad = 24;             // extra digits behind the deepest endpoint
};

GapStructure enumerate_gaps(const QContext& ctx, const GapFamilySpec& family, int level,
                            const GapOptions& opts = {});

// Lower end of min(|L|,|R|)/|G| over the enumerated gaps.
FieldElement thickness_lower_bound(const GapStructure& gs);

struct Interleaving {
  bool interleaved = false;
  std::vector<std::string> witness;
};

Interleaving interleaving_check(const GapStructure& a, const GapStructure& b);

struct Hypothesis {
  std::string name;
  bool holds = false;
  std::string detail;
};

struct NewhouseCertificate {
  AlgebraicReal q;
  int level = 0;
  FieldElement aq_thickness, sk_thickness;  // finite-level estimates
  FieldElement aq_floor, sk_floor;          // q^-5 and q^6
  Interleaving interleaving;
  std::vector<Hypothesis> hypotheses;
  FieldInterval witness;  // contains a point of both sets
  bool ok() const;
  Json to_json(int depth = 0) const;
};

// Throws ThicknessTooSmall or NotInterleaved when a hypothesis fails at this level.
NewhouseCertificate newhouse_certify(const QContext& ctx, int level = 40);

// ---------------------------------------------------------------- slice-3 witness

// Leaf count of the orbit tree shared by every point of [lo, hi], or nullopt when some
// node interval meets a domain endpoint.
std::optional<std::size_t> uniform_tree_leaves(const QContext& ctx, const FieldInterval& x, int depth);

struct Slice3Witness {
  FieldInterval y;           // heights; the Newhouse point lies inside
  FieldElement y_rep;        // representative used for the slice run
  Word a_prefix, b_prefix;   // A_q and S^9 prefixes localizing qx
  std::size_t refinements = 0;
  std::optional<std::size_t> uniform_leaves;
  SliceResult slice;
  bool certified() const;
  Json to_json() const;
};

Slice3Witness find_slice3_witness(const QContext& ctx, int depth = 48,
                                  std::size_t budget = 1000);

}  // namespace okamoto
