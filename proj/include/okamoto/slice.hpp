#pragma once

#include <optional>
#include <string>
#include <vector>

#include "okamoto/dynamics.hpp"

namespace okamoto {

enum class ClaimType { ExactlyN, AtLeastN, UncountablePattern, Unknown };
const char* to_string(ClaimType t);

struct CardinalityClaim {
  ClaimType type = ClaimType::Unknown;
  std::size_t n = 0;
  bool certified = false;
};

enum class LeafStatus { Unique, BranchesBeyond, Unknown };

struct SurvivingCylinder {
  Word word;  // ternary, length = depth
  LeafStatus status = LeafStatus::Unknown;
  bool disjoint = false;
  std::optional<Tail> itinerary;  // full RTE when the continuation is periodic
  std::optional<Rational> x;      // exact slice point when known
};

struct SliceOptions {
  std::size_t max_nodes = 1u << 20;
  int continuation = 200;  // extra steps allowed when certifying a leaf
};

struct SliceResult {
  AlgebraicReal q;
  FieldElement y;
  int depth = 0;
  std::vector<SurvivingCylinder> cylinders;
  CardinalityClaim claim;
  bool complete = true;           // every depth-d path was enumerated
  bool recurrent_branch = false;  // a branch point repeats along one path
  std::size_t nodes = 0;

  std::vector<Word> words() const;
  Json to_json() const;
};

SliceResult compute_slice(const QContext& ctx, const FieldElement& y, int depth,
                          const SliceOptions& opts = {});
CardinalityClaim classify_cardinality(const QContext& ctx, const FieldElement& y, int depth);

// Index words of depth d whose closed box contains the height y, from the IFS alone.
std::vector<Word> geometric_slice_oracle(const QContext& ctx, const FieldElement& y, int depth);
// Drops words whose inverse y-trajectory reaches the top edge, unless y = 1.
std::vector<Word> rte_filter(const QContext& ctx, const FieldElement& y,
                             const std::vector<Word>& words);

// Enclosure of the graph point above x, from the first depth ternary digits of x.
FieldInterval eval_okamoto(const QContext& ctx, const Rational& x, int depth);

// Vertical IFS coordinate maps u_i(y) = a*y + b.
std::pair<FieldElement, FieldElement> u_map(const QContext& ctx, int i);

}  // namespace okamoto
