#pragma once

#include <optional>
#include <string>
#include <vector>

#include "okamoto/dynamics.hpp"
#include "okamoto/slice.hpp"

namespace okamoto {

struct BranchingPair {
  FieldInterval x;  // a point when lo == hi, otherwise every point of the cell
  Word b0, b1;      // ternary, neither a prefix of the other
  FieldInterval y0, y1;  // images, inside the interior of J_q
  std::vector<BranchingPair> further;  // pairs at the two images, when requested
  int proxy_levels = 0;

  int max_length() const { return static_cast<int>(std::max(b0.size(), b1.size())); }
  Json to_json() const;
};

// Shortlex-first pair of incomparable words sending all of x into interior(J_q). Each image must
// itself admit such a pair for proxy_levels further levels. Throws NotFound or InputError.
BranchingPair branching_pair_search(const QContext& ctx, const FieldElement& x, int max_len = 12,
                                    int proxy_levels = 2);
BranchingPair branching_pair_search(const QContext& ctx, const FieldInterval& x, int max_len = 12,
                                    int proxy_levels = 0);

struct MEstimate {
  std::optional<int> M;
  std::size_t cells = 0;       // cells in the final cover
  int grid = 0;                // initial cells
  int max_len = 0;
  std::vector<std::pair<FieldInterval, BranchingPair>> cover;
  std::optional<FieldInterval> failed_cell;
  Json to_json() const;
};

// Covers J_q with `grid` cells (split up to `max_splits` times) and verifies one pair per cell.
MEstimate estimate_M(const QContext& ctx, int grid = 256, int max_len = 12, int max_splits = 6,
                     int workers = 0);

double dimension_lower_bound(int M);
double affinity_dimension(const AlgebraicReal& q);

struct RTree {
  AlgebraicReal q;
  FieldElement x;
  int levels = 0;
  std::vector<Word> b;            // b[i] = A(eps) in heap order, b[1] = empty word
  std::vector<FieldElement> at;   // f_{b[i]}(x)

  static std::size_t index(const Word& eps);
  const Word& word(const Word& eps) const { return b[index(eps)]; }
  std::vector<Word> level_words(int k) const;
  Rational mass(int k) const;  // sum of mu over level-k cylinders
  // Ternary intervals of the level-k cylinders, sorted.
  std::vector<std::pair<Rational, Rational>> cylinders(int k) const;
  // Upper bound for mu([lo, hi]) from the deepest level.
  Rational mass_upper(const Rational& lo, const Rational& hi) const;
  Json to_json() const;

 private:
  mutable std::vector<std::pair<Rational, Rational>> deepest_;
};

RTree build_r_tree(const QContext& ctx, const FieldElement& x, int levels, int max_len = 12);

struct RTreeReport {
  bool alive = false;       // every b^eps is an allowed map sequence from x
  bool prefix_iff = false;  // b^eps prefix of b^eps' iff eps prefix of eps'
  bool disjoint = false;    // same-level ternary intervals meet in at most one point
  bool length_bound = false;  // N_eps <= k M
  bool nested = false;
  bool mass = false;        // total mass 1 on every level
  bool ok() const { return alive && prefix_iff && disjoint && length_bound && nested && mass; }
  Json to_json() const;
};

RTreeReport check_r_tree(const QContext& ctx, const RTree& t, int M);

struct BoxEstimate {
  double slope = 0, residual = 0;
  std::vector<std::pair<int, std::size_t>> counts;
  Json to_json() const;
};

// Least-squares slope of log(count) against d log 3.
BoxEstimate box_dimension_estimate(const std::vector<std::pair<int, std::size_t>>& counts);
BoxEstimate box_dimension_estimate(const std::vector<std::vector<Word>>& cylinders);
// Cylinder counts of the slice at height y.
std::vector<std::pair<int, std::size_t>> slice_box_counts(const QContext& ctx, const FieldElement& y,
                                                          const std::vector<int>& depths,
                                                          std::size_t max_nodes = 1u << 22);

// Outward-widened decimal enclosure of a double result.
Json real_json(double v, int digits = 12);

}  // namespace okamoto
