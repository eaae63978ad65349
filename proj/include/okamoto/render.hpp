#pragma once

#include <optional>
#include <string>
#include <vector>

#include "okamoto/dynamics.hpp"
#include "okamoto/thickness.hpp"

namespace okamoto {

struct SliceOverlay {
  Rational y;
  bool witness_points = true;
  int depth = 48;
};

struct GapBand {
  GapFamilySpec family;
  int level = 8;
};

struct RenderSpec {
  int width = 600, height = 600;
  int iterations = 6;
  std::vector<SliceOverlay> slices;
  std::optional<GapBand> gaps;
};

// Vertices (k/3^n, K_n(k/3^n)) of the n-th piecewise-linear iterate.
std::vector<std::pair<Rational, FieldElement>> kq_breakpoints(const QContext& ctx, int iterations);

struct Rendered {
  std::string svg;
  std::size_t breakpoints = 0;
  std::vector<std::vector<Rational>> intersections;  // per slice overlay
};

// Curve resolution is min(iterations, 12).
Rendered render_kq(const QContext& ctx, const RenderSpec& spec);

}  // namespace okamoto
