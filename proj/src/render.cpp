#include "okamoto/render.hpp"

#include <cstdio>
#include <sstream>

#include "okamoto/slice.hpp"

namespace okamoto {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::vector<std::pair<Rational, FieldElement>> kq_breakpoints(const QContext& ctx, int iterations) {
  if (iterations < 0) throw Error("InputError", "iterations must be >= 0");
  std::vector<FieldElement> ys{ctx.zero, ctx.one};
  std::pair<FieldElement, FieldElement> u[3] = {u_map(ctx, 0), u_map(ctx, 1), u_map(ctx, 2)};
  for (int n = 0; n < iterations; ++n) {
    std::vector<FieldElement> next;
    next.reserve(3 * (ys.size() - 1) + 1);
    for (int i = 0; i < 3; ++i)
      for (std::size_t k = (i == 0 ? 0 : 1); k < ys.size(); ++k)
        next.push_back(u[i].first * ys[k] + u[i].second);
    ys = std::move(next);
  }
  std::vector<std::pair<Rational, FieldElement>> out;
  Rational den(ys.size() - 1);
  for (std::size_t k = 0; k < ys.size(); ++k) {
    Rational x = Rational(k) / den;
    x.canonicalize();
    out.emplace_back(x, ys[k]);
  }
  return out;
}

Rendered render_kq(const QContext& ctx, const RenderSpec& spec) {
  if (spec.width < 16 || spec.height < 16) throw Error("InputError", "image must be at least 16x16");
  if (spec.iterations < 1) throw Error("InputError", "iterations must be >= 1");
  for (const auto& s : spec.slices)
    if (s.y < 0 || s.y > 1) throw Error("InputError", "overlay y must lie in [0,1]");

  int n = std::min(spec.iterations, 12);
  auto pts = kq_breakpoints(ctx, n);
  double w = spec.width, h = spec.height, band = spec.gaps ? 40 : 0;
  double plot_h = h - band;
  auto px = [&](double x) { return fmt(x * w); };
  auto py = [&](double y) { return fmt((1 - y) * plot_h); };

  Rendered r;
  r.breakpoints = pts.size();
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
    << spec.height << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) s << ' ';
    s << px(pts[i].first.get_d()) << ',' << py(pts[i].second.to_double());
  }
  s << "\"/>\n";

  for (const auto& o : spec.slices) {
    s << "<line x1=\"0\" y1=\"" << py(o.y.get_d()) << "\" x2=\"" << spec.width << "\" y2=\""
      << py(o.y.get_d()) << "\" stroke=\"red\" stroke-width=\"1\"/>\n";
    std::vector<Rational> xs;
    if (o.witness_points) {
      SliceResult sl = compute_slice(ctx, ctx.rational(o.y), o.depth);
      for (const auto& c : sl.cylinders) {
        xs.push_back(c.x ? *c.x : project_ternary(c.word));
        s << "<circle cx=\"" << px(xs.back().get_d()) << "\" cy=\"" << py(o.y.get_d())
          << "\" r=\"3\" fill=\"red\"/>\n";
      }
    }
    r.intersections.push_back(std::move(xs));
  }

  if (spec.gaps) {
    GapStructure gs = enumerate_gaps(ctx, spec.gaps->family, spec.gaps->level);
    double lo = gs.hull_lo.lo.to_double(), hi = gs.hull_hi.hi.to_double();
    auto bx = [&](double v) { return fmt((v - lo) / (hi - lo) * w); };
    double top = plot_h + 15;
    s << "<rect x=\"0\" y=\"" << fmt(top) << "\" width=\"" << spec.width
      << "\" height=\"10\" fill=\"steelblue\"/>\n";
    for (const auto& g : gs.gaps) {
      double a = g.lo.lo.to_double(), b = g.hi.hi.to_double();
      s << "<rect x=\"" << bx(a) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt((b - a) / (hi - lo) * w)
        << "\" height=\"10\" fill=\"white\"/>\n";
    }
  }
  s << "</svg>\n";
  r.svg = s.str();
  return r;
}

}  // namespace okamoto
