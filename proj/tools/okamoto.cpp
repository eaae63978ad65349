#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "okamoto/certificate.hpp"
#include "okamoto/render.hpp"

using namespace okamoto;

namespace {

void emit(const Json& j) { std::cout << j.dump() << '\n'; }

int fail(const std::string& kind, const std::string& message, int code) {
  emit(Json{{"error", kind}, {"message", message}});
  return code;
}

int run_certificate(const std::string& kind, const Json& params) {
  Json cert = make_certificate(kind, params);
  emit(cert);
  return is_certified(cert) ? 0 : 2;
}

int run_check(const std::string& path) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (!path.empty() && path != "-") {
    file.open(path);
    if (!file) return fail("InputError", "cannot open " + path, 1);
    in = &file;
  }
  std::string line;
  bool all = true, any = false;
  while (std::getline(*in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    any = true;
    Json cert = Json::parse(line, nullptr, false);
    if (cert.is_discarded()) return fail("InputError", "line is not JSON", 1);
    if (cert.contains("error")) continue;
    CheckReport r = check(cert);
    Json out = r.to_json();
    out["kind"] = cert.value("kind", "");
    emit(out);
    all = all && r.valid;
  }
  if (!any) return fail("InputError", "no certificates to check", 1);
  return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slices of Okamoto's functions: orbit dynamics, certificates, thickness and dimension"};
  app.require_subcommand(1);
  bool json = true;
  app.add_flag("--json,!--no-json", json, "JSON lines output (default)");

  std::string q, y, x, delta = "(01)*", set = "aq", system = "eq", method = "mass", svg, cert_path;
  int depth = -1, level = -1, k = 3, m = 1, levels = 6, iterations = 6, width = 600, height = 600;
  int grid = 256, max_len = 12, gap_level = 8;
  bool oracle = false;
  std::vector<std::string> overlay_y;
  std::string gap_set;

  auto* slice = app.add_subcommand("slice", "Horizontal slice at height y");
  slice->add_option("--q", q, "Base in (1,2)")->required();
  slice->add_option("--y", y, "Height in [0,1]")->required();
  slice->add_option("--depth", depth, "Ternary depth (default 48)");
  slice->add_flag("--oracle", oracle, "Cross-check with the IFS box oracle");

  auto* orbit = app.add_subcommand("orbit-tree", "Orbit tree of x");
  orbit->add_option("--q", q)->required();
  orbit->add_option("--x", x)->required();
  orbit->add_option("--depth", depth, "Depth (default 8)");
  orbit->add_option("--system", system, "eq, hat or star");

  auto* thick = app.add_subcommand("thickness", "Gap structure and thickness");
  thick->add_option("--q", q)->required();
  thick->add_option("--set", set, "aq, sk:<k> or scaled-sk:<k>");
  thick->add_option("--level", level, "Gap level (default 12)");

  auto* s3 = app.add_subcommand("certify-slice3", "Newhouse certificate and a 3-element slice");
  s3->add_option("--q", q)->required();
  s3->add_option("--depth", depth, "Slice depth (default 48)");
  s3->add_option("--level", level, "Gap level (default 40)");

  auto* bon = app.add_subcommand("bonacci", "k-Bonacci constructions");
  bon->require_subcommand(1);
  auto* verify = bon->add_subcommand("verify", "Odd orbit counts 2m+1");
  verify->add_option("--k", k);
  verify->add_option("--m", m);
  verify->add_option("--delta", delta, "Tail in word syntax");
  verify->add_option("--depth", depth, "Depth (default 60)");
  auto* null_inf = bon->add_subcommand("null-infinite", "Null infinite point 1/q_k");
  null_inf->add_option("--k", k);
  null_inf->add_option("--depth", depth, "Depth (default 40)");
  auto* c2 = bon->add_subcommand("c2", "Whether 1/q has exactly two orbits");
  c2->add_option("--q", q)->required();
  c2->add_option("--depth", depth, "Depth (default 400)");

  auto* dim = app.add_subcommand("dimension", "Dimension lower bound and box estimate");
  dim->add_option("--q", q)->required();
  dim->add_option("--y", y)->required();
  dim->add_option("--method", method, "mass or box");
  dim->add_option("--levels", levels, "R tree levels");
  dim->add_option("--grid", grid, "Cells covering J_q");
  dim->add_option("--max-len", max_len, "Longest word in a branching pair");

  auto* render = app.add_subcommand("render", "SVG of K_q with overlays");
  render->add_option("--q", q)->required();
  render->add_option("--iterations", iterations);
  render->add_option("--width", width);
  render->add_option("--height", height);
  render->add_option("--y", overlay_y, "Slice line heights");
  render->add_option("--gaps", gap_set, "Gap band: aq, sk:<k> or scaled-sk:<k>");
  render->add_option("--gap-level", gap_level);
  render->add_option("--svg", svg, "Output path; stdout when omitted");

  auto* chk = app.add_subcommand("check", "Re-validate certificates (JSON lines)");
  chk->add_option("file", cert_path, "File of JSON lines; stdin when omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("UsageError", e.what(), 1);
  }
  if (!json) return fail("UsageError", "only JSON output is supported", 1);

  try {
    auto opt = [](Json& p, const char* key, int v) {
      if (v >= 0) p[key] = v;
    };
    Json p = Json::object();
    if (*slice) {
      p = {{"q", q}, {"y", y}, {"oracle", oracle}};
      opt(p, "depth", depth);
      return run_certificate("slice", p);
    }
    if (*orbit) {
      p = {{"q", q}, {"x", x}, {"system", system}};
      opt(p, "depth", depth);
      return run_certificate("orbit-tree", p);
    }
    if (*thick) {
      p = {{"q", q}, {"set", set}};
      opt(p, "level", level);
      return run_certificate("thickness", p);
    }
    if (*s3) {
      p = {{"q", q}};
      opt(p, "depth", depth);
      opt(p, "level", level);
      return run_certificate("certify-slice3", p);
    }
    if (*verify) {
      p = {{"k", k}, {"m", m}, {"delta", delta}};
      opt(p, "depth", depth);
      return run_certificate("bonacci-verify", p);
    }
    if (*null_inf) {
      p = {{"k", k}};
      opt(p, "depth", depth);
      return run_certificate("bonacci-null-infinite", p);
    }
    if (*c2) {
      p = {{"q", q}};
      opt(p, "depth", depth);
      return run_certificate("bonacci-c2", p);
    }
    if (*dim) {
      p = {{"q", q}, {"y", y}, {"method", method}, {"levels", levels}, {"grid", grid}, {"max_len", max_len}};
      return run_certificate("dimension", p);
    }
    if (*render) {
      QContext ctx(parse_number(q));
      RenderSpec spec;
      spec.width = width;
      spec.height = height;
      spec.iterations = iterations;
      for (const auto& v : overlay_y) spec.slices.push_back({parse_rational(v)});
      if (!gap_set.empty()) spec.gaps = GapBand{parse_family(gap_set), gap_level};
      Rendered r = render_kq(ctx, spec);
      Json out{{"q", ctx.base.literal()}, {"iterations", iterations},
               {"curve_iterations", std::min(iterations, 12)}, {"breakpoints", r.breakpoints}};
      Json inter = Json::array();
      for (std::size_t i = 0; i < r.intersections.size(); ++i) {
        Json xs = Json::array();
        for (const auto& v : r.intersections[i]) xs.push_back(rational_str(v));
        inter.push_back({{"y", rational_str(spec.slices[i].y)}, {"x", xs}});
      }
      out["slices"] = inter;
      if (svg.empty()) {
        std::cout << r.svg;
        return 0;
      }
      std::ofstream f(svg, std::ios::binary);
      if (!f) return fail("InputError", "cannot write " + svg, 1);
      f << r.svg;
      out["svg"] = svg;
      emit(out);
      return 0;
    }
    if (*chk) return run_check(cert_path);
  } catch (const Error& e) {
    return fail(e.kind(), e.what(), exit_code_for(e));
  } catch (const Json::exception& e) {
    return fail("InputError", e.what(), 1);
  }
  return fail("UsageError", "no subcommand", 1);
}
