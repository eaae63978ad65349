#include "okamoto/certificate.hpp"

#include <algorithm>
#include <set>

#include "okamoto/bonacci.hpp"
#include "okamoto/dimension.hpp"
#include "okamoto/slice.hpp"
#include "okamoto/thickness.hpp"

namespace okamoto {

namespace {

std::string str_param(Json& p, const char* key, const std::string& fallback = "") {
  if (!p.contains(key)) {
    if (fallback.empty()) throw Error("InputError", std::string("missing parameter ") + key);
    p[key] = fallback;
  }
  if (!p[key].is_string()) throw Error("InputError", std::string("parameter ") + key + " must be a string");
  return p[key].get<std::string>();
}

long int_param(Json& p, const char* key, long fallback) {
  if (!p.contains(key)) p[key] = fallback;
  if (!p[key].is_number_integer()) throw Error("InputError", std::string("parameter ") + key + " must be an integer");
  return p[key].get<long>();
}

bool bool_param(Json& p, const char* key, bool fallback) {
  if (!p.contains(key)) p[key] = fallback;
  if (!p[key].is_boolean()) throw Error("InputError", std::string("parameter ") + key + " must be a boolean");
  return p[key].get<bool>();
}

Json wrap(const std::string& kind, const Json& params, const Json& body, bool certified) {
  Json j;
  j["kind"] = kind;
  j["params"] = params;
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  j["certified"] = certified;
  return j;
}

std::vector<std::string> digits_of(const std::vector<Word>& ws) {
  std::vector<std::string> out;
  for (const Word& w : ws) out.push_back(w.digits());
  std::sort(out.begin(), out.end());
  return out;
}

Json slice_cert(Json p) {
  QContext ctx(parse_number(str_param(p, "q")));
  Rational y = parse_rational(str_param(p, "y"));
  int depth = static_cast<int>(int_param(p, "depth", 48));
  bool oracle = bool_param(p, "oracle", false);
  SliceResult r = compute_slice(ctx, ctx.rational(y), depth);
  Json body = r.to_json();
  if (oracle) {
    FieldElement fy = ctx.rational(y);
    auto o = digits_of(rte_filter(ctx, fy, geometric_slice_oracle(ctx, fy, depth)));
    body["oracle"] = {{"cylinders", o}, {"agrees", o == digits_of(r.words())}};
  }
  return wrap("slice", p, body, r.claim.certified);
}

Json orbit_tree_cert(Json p) {
  QContext ctx(parse_number(str_param(p, "q")));
  Rational x = parse_rational(str_param(p, "x"));
  int depth = static_cast<int>(int_param(p, "depth", 8));
  std::string system = str_param(p, "system", "eq");
  SystemKind kind = system == "eq"     ? SystemKind::Eq
                    : system == "hat"  ? SystemKind::EqHat
                    : system == "star" ? SystemKind::EqStar
                                       : throw Error("InputError", "system must be eq, hat or star");
  DynSystem sys(kind, ctx);
  OrbitTree t = enumerate_orbits(sys, ctx.rational(x), depth);
  Json body;
  body["leaves"] = t.leaf_count();
  Json paths = Json::array();
  for (const Word& w : t.paths_at_depth()) paths.push_back(w.digits());
  body["paths"] = paths;
  body["tree"] = t.to_json();
  return wrap("orbit-tree", p, body, true);
}

Json thickness_cert(Json p) {
  QContext ctx(parse_number(str_param(p, "q")));
  GapFamilySpec fam = parse_family(str_param(p, "set", "aq"));
  p["set"] = fam.str();
  int level = static_cast<int>(int_param(p, "level", 12));
  GapStructure gs = enumerate_gaps(ctx, fam, level);
  Json body = gs.to_json();
  body["thickness_lower_bound"] = enclosure_json(thickness_lower_bound(gs));
  return wrap("thickness", p, body, true);
}

Json slice3_cert(Json p) {
  QContext ctx(parse_number(str_param(p, "q")));
  int depth = static_cast<int>(int_param(p, "depth", 48));
  int level = static_cast<int>(int_param(p, "level", 40));
  NewhouseCertificate nc = newhouse_certify(ctx, level);
  Slice3Witness w = find_slice3_witness(ctx, depth);
  Json body = nc.to_json(depth);
  body["witness"] = w.to_json();
  return wrap("certify-slice3", p, body, nc.ok() && w.certified());
}

Json bonacci_verify_cert(Json p) {
  int k = static_cast<int>(int_param(p, "k", 3));
  int m = static_cast<int>(int_param(p, "m", 1));
  Tail delta = parse_tail(str_param(p, "delta", "(01)*"));
  int depth = static_cast<int>(int_param(p, "depth", 60));
  OddCardinalityCertificate c = verify_odd_cardinality(k, m, delta, depth);
  return wrap("bonacci-verify", p, c.to_json(), true);
}

Json null_infinite_cert(Json p) {
  int k = static_cast<int>(int_param(p, "k", 3));
  int depth = static_cast<int>(int_param(p, "depth", 40));
  return wrap("bonacci-null-infinite", p, null_infinite_probe(k, depth).to_json(), true);
}

Json c2_cert(Json p) {
  QContext ctx(parse_number(str_param(p, "q")));
  int depth = static_cast<int>(int_param(p, "depth", 400));
  C2Probe r = c2_probe(ctx, depth);
  return wrap("bonacci-c2", p, r.to_json(), r.verdict != C2Verdict::Unknown);
}

Json dimension_cert(Json p) {
  QContext ctx(parse_number(str_param(p, "q")));
  Rational y = parse_rational(str_param(p, "y"));
  std::string method = str_param(p, "method", "mass");
  int levels = static_cast<int>(int_param(p, "levels", 6));
  int grid = static_cast<int>(int_param(p, "grid", 256));
  int max_len = static_cast<int>(int_param(p, "max_len", 12));
  if (!p.contains("depths")) p["depths"] = Json::array({8, 10, 12, 14, 16});
  std::vector<int> depths;
  for (const auto& d : p["depths"]) {
    if (!d.is_number_integer()) throw Error("InputError", "depths must be integers");
    depths.push_back(d.get<int>());
  }
  if (y < 0 || y > 1) throw Error("InputError", "y must lie in [0,1]");

  Json body{{"s_lower", nullptr}, {"M", nullptr}, {"box_estimate", nullptr}, {"residual", nullptr}};
  bool certified = true;
  if (method == "mass") {
    FieldElement x = ctx.rational(y) * ctx.inv_qm1;
    if (!ctx.in_J(x)) throw Error("InputError", "y/(q-1) must lie in J_q for the mass method");
    body["branching_pair"] = branching_pair_search(ctx, x, max_len).to_json();
    MEstimate m = estimate_M(ctx, grid, max_len);
    body["cover"] = m.to_json();
    if (m.M) {
      body["M"] = *m.M;
      body["s_lower"] = real_json(dimension_lower_bound(*m.M));
      RTree t = build_r_tree(ctx, x, levels, max_len);
      RTreeReport rep = check_r_tree(ctx, t, *m.M);
      body["r_tree"] = rep.to_json();
      certified = rep.ok();
    } else {
      body["M"] = "Unknown";
      certified = false;
    }
  } else if (method == "box") {
    BoxEstimate b = box_dimension_estimate(slice_box_counts(ctx, ctx.rational(y), depths));
    body["box_estimate"] = real_json(b.slope);
    body["residual"] = real_json(b.residual);
    body["counts"] = b.to_json()["counts"];
  } else {
    throw Error("InputError", "method must be mass or box");
  }
  body["affinity_dimension"] = real_json(affinity_dimension(ctx.base));
  return wrap("dimension", p, body, certified);
}

}  // namespace

Json make_certificate(const std::string& kind, const Json& params) {
  if (!params.is_object()) throw Error("InputError", "params must be an object");
  if (kind == "slice") return slice_cert(params);
  if (kind == "orbit-tree") return orbit_tree_cert(params);
  if (kind == "thickness") return thickness_cert(params);
  if (kind == "certify-slice3") return slice3_cert(params);
  if (kind == "bonacci-verify") return bonacci_verify_cert(params);
  if (kind == "bonacci-null-infinite") return null_infinite_cert(params);
  if (kind == "bonacci-c2") return c2_cert(params);
  if (kind == "dimension") return dimension_cert(params);
  throw Error("InputError", "unknown certificate kind " + kind);
}

bool is_certified(const Json& cert) { return cert.value("certified", false); }

Json CheckReport::to_json() const { return Json{{"valid", valid}, {"problems", problems}}; }

CheckReport check(const Json& cert) {
  CheckReport r;
  if (!cert.is_object() || !cert.contains("kind") || !cert.contains("params")) {
    r.problems.push_back("not a certificate");
    return r;
  }
  std::string kind = cert["kind"].get<std::string>();
  Json again = make_certificate(kind, cert["params"]);
  if (again != cert) r.problems.push_back("recomputation differs");

  if (kind == "slice" && cert["cylinders"].size() <= 10000) {
    Json p = cert["params"];
    QContext ctx(parse_number(p["q"].get<std::string>()));
    FieldElement y = ctx.rational(parse_rational(p["y"].get<std::string>()));
    int depth = p["depth"].get<int>();
    auto o = digits_of(rte_filter(ctx, y, geometric_slice_oracle(ctx, y, depth)));
    std::vector<std::string> c = cert["cylinders"].get<std::vector<std::string>>();
    std::sort(c.begin(), c.end());
    if (o != c) r.problems.push_back("IFS oracle disagrees with the cylinders");
  }
  if (kind == "bonacci-verify" &&
      cert["alive_paths"].get<long>() != 2 * cert["params"]["m"].get<long>() + 1)
    r.problems.push_back("alive paths differ from 2m+1");
  if (kind == "dimension" && cert.contains("r_tree") && !cert["r_tree"]["ok"].get<bool>())
    r.problems.push_back("R tree invariants fail");
  r.valid = r.problems.empty();
  return r;
}

int exit_code_for(const Error& e) {
  static const std::set<std::string> input{
      "InputError",    "AlphabetMismatch", "BaseTooSmall", "DeltaNotInSTilde", "LengthMismatch",
      "MixedField",    "MultipleRoots",    "NoRoot",       "NonSquareFree",    "NotRational",
      "TooFewDepths",  "DivisionByZero"};
  return input.count(e.kind()) ? 1 : 2;
}

}  // namespace okamoto
