#include "sdom/serialization.hpp"

#include <algorithm>
#include <cmath>

namespace sdom {

namespace {

Json point_json(const Point& p, int n) { return n == 1 ? Json::array({p[0]}) : Json::array({p[0], p[1]}); }

Point point_from(const Json& j) {
  require(j.is_array() && !j.empty() && j.size() <= 2, "expected a point as an array of 1 or 2 numbers");
  Point p{j[0].get<double>(), 0.0};
  if (j.size() == 2) p[1] = j[1].get<double>();
  return p;
}

std::string kind_name(DiniModulus::Kind k) {
  switch (k) {
    case DiniModulus::Kind::Power: return "power";
    case DiniModulus::Kind::LogPower: return "log_power";
    case DiniModulus::Kind::Custom: return "custom";
  }
  return "custom";
}

}  // namespace

Json grid_to_json(const GridSpec& g) {
  return Json{{"n", g.n}, {"L", g.L}, {"origin", point_json(g.origin, g.n)}, {"side", g.side}};
}

GridSpec grid_from_json(const Json& j) {
  const int n = j.at("n").get<int>();
  Point origin{0.0, 0.0};
  if (j.contains("origin")) origin = point_from(j.at("origin"));
  return GridSpec::make(n, j.at("L").get<int>(), origin, j.value("side", 1.0));
}

Json function_to_json(const GridFunction& f) {
  Json j = grid_to_json(f.grid());
  j["values"] = f.values();
  return j;
}

GridFunction function_from_json(const Json& j) {
  return GridFunction(grid_from_json(j), j.at("values").get<std::vector<double>>());
}

Json modulus_to_json(const DiniModulus& w) {
  require(w.kind != DiniModulus::Kind::Custom, "a custom modulus cannot be serialized");
  return Json{{"kind", kind_name(w.kind)}, {"c", w.c}, {"eps", w.eps}};
}

DiniModulus modulus_from_json(const Json& j) {
  const std::string kind = j.value("kind", "power");
  const double c = j.value("c", 1.0);
  const double eps = j.value("eps", 1.0);
  if (kind == "power") return DiniModulus::power(c, eps);
  if (kind == "log_power") return DiniModulus::log_power(c, eps);
  fail(ErrorCode::InvalidArgument, "unknown modulus kind '" + kind + "'");
}

Json kernel_to_json(const KernelSpec& k) {
  Json j{{"variant", k.variant_name()}, {"m", k.m}, {"n", k.n}};
  switch (k.variant) {
    case KernelVariant::Zero:
    case KernelVariant::BilinearOddHomogeneous: break;
    case KernelVariant::MPTTruncated: j["ell"] = k.ell; [[fallthrough]];
    case KernelVariant::MPTExample:
      j["beta"] = k.beta;
      j["r"] = k.r;
      break;
    case KernelVariant::DiniSynthetic:
      j["modulus"] = modulus_to_json(k.modulus);
      j["amplitude"] = k.amplitude;
      j["anchor"] = point_json(k.anchor, k.n);
      break;
    case KernelVariant::Custom: fail(ErrorCode::InvalidArgument, "a custom kernel cannot be serialized");
  }
  return j;
}

KernelSpec kernel_from_json(const Json& j) {
  const std::string v = j.at("variant").get<std::string>();
  const int m = j.value("m", 2);
  const int n = j.value("n", 1);
  KernelSpec k;
  if (v == "zero") {
    k = KernelSpec::zero(m, n);
  } else if (v == "bilinear_odd") {
    k = KernelSpec::bilinear_odd_homogeneous();
  } else if (v == "mpt") {
    k = KernelSpec::mpt_example(j.value("beta", 1.0), j.value("r", 2.0));
  } else if (v == "mpt_truncated") {
    k = KernelSpec::mpt_truncated(j.value("beta", 1.0), j.value("r", 2.0), j.at("ell").get<int>());
  } else if (v == "dini") {
    Point anchor{0.5, 0.5};
    if (j.contains("anchor")) anchor = point_from(j.at("anchor"));
    const DiniModulus w = j.contains("modulus") ? modulus_from_json(j.at("modulus")) : DiniModulus::power(1.0, 1.0);
    k = KernelSpec::dini_synthetic(w, j.value("amplitude", 1.0), m, n, anchor);
  } else {
    fail(ErrorCode::InvalidArgument, "unknown kernel variant '" + v + "'");
  }
  k.validate();
  return k;
}

Json estimate_to_json(const EstimateReport& e) {
  return Json{{"value", e.value},     {"terms", e.terms},     {"k_max", e.k_max},
              {"tail_flag", e.tail_flag}, {"skipped", e.skipped}, {"skipped_pairs", e.skipped_pairs},
              {"samples", e.samples}, {"argmax", e.argmax},   {"lower_bound", e.lower_bound}};
}

Json cube_to_json(const DyadicCube& q, int n) {
  return Json{{"level", q.level},
              {"index", n == 1 ? Json::array({q.index[0]}) : Json::array({q.index[0], q.index[1]})}};
}

DyadicCube cube_from_json(const Json& j, int n) {
  DyadicCube q;
  q.level = j.at("level").get<int>();
  const Json& idx = j.at("index");
  if (idx.is_number_integer()) {
    q.index = {idx.get<int>(), 0};
  } else {
    require(idx.is_array() && static_cast<int>(idx.size()) == n, "cube index must have n entries");
    q.index = {idx[0].get<int>(), n == 2 ? idx[1].get<int>() : 0};
  }
  return q;
}

Json family_to_json(const SparseFamily& s) {
  Json entries = Json::array();
  for (const SparseEntry& e : s.entries) {
    Json je = cube_to_json(e.cube, s.grid.n);
    je["witness_cells"] = e.witness;
    je["tau"] = e.tau;
    entries.push_back(std::move(je));
  }
  return Json{{"gamma", s.gamma}, {"grid", grid_to_json(s.grid)}, {"entries", std::move(entries)}};
}

SparseFamily family_from_json(const Json& j) {
  SparseFamily s;
  s.grid = grid_from_json(j.at("grid"));
  s.gamma = j.value("gamma", 0.5);
  for (const Json& je : j.at("entries")) {
    SparseEntry e;
    e.cube = cube_from_json(je, s.grid.n);
    e.cube.validate(s.grid);
    e.witness = je.at("witness_cells").get<std::vector<std::size_t>>();
    e.tau = je.value("tau", 0.0);
    s.entries.push_back(std::move(e));
  }
  return s;
}

Json stats_to_json(const std::vector<BuilderNodeStats>& stats, int n) {
  Json out = Json::array();
  for (const BuilderNodeStats& st : stats) {
    Json sel = Json::array();
    for (const DyadicCube& p : st.selected) sel.push_back(cube_to_json(p, n));
    out.push_back(Json{{"cube", cube_to_json(st.cube, n)},
                       {"A", st.A},
                       {"tau", st.tau},
                       {"E_cells", st.e_cells},
                       {"cube_cells", st.cube_cells},
                       {"selected", std::move(sel)},
                       {"sum_Pj_ratio", st.sum_pj_ratio}});
  }
  return out;
}

Json domination_to_json(const DominationReport& d) {
  return Json{{"C_emp", d.c_emp}, {"argmax_cell", d.argmax_cell}, {"support_flag", d.support_flag}};
}

Json bank_entry_to_json(const BankEntry& e) {
  Json j{{"shape", shape_name(e.shape)}, {"center", point_json(e.center, 2)}, {"width", e.width},
         {"amplitude", e.amplitude},     {"offset", point_json(e.offset, 2)}, {"count", e.count},
         {"seed", e.seed}};
  if (e.support) j["support"] = Json{{"lo", point_json(e.support->lo, 2)}, {"hi", point_json(e.support->hi, 2)}};
  return j;
}

BankEntry bank_entry_from_json(const Json& j) {
  BankEntry e;
  e.shape = parse_shape(j.at("shape").get<std::string>());
  if (j.contains("center")) e.center = point_from(j.at("center"));
  e.width = j.value("width", e.width);
  e.amplitude = j.value("amplitude", e.amplitude);
  if (j.contains("offset")) e.offset = point_from(j.at("offset"));
  e.count = j.value("count", 1);
  e.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("support")) {
    const Json& s = j.at("support");
    e.support = RelBox{point_from(s.at("lo")), point_from(s.at("hi"))};
  }
  require(e.count >= 1, "bank entry count must be >= 1");
  require(std::isfinite(e.width) && e.width > 0.0, "bank entry width must be positive");
  return e;
}

GridFunction WeightSpec::realize(const GridSpec& g) const {
  if (kind == "power") {
    Point c{g.origin[0] + center[0] * g.side, g.origin[1] + center[1] * g.side};
    return power_weight(g, c, alpha);
  }
  if (kind == "constant") return constant_weight(g, value);
  if (kind == "custom") return GridFunction(g, values);
  fail(ErrorCode::InvalidArgument, "unknown weight kind '" + kind + "'");
}

Json weight_spec_to_json(const WeightSpec& w) {
  Json j{{"kind", w.kind}};
  if (w.kind == "power") {
    j["center"] = point_json(w.center, 2);
    j["alpha"] = w.alpha;
  } else if (w.kind == "constant") {
    j["value"] = w.value;
  } else {
    j["values"] = w.values;
  }
  return j;
}

WeightSpec weight_spec_from_json(const Json& j) {
  WeightSpec w;
  w.kind = j.at("kind").get<std::string>();
  if (w.kind == "power") {
    if (j.contains("center")) w.center = point_from(j.at("center"));
    w.alpha = j.at("alpha").get<double>();
  } else if (w.kind == "constant") {
    w.value = j.value("value", 1.0);
  } else if (w.kind == "custom") {
    w.values = j.at("values").get<std::vector<double>>();
  } else {
    fail(ErrorCode::InvalidArgument, "unknown weight kind '" + w.kind + "'");
  }
  return w;
}

Json weighted_report_to_json(const WeightedNormReport& r) {
  return Json{{"char", r.characteristic}, {"exponent", r.exponent}, {"bound", r.bound},
              {"ratios", r.ratios},       {"max_ratio", r.max_ratio}, {"argmax", r.argmax}};
}

}  // namespace sdom
