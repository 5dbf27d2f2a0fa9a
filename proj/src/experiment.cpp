#include "sdom/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

namespace sdom {

namespace {

const std::set<std::string> kKnownFields = {"command", "grid", "kernel", "bank",    "r",    "q",   "delta", "gamma",
                                            "mode",    "root", "plan",   "modulus", "weights", "p", "ells",  "beta"};

bool needs_kernel(const std::string& c) { return c != "dini" && c != "separation"; }
bool needs_bank(const std::string& c) {
  return c == "build" || c == "dominate" || c == "maximal" || c == "weights";
}
bool needs_root(const std::string& c) { return c == "build" || c == "dominate"; }

class Collector {
 public:
  std::vector<std::string> errors;

  /// Runs fn, turning any exception into "path: message".
  template <class Fn>
  bool guard(const std::string& path, Fn&& fn) {
    try {
      fn();
      return true;
    } catch (const std::exception& e) {
      errors.push_back(path + ": " + e.what());
      return false;
    }
  }
  void check(bool ok, const std::string& path, const std::string& msg) {
    if (!ok) errors.push_back(path + ": " + msg);
  }
};

double number_field(Collector& c, const Json& j, const std::string& key, double def) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_number()) {
    c.errors.push_back(key + ": must be a number");
    return def;
  }
  return j.at(key).get<double>();
}

PlanParams default_plan(const GridSpec& g) {
  PlanParams p;
  p.level_min = 0;
  p.level_max = std::clamp(g.L - 4, 0, 22 / g.n);
  p.subdepth = g.n == 1 ? 2 : 1;
  return p;
}

DyadicCube default_root(const GridSpec& g) { return DyadicCube{2, {1, g.n == 2 ? 1 : 0}}; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string cube_label(const DyadicCube& q, int n) {
  std::string s = std::to_string(q.level) + ":" + std::to_string(q.index[0]);
  if (n == 2) s += "," + std::to_string(q.index[1]);
  return s;
}

}  // namespace

ParseResult parse_config(const std::string& text) {
  ParseResult res;
  Collector c;
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    res.errors.push_back(std::string("(root): invalid JSON: ") + e.what());
    return res;
  }
  if (!j.is_object()) {
    res.errors.push_back("(root): config must be a JSON object");
    return res;
  }
  for (const auto& [key, value] : j.items())
    if (!kKnownFields.count(key)) c.errors.push_back(key + ": unknown field");

  ExperimentConfig cfg;
  if (!j.contains("command") || !j["command"].is_string()) {
    c.errors.push_back("command: missing or not a string");
  } else {
    cfg.command = j["command"].get<std::string>();
    c.check(std::find(kCommands.begin(), kCommands.end(), cfg.command) != kCommands.end(), "command",
            "unknown command '" + cfg.command + "'");
  }

  bool grid_ok = false;
  if (!j.contains("grid"))
    c.errors.push_back("grid: missing");
  else
    grid_ok = c.guard("grid", [&] { cfg.grid = grid_from_json(j["grid"]); });

  cfg.r = number_field(c, j, "r", 2.0);
  c.check(std::isfinite(cfg.r) && cfg.r >= 1.0, "r", "must be >= 1");
  cfg.q = number_field(c, j, "q", 1.0);
  c.check(std::isfinite(cfg.q) && cfg.q > 0.0, "q", "must be positive");
  cfg.delta = number_field(c, j, "delta", 1.0);
  cfg.gamma = number_field(c, j, "gamma", 0.5);
  c.check(cfg.gamma > 0.0 && cfg.gamma < 1.0, "gamma", "must lie in (0, 1)");
  cfg.beta = number_field(c, j, "beta", 1.0);
  c.check(std::isfinite(cfg.beta) && cfg.beta > 0.0, "beta", "must be positive");
  if (j.contains("mode")) c.guard("mode", [&] { cfg.mode = parse_mode(j["mode"].get<std::string>()); });

  if (j.contains("kernel")) {
    c.guard("kernel", [&] {
      KernelSpec k = kernel_from_json(j["kernel"]);
      cfg.kernel = k;
    });
    if (cfg.kernel && grid_ok)
      c.check(cfg.kernel->n == cfg.grid.n, "kernel.n", "kernel dimension does not match grid.n");
  } else if (needs_kernel(cfg.command)) {
    c.errors.push_back("kernel: missing (required by '" + cfg.command + "')");
  }

  if (j.contains("bank")) {
    if (!j["bank"].is_array()) {
      c.errors.push_back("bank: must be an array of entries");
    } else {
      for (std::size_t i = 0; i < j["bank"].size(); ++i)
        c.guard("bank[" + std::to_string(i) + "]", [&] { cfg.bank.push_back(bank_entry_from_json(j["bank"][i])); });
    }
  }
  if (needs_bank(cfg.command)) c.check(!cfg.bank.empty() || j.contains("bank"), "bank", "missing (required by '" + cfg.command + "')");
  if (needs_bank(cfg.command) && j.contains("bank") && j["bank"].is_array())
    c.check(!j["bank"].empty(), "bank", "must not be empty");

  if (cfg.command == "h2" || cfg.command == "separation") {
    const int n = grid_ok ? cfg.grid.n : 1;
    c.check(std::isfinite(cfg.delta) && cfg.delta > n / cfg.r, "delta", "must exceed n/r");
  }

  if (grid_ok) {
    cfg.root = default_root(cfg.grid);
    if (j.contains("root")) c.guard("root", [&] { cfg.root = cube_from_json(j["root"], cfg.grid.n); });
    if (needs_root(cfg.command) || j.contains("root")) {
      c.guard("root", [&] {
        cfg.root.validate(cfg.grid);
        if (needs_root(cfg.command) && triple_cube(cfg.grid, cfg.root).clipped)
          fail(ErrorCode::Precondition, "the triple of the root cube must lie inside the domain");
      });
    }
    cfg.plan = default_plan(cfg.grid);
    if (j.contains("plan")) {
      c.guard("plan", [&] {
        const Json& pj = j["plan"];
        cfg.plan.level_min = pj.value("level_min", cfg.plan.level_min);
        cfg.plan.level_max = pj.value("level_max", cfg.plan.level_max);
        cfg.plan.subdepth = pj.value("subdepth", cfg.plan.subdepth);
        if (pj.contains("ell_offset")) cfg.plan.ell_offset = pj["ell_offset"].get<int>();
      });
    }
    c.guard("plan", [&] {
      (void)SamplePlan::dyadic(GridSpec::make(cfg.grid.n, 1), cfg.plan.level_min, cfg.plan.level_max,
                               cfg.plan.subdepth);
    });
  }

  if (j.contains("modulus")) {
    c.guard("modulus", [&] {
      DiniModulus w = modulus_from_json(j["modulus"]);
      w.validate();
      cfg.modulus = w;
    });
  } else if (cfg.command == "dini") {
    if (cfg.kernel && cfg.kernel->variant == KernelVariant::DiniSynthetic)
      cfg.modulus = cfg.kernel->modulus;
    else
      c.errors.push_back("modulus: missing (required by 'dini' without a dini kernel)");
  }

  if (j.contains("weights")) {
    if (!j["weights"].is_array()) {
      c.errors.push_back("weights: must be an array");
    } else {
      for (std::size_t i = 0; i < j["weights"].size(); ++i)
        c.guard("weights[" + std::to_string(i) + "]",
                [&] { cfg.weights.push_back(weight_spec_from_json(j["weights"][i])); });
    }
  }
  if (j.contains("p")) {
    if (!j["p"].is_array()) {
      c.errors.push_back("p: must be an array of numbers");
    } else {
      for (std::size_t i = 0; i < j["p"].size(); ++i) {
        const std::string path = "p[" + std::to_string(i) + "]";
        if (!j["p"][i].is_number()) {
          c.errors.push_back(path + ": must be a number");
          continue;
        }
        const double pi = j["p"][i].get<double>();
        c.check(std::isfinite(pi) && pi > cfg.r, path, "p_i must exceed r");
        cfg.p.push_back(pi);
      }
    }
  }
  if (cfg.command == "weights" && cfg.kernel) {
    const auto m = static_cast<std::size_t>(cfg.kernel->m);
    c.check(cfg.weights.size() == m, "weights", "need exactly m = " + std::to_string(m) + " weight specs");
    c.check(cfg.p.size() == m, "p", "need exactly m = " + std::to_string(m) + " exponents");
    if (grid_ok)
      for (std::size_t i = 0; i < cfg.weights.size(); ++i)
        c.guard("weights[" + std::to_string(i) + "]", [&] {
          const GridFunction w = cfg.weights[i].realize(cfg.grid);
          for (double x : w.values()) require(x > 0.0 && std::isfinite(x), "weights must be strictly positive");
        });
  }

  if (j.contains("ells")) {
    c.guard("ells", [&] { cfg.ells = j["ells"].get<std::vector<int>>(); });
  } else if (cfg.command == "separation") {
    cfg.ells = {2, 3, 4, 5};
  }
  for (std::size_t i = 0; i < cfg.ells.size(); ++i)
    c.check(cfg.ells[i] >= 0 && cfg.ells[i] <= 30, "ells[" + std::to_string(i) + "]", "must lie in [0, 30]");
  if (cfg.command == "separation") c.check(!cfg.ells.empty(), "ells", "must not be empty");
  if (cfg.command == "separation" && grid_ok) c.check(cfg.grid.n == 1, "grid.n", "separation runs in one dimension");
  if (cfg.plan.ell_offset)
    for (int ell : cfg.ells)
      c.guard("plan.ell_offset", [&] {
        (void)SamplePlan::dyadic(GridSpec::make(1, 1), cfg.plan.level_min, ell + *cfg.plan.ell_offset,
                                 cfg.plan.subdepth);
      });

  res.errors = std::move(c.errors);
  if (res.errors.empty()) res.config = std::move(cfg);
  return res;
}

Json canonical_config(const ExperimentConfig& cfg) {
  Json j;
  j["command"] = cfg.command;
  j["grid"] = grid_to_json(cfg.grid);
  if (cfg.kernel) j["kernel"] = kernel_to_json(*cfg.kernel);
  Json bank = Json::array();
  for (const BankEntry& e : cfg.bank) bank.push_back(bank_entry_to_json(e));
  j["bank"] = std::move(bank);
  j["r"] = cfg.r;
  j["q"] = cfg.q;
  j["delta"] = cfg.delta;
  j["gamma"] = cfg.gamma;
  j["mode"] = mode_name(cfg.mode);
  j["root"] = cube_to_json(cfg.root, cfg.grid.n);
  j["plan"] = Json{{"level_min", cfg.plan.level_min}, {"level_max", cfg.plan.level_max}, {"subdepth", cfg.plan.subdepth}};
  if (cfg.plan.ell_offset) j["plan"]["ell_offset"] = *cfg.plan.ell_offset;
  if (cfg.modulus) j["modulus"] = modulus_to_json(*cfg.modulus);
  Json w = Json::array();
  for (const WeightSpec& s : cfg.weights) w.push_back(weight_spec_to_json(s));
  j["weights"] = std::move(w);
  j["p"] = cfg.p;
  j["ells"] = cfg.ells;
  j["beta"] = cfg.beta;
  return j;
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = canonical_config(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\r\n") == std::string::npos) {
      out += f;
      continue;
    }
    out += '"';
    for (char ch : f) {
      if (ch == '"') out += '"';
      out += ch;
    }
    out += '"';
  }
  out += "\r\n";
  return out;
}

namespace {

struct Report {
  Json body;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> violations;
};

SamplePlan make_plan(const ExperimentConfig& cfg) {
  return SamplePlan::dyadic(cfg.grid, cfg.plan.level_min, cfg.plan.level_max, cfg.plan.subdepth);
}

void check_build(const BuildResult& b, const ExperimentConfig& cfg, std::size_t k, Report& rep, Json& jc) {
  const SparsityReport sp = verify_witness_sparsity(b.family, cfg.gamma);
  jc["sparsity"] = Json{{"ok", sp.ok}, {"worst_entry", sp.worst_entry}, {"worst_ratio", sp.worst_ratio}};
  if (!sp.ok) rep.violations.push_back("case " + std::to_string(k) + ": family is not sparse at the requested gamma");
  const int n = cfg.grid.n;
  for (const BuilderNodeStats& st : b.stats) {
    if ((st.e_cells << (n + 2)) > st.cube_cells)
      rep.violations.push_back("case " + std::to_string(k) + ": |E| budget exceeded at " + cube_label(st.cube, n));
    if (2 * st.selected_cells > st.cube_cells)
      rep.violations.push_back("case " + std::to_string(k) + ": selected cubes exceed half of " +
                               cube_label(st.cube, n));
  }
}

double max_tau(const SparseFamily& s) {
  double t = 0.0;
  for (const SparseEntry& e : s.entries) t = std::max(t, e.tau);
  return t;
}

Report run_kr(const ExperimentConfig& cfg) {
  Report rep;
  const EstimateReport e = hormander_constant(*cfg.kernel, cfg.grid, cfg.r, make_plan(cfg));
  rep.body["report"] = estimate_to_json(e);
  rep.header = {"variant", "L", "r", "value", "k_max", "tail_flag", "samples", "skipped"};
  rep.rows.push_back({cfg.kernel->variant_name(), std::to_string(cfg.grid.L), fmt(cfg.r), fmt(e.value),
                      std::to_string(e.k_max), e.tail_flag ? "1" : "0", std::to_string(e.samples),
                      std::to_string(e.skipped)});
  return rep;
}

Report run_h2(const ExperimentConfig& cfg) {
  Report rep;
  const EstimateReport e = h2_constant(*cfg.kernel, cfg.grid, cfg.r, cfg.delta, make_plan(cfg));
  rep.body["report"] = estimate_to_json(e);
  rep.header = {"variant", "L", "r", "delta", "value", "k_max", "tail_flag", "samples", "skipped"};
  rep.rows.push_back({cfg.kernel->variant_name(), std::to_string(cfg.grid.L), fmt(cfg.r), fmt(cfg.delta),
                      fmt(e.value), std::to_string(e.k_max), e.tail_flag ? "1" : "0", std::to_string(e.samples),
                      std::to_string(e.skipped)});
  return rep;
}

Report run_dini(const ExperimentConfig& cfg) {
  Report rep;
  const double dn = dini_norm(*cfg.modulus);
  rep.body["dini_norm"] = dn;
  rep.header = {"dini_norm", "k_1", "c_emp"};
  if (cfg.kernel && cfg.kernel->variant == KernelVariant::DiniSynthetic) {
    const EstimateReport e = hormander_constant(*cfg.kernel, cfg.grid, 1.0, make_plan(cfg));
    rep.body["k_1"] = estimate_to_json(e);
    rep.body["c_emp"] = e.value / dn;
    rep.rows.push_back({fmt(dn), fmt(e.value), fmt(e.value / dn)});
  } else {
    rep.rows.push_back({fmt(dn), "", ""});
  }
  return rep;
}

Report run_build(const ExperimentConfig& cfg, bool dominate) {
  Report rep;
  const OperatorSpec T{*cfg.kernel, cfg.grid};
  const auto bank = generate_bank(cfg.bank, cfg.grid, cfg.kernel->m);
  Json cases = Json::array();
  rep.header = dominate ? std::vector<std::string>{"case", "entries", "C_emp", "argmax_cell", "support_flag", "sparse_ok"}
                        : std::vector<std::string>{"case", "entries", "max_tau", "worst_ratio", "carleson", "sparse_ok"};
  for (std::size_t k = 0; k < bank.size(); ++k) {
    const BuildResult b = build_sparse_family(T, bank[k], cfg.root, cfg.r, cfg.mode);
    Json jc{{"case", k}};
    check_build(b, cfg, k, rep, jc);
    const bool ok = jc["sparsity"]["ok"].get<bool>();
    if (dominate) {
      const DominationReport d = domination_constant(T, bank[k], b.family, cfg.r);
      jc["domination"] = domination_to_json(d);
      if (d.support_flag)
        rep.violations.push_back("case " + std::to_string(k) + ": T f is nonzero where the sparse operator vanishes");
      rep.rows.push_back({std::to_string(k), std::to_string(b.family.entries.size()), fmt(d.c_emp),
                          std::to_string(d.argmax_cell), d.support_flag ? "1" : "0", ok ? "1" : "0"});
    } else {
      const double lam = carleson_sum(b.family);
      jc["carleson"] = lam;
      jc["max_tau"] = max_tau(b.family);
      jc["family"] = family_to_json(b.family);
      jc["stats"] = stats_to_json(b.stats, cfg.grid.n);
      rep.rows.push_back({std::to_string(k), std::to_string(b.family.entries.size()), fmt(max_tau(b.family)),
                          fmt(jc["sparsity"]["worst_ratio"].get<double>()), fmt(lam), ok ? "1" : "0"});
    }
    cases.push_back(std::move(jc));
  }
  rep.body["cases"] = std::move(cases);
  return rep;
}

Report run_maximal(const ExperimentConfig& cfg) {
  Report rep;
  const OperatorSpec T{*cfg.kernel, cfg.grid};
  const auto bank = generate_bank(cfg.bank, cfg.grid, cfg.kernel->m);
  const double kr = hormander_constant(*cfg.kernel, cfg.grid, cfg.r, make_plan(cfg)).value;
  rep.body["k_r"] = kr;
  Json cases = Json::array();
  rep.header = {"case", "c_emp", "infinite_flag", "argmax", "k_r"};
  for (std::size_t k = 0; k < bank.size(); ++k) {
    const BoundCheck b = mt_pointwise_bound_check(T, bank[k], cfg.r, kr, cfg.mode);
    cases.push_back(Json{{"case", k}, {"c_emp", b.c_emp}, {"infinite_flag", b.infinite_flag}, {"argmax", b.argmax}});
    rep.rows.push_back({std::to_string(k), fmt(b.c_emp), b.infinite_flag ? "1" : "0", std::to_string(b.argmax), fmt(kr)});
  }
  rep.body["cases"] = std::move(cases);
  return rep;
}

Report run_weights(const ExperimentConfig& cfg) {
  Report rep;
  const OperatorSpec T{*cfg.kernel, cfg.grid};
  const auto bank = generate_bank(cfg.bank, cfg.grid, cfg.kernel->m);
  WeightTuple W;
  for (const WeightSpec& s : cfg.weights) W.w.push_back(s.realize(cfg.grid));
  W.p = cfg.p;
  W.r = cfg.r;
  const WeightedNormReport r = weighted_norm_ratio(T, W, bank, cfg.mode);
  rep.body["report"] = weighted_report_to_json(r);
  rep.header = {"case", "ratio", "char", "exponent", "bound"};
  for (std::size_t k = 0; k < r.ratios.size(); ++k)
    rep.rows.push_back({std::to_string(k), fmt(r.ratios[k]), fmt(r.characteristic), fmt(r.exponent), fmt(r.bound)});
  return rep;
}

Report run_separation(const ExperimentConfig& cfg) {
  Report rep;
  rep.header = {"ell", "level_max", "k_r", "h2"};
  Json rows = Json::array();
  std::vector<double> krs, h2s;
  for (int ell : cfg.ells) {
    const int level_max = cfg.plan.ell_offset ? ell + *cfg.plan.ell_offset : cfg.plan.level_max;
    const SamplePlan plan = SamplePlan::dyadic(cfg.grid, cfg.plan.level_min, level_max, cfg.plan.subdepth);
    const KernelSpec k = KernelSpec::mpt_truncated(cfg.beta, cfg.r, ell);
    const EstimateReport kr = hormander_constant(k, cfg.grid, cfg.r, plan);
    const EstimateReport h2 = h2_constant(k, cfg.grid, cfg.r, cfg.delta, plan);
    krs.push_back(kr.value);
    h2s.push_back(h2.value);
    rows.push_back(
        Json{{"ell", ell}, {"level_max", level_max}, {"k_r", estimate_to_json(kr)}, {"h2", estimate_to_json(h2)}});
    rep.rows.push_back({std::to_string(ell), std::to_string(level_max), fmt(kr.value), fmt(h2.value)});
  }
  bool nondecreasing = true;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < h2s.size(); ++i) {
    nondecreasing = nondecreasing && h2s[i] >= h2s[i - 1];
    min_ratio = std::min(min_ratio, h2s[i] / h2s[i - 1]);
  }
  const auto [lo, hi] = std::minmax_element(krs.begin(), krs.end());
  rep.body["rows"] = std::move(rows);
  rep.body["h2_nondecreasing"] = nondecreasing;
  rep.body["h2_min_consecutive_ratio"] = h2s.size() > 1 ? min_ratio : 0.0;
  rep.body["k_r_spread"] = *lo > 0.0 ? *hi / *lo : 0.0;
  return rep;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) fail(ErrorCode::Io, "cannot open " + p.string() + " for writing");
  os << text;
  if (!os) fail(ErrorCode::Io, "failed writing " + p.string());
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  std::function<Report()> run;
  const std::string& c = cfg.command;
  if (c == "kr") run = [&] { return run_kr(cfg); };
  else if (c == "h2") run = [&] { return run_h2(cfg); };
  else if (c == "dini") run = [&] { return run_dini(cfg); };
  else if (c == "build") run = [&] { return run_build(cfg, false); };
  else if (c == "dominate") run = [&] { return run_build(cfg, true); };
  else if (c == "maximal") run = [&] { return run_maximal(cfg); };
  else if (c == "weights") run = [&] { return run_weights(cfg); };
  else if (c == "separation") run = [&] { return run_separation(cfg); };
  else fail(ErrorCode::InvalidArgument, "unknown command '" + c + "'");

  Report rep = run();
  const std::string hash = config_hash(cfg);

  Json doc;
  doc["command"] = c;
  doc["config_hash"] = hash;
  doc["config"] = canonical_config(cfg);
  doc["status"] = rep.violations.empty() ? "ok" : "invariant_violation";
  doc["violations"] = rep.violations;
  for (auto& [k, v] : rep.body.items()) doc[k] = v;

  std::string csv = csv_row([&] {
    std::vector<std::string> h{"config_hash"};
    h.insert(h.end(), rep.header.begin(), rep.header.end());
    return h;
  }());
  for (const auto& row : rep.rows) {
    std::vector<std::string> r{hash};
    r.insert(r.end(), row.begin(), row.end());
    csv += csv_row(r);
  }

  RunOutcome out;
  out.violations = rep.violations;
  out.status = rep.violations.empty() ? 0 : 2;
  const std::filesystem::path json_path = out_dir / (c + ".json");
  const std::filesystem::path csv_path = out_dir / (c + ".csv");
  try {
    std::filesystem::create_directories(out_dir);
    write_file(json_path, doc.dump(2) + "\n");
    out.files.push_back(json_path);
    write_file(csv_path, csv);
    out.files.push_back(csv_path);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(json_path, ec);
    std::filesystem::remove(csv_path, ec);
    throw;
  }
  return out;
}

}  // namespace sdom
