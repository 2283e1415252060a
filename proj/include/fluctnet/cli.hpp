#pragma once

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cgf.hpp"
#include "ldp.hpp"
#include "network.hpp"
#include "riccati.hpp"
#include "simulate.hpp"

namespace fluctnet::cli {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode { ok = 0, config_error = 2, assumption_error = 3, numeric_error = 4 };

struct ConfigError : Error { using Error::Error; };
struct AssumptionError : Error { using Error::Error; };

struct RunConfig {
  json doc;
  std::string digest;
  NetworkSpec network;
  std::filesystem::path out_dir = "out";
  std::string format = "csv";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 1;
};

inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

inline Mat matrix_from(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ConfigError(std::string(what) + ": expected a non-empty matrix");
  const size_t r = j.size();
  const size_t c = j[0].is_array() ? j[0].size() : 0;
  if (c == 0) throw ConfigError(std::string(what) + ": rows must be arrays");
  Mat M(r, c);
  for (size_t i = 0; i < r; ++i) {
    if (!j[i].is_array() || j[i].size() != c) throw ConfigError(std::string(what) + ": ragged matrix");
    for (size_t k = 0; k < c; ++k) {
      if (!j[i][k].is_number()) throw ConfigError(std::string(what) + ": non-numeric entry");
      M(i, k) = j[i][k].get<double>();
    }
  }
  return M;
}

inline Vec vector_from(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + ": expected an array");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(std::string(what) + ": non-numeric entry");
    v(i) = j[i].get<double>();
  }
  return v;
}

inline double number_at(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError(std::string(key) + " must be a number");
  return j[key].get<double>();
}

// list, or {"start", "stop", "count"}
inline std::vector<double> grid_from(const json& j, const char* what) {
  std::vector<double> g;
  if (j.is_array()) {
    for (const auto& v : j) {
      if (!v.is_number()) throw ConfigError(std::string(what) + ": non-numeric entry");
      g.push_back(v.get<double>());
    }
  } else if (j.is_object()) {
    double a = number_at(j, "start", 0.0), b = number_at(j, "stop", 0.0);
    int n = static_cast<int>(number_at(j, "count", 0));
    if (n < 1) throw ConfigError(std::string(what) + ": count must be positive");
    for (int i = 0; i < n; ++i) g.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  } else {
    throw ConfigError(std::string(what) + ": expected an array or {start, stop, count}");
  }
  for (size_t i = 1; i < g.size(); ++i)
    if (!(g[i] > g[i - 1])) throw ConfigError(std::string(what) + ": grid must be strictly increasing");
  return g;
}

inline NetworkSpec network_from(const json& j) {
  if (!j.is_object()) throw ConfigError("network must be an object");
  NetworkSpec spec;
  std::string preset = j.value("preset", "");
  if (preset == "triangular") {
    spec = triangular_network(number_at(j, "u", 0.0), number_at(j, "v", 0.0),
                              number_at(j, "theta_bar", 1.0),
                              number_at(j, "a", 1.0 / (2.0 * std::sqrt(2.0))), number_at(j, "b", 0.25),
                              number_at(j, "gamma", 1.0));
  } else if (preset == "jacobi_chain") {
    if (!j.contains("b") || !j.contains("a")) throw ConfigError("jacobi_chain needs b and a");
    Vec b = vector_from(j["b"], "b"), a = vector_from(j["a"], "a");
    Vec g = vector_from(j.value("gamma", json::array({1.0, 1.0})), "gamma");
    Vec t = vector_from(j.value("temperature", json::array({1.0, 1.0})), "temperature");
    if (g.size() != 2 || t.size() != 2) throw ConfigError("gamma and temperature need two entries");
    try {
      spec = jacobi_chain(b, a, g(0), g(1), t(0), t(1));
    } catch (const ModelError& e) {
      throw ConfigError(e.what());
    }
  } else if (preset.empty()) {
    if (!j.contains("omega_sq")) throw ConfigError("network.omega_sq missing");
    spec.omega_sq = matrix_from(j["omega_sq"], "omega_sq");
    if (j.contains("boundary")) {
      if (!j["boundary"].is_array()) throw ConfigError("boundary must be an array");
      for (const auto& r : j["boundary"]) {
        if (!r.is_object() || !r.contains("site")) throw ConfigError("boundary entries need a site");
        spec.boundary.push_back({r["site"].get<int>(), number_at(r, "gamma", 1.0),
                                 number_at(r, "temperature", 1.0)});
      }
    }
  } else {
    throw ConfigError("unknown network preset '" + preset + "'");
  }
  if (j.contains("quasi_markov")) {
    const json& q = j["quasi_markov"];
    QuasiMarkovSpec qm;
    qm.Lambda = matrix_from(q.at("Lambda"), "Lambda");
    qm.iota = matrix_from(q.at("iota"), "iota");
    qm.temperatures = vector_from(q.at("temperatures"), "temperatures");
    spec.quasi_markov = qm;
  }
  return spec;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig cfg;
  cfg.digest = "fnv1a64:" + hex64(fnv1a64(ss.str()));
  try {
    cfg.doc = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!cfg.doc.is_object() || !cfg.doc.contains("network")) throw ConfigError("config needs a network");
  try {
    cfg.network = network_from(cfg.doc["network"]);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad network: ") + e.what());
  }
  if (cfg.doc.contains("output")) {
    const json& o = cfg.doc["output"];
    if (o.contains("dir")) cfg.out_dir = o["dir"].get<std::string>();
    if (o.contains("format")) cfg.format = o["format"].get<std::string>();
  }
  if (cfg.doc.contains("seed")) {
    cfg.seed = cfg.doc["seed"].get<std::uint64_t>();
    cfg.seed_given = true;
  }
  return cfg;
}

inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json jnum(double v) {
  if (std::isfinite(v)) return v;
  return num(v);
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> meta;
};

// Files are staged in memory and only written once every command step succeeded.
struct Outputs {
  std::map<std::string, std::string> files;
};

inline std::vector<std::pair<std::string, std::string>> header_meta(const RunConfig& cfg) {
  return {{"tool", std::string("fluctnet ") + kVersion},
          {"config_digest", cfg.digest},
          {"seed", cfg.seed_given ? std::to_string(cfg.seed) : "none"}};
}

inline std::string render_csv(const Table& t) {
  std::ostringstream os;
  for (const auto& [k, v] : t.meta) os << "# " << k << " = " << v << "\n";
  for (size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& r : t.rows) {
    for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << num(r[i]);
    os << "\n";
  }
  return os.str();
}

inline std::string render_json(const Table& t) {
  json j;
  for (const auto& [k, v] : t.meta) j["meta"][k] = v;
  j["columns"] = t.columns;
  for (size_t c = 0; c < t.columns.size(); ++c) {
    json col = json::array();
    for (const auto& r : t.rows) col.push_back(jnum(r[c]));
    j["data"][t.columns[c]] = col;
  }
  return j.dump(2) + "\n";
}

inline void stage_table(Outputs& out, const RunConfig& cfg, const std::string& stem, const Table& t) {
  if (cfg.format == "json")
    out.files[stem + ".json"] = render_json(t);
  else
    out.files[stem + ".csv"] = render_csv(t);
}

inline void commit(const Outputs& out, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, text] : out.files) {
    auto tmp = dir / (name + ".tmp");
    {
      std::ofstream f(tmp, std::ios::binary);
      f << text;
      if (!f) throw NumericError("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, dir / name);
  }
}

inline SystemMatrices checked_system(const RunConfig& cfg) {
  SystemMatrices s;
  try {
    s = build(cfg.network);
  } catch (const ModelError& e) {
    throw ConfigError(e.what());
  }
  auto c = controllability(s.A, s.Q);
  if (!c.controllable)
    throw AssumptionError("network is not controllable (rank " + std::to_string(c.rank) + " of " +
                          std::to_string(s.dim) + ")");
  return s;
}

inline json section(const RunConfig& cfg, const char* name) {
  return cfg.doc.contains(name) ? cfg.doc[name] : json::object();
}

inline std::vector<double> default_alpha_grid(double kappa_c, int count) {
  std::vector<double> g;
  double lo = std::isinf(kappa_c) ? -1.0 : 0.5 - kappa_c;
  double hi = std::isinf(kappa_c) ? 2.0 : 0.5 + kappa_c;
  for (int i = 1; i <= count; ++i) g.push_back(lo + (hi - lo) * i / (count + 1));
  return g;
}

inline Outputs cmd_steady(const RunConfig& cfg) {
  SystemMatrices s = checked_system(cfg);
  SteadyState st = steady_state(s);
  auto c = controllability(s.A, s.Q);
  ValidationReport rep = validate_structure(s);
  json j;
  for (const auto& [k, v] : header_meta(cfg)) j["meta"][k] = v;
  j["dim"] = s.dim;
  j["M"] = std::vector<double>(st.M.data(), st.M.data() + st.M.size());  // symmetric, row-major
  j["ep"] = st.ep;
  j["controllability_rank"] = c.rank;
  j["kappa_0"] = jnum(kappa_zero(s));
  json items = json::array();
  for (const auto& it : rep.items) items.push_back({{"constraint", it.name}, {"residual", it.residual}, {"pass", it.pass}});
  j["structure"] = {{"passed", rep.passed}, {"sigma", rep.sigma}, {"items", items}};
  Outputs out;
  out.files["steady.json"] = j.dump(2) + "\n";
  return out;
}

inline Outputs cmd_cgf(const RunConfig& cfg) {
  SystemMatrices s = checked_system(cfg);
  json sec = section(cfg, "cgf");
  CriticalExponents ce = critical_kappa(s);
  std::vector<double> grid = sec.contains("alpha_grid") ? grid_from(sec["alpha_grid"], "alpha_grid")
                                                        : default_alpha_grid(ce.kappa_c, 41);
  Table t;
  t.columns = {"alpha", "e_integral", "e_spectral", "e_prime"};
  t.meta = header_meta(cfg);
  t.meta.push_back({"eps_minus", num(ce.eps_minus)});
  t.meta.push_back({"eps_plus", num(ce.eps_plus)});
  t.meta.push_back({"kappa_c", num(ce.kappa_c)});
  double worst = 0.0;
  for (double a : grid) {
    if (!in_critical_interval(a, ce.kappa_c)) throw ConfigError("alpha " + num(a) + " outside the critical interval");
    bool edge = !std::isinf(ce.kappa_c) && std::abs(a - 0.5) >= ce.kappa_c - 1e-9;
    std::vector<double> br;
    if (edge) br = ce.omega_peaks;
    double ei = cgf_integral(s, a, 1e-7, br);
    double es = cgf_spectral(s, a);
    double ed = edge ? (a > 0.5 ? kInf : -kInf) : cgf_derivative_riccati(s, a, ce.kappa_c);
    worst = std::max(worst, std::abs(ei - es));
    t.rows.push_back({a, ei, es, ed});
  }
  if (worst > 1e-6) throw NumericError("integral and spectral routes disagree by " + num(worst));
  Outputs out;
  stage_table(out, cfg, "cgf", t);
  return out;
}

inline FunctionalKind functional_from(const json& sec, const SystemMatrices& s) {
  static const std::map<std::string, FunctionalTag> tags = {
      {"canonical", FunctionalTag::canonical},
      {"tde_steady", FunctionalTag::tde_steady},
      {"tde_transient", FunctionalTag::tde_transient},
      {"tde_quasi_markov", FunctionalTag::tde_quasi_markov},
      {"entropy_production", FunctionalTag::entropy_production},
      {"canonical_transient", FunctionalTag::canonical_transient}};
  std::string name = sec.value("functional", "canonical");
  auto it = tags.find(name);
  if (it == tags.end()) throw ConfigError("unknown functional '" + name + "'");
  FunctionalKind k;
  k.tag = it->second;
  if (sec.contains("N")) {
    k.N = matrix_from(sec["N"], "N");
    if (k.N->rows() != s.dim || k.N->cols() != s.dim) throw ConfigError("N has the wrong shape");
  }
  if (k.tag == FunctionalTag::canonical_transient && !k.N) throw ConfigError("canonical_transient needs N");
  if (k.tag == FunctionalTag::tde_quasi_markov && !s.quasi_markov)
    throw ConfigError("tde_quasi_markov needs a quasi-Markovian network");
  return k;
}

inline Outputs cmd_rate(const RunConfig& cfg) {
  SystemMatrices s = checked_system(cfg);
  json sec = section(cfg, "rate");
  FunctionalKind kind = functional_from(sec, s);
  SteadyState st = steady_state(s);
  CriticalExponents ce = critical_kappa(s);
  CgfModel m(s, ce.kappa_c, st.ep);
  std::vector<double> sg;
  if (sec.contains("s_grid")) {
    sg = grid_from(sec["s_grid"], "s_grid");
  } else {
    double r = st.ep > 0 ? 3.0 * st.ep : 1.0;
    for (int i = 0; i < 61; ++i) sg.push_back(-r + 2.0 * r * i / 60.0);
  }
  FunctionalDomain d = functional_domain(s, kind, ce.kappa_c, st.M);
  RateValues I = rate_function(m, sg);
  ExtendedRate J = extended_rate(m, d, sg);
  std::vector<double> sym(sg.size(), std::numeric_limits<double>::quiet_NaN());
  try {
    sym = symmetry_function(J.values, sg);
  } catch (const ArgumentError&) {
    std::cerr << "fluctnet: s_grid is not symmetric, symmetry column left empty\n";
  }
  std::vector<double> cr_grid;
  if (std::isinf(ce.kappa_c)) {
    for (int i = 0; i <= 20; ++i) cr_grid.push_back(-1.0 + 3.0 * i / 20.0);
  } else {
    for (int i = 0; i <= 20; ++i) cr_grid.push_back(0.5 - ce.kappa_c + 2.0 * ce.kappa_c * i / 20.0);
  }
  auto cr = check_condition_r(s, cr_grid, ce.kappa_c);
  double crmin = *std::min_element(cr.begin(), cr.end());
  Table t;
  t.columns = {"s", "I", "J", "symmetry"};
  t.meta = header_meta(cfg);
  t.meta.push_back({"functional", sec.value("functional", "canonical")});
  t.meta.push_back({"alpha_minus", num(d.alpha_minus)});
  t.meta.push_back({"alpha_plus", num(d.alpha_plus)});
  t.meta.push_back({"eta_minus", num(J.eta_minus)});
  t.meta.push_back({"eta_plus", num(J.eta_plus)});
  t.meta.push_back({"kappa_c", num(ce.kappa_c)});
  t.meta.push_back({"ep", num(st.ep)});
  t.meta.push_back({"condition_R", crmin > 0 ? "true" : "false"});
  t.meta.push_back({"condition_R_min", num(crmin)});
  for (size_t i = 0; i < sg.size(); ++i) t.rows.push_back({sg[i], I.values[i], J.values[i], sym[i]});
  Outputs out;
  stage_table(out, cfg, "rate", t);
  return out;
}

inline Outputs cmd_simulate(const RunConfig& cfg) {
  SystemMatrices s = checked_system(cfg);
  json sec = section(cfg, "simulate");
  if (!cfg.seed_given) throw ConfigError("simulation requires a seed");
  SimulationOptions opt;
  opt.t = number_at(sec, "t", 10.0);
  opt.dt = number_at(sec, "dt", 0.01);
  opt.n_traj = static_cast<int>(number_at(sec, "n_traj", 1000));
  opt.seed = cfg.seed;
  opt.threads = cfg.threads;
  std::vector<double> alphas = sec.contains("alphas") ? grid_from(sec["alphas"], "alphas")
                                                      : std::vector<double>{0.25, 0.5, 0.75};
  SafeBand band;
  if (sec.contains("safe_band")) {
    Vec b = vector_from(sec["safe_band"], "safe_band");
    if (b.size() != 2) throw ConfigError("safe_band needs two entries");
    band = {b(0), b(1)};
  }
  for (double a : alphas)
    if (a < band.lo || a > band.hi) throw ConfigError("alpha " + num(a) + " outside the safe band");
  try {
    step_count(opt.t, opt.dt);
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
  TrajectoryBatch b = simulate_batch(s, opt);
  auto est = empirical_cgf(b.canonical, alphas, b.t_final, band);
  const int N = step_count(opt.t, opt.dt);
  Table t;
  t.columns = {"alpha", "e_t", "std_error", "ess", "oracle"};
  t.meta = header_meta(cfg);
  t.meta.push_back({"t", num(b.t_final)});
  t.meta.push_back({"dt", num(opt.dt)});
  t.meta.push_back({"n_traj", std::to_string(opt.n_traj)});
  for (const auto& e : est) {
    double orc = std::numeric_limits<double>::quiet_NaN();
    try {
      orc = path_oracle_cgf(s, e.alpha, b.t_final, N);
    } catch (const DomainError&) {
    }
    if (e.low_ess) std::cerr << "fluctnet: alpha " << num(e.alpha) << " effective sample size " << num(e.ess) << " < 100\n";
    t.rows.push_back({e.alpha, e.value, e.std_error, e.ess, orc});
  }
  Outputs out;
  stage_table(out, cfg, "sim", t);
  JarzynskiCheck jz = jarzynski(b.canonical);
  json jj;
  for (const auto& [k, v] : header_meta(cfg)) jj["meta"][k] = v;
  jj["mean_exp_minus_S"] = jnum(jz.mean);
  jj["std_error"] = jnum(jz.std_error);
  jj["z_score"] = jnum(jz.z);
  jj["within_3_se"] = std::abs(jz.z) <= 3.0;
  double tde_mean = 0.0;
  for (double v : b.tde) tde_mean += v;
  jj["tde_rate"] = jnum(tde_mean / b.n_traj / b.t_final);
  jj["ep"] = steady_state(s).ep;
  out.files["jarzynski.json"] = jj.dump(2) + "\n";
  if (sec.value("raw_samples", false)) {
    Table raw;
    raw.columns = {"traj_id", "S_tde", "S_canonical"};
    raw.meta = header_meta(cfg);
    for (int i = 0; i < b.n_traj; ++i) raw.rows.push_back({static_cast<double>(i), b.tde[i], b.canonical[i]});
    out.files["samples.csv"] = render_csv(raw);
  }
  return out;
}

inline Outputs cmd_scan(const RunConfig& cfg) {
  json sec = section(cfg, "scan");
  std::vector<double> us = grid_from(sec.value("u", json{{"start", 0.05}, {"stop", 0.95}, {"count", 10}}), "u");
  std::vector<double> vs = grid_from(sec.value("v", json{{"start", 0.0}, {"stop", 0.9}, {"count", 10}}), "v");
  const int cr_points = static_cast<int>(number_at(sec, "condition_r_points", 21));
  json net = cfg.doc["network"];
  if (net.value("preset", "") != "triangular") throw ConfigError("scan needs the triangular preset");
  struct Cell { double u, v, inv_kc, ep, crmin; };
  std::vector<Cell> cells;
  for (double u : us)
    for (double v : vs) cells.push_back({u, v, 0, 0, 0});
  parallel_for(static_cast<int>(cells.size()), cfg.threads, [&](int i) {
    Cell& c = cells[i];
    const double nan = std::numeric_limits<double>::quiet_NaN();
    try {
      json nj = net;
      nj["u"] = c.u;
      nj["v"] = c.v;
      SystemMatrices s = build(network_from(nj));
      CriticalExponents ce = critical_kappa(s);
      c.inv_kc = std::isinf(ce.kappa_c) ? 0.0 : 1.0 / ce.kappa_c;
      c.ep = steady_state(s).ep;
      std::vector<double> g;
      double kc = std::isinf(ce.kappa_c) ? 1.5 : ce.kappa_c;
      for (int k = 0; k < cr_points; ++k) g.push_back(0.5 - kc + 2.0 * kc * k / (cr_points - 1));
      auto cr = check_condition_r(s, g, ce.kappa_c);
      c.crmin = *std::min_element(cr.begin(), cr.end());
    } catch (const std::exception& e) {
      c.inv_kc = c.ep = c.crmin = nan;
      std::cerr << "fluctnet: scan point (" << num(c.u) << ", " << num(c.v) << ") failed: " << e.what() << "\n";
    }
  });
  Table t;
  t.columns = {"u", "v", "inv_kappa_c", "ep", "min_condition_R"};
  t.meta = header_meta(cfg);
  for (const auto& c : cells) t.rows.push_back({c.u, c.v, c.inv_kc, c.ep, c.crmin});
  Outputs out;
  stage_table(out, cfg, "scan", t);
  return out;
}

// Runs one subcommand and maps failures to exit codes; nothing is written on failure.
inline int run_command(const std::string& name, RunConfig cfg, std::ostream& err = std::cerr) {
  try {
    if (cfg.format != "csv" && cfg.format != "json") throw ConfigError("format must be csv or json");
    if (cfg.threads < 1) throw ConfigError("threads must be positive");
    Outputs out;
    if (name == "steady") out = cmd_steady(cfg);
    else if (name == "cgf") out = cmd_cgf(cfg);
    else if (name == "rate") out = cmd_rate(cfg);
    else if (name == "simulate") out = cmd_simulate(cfg);
    else if (name == "scan") out = cmd_scan(cfg);
    else throw ConfigError("unknown command '" + name + "'");
    commit(out, cfg.out_dir);
    return ok;
  } catch (const ConfigError& e) {
    err << "fluctnet: config error: " << e.what() << "\n";
    return config_error;
  } catch (const json::exception& e) {
    err << "fluctnet: config error: " << e.what() << "\n";
    return config_error;
  } catch (const AssumptionError& e) {
    err << "fluctnet: " << e.what() << "\n";
    return assumption_error;
  } catch (const ModelError& e) {
    err << "fluctnet: config error: " << e.what() << "\n";
    return config_error;
  } catch (const std::exception& e) {
    err << "fluctnet: numeric failure: " << e.what() << "\n";
    return numeric_error;
  }
}

inline int run_file(const std::string& name, const std::string& config_path,
                    const std::string& out_dir, const std::string& format, int threads,
                    std::optional<std::uint64_t> seed, std::ostream& err = std::cerr) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    err << "fluctnet: config error: " << e.what() << "\n";
    return config_error;
  } catch (const json::exception& e) {
    err << "fluctnet: config error: " << e.what() << "\n";
    return config_error;
  }
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (!format.empty()) cfg.format = format;
  if (seed) {
    cfg.seed = *seed;
    cfg.seed_given = true;
  }
  cfg.threads = threads;
  return run_command(name, cfg, err);
}

}  // namespace fluctnet::cli
