#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "annealed_ising/configmodel.hpp"
#include "annealed_ising/errors.hpp"
#include "annealed_ising/finite.hpp"
#include "annealed_ising/gtable.hpp"
#include "annealed_ising/quenched.hpp"
#include "annealed_ising/regular.hpp"
#include "annealed_ising/sampler.hpp"
#include "annealed_ising/verify.hpp"

namespace aising::cli {

using nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kDomainError = 1, kVerifyFailed = 2 };

/// Round-trip decimal form of a double.
inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Either a comma list "a,b,c" or an inclusive range "start:stop:step"; a
/// range includes stop when it is hit within 1e-12.
inline std::vector<double> parse_grid(const std::string& text) {
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw DomainError("bad number '" + s + "' in grid '" + text + "'");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw DomainError("grid '" + text + "' must be start:stop:step");
    const double start = to_double(parts[0]);
    const double stop = to_double(parts[1]);
    const double step = to_double(parts[2]);
    if (!(step > 0.0) || !(stop >= start)) {
      throw DomainError("grid '" + text + "' needs step > 0 and stop >= start");
    }
    const double span = (stop - start) / step;
    if (span > 1e6) throw DomainError("grid '" + text + "' has more than 10^6 points");
    const auto count = static_cast<long>(std::floor(span + 1e-12)) + 1;
    for (long i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
    if (std::fabs(out.back() - stop) <= 1e-12) out.back() = stop;
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(to_double(p));
  }
  if (out.empty()) throw DomainError("empty grid");
  return out;
}

inline std::vector<long> parse_int_grid(const std::string& text) {
  std::vector<long> out;
  for (double v : parse_grid(text)) {
    if (v != std::round(v)) throw DomainError("grid '" + text + "' must hold integers");
    out.push_back(static_cast<long>(std::llround(v)));
  }
  return out;
}

/// Every option of every command; each command reads its own subset.
struct RunConfig {
  std::string command;
  double beta = 0.0;
  double B = 0.0;
  int d = 3;
  std::string beta_grid = "0";
  std::string B_grid = "0";
  std::string n_list;
  std::string eps_list = "0.05,0.1";
  bool law = false;
  std::string dist;
  int g_curve = 0;
  std::string suite = "all";
  std::string kind = "graph";
  long n = 0;
  long k = 0;
  long m = 0;
  std::string degrees;
  std::string vertex_set;
  long samples = 100000;
  std::string format;  // empty: the command's default
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

namespace detail {

// Flags a command echoes into its JSON "config" block; re-reading that block
// with --config reproduces the run.
inline ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["command"] = c.command;
  if (c.command == "pressure") {
    j["beta"] = c.beta;
    j["B"] = c.B;
    j["d"] = c.d;
  } else if (c.command == "phase-diagram") {
    j["d"] = c.d;
    j["beta"] = c.beta_grid;
    j["B"] = c.B_grid;
  } else if (c.command == "finite-n") {
    j["beta"] = c.beta;
    j["B"] = c.B;
    j["d"] = c.d;
    j["n"] = c.n_list;
    j["eps"] = c.eps_list;
    if (c.law) j["law"] = true;
  } else if (c.command == "config-model") {
    j["dist"] = c.dist;
    j["beta"] = c.beta_grid;
    j["B"] = c.B_grid;
    if (c.g_curve > 0) j["g-curve"] = c.g_curve;
  } else if (c.command == "verify") {
    j["suite"] = c.suite;
    j["seed"] = c.seed;
  } else if (c.command == "sample") {
    j["kind"] = c.kind;
    if (c.kind == "graph") {
      if (!c.degrees.empty()) {
        j["degrees"] = c.degrees;
      } else {
        j["n"] = c.n;
        j["d"] = c.d;
      }
    } else if (c.kind == "matching") {
      j["m"] = c.m;
    } else if (c.kind == "mc-g") {
      j["beta"] = c.beta;
      j["k"] = c.k;
      j["m"] = c.m;
      j["samples"] = c.samples;
    } else if (c.kind == "mc-ez") {
      j["beta"] = c.beta;
      j["B"] = c.B;
      j["d"] = c.d;
      j["n"] = c.n;
      j["samples"] = c.samples;
    } else if (c.kind == "cut-test") {
      j["n"] = c.n;
      j["d"] = c.d;
      j["set"] = c.vertex_set;
      j["samples"] = c.samples;
    }
    j["seed"] = c.seed;
  }
  return j;
}

// Turns a config file into leading command-line tokens. Accepts either a bare
// flag object or a previous JSON output carrying a "config" block.
inline std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read config file '" + path + "'");
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw DomainError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (j.contains("config")) j = j["config"];
  if (!j.is_object() || !j.contains("command") || !j["command"].is_string()) {
    throw DomainError("config file '" + path + "' needs a string \"command\"");
  }
  std::vector<std::string> tokens{j["command"].get<std::string>()};
  for (const auto& [key, value] : j.items()) {
    if (key == "command") continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) tokens.push_back("--" + key);
      continue;
    }
    tokens.push_back("--" + key);
    if (value.is_string()) {
      tokens.push_back(value.get<std::string>());
    } else if (value.is_number_unsigned()) {
      tokens.push_back(std::to_string(value.get<std::uint64_t>()));
    } else if (value.is_number_integer()) {
      tokens.push_back(std::to_string(value.get<std::int64_t>()));
    } else if (value.is_number_float()) {
      tokens.push_back(num(value.get<double>()));
    } else {
      throw DomainError("config key '" + key + "' must be a string, number or boolean");
    }
  }
  return tokens;
}

inline void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
  out << '\n';
}

inline std::string bool_cell(bool b) { return b ? "1" : "0"; }

inline void emit_json(std::ostream& out, const ordered_json& j) { out << j.dump(2) << '\n'; }

inline ordered_json thermo_json(const ThermoResult& r) {
  return {{"psi", r.psi}, {"t_star", r.t_star}, {"M", r.M}, {"chi", r.chi}, {"in_U", r.in_U}};
}

inline int cmd_pressure(const RunConfig& c, std::ostream& out) {
  const ModelParams p{c.beta, c.B, c.d};
  const ThermoResult r = pressure(p);
  const QuenchedResult q = quenched_pressure(p);
  const double beta_c = critical_beta(c.d);
  if (c.format == "csv") {
    out << "beta,B,d,psi,t_star,M,chi,in_U,beta_c,h_star,u_star,psi_tilde\n";
    write_csv_row(out, {num(c.beta), num(c.B), std::to_string(c.d), num(r.psi), num(r.t_star),
                        num(r.M), num(r.chi), bool_cell(r.in_U), num(beta_c), num(q.h_star),
                        num(q.u_star), num(q.psi_tilde)});
    return kOk;
  }
  ordered_json j;
  j["config"] = config_json(c);
  j["result"] = thermo_json(r);
  j["result"]["beta_c"] = beta_c;
  j["quenched"] = {{"h_star", q.h_star}, {"u_star", q.u_star}, {"psi_tilde", q.psi_tilde}};
  emit_json(out, j);
  return kOk;
}

inline int cmd_phase_diagram(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto rows = phase_diagram(c.d, parse_grid(c.beta_grid), parse_grid(c.B_grid));
  int status = kOk;
  for (const auto& row : rows) {
    if (!row.result) {
      err << "error at beta=" << num(row.beta) << " B=" << num(row.B) << ": " << row.error << '\n';
      status = kDomainError;
    }
  }
  if (c.format == "json") {
    ordered_json j;
    j["config"] = config_json(c);
    j["rows"] = ordered_json::array();
    for (const auto& row : rows) {
      ordered_json r = {{"beta", row.beta}, {"B", row.B}, {"d", row.d}};
      if (row.result) {
        r.update(thermo_json(*row.result));
      } else {
        r["error"] = row.error;
      }
      j["rows"].push_back(r);
    }
    emit_json(out, j);
    return status;
  }
  out << "beta,B,d,psi,t_star,M,chi,in_U\n";
  for (const auto& row : rows) {
    if (!row.result) {
      write_csv_row(out, {num(row.beta), num(row.B), std::to_string(row.d), "nan", "nan", "nan",
                          "nan", ""});
      continue;
    }
    const ThermoResult& r = *row.result;
    write_csv_row(out, {num(row.beta), num(row.B), std::to_string(row.d), num(r.psi),
                        num(r.t_star), num(r.M), num(r.chi), bool_cell(r.in_U)});
  }
  return status;
}

inline int cmd_finite_n(const RunConfig& c, std::ostream& out) {
  if (c.n_list.empty()) throw DomainError("finite-n needs --n");
  const ModelParams p{c.beta, c.B, c.d};
  const auto ns = parse_int_grid(c.n_list);
  const auto eps = parse_grid(c.eps_list);
  if (c.law) {
    if (ns.size() != 1) throw DomainError("--law needs a single --n");
    const SpinCountLaw law = spin_count_law(ns.front(), p);
    if (c.format == "json") {
      ordered_json j;
      j["config"] = config_json(c);
      j["log_p"] = law.log_p;
      emit_json(out, j);
      return kOk;
    }
    out << "j,x,log_p,p\n";
    for (long jx = 0; jx <= law.n; ++jx) {
      write_csv_row(out, {std::to_string(jx), num(law.x(jx)), num(law.log_p[jx]), num(law.p[jx])});
    }
    return kOk;
  }
  const ThermoResult limit = pressure(p);
  std::vector<LimitTheoremReport> reports;
  for (long n : ns) reports.push_back(limit_theorem_report(spin_count_law(n, p), eps));
  if (c.format == "json") {
    ordered_json j;
    j["config"] = config_json(c);
    j["limit"] = thermo_json(limit);
    j["rows"] = ordered_json::array();
    for (const auto& r : reports) {
      ordered_json row = {{"n", r.n},         {"psi_n", r.thermo.psi_n},
                          {"M_n", r.thermo.M_n}, {"chi_n", r.thermo.chi_n},
                          {"kolmogorov", r.kolmogorov}};
      row["tails"] = ordered_json::array();
      for (const auto& t : r.lln) {
        row["tails"].push_back({{"epsilon", t.epsilon},
                                {"tail", t.tail},
                                {"log_tail", t.log_tail},
                                {"tail_limit", t.tail_limit}});
      }
      if (r.bimodal) {
        row["bimodal"] = {{"nu", r.bimodal->nu},
                          {"window", r.bimodal->window},
                          {"plus", r.bimodal->plus},
                          {"minus", r.bimodal->minus}};
      } else {
        row["bimodal"] = nullptr;
      }
      j["rows"].push_back(row);
    }
    emit_json(out, j);
    return kOk;
  }
  std::vector<std::string> header = {"n", "psi_n", "M_n", "chi_n", "psi", "M", "chi", "kolmogorov"};
  for (double e : eps) {
    char label[32];
    std::snprintf(label, sizeof label, "%g", e);
    header.push_back(std::string("tail_") + label);
    header.push_back(std::string("log_tail_") + label);
  }
  header.insert(header.end(), {"bimodal_plus", "bimodal_minus"});
  write_csv_row(out, header);
  for (const auto& r : reports) {
    std::vector<std::string> row = {std::to_string(r.n), num(r.thermo.psi_n), num(r.thermo.M_n),
                                    num(r.thermo.chi_n), num(limit.psi), num(limit.M),
                                    num(limit.chi), num(r.kolmogorov)};
    for (const auto& t : r.lln) {
      row.push_back(num(t.tail));
      row.push_back(num(t.log_tail));
    }
    row.push_back(r.bimodal ? num(r.bimodal->plus) : "");
    row.push_back(r.bimodal ? num(r.bimodal->minus) : "");
    write_csv_row(out, row);
  }
  return kOk;
}

inline int cmd_config_model(const RunConfig& c, std::ostream& out) {
  if (c.dist.empty()) throw DomainError("config-model needs --dist");
  const DegreeDistribution dist = DegreeDistribution::parse(c.dist);
  const auto betas = parse_grid(c.beta_grid);
  const auto fields = parse_grid(c.B_grid);
  if (c.g_curve > 0) {
    if (betas.size() != 1) throw DomainError("--g-curve needs a single --beta");
    write_G_curve(out, GSolver(dist, betas.front()), c.g_curve);
    return kOk;
  }
  struct Row {
    double beta;
    double B;
    CmThermo th;
  };
  std::vector<Row> rows;
  for (double beta : betas) {
    const GSolver solver(dist, beta);
    for (double B : fields) rows.push_back({beta, B, cm_thermo(solver, B)});
  }
  if (c.format == "json") {
    ordered_json j;
    j["config"] = config_json(c);
    j["rows"] = ordered_json::array();
    for (const auto& r : rows) {
      j["rows"].push_back({{"beta", r.beta},
                           {"B", r.B},
                           {"psi", r.th.psi},
                           {"t_star", r.th.t_star},
                           {"M", r.th.M},
                           {"chi", r.th.chi}});
    }
    j["truncation"] = dist.truncation();
    j["log_tail_bound"] = dist.log_tail_bound();
    emit_json(out, j);
    return kOk;
  }
  out << "dist,beta,B,psi,t_star,M,chi\n";
  for (const auto& r : rows) {
    write_csv_row(out, {dist.spec(), num(r.beta), num(r.B), num(r.th.psi), num(r.th.t_star),
                        num(r.th.M), num(r.th.chi)});
  }
  return kOk;
}

inline int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto rows = run_verify_suite(c.suite, c.seed);
  long passed = 0;
  for (const auto& r : rows) passed += r.pass ? 1 : 0;
  if (c.format == "json") {
    ordered_json j;
    j["config"] = config_json(c);
    j["rows"] = ordered_json::array();
    for (const auto& r : rows) {
      j["rows"].push_back({{"suite", r.suite},
                           {"label", r.label},
                           {"value", r.value},
                           {"reference", r.reference},
                           {"abs_diff", r.abs_diff},
                           {"tolerance", r.tolerance},
                           {"pass", r.pass}});
    }
    j["passed"] = passed;
    j["total"] = rows.size();
    emit_json(out, j);
  } else {
    out << "suite,label,value,reference,abs_diff,tolerance,pass\n";
    for (const auto& r : rows) {
      write_csv_row(out, {r.suite, r.label, num(r.value), num(r.reference), num(r.abs_diff),
                          num(r.tolerance), bool_cell(r.pass)});
    }
  }
  err << "verify " << c.suite << ": " << passed << "/" << rows.size() << " checks passed\n";
  return passed == static_cast<long>(rows.size()) ? kOk : kVerifyFailed;
}

inline int cmd_sample(const RunConfig& c, std::ostream& out) {
  const bool json = c.format == "json";
  if (c.kind == "graph") {
    std::vector<long> degrees;
    if (!c.degrees.empty()) {
      degrees = parse_int_grid(c.degrees);
    } else {
      if (c.n < 1) throw DomainError("sample graph needs --n and --d, or --degrees");
      if ((c.n * c.d) % 2 != 0) {
        throw DomainError("d*n = " + std::to_string(c.n * c.d) +
                          " is odd: the half-edges cannot be paired into a perfect matching");
      }
      degrees.assign(static_cast<std::size_t>(c.n), c.d);
    }
    const EdgeList edges = sample_degree_graph(degrees, c.seed);
    if (json) {
      ordered_json j;
      j["config"] = config_json(c);
      j["edges"] = edges;
      emit_json(out, j);
    } else {
      write_edge_list_csv(out, edges);
    }
    return kOk;
  }
  if (c.kind == "matching") {
    const Matching mt = sample_matching(c.m, c.seed);
    if (json) {
      ordered_json j;
      j["config"] = config_json(c);
      j["pairs"] = mt.pairs;
      emit_json(out, j);
    } else {
      out << "a,b\n";
      for (const auto& [a, b] : mt.pairs) out << a << ',' << b << '\n';
    }
    return kOk;
  }
  auto estimate_out = [&](const McEstimate& mc, double exact) {
    if (json) {
      ordered_json j;
      j["config"] = config_json(c);
      j["result"] = {{"estimate", mc.estimate}, {"std_error", mc.std_error}, {"exact", exact}};
      emit_json(out, j);
    } else {
      out << "estimate,std_error,exact\n";
      write_csv_row(out, {num(mc.estimate), num(mc.std_error), num(exact)});
    }
  };
  if (c.kind == "mc-g") {
    const McEstimate mc = mc_estimate_g(c.beta, c.k, c.m, c.samples, c.seed);
    estimate_out(mc, GTable(c.beta, c.m).g(c.k));
    return kOk;
  }
  if (c.kind == "mc-ez") {
    const ModelParams p{c.beta, c.B, c.d};
    const McEstimate mc = mc_estimate_EZ(c.n, p, c.samples, c.seed);
    estimate_out(mc, finite_thermo(spin_count_law(c.n, p)).psi_n);
    return kOk;
  }
  if (c.kind == "cut-test") {
    if (c.vertex_set.empty()) throw DomainError("cut-test needs --set");
    const auto set = parse_int_grid(c.vertex_set);
    // the graph stream is derived from the seed so one --seed fixes the run
    const CutLawComparison cmp =
        compare_cut_laws(c.n, c.d, set, c.samples, c.seed, SplitMix64(c.seed).next());
    if (json) {
      ordered_json j;
      j["config"] = config_json(c);
      j["result"] = {{"statistic", cmp.test.statistic},
                     {"dof", cmp.test.dof},
                     {"p_value", cmp.test.p_value},
                     {"matching_counts", cmp.matching_counts},
                     {"graph_counts", cmp.graph_counts}};
      emit_json(out, j);
    } else {
      out << "cut,matching_count,graph_count\n";
      for (std::size_t x = 0; x < cmp.matching_counts.size(); ++x) {
        write_csv_row(out, {std::to_string(x), std::to_string(cmp.matching_counts[x]),
                            std::to_string(cmp.graph_counts[x])});
      }
    }
    return kOk;
  }
  throw DomainError("unknown sample kind '" + c.kind + "'");
}

inline std::string default_format(const RunConfig& c) {
  if (c.command == "pressure") return "json";
  if (c.command == "config-model") {
    const bool scalar = c.g_curve == 0 && parse_grid(c.beta_grid).size() == 1 &&
                        parse_grid(c.B_grid).size() == 1;
    return scalar ? "json" : "csv";
  }
  if (c.command == "sample") {
    return c.kind == "graph" || c.kind == "matching" ? "csv" : "json";
  }
  return "csv";
}

}  // namespace detail

/// Runs one command line (without the program name). Output goes to `out`
/// unless --out is given; diagnostics and notices go to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Annealed Ising model on random regular graphs and configuration models",
               "annealed-ising"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  std::string config_path;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", c.out_path, "output file (default stdout)");
    sub->add_option("--config", config_path, "JSON file of flags, or an earlier JSON output");
  };
  auto seeded = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "RNG seed (default 0)");
  };

  auto* pressure_cmd = app.add_subcommand("pressure", "limit pressure, t*, M, chi on a d-regular graph");
  pressure_cmd->add_option("--beta", c.beta, "inverse temperature")->required();
  pressure_cmd->add_option("--B", c.B, "external field");
  pressure_cmd->add_option("--d", c.d, "degree");
  common(pressure_cmd);

  auto* phase_cmd = app.add_subcommand("phase-diagram", "pressure sweep over a (beta, B) grid");
  phase_cmd->add_option("--d", c.d, "degree");
  phase_cmd->add_option("--beta", c.beta_grid, "grid start:stop:step or a,b,c")->required();
  phase_cmd->add_option("--B", c.B_grid, "grid start:stop:step or a,b,c");
  common(phase_cmd);

  auto* finite_cmd = app.add_subcommand("finite-n", "exact finite-n law and limit-theorem report");
  finite_cmd->add_option("--beta", c.beta, "inverse temperature")->required();
  finite_cmd->add_option("--B", c.B, "external field");
  finite_cmd->add_option("--d", c.d, "degree");
  finite_cmd->add_option("--n", c.n_list, "sizes: list or start:stop:step")->required();
  finite_cmd->add_option("--eps", c.eps_list, "LLN tail thresholds");
  finite_cmd->add_flag("--law", c.law, "emit the spin-count law p_j for a single n");
  common(finite_cmd);

  auto* cm_cmd = app.add_subcommand("config-model", "pressure for an i.i.d. degree distribution");
  cm_cmd->add_option("--dist", c.dist, "deterministic:d | pmf:v:p,... | poisson:g | binomial:N:q")
      ->required();
  cm_cmd->add_option("--beta", c.beta_grid, "inverse temperature or grid")->required();
  cm_cmd->add_option("--B", c.B_grid, "external field or grid");
  cm_cmd->add_option("--g-curve", c.g_curve, "emit t,G on this many points instead");
  common(cm_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
  verify_cmd->add_option("--suite", c.suite, "suite name")
      ->check(CLI::IsMember({"quenched-equality", "critical-beta", "g-recursion", "beta-zero",
                             "d2-closed-form", "all"}));
  seeded(verify_cmd);
  common(verify_cmd);

  auto* sample_cmd = app.add_subcommand("sample", "random graphs, matchings and Monte Carlo oracles");
  sample_cmd->add_option("--kind", c.kind, "graph | matching | mc-g | mc-ez | cut-test")
      ->check(CLI::IsMember({"graph", "matching", "mc-g", "mc-ez", "cut-test"}));
  sample_cmd->add_option("--n", c.n, "vertices");
  sample_cmd->add_option("--d", c.d, "degree");
  sample_cmd->add_option("--degrees", c.degrees, "explicit degree sequence a,b,c");
  sample_cmd->add_option("--m", c.m, "half-edges");
  sample_cmd->add_option("--k", c.k, "half-edges in the first block");
  sample_cmd->add_option("--beta", c.beta, "inverse temperature");
  sample_cmd->add_option("--B", c.B, "external field");
  sample_cmd->add_option("--set", c.vertex_set, "vertex set a,b,c for cut-test");
  sample_cmd->add_option("--samples", c.samples, "number of draws");
  seeded(sample_cmd);
  common(sample_cmd);

  // --config contents become leading flags, so explicit flags override them.
  std::vector<std::string> tokens;
  std::vector<std::string> rest;
  try {
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) {
        config_path = args[++i];
      } else if (args[i].rfind("--config=", 0) == 0) {
        config_path = args[i].substr(9);
      } else {
        rest.push_back(args[i]);
      }
    }
    if (!config_path.empty()) {
      tokens = detail::config_tokens(config_path);
      if (!rest.empty() && rest.front() == tokens.front()) rest.erase(rest.begin());
      if (!rest.empty() && rest.front().rfind("--", 0) != 0) {
        throw DomainError("command '" + rest.front() + "' conflicts with config command '" +
                          tokens.front() + "'");
      }
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }
  tokens.insert(tokens.end(), rest.begin(), rest.end());

  try {
    std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kDomainError;
  }

  for (auto* sub : app.get_subcommands()) {
    c.command = sub->get_name();
    if (auto* opt = sub->get_option_no_throw("--seed")) c.seed_given = opt->count() > 0;
  }
  const bool randomized =
      c.command == "verify" ? (c.suite == "g-recursion" || c.suite == "all") : c.command == "sample";
  if (randomized && !c.seed_given) err << "notice: no --seed given; using seed 0\n";

  try {
    if (c.format.empty()) c.format = detail::default_format(c);
    std::ofstream file;
    std::ostream* sink = &out;
    if (!c.out_path.empty()) {
      file.open(c.out_path);
      if (!file) throw DomainError("cannot open output file '" + c.out_path + "'");
      sink = &file;
    }
    if (c.command == "pressure") return detail::cmd_pressure(c, *sink);
    if (c.command == "phase-diagram") return detail::cmd_phase_diagram(c, *sink, err);
    if (c.command == "finite-n") return detail::cmd_finite_n(c, *sink);
    if (c.command == "config-model") return detail::cmd_config_model(c, *sink);
    if (c.command == "verify") return detail::cmd_verify(c, *sink, err);
    return detail::cmd_sample(c, *sink);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }
}

}  // namespace aising::cli
