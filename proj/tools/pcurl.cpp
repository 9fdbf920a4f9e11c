// Command-line front end: solve, verify, sweep, convergence, lorentz.
// Exit codes are part of the contract: 0 success, 2 configuration error,
// 3 solver non-convergence or runtime failure, 4 verification flag raised.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pcurl/grid.hpp"
#include "pcurl/harness.hpp"
#include "pcurl/io.hpp"
#include "pcurl/lorentz.hpp"
#include "pcurl/operators.hpp"
#include "pcurl/solver.hpp"
#include "pcurl/sources.hpp"

namespace {

using namespace pcurl;

struct Common {
  std::string config_path;
  std::string out_dir = "pcurl-out";
  int threads = 1;
  long long seed = 0;
  std::vector<std::string> overrides;
};

void attach_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "key=value configuration file");
  sub->add_option("--out", c.out_dir, "output directory for artifacts");
  sub->add_option("--threads", c.threads,
                  "worker threads; 1 guarantees bitwise determinism");
  sub->add_option("--seed", c.seed, "override the source seed");
  sub->add_option("overrides", c.overrides,
                  "key=value overrides applied after the config file");
}

ConfigMap load_config(const Common& c) {
  ConfigMap cfg;
  if (!c.config_path.empty()) cfg = parse_config_file(c.config_path);
  parse_config_overlay(cfg, c.overrides);
  return cfg;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory '" + dir +
                             "': " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << text;
  if (!os) throw std::runtime_error("write failed: " + path);
}

int config_error(const std::exception& e) {
  std::cerr << "error: " << e.what() << "\n";
  return 2;
}

int runtime_error_exit(const std::exception& e) {
  std::cerr << "error: " << e.what() << "\n";
  return 3;
}

// ---------------------------------------------------------------- solve ---

const std::vector<std::string> kSolveKeys = {
    "lx", "ly", "lz", "nx", "ny", "nz",
    "p", "eps_schedule", "grad_tol", "interim_tol", "max_iters",
    "restart_interval", "poisson_tol", "weak_residual_trials",
    "source", "seed", "smoothness", "amplitude", "lambda", "source_file"};

int cmd_solve(const Common& args, bool seed_flag) {
  // Configuration phase: nothing is written until this block succeeds.
  ConfigMap cfg;
  BoxDomain g;
  EdgeField f;
  SolverConfig scfg;
  std::string source;
  double lambda = 1.0;
  ConfigMap resolved;
  try {
    cfg = load_config(args);
    if (seed_flag) cfg["seed"] = std::to_string(args.seed);
    validate_keys(cfg, kSolveKeys);

    scfg.p = require_double(cfg, "p");
    scfg.grad_tol = get_double(cfg, "grad_tol", scfg.grad_tol);
    scfg.interim_tol = get_double(cfg, "interim_tol", scfg.interim_tol);
    scfg.max_iters = get_int(cfg, "max_iters", scfg.max_iters);
    scfg.restart_interval =
        get_int(cfg, "restart_interval", scfg.restart_interval);
    scfg.poisson_tol = get_double(cfg, "poisson_tol", scfg.poisson_tol);
    scfg.weak_residual_trials =
        get_int(cfg, "weak_residual_trials", scfg.weak_residual_trials);
    scfg.eps_schedule = get_double_list(cfg, "eps_schedule", {});
    scfg.validate_and_finalize();

    source = require_string(cfg, "source");
    lambda = get_double(cfg, "lambda", 1.0);
    if (!(lambda > 0.0))
      throw std::invalid_argument("config: lambda must be positive");

    const std::uint64_t seed =
        static_cast<std::uint64_t>(get_int(cfg, "seed", 1));
    const int smoothness = get_int(cfg, "smoothness", 2);
    const double amplitude = get_double(cfg, "amplitude", 1.0);

    if (source == "file") {
      f = read_edge_field(require_string(cfg, "source_file"), g);
      for (const char* key : {"nx", "ny", "nz"})
        if (cfg.count(key))
          throw std::invalid_argument(
              "config: resolution keys are not allowed with source=file "
              "(the grid comes from the field dump)");
    } else {
      g = BoxDomain(get_double(cfg, "lx", 1.0), get_double(cfg, "ly", 1.0),
                    get_double(cfg, "lz", 1.0), require_int(cfg, "nx"),
                    require_int(cfg, "ny"), require_int(cfg, "nz"));
      if (source == "zero") {
        f = EdgeField(g);
      } else if (source == "manufactured") {
        f = manufactured_source(g);
      } else if (source == "random-divfree") {
        f = make_random_divfree_source(g, seed, smoothness, amplitude);
      } else {
        throw std::invalid_argument(
            "config: unknown source '" + source +
            "' (expected zero, manufactured, random-divfree, or file)");
      }
    }
    if (lambda != 1.0) scale(f, lambda);

    resolved["p"] = format_double(scfg.p);
    resolved["eps_schedule"] = join_doubles(scfg.eps_schedule);
    resolved["grad_tol"] = format_double(scfg.grad_tol);
    resolved["interim_tol"] = format_double(scfg.interim_tol);
    resolved["max_iters"] = std::to_string(scfg.max_iters);
    resolved["restart_interval"] = std::to_string(scfg.restart_interval);
    resolved["poisson_tol"] = format_double(scfg.poisson_tol);
    resolved["weak_residual_trials"] =
        std::to_string(scfg.weak_residual_trials);
    resolved["source"] = source;
    resolved["lambda"] = format_double(lambda);
    resolved["lx"] = format_double(g.lx);
    resolved["ly"] = format_double(g.ly);
    resolved["lz"] = format_double(g.lz);
    if (source == "file") {
      resolved["source_file"] = require_string(cfg, "source_file");
    } else {
      resolved["nx"] = std::to_string(g.nx);
      resolved["ny"] = std::to_string(g.ny);
      resolved["nz"] = std::to_string(g.nz);
    }
    if (source == "random-divfree") {
      resolved["seed"] = std::to_string(seed);
      resolved["smoothness"] = std::to_string(smoothness);
      resolved["amplitude"] = format_double(amplitude);
    }
  } catch (const std::exception& e) {
    return config_error(e);
  }

  try {
    SolveResult res = solve(f, scfg, g);

    ensure_out_dir(args.out_dir);
    const std::filesystem::path out(args.out_dir);
    write_edge_field((out / "u.field").string(), res.u, g);
    write_face_field((out / "curl_u.field").string(), res.curl_u, g);
    write_cell_field((out / "curl_mag.field").string(), res.curl_mag, g);

    std::string trace = "stage,eps,iter,energy,grad_norm\n";
    for (const TraceRecord& t : res.trace) {
      trace += std::to_string(t.stage);
      trace += ',';
      trace += format_double(t.eps);
      trace += ',';
      trace += std::to_string(t.iter);
      trace += ',';
      trace += format_double(t.energy);
      trace += ',';
      trace += format_double(t.grad_norm);
      trace += '\n';
    }
    write_text((out / "trace.csv").string(), trace);

    nlohmann::json summary{
        {"command", "solve"},
        {"config", resolved},
        {"result",
         {{"converged", res.converged},
          {"status", res.status},
          {"energy", res.energy},
          {"norm_curl_inf", max_abs(res.curl_mag.v)},
          {"norm_curl_inf_faces", max_abs(res.curl_u)},
          {"norm_curl_p", cell_lp_norm(res.curl_mag, scfg.p, g)},
          {"norm_curl_l2", cell_lp_norm(res.curl_mag, 2.0, g)},
          {"norm_u_l2", norm(res.u, g)},
          {"norm_f_31", source_lorentz31_norm(f, g)},
          {"projected_grad_norm", res.projected_grad_norm},
          {"grad_scale", res.grad_scale},
          {"residual_rel", res.projected_grad_norm / res.grad_scale},
          {"div_residual", res.div_residual},
          {"weak_residual", res.weak_residual},
          {"terminal_eps", res.terminal_eps},
          {"stage_iterations", res.iterations},
          {"total_iterations", res.total_iterations()}}},
        {"artifacts",
         {{"u", "u.field"},
          {"curl_u", "curl_u.field"},
          {"curl_mag", "curl_mag.field"},
          {"trace", "trace.csv"}}}};
    write_text((out / "summary.json").string(), summary.dump(2) + "\n");

    if (!res.converged) {
      std::cerr << "solver did not converge: " << res.status << "\n";
      return 3;
    }
    std::cout << "converged in " << res.total_iterations()
              << " iterations; artifacts in " << args.out_dir << "\n";
    return 0;
  } catch (const std::exception& e) {
    return runtime_error_exit(e);
  }
}

// ------------------------------------------------------- verify / sweep ---

const std::vector<std::string> kSweepKeys = {
    "lx", "ly", "lz", "p_list", "n_list", "seed_list", "lambda_list",
    "source", "smoothness", "amplitude", "source_file",
    "eps_schedule", "grad_tol", "interim_tol", "max_iters",
    "restart_interval", "poisson_tol", "weak_residual_trials"};

SweepSpec sweep_from_config(const ConfigMap& cfg) {
  validate_keys(cfg, kSweepKeys);
  SweepSpec spec = default_acceptance_sweep();
  spec.lx = get_double(cfg, "lx", spec.lx);
  spec.ly = get_double(cfg, "ly", spec.ly);
  spec.lz = get_double(cfg, "lz", spec.lz);
  spec.p_values = get_double_list(cfg, "p_list", spec.p_values);
  spec.resolutions = get_int_list(cfg, "n_list", spec.resolutions);
  {
    std::vector<int> seeds_i;
    for (std::uint64_t s : spec.seeds) seeds_i.push_back(static_cast<int>(s));
    seeds_i = get_int_list(cfg, "seed_list", seeds_i);
    spec.seeds.clear();
    for (int s : seeds_i) {
      if (s < 0) throw std::invalid_argument("config: seeds must be >= 0");
      spec.seeds.push_back(static_cast<std::uint64_t>(s));
    }
  }
  spec.lambdas = get_double_list(cfg, "lambda_list", spec.lambdas);
  spec.family = source_family_from_string(
      get_string(cfg, "source", to_string(spec.family)));
  spec.smoothness = get_int(cfg, "smoothness", spec.smoothness);
  spec.amplitude = get_double(cfg, "amplitude", spec.amplitude);
  spec.source_file = get_string(cfg, "source_file", spec.source_file);

  spec.solver.grad_tol = get_double(cfg, "grad_tol", spec.solver.grad_tol);
  spec.solver.interim_tol =
      get_double(cfg, "interim_tol", spec.solver.interim_tol);
  spec.solver.max_iters = get_int(cfg, "max_iters", spec.solver.max_iters);
  spec.solver.restart_interval =
      get_int(cfg, "restart_interval", spec.solver.restart_interval);
  spec.solver.poisson_tol =
      get_double(cfg, "poisson_tol", spec.solver.poisson_tol);
  spec.solver.weak_residual_trials =
      get_int(cfg, "weak_residual_trials", spec.solver.weak_residual_trials);
  spec.solver.eps_schedule = get_double_list(cfg, "eps_schedule", {});
  spec.validate();
  return spec;
}

ConfigMap resolved_sweep_config(const SweepSpec& spec) {
  ConfigMap r;
  r["lx"] = format_double(spec.lx);
  r["ly"] = format_double(spec.ly);
  r["lz"] = format_double(spec.lz);
  r["p_list"] = join_doubles(spec.p_values);
  if (spec.family != SourceFamily::File)
    r["n_list"] = join_ints(spec.resolutions);
  r["lambda_list"] = join_doubles(spec.lambdas);
  r["source"] = to_string(spec.family);
  if (spec.family == SourceFamily::RandomDivFree) {
    std::string seeds;
    for (std::size_t i = 0; i < spec.seeds.size(); ++i) {
      if (i) seeds += ',';
      seeds += std::to_string(spec.seeds[i]);
    }
    r["seed_list"] = seeds;
    r["smoothness"] = std::to_string(spec.smoothness);
    r["amplitude"] = format_double(spec.amplitude);
  }
  if (spec.family == SourceFamily::File) r["source_file"] = spec.source_file;
  r["grad_tol"] = format_double(spec.solver.grad_tol);
  r["interim_tol"] = format_double(spec.solver.interim_tol);
  r["max_iters"] = std::to_string(spec.solver.max_iters);
  r["restart_interval"] = std::to_string(spec.solver.restart_interval);
  r["poisson_tol"] = format_double(spec.solver.poisson_tol);
  r["weak_residual_trials"] = std::to_string(spec.solver.weak_residual_trials);
  if (!spec.solver.eps_schedule.empty())
    r["eps_schedule"] = join_doubles(spec.solver.eps_schedule);
  return r;
}

int cmd_sweep_like(const Common& args, bool seed_flag, const char* name) {
  SweepSpec spec;
  ConfigMap resolved;
  try {
    ConfigMap cfg = load_config(args);
    if (seed_flag) cfg["seed_list"] = std::to_string(args.seed);
    spec = sweep_from_config(cfg);
    if (args.threads < 1)
      throw std::invalid_argument("--threads must be >= 1");
    resolved = resolved_sweep_config(spec);
  } catch (const std::exception& e) {
    return config_error(e);
  }

  try {
    EstimateVerification v = verify_estimates(spec, args.threads);

    ensure_out_dir(args.out_dir);
    const std::filesystem::path out(args.out_dir);
    write_reports_csv((out / "table.csv").string(), v.reports);
    nlohmann::json doc{{"command", name},
                       {"config", resolved},
                       {"verification", verification_to_json(v)}};
    write_text((out / "reports.json").string(), doc.dump(2) + "\n");

    if (!v.all_converged) {
      std::cerr << "one or more configurations did not converge (see "
                << (out / "reports.json").string() << ")\n";
      return 3;
    }
    if (v.any_flag) {
      for (const std::string& fmsg : v.flags)
        std::cerr << "flag: " << fmsg << "\n";
      return 4;
    }
    std::cout << v.reports.size() << " configurations verified; reports in "
              << args.out_dir << "\n";
    return 0;
  } catch (const std::exception& e) {
    return runtime_error_exit(e);
  }
}

// --------------------------------------------------------- convergence ---

const std::vector<std::string> kConvergenceKeys = {"n_list", "grad_tol",
                                                   "max_iters"};

int cmd_convergence(const Common& args) {
  std::vector<int> n_list;
  double grad_tol = 1e-7;
  int max_iters = 50000;
  try {
    ConfigMap cfg = load_config(args);
    validate_keys(cfg, kConvergenceKeys);
    n_list = get_int_list(cfg, "n_list", {8, 16, 32});
    grad_tol = get_double(cfg, "grad_tol", grad_tol);
    max_iters = get_int(cfg, "max_iters", max_iters);
  } catch (const std::exception& e) {
    return config_error(e);
  }

  try {
    std::vector<ConvergenceRow> rows =
        convergence_study(n_list, grad_tol, max_iters);

    ensure_out_dir(args.out_dir);
    const std::filesystem::path out(args.out_dir);
    ConfigMap resolved;
    resolved["n_list"] = join_ints(n_list);
    resolved["grad_tol"] = format_double(grad_tol);
    resolved["max_iters"] = std::to_string(max_iters);
    nlohmann::json doc{{"command", "convergence"},
                       {"config", resolved},
                       {"rows", convergence_to_json(rows)}};
    write_text((out / "convergence.json").string(), doc.dump(2) + "\n");

    std::string csv =
        "n,err_u_max,err_u_l2,err_curl_max,err_curl_l2,order_u_max,"
        "order_u_l2,order_curl_max,order_curl_l2,curl_inf_value,"
        "curl_l2_value,iters\n";
    for (const ConvergenceRow& r : rows) {
      csv += std::to_string(r.n);
      for (double x : {r.err_u_max, r.err_u_l2, r.err_curl_max, r.err_curl_l2,
                       r.order_u_max, r.order_u_l2, r.order_curl_max,
                       r.order_curl_l2, r.curl_inf_value, r.curl_l2_value}) {
        csv += ',';
        csv += format_double(x);
      }
      csv += ',';
      csv += std::to_string(r.iterations);
      csv += '\n';
    }
    write_text((out / "convergence.csv").string(), csv);

    std::printf("%6s %12s %8s %12s %8s\n", "N", "err(curl)", "order",
                "err(u)", "order");
    for (const ConvergenceRow& r : rows)
      std::printf("%6d %12.4e %8.2f %12.4e %8.2f\n", r.n, r.err_curl_max,
                  r.order_curl_max, r.err_u_max, r.order_u_max);
    return 0;
  } catch (const std::exception& e) {
    return runtime_error_exit(e);
  }
}

// -------------------------------------------------------------- lorentz ---

int cmd_lorentz(const std::string& data_path, double m, const std::string& p) {
  MeasuredSample sample;
  try {
    std::ifstream is(data_path);
    if (!is)
      throw std::invalid_argument("cannot open data file: " + data_path);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
      ++line_no;
      std::size_t hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      std::istringstream row(line);
      double value, weight;
      if (!(row >> value)) continue;  // blank line
      std::string rest;
      if (!(row >> weight) || (row >> rest, !rest.empty()))
        throw std::invalid_argument(
            "line " + std::to_string(line_no) +
            ": expected 'value weight'");
      try {
        sample.push(value, weight);
      } catch (const std::exception& e) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": " +
                                    e.what());
      }
    }
    if (sample.empty())
      throw std::invalid_argument("data file has no samples: " + data_path);

    double result;
    if (p == "inf") {
      result = lorentz_norm_inf(sample, m);
    } else {
      double pv;
      try {
        std::size_t pos = 0;
        pv = std::stod(p, &pos);
        if (pos != p.size()) throw std::invalid_argument("");
      } catch (...) {
        throw std::invalid_argument("--p expects a number or 'inf', got '" +
                                    p + "'");
      }
      result = lorentz_norm(sample, m, pv);
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%#.12g", result);
    std::cout << buf << "\n";
    return 0;
  } catch (const std::exception& e) {
    return config_error(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"steady-state p-curl solver and estimate laboratory"};
  app.require_subcommand(1);

  Common solve_args, verify_args, sweep_args, conv_args;

  CLI::App* solve_cmd =
      app.add_subcommand("solve", "minimize the curl energy for one source");
  attach_common(solve_cmd, solve_args);

  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "sweep configurations and check both curl estimates");
  attach_common(verify_cmd, verify_args);

  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "run a configuration sweep and emit reports");
  attach_common(sweep_cmd, sweep_args);

  CLI::App* conv_cmd = app.add_subcommand(
      "convergence", "manufactured-solution refinement study (p = 2)");
  attach_common(conv_cmd, conv_args);

  CLI::App* lorentz_cmd = app.add_subcommand(
      "lorentz", "Lorentz norm of weighted samples from a text file");
  std::string lorentz_file;
  double lorentz_m = 3.0;
  std::string lorentz_p = "1";
  lorentz_cmd->add_option("data", lorentz_file, "rows of 'value weight'")
      ->required();
  lorentz_cmd->add_option("--m", lorentz_m, "first Lorentz index")->required();
  lorentz_cmd->add_option("--p", lorentz_p, "second Lorentz index or 'inf'")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (solve_cmd->parsed())
    return cmd_solve(solve_args, solve_cmd->count("--seed") > 0);
  if (verify_cmd->parsed())
    return cmd_sweep_like(verify_args, verify_cmd->count("--seed") > 0,
                          "verify");
  if (sweep_cmd->parsed())
    return cmd_sweep_like(sweep_args, sweep_cmd->count("--seed") > 0, "sweep");
  if (conv_cmd->parsed()) return cmd_convergence(conv_args);
  if (lorentz_cmd->parsed())
    return cmd_lorentz(lorentz_file, lorentz_m, lorentz_p);
  return 2;
}
