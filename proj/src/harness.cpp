#include "pcurl/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "pcurl/io.hpp"
#include "pcurl/lorentz.hpp"
#include "pcurl/operators.hpp"
#include "pcurl/sources.hpp"
#include "pcurl/util.hpp"

namespace pcurl {

SourceFamily source_family_from_string(const std::string& name) {
  if (name == "manufactured") return SourceFamily::Manufactured;
  if (name == "random-divfree") return SourceFamily::RandomDivFree;
  if (name == "file") return SourceFamily::File;
  throw std::invalid_argument(
      "unknown source family '" + name +
      "' (expected manufactured, random-divfree, or file)");
}

std::string to_string(SourceFamily f) {
  switch (f) {
    case SourceFamily::Manufactured: return "manufactured";
    case SourceFamily::RandomDivFree: return "random-divfree";
    case SourceFamily::File: return "file";
  }
  return "?";
}

void SweepSpec::validate() const {
  if (p_values.empty()) throw std::invalid_argument("sweep: no p values");
  for (double p : p_values)
    if (!(p > 1.0) || !std::isfinite(p))
      throw std::invalid_argument("sweep: p values must exceed 1");
  if (family != SourceFamily::File) {
    if (resolutions.empty())
      throw std::invalid_argument("sweep: no resolutions");
    for (int n : resolutions)
      if (n < 2) throw std::invalid_argument("sweep: resolutions must be >= 2");
  }
  if (lambdas.empty()) throw std::invalid_argument("sweep: no lambda values");
  for (double l : lambdas)
    if (!(l > 0.0) || !std::isfinite(l))
      throw std::invalid_argument("sweep: lambda values must be positive");
  if (family == SourceFamily::RandomDivFree) {
    if (seeds.empty()) throw std::invalid_argument("sweep: no seeds");
    if (smoothness < 1)
      throw std::invalid_argument("sweep: smoothness must be >= 1");
    if (!(amplitude > 0.0))
      throw std::invalid_argument("sweep: amplitude must be positive");
  }
  if (family == SourceFamily::File && source_file.empty())
    throw std::invalid_argument("sweep: file source needs a path");
  if (!(lx > 0) || !(ly > 0) || !(lz > 0))
    throw std::invalid_argument("sweep: box lengths must be positive");
}

SweepSpec default_acceptance_sweep() {
  SweepSpec s;
  s.p_values = {1.5, 2.0, 3.0};
  s.resolutions = {16, 32};
  s.family = SourceFamily::RandomDivFree;
  s.lambdas = {1.0};
  s.seeds = {1, 2, 3, 4, 5};
  s.smoothness = 2;
  s.amplitude = 1.0;
  return s;
}

double source_lorentz31_norm(const EdgeField& f, const BoxDomain& g) {
  CellField mag = cell_magnitude_edges(f, g);
  MeasuredSample s;
  s.items.reserve(mag.v.v.size());
  const double vol = g.cell_volume();
  for (double m : mag.v.v) s.push(m, vol);
  return lorentz_norm(s, 3.0, 1.0);
}

double cell_lp_norm(const CellField& mag, double p, const BoxDomain& g) {
  require_cell_shape(mag, g, "cell_lp_norm");
  KahanSum acc;
  const double vol = g.cell_volume();
  for (double m : mag.v.v) acc.add(vol * std::pow(std::abs(m), p));
  return std::pow(acc.value(), 1.0 / p);
}

namespace {

struct SweepPoint {
  double p;
  int n;  // 0 for file-backed grids
  std::uint64_t seed;
  double lambda;
};

EstimateReport solve_one(const SweepSpec& spec, const SweepPoint& pt,
                         const EdgeField* file_field,
                         const BoxDomain* file_grid) {
  EstimateReport r;
  r.p = pt.p;
  r.seed = pt.seed;
  r.lambda = pt.lambda;
  r.source = spec.family == SourceFamily::File ? spec.source_file
                                               : to_string(spec.family);
  try {
    BoxDomain g = spec.family == SourceFamily::File
                      ? *file_grid
                      : BoxDomain(spec.lx, spec.ly, spec.lz, pt.n, pt.n, pt.n);
    r.nx = g.nx;
    r.ny = g.ny;
    r.nz = g.nz;
    r.lx = g.lx;
    r.ly = g.ly;
    r.lz = g.lz;

    EdgeField f(g);
    switch (spec.family) {
      case SourceFamily::Manufactured: f = manufactured_source(g); break;
      case SourceFamily::RandomDivFree:
        f = make_random_divfree_source(g, pt.seed, spec.smoothness,
                                       spec.amplitude);
        break;
      case SourceFamily::File: f = *file_field; break;
    }
    if (pt.lambda != 1.0) scale(f, pt.lambda);

    SolverConfig cfg = spec.solver;
    cfg.p = pt.p;
    if (spec.solver.eps_schedule.empty())
      cfg.eps_schedule = SolverConfig::default_schedule(pt.p);

    SolveResult res = solve(f, cfg, g);

    r.norm_curl_inf = max_abs(res.curl_mag.v);
    r.norm_curl_inf_faces = max_abs(res.curl_u);
    r.norm_curl_p = cell_lp_norm(res.curl_mag, pt.p, g);
    r.norm_f_31 = source_lorentz31_norm(f, g);
    r.ratio_defined = r.norm_f_31 > 0.0;
    if (r.ratio_defined) {
      const double denom = std::pow(r.norm_f_31, 1.0 / (pt.p - 1.0));
      r.c_emp_inf = r.norm_curl_inf / denom;
      r.c_emp_p = r.norm_curl_p / denom;
    } else {
      r.c_emp_inf = std::numeric_limits<double>::quiet_NaN();
      r.c_emp_p = std::numeric_limits<double>::quiet_NaN();
    }
    r.iterations = res.total_iterations();
    r.residual = res.projected_grad_norm / res.grad_scale;
    r.converged = res.converged;
    r.status = res.status;
  } catch (const std::exception& e) {
    r.converged = false;
    r.status = e.what();
    r.ratio_defined = false;
    r.c_emp_inf = std::numeric_limits<double>::quiet_NaN();
    r.c_emp_p = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

void sort_reports(std::vector<EstimateReport>& reports) {
  std::stable_sort(reports.begin(), reports.end(),
                   [](const EstimateReport& a, const EstimateReport& b) {
                     return std::tie(a.p, a.nx, a.seed, a.lambda, a.source) <
                            std::tie(b.p, b.nx, b.seed, b.lambda, b.source);
                   });
}

}  // namespace

std::vector<EstimateReport> run_sweep(const SweepSpec& spec, int threads) {
  spec.validate();

  EdgeField file_field;
  BoxDomain file_grid;
  if (spec.family == SourceFamily::File)
    file_field = read_edge_field(spec.source_file, file_grid);

  // Seeds only vary the random family; resolutions come from the file header
  // when the source is file-backed.
  std::vector<std::uint64_t> seeds =
      spec.family == SourceFamily::RandomDivFree
          ? spec.seeds
          : std::vector<std::uint64_t>{0};
  std::vector<int> resolutions =
      spec.family == SourceFamily::File ? std::vector<int>{0}
                                        : spec.resolutions;

  std::vector<SweepPoint> points;
  for (double p : spec.p_values)
    for (int n : resolutions)
      for (std::uint64_t seed : seeds)
        for (double lambda : spec.lambdas)
          points.push_back(SweepPoint{p, n, seed, lambda});

  std::vector<EstimateReport> reports(points.size());
  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(points.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < points.size(); ++i)
      reports[i] = solve_one(spec, points[i], &file_field, &file_grid);
  } else {
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= points.size()) return;
        reports[i] = solve_one(spec, points[i], &file_field, &file_grid);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  sort_reports(reports);
  return reports;
}

namespace {

// Flags > 10% growth of the chosen ratio between the two finest resolutions
// of each (p, seed, lambda, source) group.
void apply_refinement_flags(EstimateVerification& v, bool use_p_ratio) {
  const char* name = use_p_ratio ? "c_emp_p" : "c_emp_inf";
  std::vector<std::size_t> order(v.reports.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto group_key = [&](std::size_t i) {
    const EstimateReport& r = v.reports[i];
    return std::tie(r.p, r.seed, r.lambda, r.source);
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (group_key(a) != group_key(b))
                       return group_key(a) < group_key(b);
                     return v.reports[a].nx < v.reports[b].nx;
                   });
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && group_key(order[j]) == group_key(order[i])) ++j;
    if (j - i >= 2) {
      EstimateReport& fine = v.reports[order[j - 1]];
      const EstimateReport& coarse = v.reports[order[j - 2]];
      const double cf = use_p_ratio ? fine.c_emp_p : fine.c_emp_inf;
      const double cc = use_p_ratio ? coarse.c_emp_p : coarse.c_emp_inf;
      if (fine.converged && coarse.converged && fine.ratio_defined &&
          coarse.ratio_defined && cf > 1.10 * cc) {
        std::ostringstream msg;
        msg << name << " grew " << ((cf / cc - 1.0) * 100.0)
            << "% from N=" << coarse.nx << " to N=" << fine.nx
            << " (p=" << fine.p << ", seed=" << fine.seed
            << ", lambda=" << fine.lambda << ")";
        fine.refinement_flag = true;
        fine.flag_reason = msg.str();
        v.flags.push_back(msg.str());
        v.any_flag = true;
      }
    }
    i = j;
  }
}

void flag_norm_comparison(EstimateVerification& v) {
  for (EstimateReport& r : v.reports) {
    if (!r.ratio_defined) continue;
    const double volume = r.lx * r.ly * r.lz;
    const double bound = r.c_emp_inf * std::pow(volume, 1.0 / r.p);
    if (r.c_emp_p > bound + 1e-12) {
      std::ostringstream msg;
      msg << "norm comparison violated: c_emp_p=" << r.c_emp_p << " > "
          << bound << " (p=" << r.p << ", N=" << r.nx << ", seed=" << r.seed
          << ", lambda=" << r.lambda << ")";
      r.refinement_flag = true;
      r.flag_reason = r.flag_reason.empty()
                          ? msg.str()
                          : r.flag_reason + "; " + msg.str();
      v.flags.push_back(msg.str());
      v.any_flag = true;
    }
  }
}

void note_convergence(EstimateVerification& v) {
  for (const EstimateReport& r : v.reports)
    if (!r.converged) v.all_converged = false;
}

}  // namespace

EstimateVerification verify_linfty_estimate(const SweepSpec& spec,
                                            int threads) {
  EstimateVerification v;
  v.reports = run_sweep(spec, threads);
  apply_refinement_flags(v, /*use_p_ratio=*/false);
  note_convergence(v);
  return v;
}

EstimateVerification verify_lp_estimate(const SweepSpec& spec, int threads) {
  EstimateVerification v;
  v.reports = run_sweep(spec, threads);
  apply_refinement_flags(v, /*use_p_ratio=*/true);
  flag_norm_comparison(v);
  note_convergence(v);
  return v;
}

EstimateVerification verify_estimates(const SweepSpec& spec, int threads) {
  EstimateVerification v;
  v.reports = run_sweep(spec, threads);
  apply_refinement_flags(v, /*use_p_ratio=*/false);
  apply_refinement_flags(v, /*use_p_ratio=*/true);
  flag_norm_comparison(v);
  note_convergence(v);
  return v;
}

std::vector<ConvergenceRow> convergence_study(
    const std::vector<int>& resolutions, double grad_tol, int max_iters) {
  if (resolutions.empty())
    throw std::invalid_argument("convergence study: no resolutions");
  for (std::size_t i = 0; i + 1 < resolutions.size(); ++i)
    if (resolutions[i] >= resolutions[i + 1])
      throw std::invalid_argument(
          "convergence study: resolutions must be strictly ascending");

  std::vector<ConvergenceRow> rows;
  for (int n : resolutions) {
    BoxDomain g(1.0, 1.0, 1.0, n, n, n);
    EdgeField f = manufactured_source(g);

    SolverConfig cfg;
    cfg.p = 2.0;
    // Default staged schedule.  The p = 2 energy does not depend on eps, but
    // the interim checkpoints give the line search a better-behaved path to
    // tight tolerances than a single cold stage.
    cfg.grad_tol = grad_tol;
    cfg.max_iters = max_iters;
    SolveResult res = solve(f, cfg, g);
    if (!res.converged)
      throw std::runtime_error("convergence study: solve failed at N=" +
                               std::to_string(n) + " (" + res.status + ")");

    EdgeField du = res.u;
    axpy(-1.0, manufactured_u(g), du);
    FaceField dw = res.curl_u;
    axpy(-1.0, manufactured_curl(g), dw);

    ConvergenceRow row;
    row.n = n;
    row.err_u_max = max_abs(du);
    row.err_u_l2 = norm(du, g);
    row.err_curl_max = max_abs(dw);
    row.err_curl_l2 = norm(dw, g);
    row.curl_inf_value = max_abs(res.curl_mag.v);
    row.curl_l2_value = cell_lp_norm(res.curl_mag, 2.0, g);
    row.iterations = res.total_iterations();

    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.order_u_max = row.order_u_l2 = nan;
    row.order_curl_max = row.order_curl_l2 = nan;
    if (!rows.empty()) {
      const ConvergenceRow& prev = rows.back();
      const double lr = std::log(static_cast<double>(n) / prev.n);
      auto order = [&](double e_prev, double e) {
        return (e > 0 && e_prev > 0) ? std::log(e_prev / e) / lr : nan;
      };
      row.order_u_max = order(prev.err_u_max, row.err_u_max);
      row.order_u_l2 = order(prev.err_u_l2, row.err_u_l2);
      row.order_curl_max = order(prev.err_curl_max, row.err_curl_max);
      row.order_curl_l2 = order(prev.err_curl_l2, row.err_curl_l2);
    }
    rows.push_back(row);
  }
  return rows;
}

const char* const kReportCsvHeader =
    "p,Nx,Ny,Nz,seed,lambda,norm_curl_inf,norm_curl_p,norm_f_31,c_emp_inf,"
    "c_emp_p,iters,resid";

std::string reports_csv(const std::vector<EstimateReport>& reports) {
  std::string out = kReportCsvHeader;
  out += '\n';
  for (const EstimateReport& r : reports) {
    out += format_double(r.p);
    out += ',';
    out += std::to_string(r.nx);
    out += ',';
    out += std::to_string(r.ny);
    out += ',';
    out += std::to_string(r.nz);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += format_double(r.lambda);
    out += ',';
    out += format_double(r.norm_curl_inf);
    out += ',';
    out += format_double(r.norm_curl_p);
    out += ',';
    out += format_double(r.norm_f_31);
    out += ',';
    out += format_double(r.c_emp_inf);
    out += ',';
    out += format_double(r.c_emp_p);
    out += ',';
    out += std::to_string(r.iterations);
    out += ',';
    out += format_double(r.residual);
    out += '\n';
  }
  return out;
}

void write_reports_csv(const std::string& path,
                       const std::vector<EstimateReport>& reports) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << reports_csv(reports);
  if (!os) throw std::runtime_error("write failed: " + path);
}

nlohmann::json report_to_json(const EstimateReport& r) {
  nlohmann::json j{{"p", r.p},
                   {"nx", r.nx},
                   {"ny", r.ny},
                   {"nz", r.nz},
                   {"lx", r.lx},
                   {"ly", r.ly},
                   {"lz", r.lz},
                   {"seed", r.seed},
                   {"lambda", r.lambda},
                   {"source", r.source},
                   {"norm_curl_inf", r.norm_curl_inf},
                   {"norm_curl_inf_faces", r.norm_curl_inf_faces},
                   {"norm_curl_p", r.norm_curl_p},
                   {"norm_f_31", r.norm_f_31},
                   {"ratio_defined", r.ratio_defined},
                   {"iterations", r.iterations},
                   {"residual", r.residual},
                   {"converged", r.converged},
                   {"status", r.status},
                   {"refinement_flag", r.refinement_flag}};
  if (r.ratio_defined) {
    j["c_emp_inf"] = r.c_emp_inf;
    j["c_emp_p"] = r.c_emp_p;
  } else {
    j["c_emp_inf"] = nullptr;
    j["c_emp_p"] = nullptr;
  }
  if (!r.flag_reason.empty()) j["flag_reason"] = r.flag_reason;
  return j;
}

nlohmann::json verification_to_json(const EstimateVerification& v) {
  nlohmann::json reports = nlohmann::json::array();
  for (const EstimateReport& r : v.reports) reports.push_back(report_to_json(r));
  return nlohmann::json{{"reports", reports},
                        {"any_flag", v.any_flag},
                        {"all_converged", v.all_converged},
                        {"flags", v.flags}};
}

nlohmann::json convergence_to_json(const std::vector<ConvergenceRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  auto num = [](double x) {
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
  };
  for (const ConvergenceRow& r : rows)
    arr.push_back(nlohmann::json{{"n", r.n},
                                 {"err_u_max", r.err_u_max},
                                 {"err_u_l2", r.err_u_l2},
                                 {"err_curl_max", r.err_curl_max},
                                 {"err_curl_l2", r.err_curl_l2},
                                 {"order_u_max", num(r.order_u_max)},
                                 {"order_u_l2", num(r.order_u_l2)},
                                 {"order_curl_max", num(r.order_curl_max)},
                                 {"order_curl_l2", num(r.order_curl_l2)},
                                 {"curl_inf_value", r.curl_inf_value},
                                 {"curl_l2_value", r.curl_l2_value},
                                 {"iterations", r.iterations}});
  return arr;
}

}  // namespace pcurl
