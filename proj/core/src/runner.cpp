#include "srpulse/runner.hpp"

#include "srpulse/cumulant.hpp"
#include "srpulse/errors.hpp"
#include "srpulse/lindblad.hpp"
#include "srpulse/meanfield.hpp"
#include "srpulse/observables.hpp"
#include "srpulse/parallel.hpp"
#include "srpulse/pulse_timing.hpp"
#include "srpulse/trajectories.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>

namespace srpulse {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("write failed for " + path.string());
}

fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
  return fs::path(dir);
}

double json_number_or_null(const json& j) { return j.is_number() ? j.get<double>() : kNaN; }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Sum of |<J_j J_k>_c| over ordered pairs, or 2 |C_jk| over j <= k.
double c2_from(const std::array<double, 3>& mean, const std::array<std::array<double, 3>, 3>& sym,
               bool symmetrized) {
  double total = 0.0;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      const double cov = sym[j][k] - mean[j] * mean[k];
      if (symmetrized) {
        if (j <= k) total += 2.0 * std::abs(cov);
        continue;
      }
      double imag = 0.0;
      if (j != k) {
        const int l = 3 - j - k;
        imag = 0.5 * levi_civita(j, k, l) * mean[l];
      }
      total += std::hypot(cov, imag);
    }
  }
  return total;
}

struct ColumnPlan {
  bool moments, errors, chi2, c2, c3, cn, fidelity;
  std::vector<std::string> names;
};

ColumnPlan plan_columns(const RunConfig& cfg) {
  ColumnPlan p{};
  p.moments = cfg.wants(Observable::Moments);
  p.errors = p.moments && cfg.backend == Backend::Trajectories;
  p.chi2 = cfg.wants(Observable::Chi2);
  p.c2 = cfg.wants(Observable::C2);
  p.c3 = cfg.wants(Observable::C3);
  p.cn = cfg.wants(Observable::Cn);
  p.fidelity = cfg.backend == Backend::Master;
  p.names.push_back("time");
  if (p.moments) p.names.insert(p.names.end(), {"jx", "jy", "jz"});
  if (p.errors) p.names.insert(p.names.end(), {"jx_se", "jy_se", "jz_se"});
  if (p.chi2) p.names.push_back("chi2");
  if (p.c2) p.names.push_back("c2");
  if (p.c3) p.names.push_back("c3");
  if (p.cn) p.names.push_back("cn" + std::to_string(cfg.cn_order));
  if (p.fidelity) p.names.push_back("fidelity");
  return p;
}

double chi2_or_nan(const std::array<double, 3>& mean, const std::array<std::array<double, 3>, 3>& sym, int n) {
  Eigen::Matrix3d cov;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) cov(j, k) = sym[j][k] - mean[j] * mean[k];
  }
  try {
    return chi_squared(mean, cov, n).chi2;
  } catch (const NumericalError&) {
    return kNaN;
  }
}

struct QSnapshot {
  double time;
  QGrid grid;
};

void write_q(const RunConfig& cfg, const fs::path& dir, const std::vector<QSnapshot>& snaps,
             std::vector<std::string>& files, json& summary) {
  json list = json::array();
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    const std::string stem = cfg.output_prefix + "_q" + std::to_string(i);
    write_text(dir / (stem + ".csv"), snaps[i].grid.to_csv());
    write_text(dir / (stem + ".json"), snaps[i].grid.to_json());
    files.push_back((dir / (stem + ".csv")).string());
    files.push_back((dir / (stem + ".json")).string());
    list.push_back({{"time", snaps[i].time}, {"csv", stem + ".csv"}, {"json", stem + ".json"},
                    {"normalization", snaps[i].grid.normalization()}});
  }
  summary["qfunction"] = list;
}

QGrid q_grid(const RunConfig& cfg, const DensityMatrix& rho) {
  const int n = cfg.n_atoms();
  const int nt = cfg.qfunction.n_theta > 0 ? cfg.qfunction.n_theta : 2 * n + 1;
  const int np = cfg.qfunction.n_phi > 0 ? cfg.qfunction.n_phi : 2 * n + 2;
  return q_function(rho, std::max(nt, 8), std::max(np, 8));
}

}  // namespace

std::vector<double> RunResult::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("RunResult: no column " + name);
  const auto c = static_cast<std::size_t>(std::distance(columns.begin(), it));
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

bool RunResult::has_column(const std::string& name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::string text;
  for (std::size_t i = 0; i < columns.size(); ++i) text += (i ? "," : "") + columns[i];
  text += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) text += ",";
      text += std::isfinite(row[i]) ? format_number(row[i]) : "nan";
    }
    text += "\n";
  }
  write_text(path, text);
}

RunConfig resolve_auto(const RunConfig& config) {
  RunConfig cfg = config;
  if (cfg.t_pulse_auto) {
    if (!cfg.initial.amplitudes.empty()) throw ConfigError("t_pulse = \"auto\" needs a coherent initial state");
    RampSchedule::Spec spec = std::get<RampSchedule>(cfg.drive).spec();
    const ModelParams before =
        ModelParams::create(spec.n_atoms, spec.kappa, spec.omega_max, spec.lambda_max);
    const double horizon = meanfield_pulse_duration(cfg.initial.theta, before);
    const CorrelationPeak peak = peak_correlation_time(
        coherent_state(spec.n_atoms, cfg.initial.theta, cfg.initial.phi), before, horizon, 401, cfg.tol);
    spec.t_pulse = peak.time;
    if (spec.t_ramp > spec.t_pulse) {
      throw ConfigError("t_ramp exceeds the automatic t_pulse = " + format_number(spec.t_pulse));
    }
    cfg.drive = RampSchedule::create(spec);
    cfg.t_pulse_auto = false;
  }
  if (cfg.t_end_auto) {
    cfg.t_end = cfg.t_start + meanfield_pulse_duration(cfg.initial.theta, params_at(cfg.drive, cfg.t_start));
    cfg.t_end_auto = false;
  }
  return cfg;
}

RunResult execute(const RunConfig& config, bool write_files) {
  RunResult result;
  result.config = resolve_auto(config);
  const RunConfig& cfg = result.config;
  const ColumnPlan plan = plan_columns(cfg);
  result.columns = plan.names;
  const std::vector<double> times = cfg.sample_times();
  const int n = cfg.n_atoms();
  const DickeVector psi0 = initial_state(cfg);

  json summary;
  summary["config"] = json::parse(normalized_json(config));
  summary["resolved"] = {{"t_end", cfg.t_end}};
  if (const auto* s = std::get_if<RampSchedule>(&cfg.drive)) summary["resolved"]["t_pulse"] = s->spec().t_pulse;
  std::vector<QSnapshot> snapshots;
  double final_fidelity = kNaN;

  switch (cfg.backend) {
    case Backend::MeanField: {
      const MeanFieldTrajectory traj = integrate_meanfield({cfg.initial.theta, cfg.initial.phi}, cfg.drive,
                                                           cfg.t_start, times, std::min(cfg.tol, 1e-2));
      for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto b = traj.bloch(i);
        result.rows.push_back({traj.times[i], n * b[0], n * b[1], n * b[2]});
      }
      break;
    }
    case Backend::Cumulant2: {
      Cumulant2Options opts;
      opts.tol = cfg.tol;
      const CumulantTrajectory traj = integrate_cumulant2(psi0, cfg.drive, cfg.t_start, times, opts);
      for (std::size_t i = 0; i < traj.size(); ++i) {
        const MomentState& m = traj.states[i];
        std::array<std::array<double, 3>, 3> sym{};
        for (int j = 0; j < 3; ++j) {
          for (int k = 0; k < 3; ++k) sym[j][k] = m.symmetric(j, k);
        }
        std::vector<double> row = {traj.times[i]};
        if (plan.moments) row.insert(row.end(), m.first.begin(), m.first.end());
        if (plan.chi2) row.push_back(chi2_or_nan(m.first, sym, n));
        if (plan.c2) row.push_back(c2_from(m.first, sym, cfg.c2_symmetrized));
        result.rows.push_back(std::move(row));
      }
      break;
    }
    case Backend::Master: {
      std::set<double> all(times.begin(), times.end());
      const std::set<double> sample_set(times.begin(), times.end());
      const std::set<double> q_set(cfg.qfunction.times.begin(), cfg.qfunction.times.end());
      if (cfg.wants(Observable::QFunction)) all.insert(q_set.begin(), q_set.end());
      const std::vector<double> grid(all.begin(), all.end());
      EvolveOptions opts;
      opts.tol = cfg.tol;
      opts.trace_drift_limit = cfg.trace_drift_limit;
      opts.check_positivity = cfg.check_positivity;
      const EvolveDiagnostics diag = evolve(
          projector(psi0), cfg.drive, cfg.t_start, grid,
          [&](double t, const DensityMatrix& rho) {
            if (cfg.wants(Observable::QFunction) && q_set.count(t)) snapshots.push_back({t, q_grid(cfg, rho)});
            if (!sample_set.count(t)) return;
            const MomentEvaluator eval(rho);
            std::vector<double> row = {t};
            const FirstMoments f = eval.first();
            if (plan.moments) row.insert(row.end(), {f[0].real(), f[1].real(), f[2].real()});
            if (plan.chi2) {
              try {
                row.push_back(chi_squared(rho).chi2);
              } catch (const NumericalError&) {
                row.push_back(kNaN);
              }
            }
            if (plan.c2) row.push_back(cfg.c2_symmetrized ? cn_total_symmetrized(eval, 2) : c_total(eval, 2));
            if (plan.c3) row.push_back(c_total(eval, 3));
            if (plan.cn) row.push_back(cn_total_symmetrized(eval, cfg.cn_order));
            row.push_back(rho(n, n).real());
            result.rows.push_back(std::move(row));
          },
          opts);
      final_fidelity = result.rows.back().back();
      summary["diagnostics"] = {{"max_trace_drift", diag.max_trace_drift},
                                {"max_hermiticity_error", diag.max_hermiticity_error},
                                {"min_eigenvalue", number_or_null(diag.min_eigenvalue)},
                                {"accepted_steps", diag.stats.accepted},
                                {"rejected_steps", diag.stats.rejected}};
      break;
    }
    case Backend::Trajectories: {
      TrajectoryConfig tc;
      tc.n_trajectories = cfg.trajectories.count;
      tc.master_seed = cfg.seed;
      tc.jump_tolerance = cfg.trajectories.jump_tolerance;
      tc.sample_times = times;
      tc.record_second_moments = plan.chi2 || plan.c2;
      tc.keep_records = cfg.trajectories.per_trajectory_output;
      const EnsembleResult ens = ensemble_average(psi0, cfg.drive, cfg.t_start, tc, cfg.threads);
      for (std::size_t i = 0; i < times.size(); ++i) {
        std::vector<double> row = {times[i]};
        if (plan.moments) row.insert(row.end(), ens.mean[i].begin(), ens.mean[i].end());
        if (plan.errors) row.insert(row.end(), ens.standard_error[i].begin(), ens.standard_error[i].end());
        if (plan.chi2 || plan.c2) {
          std::array<std::array<double, 3>, 3> sym{};
          const auto& s = ens.second_mean[i];
          sym = {{{s[0], s[1], s[2]}, {s[1], s[3], s[4]}, {s[2], s[4], s[5]}}};
          if (plan.chi2) row.push_back(chi2_or_nan(ens.mean[i], sym, n));
          if (plan.c2) row.push_back(c2_from(ens.mean[i], sym, cfg.c2_symmetrized));
        }
        result.rows.push_back(std::move(row));
      }
      if (cfg.wants(Observable::QFunction)) {
        TrajectoryConfig qc = tc;
        qc.sample_times = std::vector<double>(cfg.qfunction.times.begin(), cfg.qfunction.times.end());
        std::sort(qc.sample_times.begin(), qc.sample_times.end());
        qc.record_second_moments = false;
        qc.record_states = true;
        qc.keep_records = false;
        const EnsembleResult qens = ensemble_average(psi0, cfg.drive, cfg.t_start, qc, cfg.threads);
        for (std::size_t i = 0; i < qc.sample_times.size(); ++i) {
          snapshots.push_back({qc.sample_times[i], q_grid(cfg, qens.density[i])});
        }
      }
      summary["jumps"] = {{"mean", [&] {
                             double s = 0.0;
                             for (auto c : ens.jump_counts) s += static_cast<double>(c);
                             return s / static_cast<double>(ens.jump_counts.size());
                           }()}};
      if (write_files && cfg.trajectories.per_trajectory_output) {
        std::vector<std::vector<double>> rows;
        for (const auto& rec : ens.records) {
          for (std::size_t i = 0; i < rec.times.size(); ++i) {
            rows.push_back({static_cast<double>(rec.index), rec.times[i], rec.first[i][0], rec.first[i][1],
                            rec.first[i][2]});
          }
        }
        const fs::path dir = prepare_dir(cfg.output_dir);
        const fs::path path = dir / (cfg.output_prefix + "_trajectories.csv");
        write_csv(path.string(), {"trajectory", "time", "jx", "jy", "jz"}, rows);
        result.files.push_back(path.string());
        json jumps = json::array();
        for (const auto& rec : ens.records) jumps.push_back(rec.jump_times);
        summary["jump_times"] = jumps;
      }
      break;
    }
  }

  // Peaks of every measure column.
  json peaks = json::object();
  for (std::size_t c = 1; c < result.columns.size(); ++c) {
    const std::string& name = result.columns[c];
    if (name != "chi2" && name != "c2" && name != "c3" && name.rfind("cn", 0) != 0) continue;
    double best = -std::numeric_limits<double>::infinity();
    double at = kNaN;
    for (const auto& row : result.rows) {
      if (std::isfinite(row[c]) && row[c] > best) {
        best = row[c];
        at = row[0];
      }
    }
    peaks[name] = {{"value", number_or_null(best)}, {"time", number_or_null(at)}};
  }
  summary["columns"] = result.columns;
  summary["peaks"] = peaks;
  json fin = {{"time", result.rows.back()[0]}, {"fidelity", number_or_null(final_fidelity)}};
  if (plan.moments) fin["jz"] = result.rows.back()[3];
  summary["final"] = fin;

  if (write_files) {
    const fs::path dir = prepare_dir(cfg.output_dir);
    const fs::path csv = dir / (cfg.output_prefix + ".csv");
    write_csv(csv.string(), result.columns, result.rows);
    result.files.insert(result.files.begin(), csv.string());
    if (!snapshots.empty()) write_q(cfg, dir, snapshots, result.files, summary);
    const fs::path js = dir / (cfg.output_prefix + "_summary.json");
    write_text(js, summary.dump(2) + "\n");
    result.files.push_back(js.string());
  }
  return result;
}

namespace {

template <class Fn>
int guarded(std::ostream& log, Fn&& fn) {
  try {
    fn();
    return kExitOk;
  } catch (const ConfigError& e) {
    log << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    log << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    log << "failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace

int run(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    const RunResult r = execute(config, true);
    for (const auto& f : r.files) log << "wrote " << f << "\n";
  });
}

bool SweepResult::all_ok() const {
  return std::all_of(points.begin(), points.end(), [](const SweepPoint& p) { return p.ok; });
}

namespace {

SweepPoint sweep_point(const SweepConfig& cfg, int n_atoms, double omega) {
  SweepPoint pt;
  pt.n_atoms = n_atoms;
  pt.omega = omega;
  try {
    RunConfig run = cfg.base;
    const auto& base = std::get<ModelParams>(cfg.base.drive);
    run.drive = ModelParams::create(n_atoms, base.kappa(), omega, base.lambda());
    run = resolve_auto(run);
    const DickeVector psi0 = initial_state(run);
    EvolveOptions opts;
    opts.tol = run.tol;
    opts.trace_drift_limit = run.trace_drift_limit;
    const double n2 = static_cast<double>(n_atoms) * n_atoms;
    const double n3 = n2 * n_atoms;
    evolve(projector(psi0), run.drive, run.t_start, run.sample_times(),
           [&](double, const DensityMatrix& rho) {
             const MomentEvaluator eval(rho);
             if (cfg.reduce_c2) {
               const double c2 = run.c2_symmetrized ? cn_total_symmetrized(eval, 2) : c_total(eval, 2);
               pt.max_c2_norm = std::max(pt.max_c2_norm, c2 / n2);
             }
             if (cfg.reduce_c3) pt.max_c3_norm = std::max(pt.max_c3_norm, c_total(eval, 3) / n3);
           },
           opts);
    pt.ok = true;
  } catch (const std::exception& e) {
    pt.ok = false;
    pt.error = e.what();
  }
  return pt;
}

json point_json(const SweepPoint& p) {
  return {{"n_atoms", p.n_atoms}, {"omega", p.omega}, {"max_c2_norm", p.max_c2_norm},
          {"max_c3_norm", p.max_c3_norm}, {"ok", p.ok}, {"error", p.error}};
}

}  // namespace

SweepResult execute_sweep(const SweepConfig& config, bool write_files) {
  std::vector<std::pair<double, int>> grid;
  for (double w : config.omega_values) {
    for (int n : config.n_values) grid.emplace_back(w, n);
  }

  std::vector<std::optional<SweepPoint>> done(grid.size());
  fs::path checkpoint;
  if (write_files) {
    const fs::path dir = prepare_dir(config.base.output_dir);
    checkpoint = config.checkpoint.empty() ? dir / (config.base.output_prefix + "_checkpoint.jsonl")
                                           : fs::path(config.checkpoint);
    std::ifstream in(checkpoint);
    std::string line;
    while (std::getline(in, line)) {
      json j = json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object() || !j.value("ok", false)) continue;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (j.value("n_atoms", -1) == grid[i].second && json_number_or_null(j["omega"]) == grid[i].first) {
          SweepPoint p;
          p.n_atoms = grid[i].second;
          p.omega = grid[i].first;
          p.max_c2_norm = j.value("max_c2_norm", 0.0);
          p.max_c3_norm = j.value("max_c3_norm", 0.0);
          p.ok = true;
          done[i] = p;
        }
      }
    }
  }

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!done[i]) pending.push_back(i);
  }
  std::mutex mutex;
  std::ofstream journal;
  if (write_files) journal.open(checkpoint, std::ios::app);
  // Largest systems first so the slowest points start early.
  std::stable_sort(pending.begin(), pending.end(),
                   [&](std::size_t a, std::size_t b) { return grid[a].second > grid[b].second; });
  parallel_for(pending.size(), config.parallelism, [&](std::size_t k) {
    const std::size_t i = pending[k];
    SweepPoint p = sweep_point(config, grid[i].second, grid[i].first);
    std::lock_guard lock(mutex);
    if (journal) journal << point_json(p).dump() << "\n" << std::flush;
    done[i] = std::move(p);
  });

  SweepResult result;
  for (auto& p : done) result.points.push_back(*p);
  for (double w : config.omega_values) {
    std::vector<double> ns, c2, c3;
    for (const auto& p : result.points) {
      if (p.omega != w || !p.ok) continue;
      ns.push_back(p.n_atoms);
      c2.push_back(p.max_c2_norm);
      c3.push_back(p.max_c3_norm);
    }
    SlopeFit fit;
    fit.omega = w;
    fit.points = ns.size();
    fit.slope_c2 = ns.size() >= 2 && config.reduce_c2 ? fit_loglog_slope(ns, c2) : kNaN;
    fit.slope_c3 = ns.size() >= 2 && config.reduce_c3 ? fit_loglog_slope(ns, c3) : kNaN;
    result.slopes.push_back(fit);
  }

  if (write_files) {
    const fs::path dir = prepare_dir(config.base.output_dir);
    const std::string& prefix = config.base.output_prefix;
    std::vector<std::vector<double>> rows;
    for (const auto& p : result.points) {
      rows.push_back({static_cast<double>(p.n_atoms), p.omega, p.ok ? p.max_c2_norm : kNaN,
                      p.ok ? p.max_c3_norm : kNaN});
    }
    const fs::path table = dir / (prefix + "_sweep.csv");
    write_csv(table.string(), {"n_atoms", "omega", "max_c2_norm", "max_c3_norm"}, rows);
    std::vector<std::vector<double>> slope_rows;
    for (const auto& s : result.slopes) {
      slope_rows.push_back({s.omega, s.slope_c2, s.slope_c3, static_cast<double>(s.points)});
    }
    const fs::path slopes = dir / (prefix + "_slopes.csv");
    write_csv(slopes.string(), {"omega", "slope_c2", "slope_c3", "points"}, slope_rows);
    json summary;
    summary["config"] = json::parse(normalized_json(config));
    json pts = json::array();
    for (const auto& p : result.points) pts.push_back(point_json(p));
    summary["points"] = pts;
    json sl = json::array();
    for (const auto& s : result.slopes) {
      sl.push_back({{"omega", s.omega}, {"slope_c2", number_or_null(s.slope_c2)},
                    {"slope_c3", number_or_null(s.slope_c3)}, {"points", s.points}});
    }
    summary["slopes"] = sl;
    const fs::path js = dir / (prefix + "_sweep_summary.json");
    write_text(js, summary.dump(2) + "\n");
    result.files = {table.string(), slopes.string(), js.string(), checkpoint.string()};
  }
  return result;
}

int sweep(const SweepConfig& config, std::ostream& log) {
  int code = kExitOk;
  const int guard = guarded(log, [&] {
    const SweepResult r = execute_sweep(config, true);
    for (const auto& p : r.points) {
      if (!p.ok) log << "point N=" << p.n_atoms << " omega=" << p.omega << " failed: " << p.error << "\n";
    }
    for (const auto& f : r.files) log << "wrote " << f << "\n";
    if (!r.all_ok()) code = kExitNumerical;
  });
  return guard != kExitOk ? guard : code;
}

Peak find_peak(const std::vector<double>& times, const std::vector<double>& values) {
  if (times.empty() || times.size() != values.size()) throw std::invalid_argument("find_peak: bad series");
  Peak p;
  p.value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > p.value) p = {times[i], values[i], i};
  }
  return p;
}

std::optional<double> half_life(const std::vector<double>& times, const std::vector<double>& values) {
  const Peak p = find_peak(times, values);
  const double half = 0.5 * p.value;
  for (std::size_t i = p.index + 1; i < values.size(); ++i) {
    if (values[i] <= half) {
      const double f = (values[i - 1] - half) / (values[i - 1] - values[i]);
      return times[i - 1] + f * (times[i] - times[i - 1]) - p.time;
    }
  }
  return std::nullopt;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_loglog_slope: need two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace srpulse
