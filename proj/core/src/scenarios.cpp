#include "srpulse/scenarios.hpp"

#include "srpulse/errors.hpp"
#include "srpulse/runner.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <numbers>

namespace srpulse {

namespace {

constexpr double kPi = std::numbers::pi;

RunConfig base_run(Backend backend, const std::string& prefix, const ScenarioOptions& opt) {
  RunConfig c;
  c.backend = backend;
  c.drive = ModelParams::create(200, 1.0, 5.0, 0.5);
  c.initial = {kPi / 10.0, kPi / 2.0, {}};
  c.t_start = 0.0;
  c.t_end = 800.0;
  c.samples = 401;
  c.observables = {Observable::Moments};
  c.output_dir = opt.out_dir;
  c.output_prefix = prefix;
  if (opt.seed) c.seed = *opt.seed;
  if (opt.threads) c.threads = *opt.threads;
  if (opt.tol) c.tol = *opt.tol;
  return c;
}

void fig2(ScenarioPlan& plan, const ScenarioOptions& opt, const std::string& tag, double kappa, double omega,
          double theta0, double t_end, std::vector<double> q_times) {
  RunConfig mf = base_run(Backend::MeanField, "fig2_" + tag + "_meanfield", opt);
  mf.drive = ModelParams::create(200, kappa, omega, 0.5);
  mf.initial = {theta0, kPi / 2.0, {}};
  mf.t_end = t_end;
  RunConfig me = mf;
  me.backend = Backend::Master;
  me.output_prefix = "fig2_" + tag + "_master";
  me.observables = {Observable::Moments, Observable::Chi2};
  if (!q_times.empty()) me.observables.push_back(Observable::QFunction);
  me.qfunction.times = std::move(q_times);
  plan.runs = {mf, me};
}

}  // namespace

const std::vector<ScenarioInfo>& scenario_list() {
  static const std::vector<ScenarioInfo> list = {
      {"fig1c", "six quantum trajectories and master-equation Q snapshots, N=200, omega=5"},
      {"fig2-dissipative", "mean-field and master runs with chi2, omega=0, N=200"},
      {"fig2-dispersive", "mean-field and master runs with chi2, omega=5, N=200"},
      {"fig2-unitary", "kappa=0, omega=5, T=800 from the equator; chi2 versus time"},
      {"fig3", "<J_x> from mean-field, second-order cumulant and master equation, plus C3"},
      {"fig4", "max C2/N^2 and C3/N^3 over N in {50,100,200,400,600} and omega in {0,2,5}"},
      {"fig5", "quench omega 5->0, lambda 0.2->0.02 with T_ramp in {0,500,1000}, C3 versus time"},
  };
  return list;
}

ScenarioPlan scenario_plan(const std::string& name, const ScenarioOptions& opt) {
  ScenarioPlan plan;
  if (name == "fig1c") {
    RunConfig tr = base_run(Backend::Trajectories, "fig1c_trajectories", opt);
    tr.trajectories.count = 6;
    tr.trajectories.per_trajectory_output = true;
    RunConfig me = base_run(Backend::Master, "fig1c_master", opt);
    me.observables = {Observable::Moments, Observable::QFunction};
    me.qfunction.times = {0.0, 100.0, 150.0, 200.0, 250.0, 400.0};
    plan.runs = {tr, me};
  } else if (name == "fig2-dissipative") {
    fig2(plan, opt, "dissipative", 1.0, 0.0, kPi / 10.0, 40.0, {0.0, 4.0, 8.0, 12.0, 16.0});
  } else if (name == "fig2-dispersive") {
    fig2(plan, opt, "dispersive", 1.0, 5.0, kPi / 10.0, 800.0, {0.0, 100.0, 200.0, 300.0, 400.0});
  } else if (name == "fig2-unitary") {
    fig2(plan, opt, "unitary", 0.0, 5.0, kPi / 2.0, 800.0, {});
  } else if (name == "fig3") {
    RunConfig mf = base_run(Backend::MeanField, "fig3_meanfield", opt);
    RunConfig cu = base_run(Backend::Cumulant2, "fig3_cumulant2", opt);
    cu.observables = {Observable::Moments, Observable::Chi2, Observable::C2};
    RunConfig me = base_run(Backend::Master, "fig3_master", opt);
    me.observables = {Observable::Moments, Observable::Chi2, Observable::C2, Observable::C3};
    plan.runs = {mf, cu, me};
  } else if (name == "fig4") {
    SweepConfig sw;
    sw.base = base_run(Backend::Master, "fig4", opt);
    sw.base.observables = {Observable::C2, Observable::C3};
    sw.base.t_end_auto = true;
    sw.base.t_end = -1.0;
    sw.n_values = {50, 100, 200, 400, 600};
    sw.omega_values = {0.0, 2.0, 5.0};
    sw.parallelism = opt.threads.value_or(0);
    plan.sweep = sw;
  } else if (name == "fig5") {
    RunConfig ref = base_run(Backend::Master, "fig5_noquench", opt);
    ref.drive = ModelParams::create(200, 1.0, 5.0, 0.2);
    ref.t_end = 12000.0;
    ref.samples = 1201;
    ref.observables = {Observable::Moments, Observable::C3};
    plan.runs.push_back(ref);
    for (double ramp : {0.0, 500.0, 1000.0}) {
      RunConfig q = ref;
      q.output_prefix = "fig5_ramp" + std::to_string(static_cast<int>(ramp));
      RampSchedule::Spec spec;
      spec.n_atoms = 200;
      spec.kappa = 1.0;
      spec.omega_max = 5.0;
      spec.omega_min = 0.0;
      spec.lambda_max = 0.2;
      spec.lambda_min = 0.02;
      spec.t_ramp = ramp;
      spec.t_pulse = 1000.0;  // placeholder until resolved
      q.drive = RampSchedule::create(spec);
      q.t_pulse_auto = true;
      plan.runs.push_back(q);
    }
  } else {
    throw ConfigError("unknown scenario \"" + name + "\"; see --list-scenarios");
  }
  return plan;
}

namespace {

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

std::vector<RunResult> execute_runs(const std::vector<RunConfig>& runs, std::ostream& log) {
  std::vector<RunResult> results;
  for (const RunConfig& cfg : runs) {
    log << "running " << cfg.output_prefix << " (" << to_string(cfg.backend) << ")\n";
    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream(std::filesystem::path(cfg.output_dir) / (cfg.output_prefix + "_config.json"))
        << normalized_json(cfg) << "\n";
    results.push_back(execute(cfg, true));
  }
  return results;
}

}  // namespace

int run_scenario(const std::string& name, const ScenarioOptions& options, std::ostream& log) {
  try {
    ScenarioPlan plan = scenario_plan(name, options);
    const std::filesystem::path dir(options.out_dir);
    std::filesystem::create_directories(dir);

    if (plan.sweep) {
      std::ofstream(dir / "fig4_config.json") << normalized_json(*plan.sweep) << "\n";
      const int code = sweep(*plan.sweep, log);
      return code;
    }

    if (name == "fig5") {
      // One pre-pass fixes t_pulse for every ramp.
      const RunConfig resolved = resolve_auto(plan.runs[1]);
      const double t_pulse = std::get<RampSchedule>(resolved.drive).spec().t_pulse;
      log << "t_pulse = " << t_pulse << " from the peak of C3 without quench\n";
      for (std::size_t i = 1; i < plan.runs.size(); ++i) {
        RampSchedule::Spec spec = std::get<RampSchedule>(plan.runs[i].drive).spec();
        spec.t_pulse = t_pulse;
        plan.runs[i].drive = RampSchedule::create(spec);
        plan.runs[i].t_pulse_auto = false;
      }
      const auto results = execute_runs(plan.runs, log);
      std::vector<std::string> columns = {"time"};
      std::vector<std::vector<double>> rows;
      const auto times = results[0].column("time");
      for (double t : times) rows.push_back({t});
      nlohmann::json summary;
      summary["t_pulse"] = t_pulse;
      for (const auto& r : results) {
        const std::string label = r.config.output_prefix.substr(5);
        columns.push_back("c3_" + label);
        const auto c3 = r.column("c3");
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i].push_back(c3[i]);
        const Peak p = find_peak(times, c3);
        const auto h = half_life(times, c3);
        summary[label] = {{"peak_c3", p.value},
                          {"peak_time", p.time},
                          {"half_life", h ? nlohmann::json(*h) : nlohmann::json(nullptr)}};
      }
      write_csv((dir / "fig5_c3.csv").string(), columns, rows);
      write_json(dir / "fig5_summary.json", summary);
      log << "wrote " << (dir / "fig5_c3.csv").string() << "\n";
      return kExitOk;
    }

    const auto results = execute_runs(plan.runs, log);
    if (name == "fig3") {
      std::vector<std::vector<double>> rows;
      const auto times = results[0].column("time");
      const auto a = results[0].column("jx");
      const auto b = results[1].column("jx");
      const auto c = results[2].column("jx");
      for (std::size_t i = 0; i < times.size(); ++i) rows.push_back({times[i], a[i], b[i], c[i]});
      write_csv((dir / "fig3_jx.csv").string(), {"time", "jx_meanfield", "jx_cumulant2", "jx_master"}, rows);
      log << "wrote " << (dir / "fig3_jx.csv").string() << "\n";
    }
    for (const auto& r : results) {
      for (const auto& f : r.files) log << "wrote " << f << "\n";
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    log << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    log << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace srpulse
