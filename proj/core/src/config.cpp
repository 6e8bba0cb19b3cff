#include "srpulse/config.hpp"

#include "srpulse/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <set>

namespace srpulse {

using nlohmann::json;

namespace {

const std::vector<std::pair<Backend, std::string>> kBackends = {
    {Backend::MeanField, "meanfield"},
    {Backend::Cumulant2, "cumulant2"},
    {Backend::Master, "master"},
    {Backend::Trajectories, "trajectories"}};

const std::vector<std::pair<Observable, std::string>> kObservables = {
    {Observable::Moments, "moments"}, {Observable::Chi2, "chi2"}, {Observable::C2, "c2"},
    {Observable::C3, "c3"},           {Observable::Cn, "cn"},     {Observable::QFunction, "qfunction"}};

// Observables each backend can produce.
bool supports(Backend b, Observable o) {
  switch (b) {
    case Backend::MeanField:
      return o == Observable::Moments;
    case Backend::Cumulant2:
      return o == Observable::Moments || o == Observable::Chi2 || o == Observable::C2;
    case Backend::Trajectories:
      return o == Observable::Moments || o == Observable::Chi2 || o == Observable::C2 ||
             o == Observable::QFunction;
    case Backend::Master:
      return true;
  }
  return false;
}

// Typed field access that records errors instead of throwing.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

  void error(const std::string& path, const std::string& message) {
    errors_.push_back(path + ": " + message);
  }

  const json* child(const json& obj, const std::string& path, const std::string& key, bool required) {
    if (!obj.is_object()) return nullptr;
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) error(path + "." + key, "required field is missing");
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> number(const json& obj, const std::string& path, const std::string& key,
                               bool required, std::optional<double> fallback = std::nullopt) {
    const json* v = child(obj, path, key, required);
    if (!v) return fallback;
    if (!v->is_number()) {
      error(path + "." + key, "expected a number");
      return std::nullopt;
    }
    const double d = v->get<double>();
    if (!std::isfinite(d)) {
      error(path + "." + key, "must be finite");
      return std::nullopt;
    }
    return d;
  }

  std::optional<long long> integer(const json& obj, const std::string& path, const std::string& key,
                                   bool required, std::optional<long long> fallback = std::nullopt) {
    const json* v = child(obj, path, key, required);
    if (!v) return fallback;
    if (!v->is_number_integer()) {
      error(path + "." + key, "expected an integer");
      return std::nullopt;
    }
    return v->get<long long>();
  }

  std::optional<bool> boolean(const json& obj, const std::string& path, const std::string& key,
                              bool fallback) {
    const json* v = child(obj, path, key, false);
    if (!v) return fallback;
    if (!v->is_boolean()) {
      error(path + "." + key, "expected true or false");
      return std::nullopt;
    }
    return v->get<bool>();
  }

  std::optional<std::string> string(const json& obj, const std::string& path, const std::string& key,
                                    bool required, std::optional<std::string> fallback = std::nullopt) {
    const json* v = child(obj, path, key, required);
    if (!v) return fallback;
    if (!v->is_string()) {
      error(path + "." + key, "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> known) {
    if (!obj.is_object()) return;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (std::none_of(known.begin(), known.end(), [&](const char* k) { return it.key() == k; })) {
        error(path + "." + it.key(), "unknown field");
      }
    }
  }

 private:
  std::vector<std::string>& errors_;
};

bool is_auto(const json* v) { return v && v->is_string() && v->get<std::string>() == "auto"; }

void parse_drive(Reader& r, const json& root, RunConfig& cfg) {
  const bool has_params = root.contains("params");
  const bool has_schedule = root.contains("schedule");
  if (has_params == has_schedule) {
    r.error("$", "exactly one of \"params\" or \"schedule\" is required");
    return;
  }
  if (has_params) {
    const json& p = root["params"];
    if (!p.is_object()) {
      r.error("$.params", "expected an object");
      return;
    }
    r.reject_unknown(p, "$.params", {"n_atoms", "kappa", "omega", "lambda"});
    const auto n = r.integer(p, "$.params", "n_atoms", true);
    const auto kappa = r.number(p, "$.params", "kappa", false, 1.0);
    const auto omega = r.number(p, "$.params", "omega", true);
    const auto lambda = r.number(p, "$.params", "lambda", true);
    if (n && kappa && omega && lambda) {
      try {
        cfg.drive = ModelParams::create(static_cast<int>(*n), *kappa, *omega, *lambda);
      } catch (const ConfigError& e) {
        r.error("$.params", e.what());
      }
    }
    return;
  }
  const json& s = root["schedule"];
  if (!s.is_object()) {
    r.error("$.schedule", "expected an object");
    return;
  }
  r.reject_unknown(s, "$.schedule",
                   {"n_atoms", "kappa", "omega_max", "omega_min", "lambda_max", "lambda_min", "t_pulse",
                    "t_ramp"});
  RampSchedule::Spec spec;
  bool complete = true;
  auto take = [&](const char* key, double& dst, bool required, std::optional<double> fallback = std::nullopt) {
    const auto v = r.number(s, "$.schedule", key, required, fallback);
    if (v) {
      dst = *v;
    } else {
      complete = false;
    }
  };
  if (const auto n = r.integer(s, "$.schedule", "n_atoms", true)) {
    spec.n_atoms = static_cast<int>(*n);
  } else {
    complete = false;
  }
  take("kappa", spec.kappa, false, 1.0);
  take("omega_max", spec.omega_max, true);
  take("omega_min", spec.omega_min, true);
  take("lambda_max", spec.lambda_max, true);
  take("lambda_min", spec.lambda_min, true);
  take("t_ramp", spec.t_ramp, false, 0.0);
  if (is_auto(r.child(s, "$.schedule", "t_pulse", false))) {
    cfg.t_pulse_auto = true;
    spec.t_pulse = spec.t_ramp;
  } else {
    take("t_pulse", spec.t_pulse, true);
  }
  if (!complete) return;
  try {
    cfg.drive = RampSchedule::create(spec);
  } catch (const ConfigError& e) {
    r.error("$.schedule", e.what());
  }
}

void parse_initial(Reader& r, const json& root, RunConfig& cfg) {
  const json* init = r.child(root, "$", "initial", true);
  if (!init) return;
  if (!init->is_object()) {
    r.error("$.initial", "expected an object");
    return;
  }
  r.reject_unknown(*init, "$.initial", {"theta", "phi", "amplitudes"});
  if (init->contains("amplitudes")) {
    const json& a = (*init)["amplitudes"];
    if (!a.is_array()) {
      r.error("$.initial.amplitudes", "expected an array of [re, im] pairs");
      return;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      const json& e = a[i];
      if (e.is_number()) {
        cfg.initial.amplitudes.emplace_back(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        cfg.initial.amplitudes.emplace_back(e[0].get<double>(), e[1].get<double>());
      } else {
        r.error("$.initial.amplitudes[" + std::to_string(i) + "]", "expected a number or [re, im]");
      }
    }
    return;
  }
  const auto theta = r.number(*init, "$.initial", "theta", true);
  const auto phi = r.number(*init, "$.initial", "phi", false, 0.0);
  if (theta) {
    if (*theta < 0.0 || *theta > std::numbers::pi) r.error("$.initial.theta", "must lie in [0, pi]");
    cfg.initial.theta = *theta;
  }
  if (phi) {
    if (*phi < 0.0 || *phi >= 2.0 * std::numbers::pi) r.error("$.initial.phi", "must lie in [0, 2 pi)");
    cfg.initial.phi = *phi;
  }
}

void parse_time(Reader& r, const json& root, RunConfig& cfg) {
  const json* t = r.child(root, "$", "time", true);
  if (!t) return;
  if (!t->is_object()) {
    r.error("$.time", "expected an object");
    return;
  }
  r.reject_unknown(*t, "$.time", {"t_start", "t_end", "samples"});
  if (const auto v = r.number(*t, "$.time", "t_start", false, 0.0)) cfg.t_start = *v;
  if (cfg.t_start < 0.0) r.error("$.time.t_start", "must be >= 0");
  if (is_auto(r.child(*t, "$.time", "t_end", false))) {
    cfg.t_end_auto = true;
    cfg.t_end = -1.0;
  } else if (const auto v = r.number(*t, "$.time", "t_end", true)) {
    cfg.t_end = *v;
    if (!(cfg.t_end > cfg.t_start)) r.error("$.time.t_end", "must exceed t_start");
  }
  if (const auto v = r.integer(*t, "$.time", "samples", false, 201)) {
    if (*v < 2) r.error("$.time.samples", "need at least 2 samples");
    cfg.samples = static_cast<int>(*v);
  }
}

void parse_observables(Reader& r, const json& root, RunConfig& cfg) {
  const json* o = r.child(root, "$", "observables", false);
  if (!o) return;
  const json* list = o;
  std::string list_path = "$.observables";
  if (o->is_object()) {
    r.reject_unknown(*o, "$.observables", {"list", "cn_order", "c2", "qfunction"});
    list = r.child(*o, "$.observables", "list", true);
    list_path = "$.observables.list";
    if (const auto v = r.integer(*o, "$.observables", "cn_order", false, 3)) {
      if (*v < 1 || *v > 4) r.error("$.observables.cn_order", "must be between 1 and 4");
      cfg.cn_order = static_cast<int>(*v);
    }
    if (const auto v = r.string(*o, "$.observables", "c2", false, "ordered")) {
      if (*v != "ordered" && *v != "symmetrized") {
        r.error("$.observables.c2", "expected \"ordered\" or \"symmetrized\"");
      }
      cfg.c2_symmetrized = *v == "symmetrized";
    }
    if (const json* q = r.child(*o, "$.observables", "qfunction", false)) {
      const std::string qp = "$.observables.qfunction";
      r.reject_unknown(*q, qp, {"times", "n_theta", "n_phi"});
      if (const json* times = r.child(*q, qp, "times", false)) {
        if (!times->is_array()) {
          r.error(qp + ".times", "expected an array of numbers");
        } else {
          for (const json& e : *times) {
            if (!e.is_number()) {
              r.error(qp + ".times", "expected an array of numbers");
              break;
            }
            cfg.qfunction.times.push_back(e.get<double>());
          }
        }
      }
      for (const char* key : {"n_theta", "n_phi"}) {
        if (const auto v = r.integer(*q, qp, key, false, 0)) {
          if (*v != 0 && *v < 8) r.error(qp + "." + key, "must be 0 (default) or at least 8");
          (std::string(key) == "n_theta" ? cfg.qfunction.n_theta : cfg.qfunction.n_phi) =
              static_cast<int>(*v);
        }
      }
    }
  }
  if (!list) return;
  if (!list->is_array()) {
    r.error(list_path, "expected an array of observable names");
    return;
  }
  cfg.observables.clear();
  for (std::size_t i = 0; i < list->size(); ++i) {
    const json& e = (*list)[i];
    const auto it = std::find_if(kObservables.begin(), kObservables.end(),
                                 [&](const auto& p) { return e.is_string() && p.second == e.get<std::string>(); });
    if (it == kObservables.end()) {
      r.error(list_path + "[" + std::to_string(i) + "]", "unknown observable " + e.dump());
      continue;
    }
    if (std::find(cfg.observables.begin(), cfg.observables.end(), it->first) == cfg.observables.end()) {
      cfg.observables.push_back(it->first);
    }
  }
  std::sort(cfg.observables.begin(), cfg.observables.end());
}

void parse_rest(Reader& r, const json& root, RunConfig& cfg) {
  if (const json* out = r.child(root, "$", "output", false)) {
    r.reject_unknown(*out, "$.output", {"dir", "prefix", "per_trajectory"});
    if (const auto v = r.string(*out, "$.output", "dir", false, default_output_dir())) cfg.output_dir = *v;
    if (const auto v = r.string(*out, "$.output", "prefix", false, "run")) {
      if (v->empty() || v->find('/') != std::string::npos) {
        r.error("$.output.prefix", "must be a non-empty file name stem");
      }
      cfg.output_prefix = *v;
    }
    if (const auto v = r.boolean(*out, "$.output", "per_trajectory", false)) {
      cfg.trajectories.per_trajectory_output = *v;
    }
  }
  if (const json* seed = r.child(root, "$", "seed", false)) {
    if (seed->is_number_unsigned()) {
      cfg.seed = seed->get<std::uint64_t>();
    } else {
      r.error("$.seed", "expected a non-negative integer");
    }
  }
  if (const json* tol = r.child(root, "$", "tolerances", false)) {
    r.reject_unknown(*tol, "$.tolerances", {"rtol", "trace_drift", "check_positivity"});
    if (const auto v = r.number(*tol, "$.tolerances", "rtol", false, 1e-8)) {
      if (!(*v > 0.0 && *v <= 1e-2)) r.error("$.tolerances.rtol", "must lie in (0, 1e-2]");
      cfg.tol = *v;
    }
    if (const auto v = r.number(*tol, "$.tolerances", "trace_drift", false, 1e-6)) {
      if (!(*v > 0.0)) r.error("$.tolerances.trace_drift", "must be positive");
      cfg.trace_drift_limit = *v;
    }
    if (const auto v = r.boolean(*tol, "$.tolerances", "check_positivity", false)) cfg.check_positivity = *v;
  }
  if (const json* tr = r.child(root, "$", "trajectories", false)) {
    r.reject_unknown(*tr, "$.trajectories", {"count", "jump_tolerance"});
    if (const auto v = r.integer(*tr, "$.trajectories", "count", false, 100)) {
      if (*v < 1) r.error("$.trajectories.count", "must be at least 1");
      cfg.trajectories.count = static_cast<std::size_t>(std::max(1LL, *v));
    }
    if (const auto v = r.number(*tr, "$.trajectories", "jump_tolerance", false, 1e-9)) {
      if (!(*v > 0.0 && *v < 1.0)) r.error("$.trajectories.jump_tolerance", "must lie in (0, 1)");
      cfg.trajectories.jump_tolerance = *v;
    }
  }
  if (const auto v = r.integer(root, "$", "threads", false, 0)) {
    if (*v < 0) r.error("$.threads", "must be >= 0");
    cfg.threads = static_cast<unsigned>(std::max(0LL, *v));
  }
}

void check_consistency(Reader& r, RunConfig& cfg) {
  for (Observable o : cfg.observables) {
    if (!supports(cfg.backend, o)) {
      r.error("$.observables", "observable \"" + to_string(o) + "\" is not available with backend \"" +
                                   to_string(cfg.backend) + "\"");
    }
  }
  const int n = cfg.n_atoms();
  if (!cfg.initial.amplitudes.empty()) {
    if (static_cast<int>(cfg.initial.amplitudes.size()) != n + 1) {
      r.error("$.initial.amplitudes", "expected N + 1 = " + std::to_string(n + 1) + " amplitudes");
    } else {
      double norm = 0.0;
      for (const cplx& c : cfg.initial.amplitudes) norm += std::norm(c);
      if (!(norm > 0.0)) r.error("$.initial.amplitudes", "state has zero norm");
    }
    if (cfg.backend == Backend::MeanField || cfg.t_end_auto) {
      r.error("$.initial.amplitudes",
              "explicit amplitudes need a quantum backend and an explicit t_end");
    }
  }
  if (cfg.t_pulse_auto && !std::holds_alternative<RampSchedule>(cfg.drive)) {
    r.error("$.schedule.t_pulse", "\"auto\" needs a schedule");
  }
  if (!cfg.t_end_auto) {
    for (double t : cfg.qfunction.times) {
      if (t < cfg.t_start || t > cfg.t_end) {
        r.error("$.observables.qfunction.times", "snapshot time outside [t_start, t_end]");
        break;
      }
    }
  }
  if (cfg.wants(Observable::QFunction) && cfg.qfunction.times.empty()) {
    r.error("$.observables.qfunction.times", "qfunction needs at least one snapshot time");
  }
}

json drive_json(const RunConfig& cfg) {
  if (const auto* p = std::get_if<ModelParams>(&cfg.drive)) {
    return {{"n_atoms", p->n_atoms()}, {"kappa", p->kappa()}, {"omega", p->omega()}, {"lambda", p->lambda()}};
  }
  const auto& s = std::get<RampSchedule>(cfg.drive).spec();
  json j = {{"n_atoms", s.n_atoms},       {"kappa", s.kappa},           {"omega_max", s.omega_max},
            {"omega_min", s.omega_min},   {"lambda_max", s.lambda_max}, {"lambda_min", s.lambda_min},
            {"t_ramp", s.t_ramp}};
  j["t_pulse"] = cfg.t_pulse_auto ? json("auto") : json(s.t_pulse);
  return j;
}

json run_json(const RunConfig& cfg) {
  json j;
  j["backend"] = to_string(cfg.backend);
  j[std::holds_alternative<ModelParams>(cfg.drive) ? "params" : "schedule"] = drive_json(cfg);
  if (cfg.initial.amplitudes.empty()) {
    j["initial"] = {{"theta", cfg.initial.theta}, {"phi", cfg.initial.phi}};
  } else {
    json a = json::array();
    for (const cplx& c : cfg.initial.amplitudes) a.push_back({c.real(), c.imag()});
    j["initial"] = {{"amplitudes", a}};
  }
  j["time"] = {{"t_start", cfg.t_start},
               {"t_end", cfg.t_end_auto ? json("auto") : json(cfg.t_end)},
               {"samples", cfg.samples}};
  json list = json::array();
  for (Observable o : cfg.observables) list.push_back(to_string(o));
  j["observables"] = {{"list", list},
                      {"cn_order", cfg.cn_order},
                      {"c2", cfg.c2_symmetrized ? "symmetrized" : "ordered"},
                      {"qfunction",
                       {{"times", cfg.qfunction.times},
                        {"n_theta", cfg.qfunction.n_theta},
                        {"n_phi", cfg.qfunction.n_phi}}}};
  j["output"] = {{"dir", cfg.output_dir},
                 {"prefix", cfg.output_prefix},
                 {"per_trajectory", cfg.trajectories.per_trajectory_output}};
  j["seed"] = cfg.seed;
  j["tolerances"] = {{"rtol", cfg.tol},
                     {"trace_drift", cfg.trace_drift_limit},
                     {"check_positivity", cfg.check_positivity}};
  j["trajectories"] = {{"count", cfg.trajectories.count},
                       {"jump_tolerance", cfg.trajectories.jump_tolerance}};
  j["threads"] = cfg.threads;
  return j;
}

std::optional<RunConfig> parse_run(Reader& r, const json& root) {
  RunConfig cfg;
  cfg.output_dir = default_output_dir();
  if (!root.is_object()) {
    r.error("$", "expected a JSON object");
    return std::nullopt;
  }
  r.reject_unknown(root, "$",
                   {"backend", "params", "schedule", "initial", "time", "observables", "output", "seed",
                    "tolerances", "trajectories", "threads"});
  if (const auto b = r.string(root, "$", "backend", true)) {
    const auto it = std::find_if(kBackends.begin(), kBackends.end(), [&](const auto& p) { return p.second == *b; });
    if (it == kBackends.end()) {
      r.error("$.backend", "unknown backend \"" + *b + "\"");
    } else {
      cfg.backend = it->first;
    }
  }
  parse_drive(r, root, cfg);
  parse_initial(r, root, cfg);
  parse_time(r, root, cfg);
  parse_observables(r, root, cfg);
  parse_rest(r, root, cfg);
  check_consistency(r, cfg);
  return cfg;
}

}  // namespace

std::string to_string(Backend b) {
  for (const auto& [k, v] : kBackends) {
    if (k == b) return v;
  }
  return "?";
}

std::string to_string(Observable o) {
  for (const auto& [k, v] : kObservables) {
    if (k == o) return v;
  }
  return "?";
}

bool RunConfig::wants(Observable o) const {
  return std::find(observables.begin(), observables.end(), o) != observables.end();
}

std::vector<double> RunConfig::sample_times() const {
  if (t_end_auto && t_end < 0.0) throw ConfigError("sample_times: t_end has not been resolved");
  std::vector<double> t(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    t[static_cast<std::size_t>(i)] = t_start + (t_end - t_start) * i / (samples - 1);
  }
  t.back() = t_end;
  return t;
}

Validated<RunConfig> validate_config(std::string_view text) {
  Validated<RunConfig> out;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    out.errors.push_back(std::string("$: invalid JSON: ") + e.what());
    return out;
  }
  Reader r(out.errors);
  auto cfg = parse_run(r, root);
  if (out.errors.empty()) out.value = std::move(cfg);
  return out;
}

Validated<SweepConfig> validate_sweep_config(std::string_view text) {
  Validated<SweepConfig> out;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    out.errors.push_back(std::string("$: invalid JSON: ") + e.what());
    return out;
  }
  Reader r(out.errors);
  SweepConfig sweep;
  if (!root.is_object()) {
    r.error("$", "expected a JSON object");
    return out;
  }
  r.reject_unknown(root, "$", {"base", "axes", "reductions", "parallelism", "checkpoint"});
  const json* base = r.child(root, "$", "base", true);
  if (base) {
    std::vector<std::string> base_errors;
    Reader br(base_errors);
    if (auto cfg = parse_run(br, *base)) sweep.base = *cfg;
    for (const auto& e : base_errors) out.errors.push_back("$.base" + e.substr(1));
    if (base_errors.empty() && sweep.base.backend != Backend::Master) {
      r.error("$.base.backend", "sweeps run the master backend");
    }
  }
  if (const json* axes = r.child(root, "$", "axes", true)) {
    r.reject_unknown(*axes, "$.axes", {"n_atoms", "omega"});
    if (const json* n = r.child(*axes, "$.axes", "n_atoms", false)) {
      if (!n->is_array() || n->empty()) r.error("$.axes.n_atoms", "expected a non-empty array of integers");
      else {
        for (const json& e : *n) {
          if (!e.is_number_integer() || e.get<long long>() < 1) {
            r.error("$.axes.n_atoms", "entries must be positive integers");
            break;
          }
          sweep.n_values.push_back(e.get<int>());
        }
      }
    }
    if (const json* w = r.child(*axes, "$.axes", "omega", false)) {
      if (!w->is_array() || w->empty()) r.error("$.axes.omega", "expected a non-empty array of numbers");
      else {
        for (const json& e : *w) {
          if (!e.is_number()) {
            r.error("$.axes.omega", "entries must be numbers");
            break;
          }
          sweep.omega_values.push_back(e.get<double>());
        }
      }
    }
  }
  if (base && out.errors.empty()) {
    if (const auto* p = std::get_if<ModelParams>(&sweep.base.drive)) {
      if (sweep.n_values.empty()) sweep.n_values.push_back(p->n_atoms());
      if (sweep.omega_values.empty()) sweep.omega_values.push_back(p->omega());
      for (double w : sweep.omega_values) {
        if (p->kappa() == 0.0 && w == 0.0) r.error("$.axes.omega", "omega = 0 with kappa = 0 is undefined");
      }
    } else {
      r.error("$.base", "sweeps need fixed \"params\", not a schedule");
    }
  }
  if (const json* red = r.child(root, "$", "reductions", false)) {
    sweep.reduce_c2 = sweep.reduce_c3 = false;
    if (!red->is_array() || red->empty()) r.error("$.reductions", "expected a non-empty array");
    else {
      for (const json& e : *red) {
        const std::string s = e.is_string() ? e.get<std::string>() : "";
        if (s == "max_c2_over_N2") sweep.reduce_c2 = true;
        else if (s == "max_c3_over_N3") sweep.reduce_c3 = true;
        else r.error("$.reductions", "unknown reduction " + e.dump());
      }
    }
  }
  if (const auto v = r.integer(root, "$", "parallelism", false, 0)) {
    if (*v < 0) r.error("$.parallelism", "must be >= 0");
    sweep.parallelism = static_cast<unsigned>(std::max(0LL, *v));
  }
  if (const auto v = r.string(root, "$", "checkpoint", false, "")) sweep.checkpoint = *v;
  if (out.errors.empty()) out.value = std::move(sweep);
  return out;
}

std::string normalized_json(const RunConfig& config) { return run_json(config).dump(2); }

std::string normalized_json(const SweepConfig& config) {
  json j;
  j["base"] = run_json(config.base);
  j["axes"] = {{"n_atoms", config.n_values}, {"omega", config.omega_values}};
  json red = json::array();
  if (config.reduce_c2) red.push_back("max_c2_over_N2");
  if (config.reduce_c3) red.push_back("max_c3_over_N3");
  j["reductions"] = red;
  j["parallelism"] = config.parallelism;
  j["checkpoint"] = config.checkpoint;
  return j.dump(2);
}

std::string default_output_dir() {
  const char* env = std::getenv("SRPULSE_OUTPUT_DIR");
  return env && *env ? std::string(env) : std::string(".");
}

DickeVector initial_state(const RunConfig& config) {
  const int n = config.n_atoms();
  if (config.initial.amplitudes.empty()) return coherent_state(n, config.initial.theta, config.initial.phi);
  DickeVector psi(n + 1);
  for (int p = 0; p <= n; ++p) psi[p] = config.initial.amplitudes[static_cast<std::size_t>(p)];
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw ConfigError("initial amplitudes have zero norm");
  return psi / norm;
}

}  // namespace srpulse
