#pragma once

// Command layer behind the wtm tool. Each command reads string parameters, runs one
// experiment and returns a JSON summary; CSV traces and profiles go to files whose
// names carry a hash of the run manifest.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "wtm/errors.hpp"
#include "wtm/extremal.hpp"
#include "wtm/functionals.hpp"
#include "wtm/measures.hpp"
#include "wtm/profile_io.hpp"
#include "wtm/profiles.hpp"
#include "wtm/rearrangement.hpp"
#include "wtm/sequences.hpp"

namespace wtm::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// Grid size for searches when --grid-size is absent: WTM_GRID_SIZE or 512.
inline std::size_t default_grid_size() {
  if (const char* env = std::getenv("WTM_GRID_SIZE")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    wtm::detail::require(end != env && *end == '\0' && v >= 8, "WTM_GRID_SIZE must be an integer >= 8");
    return static_cast<std::size_t>(v);
  }
  return SearchConfig{}.grid_size;
}

/// Raw string parameters; every value a command reads is recorded with its resolved default.
class Params {
public:
  Params() = default;
  explicit Params(std::map<std::string, std::string> raw) : raw_(std::move(raw)) {}

  void set(const std::string& key, const std::string& value) { raw_[key] = value; }
  bool has(const std::string& key) const { return raw_.count(key) > 0; }
  const std::map<std::string, std::string>& raw() const { return raw_; }
  const json& resolved() const { return resolved_; }

  double num(const std::string& key, std::optional<double> fallback = std::nullopt) {
    double v = 0.0;
    if (const auto it = raw_.find(key); it != raw_.end()) {
      v = parse(key, it->second);
    } else {
      wtm::detail::require(fallback.has_value(), "missing required parameter --" + key);
      v = *fallback;
    }
    resolved_[key] = v;
    return v;
  }

  int integer(const std::string& key, std::optional<int> fallback = std::nullopt) {
    const double v = num(key, fallback ? std::optional<double>(*fallback) : std::nullopt);
    wtm::detail::require(v == std::floor(v) && std::abs(v) < 1e9, "parameter --" + key + " must be an integer");
    resolved_[key] = static_cast<int>(v);
    return static_cast<int>(v);
  }

  std::string str(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    std::string v;
    if (const auto it = raw_.find(key); it != raw_.end()) {
      v = it->second;
    } else {
      wtm::detail::require(fallback.has_value(), "missing required parameter --" + key);
      v = *fallback;
    }
    resolved_[key] = v;
    return v;
  }

  bool flag(const std::string& key) {
    bool v = false;
    if (const auto it = raw_.find(key); it != raw_.end()) {
      wtm::detail::require(it->second == "true" || it->second == "false", "flag --" + key + " must be true or false");
      v = it->second == "true";
    }
    resolved_[key] = v;
    return v;
  }

private:
  static double parse(const std::string& key, const std::string& text) {
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
      return v;
    } catch (const std::logic_error&) {
      throw ValidationError("parameter --" + key + ": not a number: '" + text + "'");
    }
  }

  std::map<std::string, std::string> raw_;
  json resolved_ = json::object();
};

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex16(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Command name, resolved parameters, seed, tolerances, artifact paths and tool version.
class RunManifest {
public:
  RunManifest(std::string command, std::string out_dir) : command_(std::move(command)), out_dir_(std::move(out_dir)) {}

  void set_params(const json& params) { params_ = params; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void set_tolerance(const std::string& key, double v) { tolerances_[key] = v; }

  /// Hash of everything except the artifact list, so artifact names can depend on it.
  std::string hash() const {
    json core{{"command", command_}, {"params", params_}, {"seed", seed_json()}, {"tolerances", tolerances_}, {"version", kVersion}};
    return hex16(fnv1a(core.dump()));
  }

  std::string artifact(const std::string& kind, const std::string& ext) {
    const std::string path = (out_dir_.empty() ? std::string(".") : out_dir_) + "/" + command_ + "-" + hash() + "-" + kind + "." + ext;
    artifacts_[kind] = path;
    return path;
  }

  json to_json() const {
    json j{{"command", command_}, {"params", params_}};
    j["seed"] = seed_json();
    j["tolerances"] = tolerances_;
    j["artifacts"] = artifacts_;
    j["version"] = kVersion;
    j["hash"] = hash();
    return j;
  }

private:
  json seed_json() const { return seed_ ? json(*seed_) : json(nullptr); }

  std::string command_;
  std::string out_dir_;
  json params_ = json::object();
  std::optional<std::uint64_t> seed_;
  json tolerances_ = json::object();
  json artifacts_ = json::object();
};

struct CommandResult {
  json summary;
  int exit_code = kExitOk;
};

namespace detail {

inline json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

inline json estimate(double value, double err) { return json{{"value", number(value)}, {"err_est", number(err)}}; }

class Csv {
public:
  explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}

  void row(const std::vector<double>& values) {
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) line += ',';
      if (std::isfinite(values[i])) line += wtm::detail::format_double(values[i]);
    }
    rows_.push_back(std::move(line));
  }

  void write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
    out << '\n';
    for (const auto& r : rows_) out << r << '\n';
  }

private:
  std::vector<std::string> header_;
  std::vector<std::string> rows_;
};

// mu from exactly one of --mu or --mu-ratio. Ratios at or above one need --allow-supercritical.
inline double resolve_mu(Params& prm, double threshold, std::optional<double> default_ratio = std::nullopt) {
  const bool super = prm.flag("allow-supercritical");
  double mu = 0.0;
  if (prm.has("mu")) {
    wtm::detail::require(!prm.has("mu-ratio"), "give --mu or --mu-ratio, not both");
    mu = prm.num("mu");
  } else {
    mu = prm.num("mu-ratio", default_ratio) * threshold;
  }
  wtm::detail::require(mu > 0.0, "mu must be positive");
  wtm::detail::require(super || mu < threshold,
                       "mu at or above the critical threshold; pass --allow-supercritical for blow-up runs");
  return mu;
}

inline SearchConfig search_config(Params& prm) {
  SearchConfig cfg;
  cfg.grid_size = static_cast<std::size_t>(prm.integer("grid-size", static_cast<int>(default_grid_size())));
  cfg.max_iterations = prm.integer("iterations", cfg.max_iterations);
  cfg.seed = static_cast<std::uint64_t>(prm.integer("seed", static_cast<int>(cfg.seed)));
  cfg.validate();
  return cfg;
}

inline void tolerances(RunManifest& m, const SeriesPolicy& sp) {
  m.set_tolerance("series_rel_tol", sp.rel_tol);
  m.set_tolerance("series_max_terms", sp.max_terms);
}

inline std::string out_dir(Params& prm) { return prm.str("out-dir", "."); }

} // namespace detail

/// L^p_theta, Dirichlet L^p_alpha and Sobolev norms of a profile file.
inline CommandResult cmd_norms(Params prm) {
  const auto path = prm.str("profile");
  const double p = prm.num("p", 2.0);
  const double alpha = prm.num("alpha", p - 1.0);
  const double theta = prm.num("theta", 0.0);
  RunManifest m("norms", detail::out_dir(prm));
  wtm::detail::require(p >= 1.0 && alpha >= 0.0 && theta >= 0.0, "norms: need p >= 1, alpha >= 0, theta >= 0");
  const auto file = read_profile(path);
  const auto& u = file.profile;
  const auto lp = with_grid_error(u, [&](const RadialProfile& v) { return lp_norm(v, p, theta); });
  const auto lpp = with_grid_error(u, [&](const RadialProfile& v) { return lp_norm_pow(v, p, theta); });
  const auto dn = with_grid_error(u, [&](const RadialProfile& v) { return derivative_norm(v, p, alpha); });
  const auto dnp = with_grid_error(u, [&](const RadialProfile& v) { return derivative_norm_pow(v, p, alpha); });
  const auto sn = with_grid_error(u, [&](const RadialProfile& v) { return sobolev_norm(v, p, alpha, theta); });
  m.set_params(prm.resolved());
  json s;
  s["manifest"] = m.to_json();
  s["nodes"] = u.size();
  s["lp_norm"] = detail::estimate(lp.value, lp.err_est);
  s["lp_norm_pow"] = detail::estimate(lpp.value, lpp.err_est);
  s["derivative_norm"] = detail::estimate(dn.value, dn.err_est);
  s["derivative_norm_pow"] = detail::estimate(dnp.value, dnp.err_est);
  s["sobolev_norm"] = detail::estimate(sn.value, sn.err_est);
  return {s};
}

/// Nonincreasing rearrangement under x^l dx, written as a profile file.
inline CommandResult cmd_rearrange(Params prm) {
  const auto path = prm.str("profile");
  const double l = prm.num("l", 0.0);
  const double p = prm.num("p", 2.0);
  const double k = prm.num("k", 1.0);
  RunManifest m("rearrange", detail::out_dir(prm));
  m.set_params(prm.resolved());
  const RearrangementWeights rw{k, l, p};
  rw.validate();
  const auto file = read_profile(path);
  const auto& u = file.profile;
  const RadialProfile r = rearrange(u, l);
  json s;
  json eq = json::object();
  for (double q : {1.0, 2.0, 4.0}) {
    const double a = u.empty() ? 0.0 : integrate_values(u, [q](double v) { return std::pow(v, q); }, l);
    const double b = r.empty() ? 0.0 : integrate_values(r, [q](double v) { return std::pow(v, q); }, l);
    eq[wtm::detail::format_double(q)] = json{{"original", detail::number(a)}, {"rearranged", detail::number(b)},
                                             {"rel_diff", detail::number(a > 0.0 ? std::abs(a - b) / a : std::abs(b))}};
  }
  const auto ps = polya_szego(u, rw);
  const std::string out = prm.has("out") ? prm.str("out") : m.artifact("profile", "txt");
  write_profile(out, r, {{"l", wtm::detail::format_double(l)}});
  s["manifest"] = m.to_json();
  s["output"] = out;
  s["nodes_in"] = u.size();
  s["nodes_out"] = r.size();
  s["equimeasurability"] = eq;
  s["dirichlet"] = json{{"m", rw.m()},
                        {"original", detail::number(ps.original)},
                        {"rearranged", detail::number(ps.rearranged)},
                        {"gap", detail::number(ps.gap())}};
  return {s};
}

/// F(u) and F(u / ||u||) for a profile file.
inline CommandResult cmd_tm_eval(Params prm) {
  const auto path = prm.str("profile");
  const double p = prm.num("p", 2.0);
  const double theta = prm.num("theta", 0.0);
  const double mu = detail::resolve_mu(prm, tm_threshold(p - 1.0, theta));
  const WeightParams wp = WeightParams::tm(p, theta, mu);
  const SeriesPolicy sp{};
  RunManifest m("tm-eval", detail::out_dir(prm));
  m.set_params(prm.resolved());
  detail::tolerances(m, sp);
  const auto u = read_profile(path).profile;
  const auto f = tm_functional(u, wp, sp);
  json s;
  s["manifest"] = m.to_json();
  s["mu"] = mu;
  s["mu_threshold"] = wp.mu_threshold();
  s["F"] = json{{"value", detail::number(f.value)},
                {"series_tail_bound", detail::number(f.series_tail_bound)},
                {"quad_err_est", detail::number(f.quad_err_est)}};
  if (!u.empty()) {
    const auto g = normalized_tm(u, wp, sp);
    s["sobolev_norm"] = sobolev_norm(u, wp.p, wp.alpha, wp.theta);
    s["F_normalized"] = json{{"value", detail::number(g.value)},
                             {"series_tail_bound", detail::number(g.series_tail_bound)},
                             {"quad_err_est", detail::number(g.quad_err_est)}};
  }
  return {s};
}

/// Moser sequence: blow-up lower bound for j = 1..j-max and direct quadrature for j <= quad-j-max.
inline CommandResult cmd_moser(Params prm) {
  const double p = prm.num("p", 2.0);
  const double theta = prm.num("theta", 0.0);
  const double R = prm.num("R", 1.0);
  const int jmax = prm.integer("j-max", 100);
  const int qmax = prm.integer("quad-j-max", 20);
  const WeightParams base = WeightParams::tm(p, theta);
  const double mu = detail::resolve_mu(prm, base.mu_threshold());
  const WeightParams wp = WeightParams::tm(p, theta, mu);
  wtm::detail::require(jmax >= 1 && qmax >= 0, "moser: need j-max >= 1 and quad-j-max >= 0");
  wtm::detail::require(R > 0.0, "moser: R must be positive");
  RunManifest m("moser", detail::out_dir(prm));
  m.set_params(prm.resolved());
  detail::Csv csv({"j", "blowup_bound", "exp_integral", "derivative_norm", "a_j"});
  double first_above = -1;
  double last_bound = 0.0;
  for (int j = 1; j <= jmax; ++j) {
    const double b = blowup_bound(j, mu, wp, R);
    double integral = std::numeric_limits<double>::quiet_NaN();
    double dn = std::numeric_limits<double>::quiet_NaN();
    if (j <= qmax) {
      integral = moser_exponential_integral(j, mu, wp, R);
      dn = derivative_norm(moser_radial(j, p, R, wp), p, wp.alpha);
    }
    if (first_above < 0 && b > 1e3) first_above = j;
    last_bound = b;
    csv.row({static_cast<double>(j), b, integral, dn, a_j(j, p)});
  }
  const auto trace = m.artifact("trace", "csv");
  csv.write(trace);
  json s;
  s["manifest"] = m.to_json();
  s["mu"] = mu;
  s["mu_threshold"] = wp.mu_threshold();
  s["rho"] = moser_rho(wp, R);
  s["final_bound"] = detail::number(last_bound);
  s["first_j_bound_above_1e3"] = first_above > 0 ? json(static_cast<int>(first_above)) : json(nullptr);
  return {s};
}

/// Normalized vanishing sequence phi_n against its limit mu^{p-1}/(p-1)!.
inline CommandResult cmd_vanish(Params prm) {
  const double p = prm.num("p", 2.0);
  const double theta = prm.num("theta", 0.0);
  const int steps = prm.integer("steps", 9);
  const double mu = detail::resolve_mu(prm, tm_threshold(p - 1.0, theta));
  wtm::detail::require(steps >= 1, "vanish: steps must be positive");
  const WeightParams wp = WeightParams::tm(p, theta, mu);
  const SeriesPolicy sp{};
  RunManifest m("vanish", detail::out_dir(prm));
  m.set_params(prm.resolved());
  detail::tolerances(m, sp);
  const auto vf = default_vanishing_family(wp, static_cast<std::size_t>(steps));
  detail::Csv csv({"n", "lambda", "F", "F_err", "sobolev_norm"});
  FunctionalReport last;
  for (int n = 0; n < steps; ++n) {
    const auto phi = vanishing_member(vf, static_cast<std::size_t>(n));
    last = tm_functional(phi, wp, sp);
    csv.row({static_cast<double>(n), vf.lambdas[static_cast<std::size_t>(n)], last.value, last.error_budget(),
             sobolev_norm(phi, wp.p, wp.alpha, wp.theta)});
  }
  const auto trace = m.artifact("trace", "csv");
  csv.write(trace);
  const double limit = vanishing_limit(p, mu);
  json s;
  s["manifest"] = m.to_json();
  s["mu"] = mu;
  s["final_lambda"] = vf.lambdas.back();
  s["final_F"] = detail::estimate(last.value, last.error_budget());
  s["limit"] = limit;
  s["distance_to_limit"] = std::abs(last.value - limit);
  return {s};
}

/// Randomized ascent for sup F over the unit sphere.
inline CommandResult cmd_extremal(Params prm) {
  const double p = prm.num("p", 2.0);
  const double theta = prm.num("theta", 0.0);
  const double mu = detail::resolve_mu(prm, tm_threshold(p - 1.0, theta), 0.5);
  const WeightParams wp = WeightParams::tm(p, theta, mu);
  const SearchConfig cfg = detail::search_config(prm);
  std::vector<RadialProfile> trials;
  if (prm.has("trial")) trials.push_back(read_profile(prm.str("trial")).profile);
  RunManifest m("extremal", detail::out_dir(prm));
  m.set_params(prm.resolved());
  m.set_seed(cfg.seed);
  detail::tolerances(m, cfg.series);
  m.set_tolerance("convergence_rel", cfg.tolerance);
  m.set_tolerance("convergence_window", cfg.window);
  const auto rep = maximize_tm(wp, cfg, trials);
  detail::Csv csv({"iteration", "best"});
  for (std::size_t i = 0; i < rep.trace.size(); ++i) csv.row({static_cast<double>(i + 1), rep.trace[i]});
  const auto trace = m.artifact("trace", "csv");
  const auto prof = m.artifact("profile", "txt");
  csv.write(trace);
  write_profile(prof, rep.best, {{"p", wtm::detail::format_double(p)}, {"theta", wtm::detail::format_double(theta)}});
  json s;
  s["manifest"] = m.to_json();
  s["mu"] = mu;
  s["mu_threshold"] = wp.mu_threshold();
  s["value"] = detail::estimate(rep.value, rep.evaluation.error_budget());
  s["vanishing_level"] = rep.vanishing_level;
  s["margin"] = rep.margin;
  s["certificates"] = json{{"sobolev_norm", rep.sobolev_norm},
                           {"unit_norm", rep.unit_norm},
                           {"nonincreasing", rep.nonincreasing},
                           {"exceeds_vanishing", rep.exceeds_vanishing}};
  s["iterations"] = rep.iterations;
  s["accepted"] = rep.accepted;
  s["converged"] = rep.converged;
  return {s};
}

/// Minimization of the p = 2 Gagliardo-Nirenberg ratio.
inline CommandResult cmd_gn(Params prm) {
  const double theta = prm.num("theta", 0.0);
  const SearchConfig cfg = detail::search_config(prm);
  RunManifest m("gn", detail::out_dir(prm));
  m.set_params(prm.resolved());
  m.set_seed(cfg.seed);
  m.set_tolerance("convergence_rel", cfg.tolerance);
  const auto rep = minimize_gn(theta, cfg);
  detail::Csv csv({"iteration", "best"});
  for (std::size_t i = 0; i < rep.trace.size(); ++i) csv.row({static_cast<double>(i + 1), rep.trace[i]});
  const auto trace = m.artifact("trace", "csv");
  const auto prof = m.artifact("profile", "txt");
  csv.write(trace);
  write_profile(prof, rep.best, {{"theta", wtm::detail::format_double(theta)}});
  const double envelope = std::numbers::pi * (1.0 + theta);
  json s;
  s["manifest"] = m.to_json();
  s["trial_value"] = rep.trial_value;
  s["envelope"] = envelope;
  s["estimate"] = rep.estimate;
  s["delta"] = envelope - rep.estimate;
  s["iterations"] = rep.iterations;
  s["accepted"] = rep.accepted;
  return {s};
}

/// Shooting solution of the Euler-Lagrange equation and its nodal residual.
inline CommandResult cmd_el_shoot(Params prm) {
  const double lambda = prm.num("lambda", 1.0);
  const double theta = prm.num("theta", 0.0);
  RunManifest m("el-shoot", detail::out_dir(prm));
  m.set_params(prm.resolved());
  const ShootConfig sc{};
  m.set_tolerance("max_log_step", sc.max_log_step);
  const auto sol = el_shoot(lambda, theta, sc);
  const auto res = el_residual(sol.profile, lambda, theta);
  const auto v = sol.profile.values();
  double rmax = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < res.r.size(); ++i) {
    scale = std::max(scale, res.scale[i]);
    if (v[i + 1] >= 1e-5 * sol.u0) rmax = std::max(rmax, std::abs(res.r[i]));
  }
  const auto prof = m.artifact("profile", "txt");
  write_profile(prof, sol.profile, {{"lambda", wtm::detail::format_double(lambda)}, {"theta", wtm::detail::format_double(theta)}});
  json s;
  s["manifest"] = m.to_json();
  s["u0"] = sol.u0;
  s["bisections"] = sol.bisections;
  s["x_cut"] = sol.x_cut;
  s["nodes"] = sol.profile.size();
  s["residual_max"] = rmax;
  s["residual_scale"] = scale;
  s["gn_ratio"] = gn_ratio(sol.profile, theta);
  return {s};
}

using Command = std::function<CommandResult(Params)>;

inline const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table{
      {"norms", cmd_norms},   {"rearrange", cmd_rearrange}, {"tm-eval", cmd_tm_eval}, {"moser", cmd_moser},
      {"vanish", cmd_vanish}, {"extremal", cmd_extremal},   {"gn", cmd_gn},           {"el-shoot", cmd_el_shoot},
  };
  return table;
}

/// Runs a command, mapping validation errors to exit 2 and numerical failures to exit 3.
inline CommandResult run(const std::string& name, const Params& prm) {
  try {
    const auto it = commands().find(name);
    if (it == commands().end()) throw ValidationError("unknown command '" + name + "'");
    return it->second(prm);
  } catch (const ValidationError& e) {
    return {json{{"command", name}, {"error", "validation"}, {"message", e.what()}}, kExitValidation};
  } catch (const NumericalFailure& e) {
    return {json{{"command", name}, {"error", "numerical"}, {"message", e.what()}}, kExitNumerical};
  }
}

inline std::vector<double> parse_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  Params scratch;
  while (std::getline(ss, item, ',')) {
    scratch.set(key, wtm::detail::trim(item));
    out.push_back(scratch.num(key));
  }
  wtm::detail::require(!out.empty(), "empty list for --" + key);
  return out;
}

/// Cartesian sweep over theta, mu-ratio and j-max lists; runs execute concurrently.
/// Other parameters are passed through to every run.
inline CommandResult cmd_sweep(Params prm) {
  try {
    const auto target = prm.str("command");
    wtm::detail::require(target != "sweep" && commands().count(target), "sweep: unknown target command '" + target + "'");
    std::map<std::string, std::vector<double>> axes;
    for (const char* key : {"theta", "mu-ratio", "j-max"})
      if (prm.has(key)) axes[key] = parse_list(prm.raw().at(key), key);

    std::vector<Params> runs{Params(prm.raw())};
    runs.front().set("command", target);
    for (const auto& [key, values] : axes) {
      std::vector<Params> next;
      for (const auto& r : runs)
        for (double v : values) {
          Params q(r.raw());
          q.set(key, wtm::detail::format_double(v));
          next.push_back(std::move(q));
        }
      runs = std::move(next);
    }
    std::vector<std::future<CommandResult>> futures;
    for (auto& r : runs) {
      std::map<std::string, std::string> raw = r.raw();
      raw.erase("command");
      futures.push_back(std::async(std::launch::async, [target, raw] { return run(target, Params(raw)); }));
    }
    json s;
    s["command"] = "sweep";
    s["target"] = target;
    s["runs"] = json::array();
    int code = kExitOk;
    for (auto& f : futures) {
      auto r = f.get();
      code = std::max(code, r.exit_code);
      s["runs"].push_back(json{{"exit_code", r.exit_code}, {"summary", r.summary}});
    }
    return {s, code};
  } catch (const ValidationError& e) {
    return {json{{"command", "sweep"}, {"error", "validation"}, {"message", e.what()}}, kExitValidation};
  }
}

inline CommandResult dispatch(const std::string& name, const Params& prm) {
  if (name == "sweep") return cmd_sweep(prm);
  return run(name, prm);
}

} // namespace wtm::cli
