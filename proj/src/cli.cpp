#include "nbattack/cli.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "nbattack/exact.hpp"
#include "nbattack/experiment.hpp"
#include "nbattack/stein.hpp"
#include "nbattack/version.hpp"

namespace nbattack::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::config_invalid, what); }

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) invalid(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.count(key)) invalid("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get_integer(const json& obj, const char* key, const std::string& where, T fallback) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  const json& v = obj[key];
  if (!v.is_number_integer()) invalid(where + "." + key + " must be an integer");
  if constexpr (std::is_unsigned_v<T>) {
    if (v.is_number_unsigned()) return v.get<T>();
    if (v.get<long long>() < 0) invalid(where + "." + key + " must be nonnegative");
  }
  return v.get<T>();
}

bool get_bool(const json& obj, const char* key, const std::string& where, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) invalid(where + "." + key + " must be a boolean");
  return obj[key].get<bool>();
}

std::string iso_utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::io_failure, "cannot open " + path.string() + " for writing");
  return os;
}

void write_json(const fs::path& path, const json& doc) {
  auto os = open_output(path);
  os << doc.dump(2) << '\n';
  if (!os) throw Error(ErrorCode::io_failure, "write to " + path.string() + " failed");
}

void prepare_dir(const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(ErrorCode::io_failure, "cannot create " + out.string() + ": " + ec.message());
}

struct Instance {
  Graph graph;
  NeighborhoodIndex index;
};

Instance make_instance(const FamilySpec& spec) {
  Graph g = build_family(spec);
  NeighborhoodIndex index = build_neighborhood_index(g);
  return {std::move(g), std::move(index)};
}

int require_r_star(const NeighborhoodIndex& index) {
  if (!index.r_star) invalid("Stein analysis requires every node to have the same number of near neighbours");
  return *index.r_star;
}

json graph_json(const FamilySpec& spec, const Instance& inst) {
  json j;
  j["family"] = family_to_json(spec);
  j["N"] = inst.graph.size();
  j["r"] = inst.graph.degree();
  j["r_star"] = inst.index.r_star ? json(*inst.index.r_star) : json(nullptr);
  j["near_pairs"] = inst.index.near_pairs.size();
  return j;
}

json estimates_json(const EstimateReport& e) {
  return {{"count", e.count},
          {"mean_y", e.mean_y},
          {"var_y_hat", e.var_y_hat},
          {"cov_eta_theta_hat", e.cov_eta_theta_hat},
          {"var_cond_m2_hat", e.var_cond_m2_hat},
          {"se_mean_y", e.se_mean_y},
          {"se_var_y", e.se_var_y},
          {"se_cov_eta_theta", e.se_cov_eta_theta},
          {"se_var_cond_m2", e.se_var_cond_m2},
          {"lag1_autocorr_y", e.lag1_autocorr_y},
          {"batches", e.batches},
          {"se_method", e.se_method},
          {"cov_eta_theta_sign", e.cov_eta_theta_hat < 0 ? "negative" : (e.cov_eta_theta_hat > 0 ? "positive" : "zero")}};
}

json terms_json(const BoundTerms& t) {
  return {{"variance_term", t.variance_term}, {"cubic_term", t.cubic_term}, {"square_term", t.square_term}, {"total", t.total()}};
}

json sourced_json(const SourcedValue& v) {
  json j = {{"value", v.value}, {"source", to_string(v.source)}};
  if (v.source == InputSource::estimated) j["standard_error"] = v.standard_error;
  return j;
}

json stein_json(const SteinReport& s) {
  json j = {{"r", s.r},
            {"r_star", s.r_star},
            {"N", s.n},
            {"lambda", s.lambda.str()},
            {"lambda_value", s.lambda.to_double()},
            {"A", s.a},
            {"sigma2_lower", s.sigma2_bracket.lower.to_double()},
            {"sigma2_upper", s.sigma2_bracket.upper.to_double()},
            {"sigma2", sourced_json(s.sigma2)},
            {"var_term", sourced_json(s.var_term)},
            {"rollin_terms", terms_json(s.rollin)},
            {"assembled_terms", terms_json(s.assembled)},
            {"rollin_delta", s.rollin_delta},
            {"theorem_delta_rstar", s.theorem_delta_rstar},
            {"theorem_delta_rsq", s.theorem_delta_rsq}};
  if (s.rollin_delta_se) j["rollin_delta_se"] = *s.rollin_delta_se;
  return j;
}

json exact_json(const ExactSolution& sol, const Instance& inst, bool symmetric) {
  const ExactReport& r = sol.report;
  const StationaryDistribution& d = sol.distribution;
  const Sigma2Bracket bracket = sigma2_bounds(inst.graph.degree(), inst.graph.size());
  json j = {{"class_size", r.class_size},
            {"solver", d.method},
            {"iterations", d.iterations},
            {"residual", d.residual},
            {"mass_error", d.mass_error},
            {"flip_asymmetry", flip_asymmetry(d)},
            {"mean_y", r.mean_y},
            {"var_y", r.var_y},
            {"sigma2_lower", bracket.lower.to_double()},
            {"sigma2_upper", bracket.upper.to_double()},
            {"sigma2_in_bracket", r.var_y >= bracket.lower.to_double() - 1e-9 && r.var_y <= bracket.upper.to_double() + 1e-9},
            {"mean_eta", r.mean_eta},
            {"mean_theta", r.mean_theta},
            {"cov_eta_theta", r.cov_eta_theta},
            {"mean_m2", r.mean_m2},
            {"var_m2_state", r.var_m2_state},
            {"var_m2_ylevel", r.var_m2_ylevel},
            {"var_square_sum", r.var_square_sum},
            {"var_pair_route", r.var_pair_route}};
  if (symmetric) {
    j["linearity"] = {{"max_abs_deviation", sol.linearity.max_abs_deviation},
                      {"exact_identity_holds", sol.linearity.exact_identity_holds},
                      {"worst_state", sol.linearity.worst_state},
                      {"states_checked", sol.linearity.states_checked}};
  }
  return j;
}

json fkg_json(const FkgReport& f) {
  json list = json::array();
  for (const auto& v : f.violations) {
    list.push_back({{"x", v.x}, {"y", v.y}, {"meet", v.meet}, {"join", v.join},
                    {"pi_x", v.pi_x}, {"pi_y", v.pi_y}, {"pi_meet", v.pi_meet}, {"pi_join", v.pi_join}});
  }
  return {{"exhaustive", f.exhaustive},
          {"pairs_examined", f.pairs_examined},
          {"violations_found", f.violations_found},
          {"worst_gap", f.worst_gap},
          {"log_supermodular", f.violations_found == 0},
          {"violations", list}};
}

json distances_json(const Distances& d) {
  return {{"sigma_y", d.sigma_y},
          {"normalization_source", to_string(d.normalization)},
          {"wasserstein1", d.wasserstein1},
          {"kolmogorov", d.kolmogorov}};
}

void write_manifest(const fs::path& out, const std::string& command, const RunConfig& cfg, const std::string& started,
                    double seconds, const std::vector<std::string>& files) {
  json outputs = json::object();
  for (const auto& f : files) outputs[f] = "sha256:" + sha256_file(out / f);
  write_json(out / "manifest.json", {{"tool", "nbattack"},
                                     {"version", kVersion},
                                     {"command", command},
                                     {"config", cfg.to_json()},
                                     {"seed", cfg.chain.seed},
                                     {"started_at", started},
                                     {"wall_clock_seconds", seconds},
                                     {"outputs", outputs}});
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void warn_cap(const RunConfig& cfg) {
  if (cfg.cap > kDefaultStateCap) {
    std::cerr << "warning: exact enumeration cap raised to " << cfg.cap << " (default " << kDefaultStateCap
              << "); memory grows as 2^N\n";
  }
}

}  // namespace

ChainConfig RunConfig::chain_for(int n) const {
  ChainConfig c = chain;
  c.burn_in_steps = burn_in_steps.value_or(default_burn_in(n));
  c.thinning = thinning.value_or(default_thinning(n));
  return c;
}

json family_to_json(const FamilySpec& spec) {
  json j = {{"kind", std::string(to_string(spec.kind))}};
  switch (spec.kind) {
    case Family::hypercube: j["dim"] = spec.dim; break;
    case Family::complete_bipartite: j["side"] = spec.side; break;
    case Family::circulant:
      j["n"] = spec.n;
      j["offsets"] = spec.offsets;
      break;
    default: j["n"] = spec.n; break;
  }
  return j;
}

FamilySpec family_from_json(const json& doc) {
  check_keys(doc, "family", {"kind", "n", "dim", "side", "offsets"});
  if (!doc.contains("kind") || !doc["kind"].is_string()) invalid("family.kind must be a string");
  FamilySpec spec;
  try {
    spec.kind = parse_family(doc["kind"].get<std::string>());
  } catch (const Error& e) {
    invalid(e.what());
  }
  spec.n = get_integer<int>(doc, "n", "family", 0);
  spec.dim = get_integer<int>(doc, "dim", "family", 0);
  spec.side = get_integer<int>(doc, "side", "family", 0);
  if (doc.contains("offsets")) {
    if (!doc["offsets"].is_array()) invalid("family.offsets must be an array of integers");
    for (const auto& v : doc["offsets"]) {
      if (!v.is_number_integer()) invalid("family.offsets must be an array of integers");
      spec.offsets.push_back(v.get<int>());
    }
  }
  const char* needed = spec.kind == Family::hypercube ? "dim" : spec.kind == Family::complete_bipartite ? "side" : "n";
  if (!doc.contains(needed)) invalid("family of kind " + std::string(to_string(spec.kind)) + " requires '" + needed + "'");
  if (spec.kind == Family::circulant && spec.offsets.empty()) invalid("circulant family requires 'offsets'");
  return spec;
}

RunConfig parse_run_config(const json& doc) {
  check_keys(doc, "config", {"family", "chain", "modes", "cap", "fkg_limit", "sweep", "output_dir"});
  RunConfig cfg;
  if (!doc.contains("family")) invalid("config requires 'family'");
  cfg.family = family_from_json(doc["family"]);

  if (doc.contains("chain")) {
    const json& c = doc["chain"];
    check_keys(c, "chain", {"p", "seed", "replicas", "samples", "burn_in_steps", "thinning"});
    if (c.contains("p")) {
      if (!c["p"].is_number()) invalid("chain.p must be a number");
      cfg.chain.p = c["p"].get<double>();
    }
    cfg.chain.seed = get_integer<std::uint64_t>(c, "seed", "chain", 0);
    cfg.chain.replicas = get_integer<std::uint32_t>(c, "replicas", "chain", 1);
    cfg.chain.samples = get_integer<std::uint64_t>(c, "samples", "chain", 0);
    if (c.contains("burn_in_steps") && !c["burn_in_steps"].is_null()) {
      cfg.burn_in_steps = get_integer<std::uint64_t>(c, "burn_in_steps", "chain", 0);
    }
    if (c.contains("thinning") && !c["thinning"].is_null()) {
      cfg.thinning = get_integer<std::uint64_t>(c, "thinning", "chain", 1);
    }
  }
  if (!(cfg.chain.p > 0.0 && cfg.chain.p < 1.0)) invalid("chain.p must lie in (0,1)");
  if (cfg.chain.replicas < 1) invalid("chain.replicas must be >= 1");
  if (cfg.thinning && *cfg.thinning < 1) invalid("chain.thinning must be >= 1");

  if (doc.contains("modes")) {
    const json& m = doc["modes"];
    check_keys(m, "modes", {"exact", "fkg", "distances", "stein", "write_samples", "dump_pi"});
    cfg.exact = get_bool(m, "exact", "modes", cfg.exact);
    cfg.fkg = get_bool(m, "fkg", "modes", cfg.fkg);
    cfg.distances = get_bool(m, "distances", "modes", cfg.distances);
    cfg.stein = get_bool(m, "stein", "modes", cfg.stein);
    cfg.write_samples = get_bool(m, "write_samples", "modes", cfg.write_samples);
    cfg.dump_pi = get_bool(m, "dump_pi", "modes", cfg.dump_pi);
  }
  if ((cfg.stein || cfg.distances) && cfg.chain.p != 0.5) {
    invalid("Stein analysis and normal distances require chain.p = 0.5; disable modes.stein and modes.distances");
  }

  cfg.cap = get_integer<int>(doc, "cap", "config", kDefaultStateCap);
  if (cfg.cap < 1 || cfg.cap > kMaxStateCap) invalid("cap must lie in 1.." + std::to_string(kMaxStateCap));
  cfg.fkg_limit = get_integer<std::size_t>(doc, "fkg_limit", "config", 100);

  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    check_keys(s, "sweep", {"sizes"});
    if (!s.contains("sizes") || !s["sizes"].is_array()) invalid("sweep.sizes must be an array of integers");
    for (const auto& v : s["sizes"]) {
      if (!v.is_number_integer()) invalid("sweep.sizes must be an array of integers");
      cfg.sweep_sizes.push_back(v.get<int>());
    }
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) invalid("output_dir must be a string");
    cfg.output_dir = doc["output_dir"].get<std::string>();
  }
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::config_invalid, "cannot read config " + path.string());
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::config_invalid, std::string("malformed JSON: ") + e.what());
  }
  return parse_run_config(doc);
}

json RunConfig::to_json() const {
  json c = {{"p", chain.p}, {"seed", chain.seed}, {"replicas", chain.replicas}, {"samples", chain.samples}};
  c["burn_in_steps"] = burn_in_steps ? json(*burn_in_steps) : json(nullptr);
  c["thinning"] = thinning ? json(*thinning) : json(nullptr);
  json j = {{"family", family_to_json(family)},
            {"chain", c},
            {"modes", {{"exact", exact}, {"fkg", fkg}, {"distances", distances}, {"stein", stein},
                       {"write_samples", write_samples}, {"dump_pi", dump_pi}}},
            {"cap", cap},
            {"fkg_limit", fkg_limit}};
  if (!sweep_sizes.empty()) j["sweep"] = {{"sizes", sweep_sizes}};
  if (!output_dir.empty()) j["output_dir"] = output_dir;
  return j;
}

void run_simulate(const RunConfig& cfg, const fs::path& out) {
  const std::string started = iso_utc_now();
  const Stopwatch clock;
  if (cfg.chain.samples == 0) invalid("simulate requires chain.samples > 0");
  if (cfg.chain.samples * cfg.chain.replicas < 2) invalid("simulate requires at least two retained samples in total");
  const Instance inst = make_instance(cfg.family);
  const ChainConfig chain = cfg.chain_for(inst.graph.size());
  prepare_dir(out);

  std::optional<ExactSolution> exact;
  if (cfg.exact) {
    warn_cap(cfg);
    exact = solve_exact(inst.graph, inst.index, chain.p, cfg.cap);
  }

  const SimulationResult sim = simulate_chain(inst.graph, inst.index, chain, {cfg.write_samples, 0});
  const EstimateReport& est = sim.estimates;

  json summary = graph_json(cfg.family, inst);
  summary["chain"] = {{"p", chain.p}, {"seed", chain.seed}, {"replicas", chain.replicas}, {"samples", chain.samples},
                      {"burn_in_steps", chain.burn_in_steps}, {"thinning", chain.thinning}};
  summary["estimates"] = estimates_json(est);

  SourcedValue sigma2{est.var_y_hat, InputSource::estimated, est.se_var_y};
  SourcedValue var_term{est.var_cond_m2_hat, InputSource::estimated, est.se_var_cond_m2};
  if (exact) {
    const ExactReport& r = exact->report;
    summary["exact"] = exact_json(*exact, inst, chain.p == 0.5);
    summary["crosscheck"] = {{"z_var_y", z_score(est.var_y_hat, r.var_y, est.se_var_y)},
                             {"z_cov_eta_theta", z_score(est.cov_eta_theta_hat, r.cov_eta_theta, est.se_cov_eta_theta)},
                             {"z_var_cond_m2", z_score(est.var_cond_m2_hat, r.var_m2_state, est.se_var_cond_m2)},
                             {"z_mean_y", z_score(est.mean_y, r.mean_y, est.se_mean_y)}};
    sigma2 = {r.var_y, InputSource::exact, 0.0};
    var_term = {r.var_m2_ylevel, InputSource::exact, 0.0};
  }
  const Sigma2Bracket bracket = sigma2_bounds(inst.graph.degree(), inst.graph.size());
  summary["lemma2_consistency"] = {
      {"lower", bracket.lower.to_double()},
      {"upper", bracket.upper.to_double()},
      {"consistent_within_3se", est.var_y_hat + 3 * est.se_var_y >= bracket.lower.to_double() &&
                                    est.var_y_hat - 3 * est.se_var_y <= bracket.upper.to_double()}};

  if (cfg.stein) {
    const SteinReport stein = make_stein_report(inst.graph.degree(), require_r_star(inst.index), inst.graph.size(),
                                                sigma2, var_term);
    summary["stein"] = stein_json(stein);
  }

  std::optional<Distances> dist;
  if (cfg.distances) {
    if (!(sigma2.value > 0.0)) throw Error(ErrorCode::nonpositive_sigma, "sample variance of Y is zero");
    dist = normal_distances(sim.node_sums, std::sqrt(sigma2.value), sigma2.source);
    summary["distances"] = distances_json(*dist);
  }

  std::vector<std::string> files;
  if (cfg.write_samples) {
    auto os = open_output(out / "samples.csv");
    os << "replica,sample_index,Y,W,eta,theta,m2\n";
    const double sigma = std::sqrt(sigma2.value);
    for (const auto& row : sim.rows) {
      os << row.replica << ',' << row.index << ',' << row.y << ','
         << (sigma > 0.0 ? format_double(static_cast<double>(row.y) / sigma) : std::string()) << ',' << row.eta << ','
         << row.theta << ',' << format_double(row.m2) << '\n';
    }
    if (!os) throw Error(ErrorCode::io_failure, "write to samples.csv failed");
    files.push_back("samples.csv");
  }
  write_json(out / "summary.json", summary);
  files.push_back("summary.json");
  write_manifest(out, "simulate", cfg, started, clock.seconds(), files);
}

void run_exact(const RunConfig& cfg, const fs::path& out) {
  const std::string started = iso_utc_now();
  const Stopwatch clock;
  warn_cap(cfg);
  const Instance inst = make_instance(cfg.family);
  prepare_dir(out);
  const ExactSolution sol = solve_exact(inst.graph, inst.index, cfg.chain.p, cfg.cap);

  json doc = graph_json(cfg.family, inst);
  doc["p"] = cfg.chain.p;
  doc["exact"] = exact_json(sol, inst, cfg.chain.p == 0.5);
  if (cfg.fkg) doc["fkg"] = fkg_json(fkg_violations(sol.distribution, cfg.fkg_limit, cfg.chain.seed));
  if (cfg.stein) {
    const SteinReport stein =
        make_stein_report(inst.graph.degree(), require_r_star(inst.index), inst.graph.size(),
                          SourcedValue{sol.report.var_y, InputSource::exact, 0.0},
                          SourcedValue{sol.report.var_m2_ylevel, InputSource::exact, 0.0});
    doc["stein"] = stein_json(stein);
  }
  std::vector<std::string> files;
  write_json(out / "exact.json", doc);
  files.push_back("exact.json");
  if (cfg.dump_pi) {
    auto os = open_output(out / "pi.csv");
    write_pi_csv(os, sol.distribution);
    if (!os) throw Error(ErrorCode::io_failure, "write to pi.csv failed");
    files.push_back("pi.csv");
  }
  write_manifest(out, "exact", cfg, started, clock.seconds(), files);
}

void run_bound(const RunConfig& cfg, const fs::path& out) {
  const std::string started = iso_utc_now();
  const Stopwatch clock;
  if (cfg.chain.p != 0.5) invalid("bound requires chain.p = 0.5");
  const Instance inst = make_instance(cfg.family);
  prepare_dir(out);
  std::optional<SourcedValue> sigma2, var_term;
  if (cfg.exact) {
    warn_cap(cfg);
    const ExactSolution sol = solve_exact(inst.graph, inst.index, 0.5, cfg.cap);
    sigma2 = SourcedValue{sol.report.var_y, InputSource::exact, 0.0};
    var_term = SourcedValue{sol.report.var_m2_ylevel, InputSource::exact, 0.0};
  }
  const SteinReport stein =
      make_stein_report(inst.graph.degree(), require_r_star(inst.index), inst.graph.size(), sigma2, var_term);
  json doc = graph_json(cfg.family, inst);
  doc["stein"] = stein_json(stein);
  write_json(out / "bound.json", doc);
  write_manifest(out, "bound", cfg, started, clock.seconds(), {"bound.json"});
}

void run_sweep(const RunConfig& cfg, const fs::path& out) {
  const std::string started = iso_utc_now();
  const Stopwatch clock;
  if (cfg.sweep_sizes.empty()) invalid("sweep requires sweep.sizes");
  if (cfg.chain.p != 0.5) invalid("sweep requires chain.p = 0.5");
  const bool simulate = cfg.distances && cfg.chain.samples > 0;
  if (simulate && cfg.chain.samples * cfg.chain.replicas < 2) invalid("sweep simulation needs two or more samples");
  prepare_dir(out);

  auto os = open_output(out / "sweep.csv");
  os << "kind,size,N,r,r_star,lambda,sigma2,sigma2_source,theorem_delta_rstar,theorem_delta_rsq,rollin_delta,"
        "wasserstein1,kolmogorov\n";
  for (int size : cfg.sweep_sizes) {
    const FamilySpec spec = cfg.family.with_size(size);
    const Instance inst = make_instance(spec);
    const int r = inst.graph.degree();
    const int n = inst.graph.size();
    const int r_star = require_r_star(inst.index);

    std::optional<SourcedValue> sigma2, var_term;
    std::optional<Distances> dist;
    if (cfg.exact && n <= cfg.cap) {
      const ExactSolution sol = solve_exact(inst.graph, inst.index, 0.5, cfg.cap);
      sigma2 = SourcedValue{sol.report.var_y, InputSource::exact, 0.0};
      var_term = SourcedValue{sol.report.var_m2_ylevel, InputSource::exact, 0.0};
    }
    if (simulate) {
      const SimulationResult sim = simulate_chain(inst.graph, inst.index, cfg.chain_for(n), {false, 0});
      if (!sigma2) {
        sigma2 = SourcedValue{sim.estimates.var_y_hat, InputSource::estimated, sim.estimates.se_var_y};
        var_term = SourcedValue{sim.estimates.var_cond_m2_hat, InputSource::estimated, sim.estimates.se_var_cond_m2};
      }
      if (sigma2->value > 0.0) dist = normal_distances(sim.node_sums, std::sqrt(sigma2->value), sigma2->source);
    }
    const SteinReport stein = make_stein_report(r, r_star, n, sigma2, var_term);
    os << to_string(spec.kind) << ',' << size << ',' << n << ',' << r << ',' << r_star << ','
       << format_double(stein.lambda.to_double()) << ',' << format_double(stein.sigma2.value) << ','
       << to_string(stein.sigma2.source) << ',' << format_double(stein.theorem_delta_rstar) << ','
       << format_double(stein.theorem_delta_rsq) << ',' << format_double(stein.rollin_delta) << ','
       << (dist ? format_double(dist->wasserstein1) : "") << ',' << (dist ? format_double(dist->kolmogorov) : "")
       << '\n';
  }
  os.close();
  if (!os) throw Error(ErrorCode::io_failure, "write to sweep.csv failed");
  write_manifest(out, "sweep", cfg, started, clock.seconds(), {"sweep.csv"});
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::state_space_too_large: return 3;
    case ErrorCode::convergence_failure:
    case ErrorCode::multiple_closed_classes: return 4;
    case ErrorCode::io_failure: return 1;
    default: return 2;
  }
}

std::string sha256_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::io_failure, "cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (is) {
    is.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(is.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return hex.str();
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace nbattack::cli
