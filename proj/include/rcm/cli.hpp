#pragma once

// Job description and dispatcher behind the `rcm` command-line tool.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rcm/cumulants.hpp"
#include "rcm/errors.hpp"
#include "rcm/golden.hpp"
#include "rcm/io.hpp"
#include "rcm/simulator.hpp"
#include "rcm/stats.hpp"

namespace rcm::cli {

using io::json;

/// Environment variable overriding the ground-set size limit.
inline constexpr const char* kMaxGroundSetEnv = "RCM_MAX_GROUND_SET";

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kValidationError = 2,
  kDivergenceError = 3,
  kResourceError = 4,
  kCheckFailed = 5,
};

struct JobSpec {
  std::string command;
  std::vector<GraphSpec> graphs;
  int dimension = 1;
  std::string beta = "pi";  // "pi" or a decimal
  Intensity intensity = Intensity::flat;
  std::vector<std::vector<double>> endpoints;  // positions; empty means the origin
  int order = 1;
  int r = 0;              // partitions: row size when `rows` is empty
  std::vector<int> rows;  // partitions: explicit row sizes
  PartitionFilter filter = PartitionFilter::connected_non_flat;
  std::vector<double> lambdas;
  std::string format = "json";
  unsigned workers = 0;
  std::uint64_t seed = 1;
  int max_elements = kDefaultMaxElements;
  bool progress = false;
  // connectivity
  int truncation = 3;
  // gram-charlier
  int gc_order = 4;
  std::vector<double> kappas;  // overrides the engine when non-empty
  std::optional<double> x_min, x_max;
  int points = 201;
  // simulate
  std::uint64_t replications = 1000;
  int batches = 20;
  double half_width = 0.0;
  std::string replication_csv;
  // validate
  std::string suite = "tables";

  bool operator==(const JobSpec&) const = default;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"partitions",   "moment",       "cumulant", "joint-moment",
                                              "joint-cumulant", "connectivity", "gram-charlier", "simulate",
                                              "validate"};
  return names;
}

inline PartitionFilter parse_filter(const std::string& s) {
  if (s == "all") return PartitionFilter::all;
  if (s == "nonflat" || s == "non-flat") return PartitionFilter::non_flat;
  if (s == "connected-nonflat" || s == "connected-non-flat") return PartitionFilter::connected_non_flat;
  if (s == "single-pass" || s == "single-pass-connected-non-flat") return PartitionFilter::single_pass_connected_non_flat;
  throw DomainError("unknown filter '" + s + "' (all | nonflat | connected-nonflat | single-pass)");
}

inline Intensity parse_intensity(const std::string& s) {
  if (s == "flat") return Intensity::flat;
  if (s == "gaussian") return Intensity::gaussian;
  throw DomainError("unknown intensity '" + s + "' (flat | gaussian)");
}

inline Beta parse_beta(const std::string& s) {
  if (s == "pi") return Beta::pi();
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw DomainError("beta must be 'pi' or a decimal, got '" + s + "'");
  return Beta::decimal(v);
}

/// "0.5,1,2" or "start:stop:count" (inclusive, evenly spaced).
inline std::vector<double> parse_lambda_grid(const std::string& s) {
  std::vector<double> out;
  auto number = [&](const std::string& t) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size() || t.empty()) throw DomainError("malformed number '" + t + "' in lambda grid");
    return v;
  };
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw DomainError("lambda range must be start:stop:count");
    double a = number(parts[0]);
    double b = number(parts[1]);
    int count = static_cast<int>(number(parts[2]));
    if (count < 1) throw DomainError("lambda range needs a positive count");
    for (int i = 0; i < count; ++i) out.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
  } else {
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(number(p));
  }
  for (double v : out)
    if (!(v >= 0) || !std::isfinite(v)) throw DomainError("lambda values must be finite and non-negative");
  return out;
}

/// Inline JSON, or @path to read it from a file.
inline json parse_json_argument(const std::string& text, const std::string& what) {
  std::string body = text;
  if (!text.empty() && text[0] == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw DomainError("cannot read " + what + " file '" + text.substr(1) + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw DomainError("malformed " + what + " JSON: " + e.what());
  }
}

/// Ground-set limit from the environment, or the default.
inline int max_elements_from_env() {
  const char* v = std::getenv(kMaxGroundSetEnv);
  if (!v || !*v) return kDefaultMaxElements;
  char* end = nullptr;
  long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1 || n > 64) throw DomainError(std::string(kMaxGroundSetEnv) + " must be an integer in 1..64");
  return static_cast<int>(n);
}

inline json to_json(const JobSpec& j) {
  json graphs = json::array();
  for (const auto& g : j.graphs) graphs.push_back(io::to_json(g));
  json out = {{"command", j.command},
              {"graphs", graphs},
              {"dimension", j.dimension},
              {"beta", j.beta},
              {"intensity", to_string(j.intensity)},
              {"endpoints", j.endpoints},
              {"order", j.order},
              {"r", j.r},
              {"rows", j.rows},
              {"filter", to_string(j.filter)},
              {"lambdas", j.lambdas},
              {"format", j.format},
              {"workers", j.workers},
              {"seed", j.seed},
              {"max_elements", j.max_elements},
              {"progress", j.progress},
              {"truncation", j.truncation},
              {"gc_order", j.gc_order},
              {"kappas", j.kappas},
              {"points", j.points},
              {"replications", j.replications},
              {"batches", j.batches},
              {"half_width", j.half_width},
              {"replication_csv", j.replication_csv},
              {"suite", j.suite}};
  out["x_min"] = j.x_min ? json(*j.x_min) : json(nullptr);
  out["x_max"] = j.x_max ? json(*j.x_max) : json(nullptr);
  return out;
}

inline JobSpec job_from_json(const json& in) {
  try {
    JobSpec j;
    j.command = in.at("command").get<std::string>();
    j.graphs.clear();
    if (in.contains("graphs"))
      for (const auto& g : in.at("graphs")) j.graphs.push_back(io::graph_spec_from_json(g));
    auto get = [&](const char* key, auto& field) {
      if (in.contains(key)) field = in.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("dimension", j.dimension);
    get("beta", j.beta);
    if (in.contains("intensity")) j.intensity = parse_intensity(in.at("intensity").get<std::string>());
    get("endpoints", j.endpoints);
    get("order", j.order);
    get("r", j.r);
    get("rows", j.rows);
    if (in.contains("filter")) j.filter = parse_filter(in.at("filter").get<std::string>());
    get("lambdas", j.lambdas);
    get("format", j.format);
    get("workers", j.workers);
    get("seed", j.seed);
    get("max_elements", j.max_elements);
    get("progress", j.progress);
    get("truncation", j.truncation);
    get("gc_order", j.gc_order);
    get("kappas", j.kappas);
    get("points", j.points);
    get("replications", j.replications);
    get("batches", j.batches);
    get("half_width", j.half_width);
    get("replication_csv", j.replication_csv);
    get("suite", j.suite);
    if (in.contains("x_min") && !in.at("x_min").is_null()) j.x_min = in.at("x_min").get<double>();
    if (in.contains("x_max") && !in.at("x_max").is_null()) j.x_max = in.at("x_max").get<double>();
    return j;
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed job JSON: ") + e.what());
  }
}

inline ModelConfig model_of(const JobSpec& j) {
  ModelConfig m;
  m.dimension = j.dimension;
  m.beta = parse_beta(j.beta);
  m.intensity = j.intensity;
  m.endpoint_positions = j.endpoints;
  return m;
}

inline EngineOptions engine_options_of(const JobSpec& j, std::ostream& err) {
  EngineOptions o;
  o.workers = j.workers;
  o.max_elements = j.max_elements;
  if (j.filter == PartitionFilter::single_pass_connected_non_flat) o.cumulant_filter = j.filter;
  if (j.progress) o.progress = &err;
  return o;
}

namespace detail {

inline const GraphSpec& single_graph(const JobSpec& j) {
  if (j.graphs.size() != 1) throw DomainError("'" + j.command + "' needs exactly one graph spec (--graph)");
  return j.graphs.front();
}

inline double single_lambda(const JobSpec& j) {
  if (j.lambdas.size() != 1) throw DomainError("'" + j.command + "' needs exactly one lambda value");
  return j.lambdas.front();
}

inline void write_csv_job_comment(const JobSpec& j, std::ostream& out) { out << "# job: " << to_json(j).dump() << "\n"; }

inline int emit(const JobSpec& job, json result, double seconds, std::ostream& out) {
  json doc = {{"job", to_json(job)}, {"result", std::move(result)}, {"seconds", seconds}};
  out << doc.dump(2) << "\n";
  return kOk;
}

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

inline int run_partitions(const JobSpec& j, std::ostream& out, std::ostream&) {
  auto start = std::chrono::steady_clock::now();
  std::vector<int> rows = j.rows;
  if (rows.empty()) {
    if (j.order < 1 || j.r < 1) throw DomainError("partitions needs -n and -r, or --rows");
    rows.assign(static_cast<std::size_t>(j.order), j.r);
  }
  Census c = partition_census(GroundSet(rows), j.filter, CensusOptions{j.workers, j.max_elements});
  if (j.format == "csv") {
    write_csv_job_comment(j, out);
    out << "blocks,count\n";
    for (const auto& [k, v] : c.by_block_count) out << k << "," << v << "\n";
    return kOk;
  }
  return emit(j, {{"row_sizes", rows}, {"filter", to_string(j.filter)}, {"census", io::to_json(c)}},
              seconds_since(start), out);
}

inline int emit_cumulant(const JobSpec& j, const CumulantResult& r, std::ostream& out) {
  if (j.format == "csv") {
    write_csv_job_comment(j, out);
    out << "degree,coefficient,exact\n";
    for (auto it = r.numeric_value.rbegin(); it != r.numeric_value.rend(); ++it) {
      out << it->first << "," << io::format_double(it->second) << ",";
      if (r.exact) out << "\"" << r.value.coeff(it->first).to_string() << "\"";
      out << "\n";
    }
    return kOk;
  }
  return emit(j, io::to_json(r), r.seconds, out);
}

inline int run_cumulant(const JobSpec& j, std::ostream& out, std::ostream& err) {
  auto model = model_of(j);
  auto options = engine_options_of(j, err);
  CumulantResult r;
  if (j.command == "moment") r = moment(j.order, single_graph(j), model, options);
  else if (j.command == "cumulant") r = cumulant(j.order, single_graph(j), model, options);
  else {
    if (j.graphs.empty()) throw DomainError("'" + j.command + "' needs a list of graph specs (--graph)");
    r = j.command == "joint-moment" ? joint_moment(j.graphs, model, options) : joint_cumulant(j.graphs, model, options);
  }
  return emit_cumulant(j, r, out);
}

inline int run_connectivity(const JobSpec& j, std::ostream& out, std::ostream& err) {
  auto start = std::chrono::steady_clock::now();
  if (j.lambdas.empty()) throw DomainError("connectivity needs a lambda grid (--lambda)");
  if (j.truncation < 2) throw DomainError("connectivity needs a truncation of at least 2");
  const auto& spec = single_graph(j);
  auto model = model_of(j);
  auto options = engine_options_of(j, err);
  std::vector<CumulantResult> moments;
  for (int k = 1; k <= j.truncation; ++k) moments.push_back(moment(k, spec, model, options));

  json rows = json::array();
  if (j.format == "csv") {
    write_csv_job_comment(j, out);
    out << "lambda,lower_bound,series_estimate,last_gap\n";
  }
  for (double lambda : j.lambdas) {
    if (!(lambda > 0)) throw DomainError("connectivity needs positive lambda values");
    std::vector<double> raw;
    for (const auto& m : moments) raw.push_back(m.evaluate(lambda));
    double second = raw[1];
    if (!(second > 0)) throw DomainError("E[N^2] vanishes at this lambda");
    double bound = raw[0] * raw[0] / second;
    auto factorial = factorial_moments(raw);
    SeriesEstimate none = prob_count_equals(0, factorial, j.truncation);
    double estimate = 1.0 - none.value();
    if (j.format == "csv") {
      out << io::format_double(lambda) << "," << io::format_double(bound) << "," << io::format_double(estimate) << ","
          << io::format_double(none.last_gap) << "\n";
    } else {
      rows.push_back(
          {{"lambda", lambda}, {"lower_bound", bound}, {"series_estimate", estimate}, {"last_gap", none.last_gap}});
    }
  }
  if (j.format == "csv") return kOk;
  json moment_polys = json::array();
  for (const auto& m : moments) moment_polys.push_back(io::to_json(m));
  return emit(j, {{"sweep", rows}, {"moments", moment_polys}}, seconds_since(start), out);
}

inline int run_gram_charlier(const JobSpec& j, std::ostream& out, std::ostream& err) {
  auto start = std::chrono::steady_clock::now();
  if (j.gc_order < 2 || j.gc_order > 4) throw DomainError("Gram-Charlier order must be 2, 3 or 4");
  if (j.points < 2) throw DomainError("the x grid needs at least 2 points");
  std::vector<double> k = j.kappas;
  std::optional<double> lambda;
  if (k.empty()) {
    lambda = single_lambda(j);
    const auto& spec = single_graph(j);
    auto model = model_of(j);
    auto options = engine_options_of(j, err);
    for (int n = 1; n <= j.gc_order; ++n) k.push_back(cumulant(n, spec, model, options).evaluate(*lambda));
  }
  if (static_cast<int>(k.size()) < 2) throw DomainError("Gram-Charlier needs at least kappa_1 and kappa_2");
  k.resize(std::max<std::size_t>(k.size(), 4), 0.0);
  std::optional<double> k5, k6;
  if (k.size() > 4) k5 = k[4];
  if (k.size() > 5) k6 = k[5];
  auto coeffs = GramCharlierCoeffs::from_cumulants(k[0], k[1], k[2], k[3], k5, k6);
  const double sd = std::sqrt(k[1]);
  const double lo = j.x_min.value_or(k[0] - 6 * sd);
  const double hi = j.x_max.value_or(k[0] + 6 * sd);
  if (!(hi > lo)) throw DomainError("x grid needs x_max > x_min");

  std::vector<int> orders;
  for (int o = 2; o <= j.gc_order; ++o) orders.push_back(o);
  if (j.format == "csv") {
    write_csv_job_comment(j, out);
    out << "x";
    for (int o : orders) out << ",order" << o;
    out << "\n";
  }
  json grid = json::array();
  for (int i = 0; i < j.points; ++i) {
    double x = lo + (hi - lo) * i / (j.points - 1);
    json row = {{"x", x}};
    if (j.format == "csv") out << io::format_double(x);
    for (int o : orders) {
      double density = gc_density(o, coeffs, x);
      if (j.format == "csv") out << "," << io::format_double(density);
      row["order" + std::to_string(o)] = density;
    }
    if (j.format == "csv") out << "\n";
    else grid.push_back(row);
  }
  if (j.format == "csv") return kOk;
  json result = {{"kappas", k}, {"c3", coeffs.c3}, {"c4", coeffs.c4}, {"c6", coeffs.c6}, {"grid", grid}};
  if (lambda) result["lambda"] = *lambda;
  return emit(j, result, seconds_since(start), out);
}

inline int run_simulate(const JobSpec& j, std::ostream& out, std::ostream&) {
  auto start = std::chrono::steady_clock::now();
  const auto& spec = single_graph(j);
  auto model = model_of(j);
  SimConfig sim;
  sim.lambda = single_lambda(j);
  sim.replications = j.replications;
  sim.seed = j.seed;
  sim.batches = j.batches;
  sim.half_width = j.half_width;
  sim.workers = j.workers == 0 ? default_worker_count() : j.workers;
  Estimates e = estimate(model, spec, sim);
  if (!j.replication_csv.empty()) {
    std::ofstream csv(j.replication_csv);
    if (!csv) throw DomainError("cannot write replication CSV '" + j.replication_csv + "'");
    csv << "replication,count\n";
    for (std::size_t i = 0; i < e.counts.size(); ++i) csv << i << "," << e.counts[i] << "\n";
  }
  auto fields = [&](auto pick) {
    return json{{"mean", pick(e.mean)},
                {"second_moment", pick(e.second_moment)},
                {"kappa2", pick(e.kappa2)},
                {"kappa3", pick(e.kappa3)},
                {"prob_positive", pick(e.prob_positive)}};
  };
  json estimates = fields([](const Estimate& x) { return x.value; });
  json errors = fields([](const Estimate& x) { return x.standard_error; });
  json config = {{"lambda", sim.lambda},
                 {"replications", sim.replications},
                 {"batches", sim.batches},
                 {"half_width", e.half_width},
                 {"dimension", model.dimension},
                 {"beta", model.beta.value}};
  if (j.format == "csv") {
    write_csv_job_comment(j, out);
    out << "statistic,estimate,standard_error\n";
    for (const auto& [key, value] : estimates.items())
      out << key << "," << io::format_double(value.get<double>()) << ","
          << io::format_double(errors[key].get<double>()) << "\n";
    return kOk;
  }
  return emit(j, {{"estimates", estimates}, {"standard_errors", errors}, {"config", config}, {"seed", j.seed}},
              seconds_since(start), out);
}

inline int run_validate(const JobSpec& j, std::ostream& out, std::ostream& err) {
  auto start = std::chrono::steady_clock::now();
  if (j.suite != "tables") throw DomainError("unknown validation suite '" + j.suite + "' (tables)");
  auto checks = golden::run_table_suite(j.filter, engine_options_of(j, err));
  int failed = 0;
  for (const auto& c : checks) failed += c.pass ? 0 : 1;
  if (j.format == "csv") {
    write_csv_job_comment(j, out);
    out << "check,status,detail\n";
    for (const auto& c : checks) out << "\"" << c.name << "\"," << (c.pass ? "pass" : "FAIL") << ",\"" << c.detail << "\"\n";
  } else {
    json list = json::array();
    for (const auto& c : checks) list.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    emit(j, {{"checks", list}, {"passed", checks.size() - failed}, {"failed", failed}}, seconds_since(start), out);
  }
  for (const auto& c : checks)
    if (!c.pass) err << "FAIL " << c.name << ": " << c.detail << "\n";
  return failed == 0 ? kOk : kCheckFailed;
}

}  // namespace detail

/// Runs a job without catching errors.
inline int run_unchecked(const JobSpec& job, std::ostream& out, std::ostream& err) {
  if (job.format != "json" && job.format != "csv") throw DomainError("format must be json or csv");
  if (job.command == "partitions") return detail::run_partitions(job, out, err);
  if (job.command == "moment" || job.command == "cumulant" || job.command == "joint-moment" ||
      job.command == "joint-cumulant")
    return detail::run_cumulant(job, out, err);
  if (job.command == "connectivity") return detail::run_connectivity(job, out, err);
  if (job.command == "gram-charlier") return detail::run_gram_charlier(job, out, err);
  if (job.command == "simulate") return detail::run_simulate(job, out, err);
  if (job.command == "validate") return detail::run_validate(job, out, err);
  throw DomainError("unknown command '" + job.command + "'");
}

/// Runs a job; errors become a one-line diagnostic on `err` and an exit code.
inline int run(const JobSpec& job, std::ostream& out, std::ostream& err) {
  try {
    return run_unchecked(job, out, err);
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kDivergenceError;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return kResourceError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace rcm::cli
