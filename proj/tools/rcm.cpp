// rcm: moments, cumulants and simulations of subgraph counts in the
// random-connection model.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "rcm/cli.hpp"

namespace {

struct Flags {
  std::string graph;
  std::string endpoints;
  std::string beta = "pi";
  std::string intensity = "flat";
  std::string filter = "connected-nonflat";
  std::string lambda;
  std::string job;
  std::vector<int> rows;
  std::vector<double> kappas;
  double x_min = 0, x_max = 0;
};

rcm::cli::JobSpec build_job(const std::string& command, const Flags& f, rcm::cli::JobSpec job, const CLI::App& sub) {
  using namespace rcm::cli;
  job.command = command;
  if (!f.graph.empty()) job.graphs = rcm::io::graph_specs_from_json(parse_json_argument(f.graph, "graph spec"));
  if (!f.endpoints.empty()) {
    json e = parse_json_argument(f.endpoints, "endpoint positions");
    try {
      job.endpoints = e.get<std::vector<std::vector<double>>>();
    } catch (const json::exception&) {
      throw rcm::DomainError("endpoint positions must be a list of coordinate lists");
    }
  }
  parse_beta(f.beta);
  job.beta = f.beta;
  job.intensity = parse_intensity(f.intensity);
  job.filter = parse_filter(f.filter);
  if (!f.lambda.empty()) job.lambdas = parse_lambda_grid(f.lambda);
  job.rows = f.rows;
  job.kappas = f.kappas;
  auto given = [&](const char* name) {
    const CLI::Option* opt = sub.get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--x-min")) job.x_min = f.x_min;
  if (given("--x-max")) job.x_max = f.x_max;
  return job;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace rcm::cli;
  CLI::App app{"Moments, cumulants and Monte Carlo estimates of subgraph counts in the random-connection model"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "rcm 1.0.0");

  Flags flags;
  JobSpec job;
  try {
    job.max_elements = max_elements_from_env();
  } catch (const rcm::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationError;
  }

  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", job.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--workers", job.workers, "Worker threads (0 = all cores)");
    sub->add_flag("--progress", job.progress, "Progress ticker on stderr");
  };
  auto model = [&](CLI::App* sub, bool multi) {
    sub->add_option("--graph", flags.graph,
                    multi ? "List of graph-spec JSON objects, or @file" : "Graph-spec JSON, or @file")
        ->required();
    sub->add_option("-d,--dimension", job.dimension, "Space dimension");
    sub->add_option("--beta", flags.beta, "'pi' (exact path) or a decimal (numeric path)");
    sub->add_option("--intensity", flags.intensity, "flat | gaussian");
    sub->add_option("--endpoints", flags.endpoints, "Endpoint positions as JSON, e.g. [[0],[1.5]]");
  };

  auto* partitions = app.add_subcommand("partitions", "Census of set partitions of a row-structured ground set");
  partitions->add_option("-n,--order", job.order, "Number of rows");
  partitions->add_option("-r", job.r, "Row size");
  partitions->add_option("--rows", flags.rows, "Explicit row sizes, e.g. 3,5")->delimiter(',');
  partitions->add_option("--filter", flags.filter, "all | nonflat | connected-nonflat | single-pass");
  common(partitions);

  for (const char* name : {"moment", "cumulant"}) {
    auto* sub = app.add_subcommand(name, std::string("Exact or numeric ") + name + " of a subgraph count");
    sub->add_option("-n,--order", job.order, "Order")->required();
    sub->add_option("--filter", flags.filter, "Cumulant summation domain: connected-nonflat | single-pass");
    model(sub, false);
    common(sub);
  }
  for (const char* name : {"joint-moment", "joint-cumulant"}) {
    auto* sub = app.add_subcommand(name, "Mixed " + std::string(name).substr(6) + " of several subgraph counts");
    sub->add_option("--filter", flags.filter, "Cumulant summation domain: connected-nonflat | single-pass");
    model(sub, true);
    common(sub);
  }

  auto* connectivity = app.add_subcommand("connectivity", "Bounds and series estimates of P(N > 0) over a lambda grid");
  connectivity->add_option("--lambda", flags.lambda, "Grid: a,b,c or start:stop:count")->required();
  connectivity->add_option("--terms", job.truncation, "Number of factorial moments in the series");
  model(connectivity, false);
  common(connectivity);

  auto* gc = app.add_subcommand("gram-charlier", "Gram-Charlier density expansions of orders 2..k");
  gc->add_option("--lambda", flags.lambda, "Intensity");
  gc->add_option("-k,--max-order", job.gc_order, "Highest expansion order (2, 3 or 4)");
  gc->add_option("--kappas", flags.kappas, "Use these cumulants instead of the engine")->delimiter(',');
  gc->add_option("--x-min", flags.x_min, "Grid start (default mean - 6 sd)");
  gc->add_option("--x-max", flags.x_max, "Grid end (default mean + 6 sd)");
  gc->add_option("--points", job.points, "Grid points");
  gc->add_option("--graph", flags.graph, "Graph-spec JSON, or @file");
  gc->add_option("-d,--dimension", job.dimension, "Space dimension");
  gc->add_option("--beta", flags.beta, "'pi' (exact path) or a decimal (numeric path)");
  gc->add_option("--intensity", flags.intensity, "flat | gaussian");
  gc->add_option("--endpoints", flags.endpoints, "Endpoint positions as JSON");
  common(gc);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates of count statistics");
  simulate->add_option("--lambda", flags.lambda, "Intensity")->required();
  simulate->add_option("--replications", job.replications, "Independent samples");
  simulate->add_option("--batches", job.batches, "Batches for batch-means standard errors");
  simulate->add_option("--half-width", job.half_width, "Window half-width L (default: max|y| + 5/sqrt(beta))");
  simulate->add_option("--seed", job.seed, "Master seed");
  simulate->add_option("--replication-csv", job.replication_csv, "Write per-replication counts to this CSV file");
  model(simulate, false);
  common(simulate);

  auto* validate = app.add_subcommand("validate", "Check the engine against the published reference values");
  validate->add_option("--suite", job.suite, "Suite name")->check(CLI::IsMember({"tables"}));
  validate->add_option("--filter", flags.filter, "Census domain: connected-nonflat | single-pass");
  common(validate);

  auto* replay = app.add_subcommand("run", "Run a serialized job (the \"job\" object echoed in every output)");
  replay->add_option("--job", flags.job, "Job JSON, or @file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kValidationError;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (sub == replay) {
      JobSpec loaded = job_from_json(parse_json_argument(flags.job, "job"));
      if (loaded.command == "run") throw rcm::DomainError("a job cannot replay another job");
      return run(loaded, std::cout, std::cerr);
    }
    return run(build_job(sub->get_name(), flags, job, *sub), std::cout, std::cerr);
  } catch (const rcm::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternalError;
  }
}
