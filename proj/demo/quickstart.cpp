// Second cumulant of single-edge counts between two endpoints on the line,
// checked against a short simulation.

#include <iostream>

#include "rcm/cumulants.hpp"
#include "rcm/simulator.hpp"
#include "rcm/stats.hpp"

int main() {
  using namespace rcm;
  auto edge = GraphSpec::from_edges({{1, 2}}, {{1}, {2}});
  ModelConfig model;  // d = 1, beta = pi, flat intensity, endpoints at the origin

  CumulantResult k2 = cumulant(2, edge, model);
  std::cout << "kappa_2(lambda) = " << k2.value << "\n";
  std::cout << "summed over " << k2.partition_count << " connected non-flat partitions\n";

  const double lambda = 1.0;
  SimConfig sim;
  sim.lambda = lambda;
  sim.replications = 20000;
  sim.seed = 7;
  Estimates e = estimate(model, edge, sim);
  std::cout << "at lambda = 1: exact " << k2.evaluate(lambda) << ", simulated " << e.kappa2.value << " +/- "
            << e.kappa2.standard_error << "\n";

  auto m1 = moment(1, edge, model);
  auto m2 = moment(2, edge, model);
  std::cout << "P(N > 0) >= " << connectivity_lower_bound(m1.value, m2.value, lambda) << "\n";
}
