#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "rcm/errors.hpp"

namespace rcm {

enum class Intensity {
  flat,      // Lebesgue measure
  gaussian,  // density exp(-beta |x|^2)
};

/// Inverse scale of H(x,y) = exp(-beta |x-y|^2). The literal value pi selects
/// the exact path; any other positive decimal is evaluated numerically.
struct Beta {
  bool is_pi = true;
  double value = std::numbers::pi;

  static Beta pi() { return {}; }
  static Beta decimal(double v) {
    if (!(v > 0) || !std::isfinite(v)) throw DomainError("beta must be a positive finite number");
    return {false, v};
  }
  bool operator==(const Beta&) const = default;
};

enum class EvaluationPath {
  automatic,  // exact when beta is pi and all endpoints sit at the origin
  exact,
  numeric,
};

struct ModelConfig {
  int dimension = 1;
  Beta beta;
  Intensity intensity = Intensity::flat;
  // One d-vector per global endpoint. Empty means every endpoint sits at the
  // origin.
  std::vector<std::vector<double>> endpoint_positions;
  EvaluationPath path = EvaluationPath::automatic;

  bool endpoints_at_origin() const {
    for (const auto& y : endpoint_positions)
      for (double c : y)
        if (c != 0.0) return false;
    return true;
  }

  bool uses_exact_path() const {
    switch (path) {
      case EvaluationPath::exact: return true;
      case EvaluationPath::numeric: return false;
      case EvaluationPath::automatic: return beta.is_pi && endpoints_at_origin();
    }
    return false;
  }

  /// Checks the configuration against the number of global endpoints.
  void validate(int endpoint_count) const {
    if (dimension < 1) throw DomainError("dimension must be at least 1");
    if (!(beta.value > 0)) throw DomainError("beta must be positive");
    if (!endpoint_positions.empty()) {
      if (static_cast<int>(endpoint_positions.size()) != endpoint_count)
        throw DomainError("expected " + std::to_string(endpoint_count) + " endpoint positions, got " +
                          std::to_string(endpoint_positions.size()));
      for (const auto& y : endpoint_positions)
        if (static_cast<int>(y.size()) != dimension) throw DomainError("endpoint position has the wrong dimension");
    }
    if (path == EvaluationPath::exact && !(beta.is_pi && endpoints_at_origin()))
      throw DomainError("the exact path requires beta = pi and all endpoints at the origin");
  }

  /// Position of 0-based global endpoint j.
  std::vector<double> endpoint(int j) const {
    if (endpoint_positions.empty()) return std::vector<double>(static_cast<std::size_t>(dimension), 0.0);
    return endpoint_positions.at(static_cast<std::size_t>(j));
  }
};

inline const char* to_string(Intensity i) { return i == Intensity::flat ? "flat" : "gaussian"; }

}  // namespace rcm
