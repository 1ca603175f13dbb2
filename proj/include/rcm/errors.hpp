#pragma once

#include <stdexcept>
#include <string>

namespace rcm {

// Bad arguments or inputs that violate a documented precondition.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A configured size limit would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, long long limit)
      : std::runtime_error(what), limit_(limit) {}
  long long limit() const noexcept { return limit_; }

 private:
  long long limit_;
};

// The Gaussian integral of some partition term does not converge.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::string partition)
      : std::runtime_error(what), partition_(std::move(partition)) {}
  const std::string& partition() const noexcept { return partition_; }

 private:
  std::string partition_;
};

}  // namespace rcm
