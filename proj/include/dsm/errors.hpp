#pragma once

#include <stdexcept>
#include <string>

namespace dsm {

// Input lies outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
 public:
  explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

// No affinely independent subset of the required size exists.
class degenerate_error : public domain_error {
 public:
  explicit degenerate_error(const std::string& what) : domain_error(what) {}
};

// A hypergeometric parameter violates its admissible region
// (e.g. a lower parameter is a nonpositive integer).
class parameter_error : public domain_error {
 public:
  explicit parameter_error(const std::string& what) : domain_error(what) {}
};

// The requested evaluation strategy cannot be used; the message names
// the violated condition.
class strategy_error : public std::runtime_error {
 public:
  explicit strategy_error(const std::string& what) : std::runtime_error(what) {}
};

// A configured size/term-count cap would be exceeded.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Requested accuracy not reached; carries the best estimate so far.
class accuracy_error : public std::runtime_error {
 public:
  accuracy_error(const std::string& what, double best, double err)
      : std::runtime_error(what), best_estimate_(best), error_estimate_(err) {}
  double best_estimate() const { return best_estimate_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

}  // namespace dsm
