#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace coverfit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr const char* kVersion = "0.1.0";

// Invalid arguments, malformed files, dimension mismatches.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// A linear system or frame too close to singular to trust.
class DegeneracyError : public std::runtime_error {
 public:
  explicit DegeneracyError(const std::string& what) : std::runtime_error(what) {}
};

// Random body generation gave up (e.g. epsilon shrank below its floor).
class GenerationError : public std::runtime_error {
 public:
  explicit GenerationError(const std::string& what) : std::runtime_error(what) {}
};

inline void require_dim(long got, long want, const char* what) {
  if (got != want) {
    throw InputError(std::string(what) + ": dimension mismatch (" + std::to_string(got) +
                     " vs " + std::to_string(want) + ")");
  }
}

inline bool is_supported_dim(int dim) { return dim >= 2 && dim <= 4; }

}  // namespace coverfit
