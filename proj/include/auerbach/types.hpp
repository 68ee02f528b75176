#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace auerbach {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr const char* kToolName = "auerbach";
inline constexpr const char* kToolVersion = "0.1.0";

// Thrown when a numeric routine cannot produce a meaningful result
// (singular system, optimizer stall, value outside the admissible domain).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace auerbach
