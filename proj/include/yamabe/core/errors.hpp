#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace yamabe {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A chart, model descriptor or parameter set violates its invariants.
class InvalidSpecError : public Error {
 public:
  using Error::Error;
};

/// The metric is not invertible (or not positive definite) at a sample point.
class SingularMetricError : public Error {
 public:
  SingularMetricError(const std::string& what, std::vector<double> point)
      : Error(what), point_(std::move(point)) {}
  const std::vector<double>& point() const noexcept { return point_; }

 private:
  std::vector<double> point_;
};

/// A Yamabe-type quotient was evaluated on a test function with zero norm.
class DegenerateTestFunctionError : public Error {
 public:
  using Error::Error;
};

/// A construction parameter is outside the admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Tube radius too large for positive definiteness or positivity of u.
class TubeRadiusError : public Error {
 public:
  TubeRadiusError(const std::string& what, double max_radius)
      : Error(what), max_radius_(max_radius) {}
  double max_admissible_radius() const noexcept { return max_radius_; }

 private:
  double max_radius_;
};

/// The eta cutoff cannot meet its gradient bound for the given radii.
class FeasibilityError : public ParameterError {
 public:
  FeasibilityError(const std::string& what, double max_admissible)
      : ParameterError(what), max_admissible_(max_admissible) {}
  double max_admissible() const noexcept { return max_admissible_; }

 private:
  double max_admissible_;
};

/// A numerical profile failed one of its defining conditions.
class ProfileConstructionError : public Error {
 public:
  ProfileConstructionError(const std::string& what, double worst_point,
                           double worst_value)
      : Error(what), worst_point_(worst_point), worst_value_(worst_value) {}
  double worst_point() const noexcept { return worst_point_; }
  double worst_value() const noexcept { return worst_value_; }

 private:
  double worst_point_;
  double worst_value_;
};

/// Iterative construction or solver did not converge.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : Error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

/// A scalar-curvature certificate does not hold.
class CertificationError : public Error {
 public:
  CertificationError(const std::string& what, double where, double value)
      : Error(what), where_(where), value_(value) {}
  double where() const noexcept { return where_; }
  double value() const noexcept { return value_; }

 private:
  double where_;
  double value_;
};

/// Two metrics that must agree to first order on a submanifold do not.
class IncompatibleJetError : public Error {
 public:
  using Error::Error;
};

/// Sampled group elements are not isometries of the metric.
class InvalidActionError : public Error {
 public:
  using Error::Error;
};

/// Reduced orbit-space data disagrees with the full-chart computation.
class ReductionError : public Error {
 public:
  using Error::Error;
};

/// A homotopy perturbation destroys positive definiteness.
class InvalidPerturbationError : public InvalidSpecError {
 public:
  using InvalidSpecError::InvalidSpecError;
};

/// Region metrics disagree at a shared interface.
class AssemblyError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::string format_point(const std::vector<double>& x) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x[i];
  }
  os << ')';
  return os.str();
}

}  // namespace detail
}  // namespace yamabe
