#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace voronec {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad dimensions, parameters or scenario input.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A user-supplied evaluator produced a non-finite value at (q, t).
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, Eigen::VectorXd q_at, double t_at)
      : Error(what), q(std::move(q_at)), t(t_at) {}
  Eigen::VectorXd q;
  double t = 0.0;
};

/// The (constrained) mass matrix is numerically singular at the given state.
class DegenerateMassError : public Error {
 public:
  DegenerateMassError(const std::string& what, Eigen::VectorXd q_at, double t_at)
      : Error(what), q(std::move(q_at)), t(t_at) {}
  Eigen::VectorXd q;
  double t = 0.0;
};

/// The multiplier saddle system is singular (dependent constraint rows).
class DegenerateConstraintError : public Error {
 public:
  using Error::Error;
};

/// The invariance probe of the Abelian reduction failed; `coordinate` is the
/// 1-based index of the offending fiber coordinate.
class NotChaplyginError : public Error {
 public:
  NotChaplyginError(const std::string& what, int coord) : Error(what), coordinate(coord) {}
  int coordinate = 0;
};

/// A reparametrization was queried outside its certified interval.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The adaptive step-size controller drove the step below representable size.
class StepSizeUnderflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace voronec
