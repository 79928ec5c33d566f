#ifndef STRETCHLAB_ERRORS_HPP
#define STRETCHLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace stretchlab {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A vector-to-cylindrical conversion was requested at a point on the z-axis.
class AxisPointError : public Error {
  public:
    explicit AxisPointError(const std::string& msg) : Error(msg) {}
};

/// A velocity-gradient evaluation was requested below the configured radius floor.
class NearAxisError : public Error {
  public:
    explicit NearAxisError(const std::string& msg) : Error(msg) {}
};

/// An integration step produced NaN or Inf.
class NonFiniteError : public Error {
  public:
    explicit NonFiniteError(const std::string& msg) : Error(msg) {}
};

/// The closed-form solution was evaluated outside the annulus where it is valid.
class OutOfDomainError : public Error {
  public:
    explicit OutOfDomainError(const std::string& msg) : Error(msg) {}
};

class UnknownPresetError : public Error {
  public:
    explicit UnknownPresetError(const std::string& msg) : Error(msg) {}
};

class MissingJacobianError : public Error {
  public:
    explicit MissingJacobianError(const std::string& msg) : Error(msg) {}
};

/// Forward-integrating an inverse-flow result did not land back on the target.
class InverseVerificationError : public Error {
  public:
    explicit InverseVerificationError(const std::string& msg) : Error(msg) {}
};

/// Adaptive line refinement needed more vertices than allowed.
class VertexBudgetError : public Error {
  public:
    explicit VertexBudgetError(const std::string& msg) : Error(msg) {}
};

/// Power-law fit input spans fewer than two decades or has too few points.
class InsufficientSpanError : public Error {
  public:
    explicit InsufficientSpanError(const std::string& msg) : Error(msg) {}
};

/// Doubling the quadrature grid moved a weak-form residual by more than 20%.
class QuadratureError : public Error {
  public:
    explicit QuadratureError(const std::string& msg) : Error(msg) {}
};

class ParseError : public Error {
  public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// More than the tolerated fraction of ensemble replicates failed.
class EnsembleError : public Error {
  public:
    explicit EnsembleError(const std::string& msg) : Error(msg) {}
};

}  // namespace stretchlab

#endif
