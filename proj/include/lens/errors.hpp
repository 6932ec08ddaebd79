#ifndef LENS_ERRORS_HPP
#define LENS_ERRORS_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lens {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (expressions, interval strings). Offsets are
/// zero-based byte positions; an offset equal to the input length means
/// "end of input".
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::string expected, std::string found);
  ParseError(std::size_t offset, std::string expected, std::string found,
             const std::string& message);

  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  std::size_t offset_;
  std::string expected_;
  std::string found_;
};

/// Variable index outside 1..n.
class UnknownVariable : public ParseError {
 public:
  UnknownVariable(std::size_t offset, std::string name, int dims);
};

/// Violation of a mathematical precondition of an operation. The CLI maps
/// every subclass to exit code 3.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// An exponent below -1 (pole order above one) was requested or produced.
class AdmissibilityViolation : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// A term carries a simple pole in one coordinate together with a non-zero
/// exponent in another one, e.g. w2/w1.
class MixedPoleTerm : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class DivisionNearZero : public PreconditionError {
 public:
  explicit DivisionNearZero(std::vector<std::complex<double>> point);
  const std::vector<std::complex<double>>& point() const noexcept { return point_; }

 private:
  std::vector<std::complex<double>> point_;
};

class NotLaurent : public PreconditionError {
 public:
  explicit NotLaurent(std::string subtree);
  const std::string& subtree() const noexcept { return subtree_; }

 private:
  std::string subtree_;
};

class PoleOnTorus : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class GridTooLarge : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class AliasingRisk : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class NonConvergent : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// The sampled function is not of the form core + simple poles + analytic
/// part around the origin (e.g. an off-centre pole inside the poly-disc).
class NotInClass : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class ScaleMismatch : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class InvalidInterval : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class NotFixingOrigin : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class SingularJacobian : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class VanishesOnTorus : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class NotDiagonallyDominant : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

}  // namespace lens

#endif  // LENS_ERRORS_HPP
