#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace scr1d {

/// Base class for all recoverable numeric and physics failures.
/// `code()` is the stable machine-readable identifier that the CLI
/// surfaces in structured error records.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

struct SubdivisionLimitExceeded : Error {
  explicit SubdivisionLimitExceeded(const std::string& what)
      : Error("SubdivisionLimitExceeded", what) {}
};

struct NonFiniteEvaluation : Error {
  explicit NonFiniteEvaluation(const std::string& what)
      : Error("NonFiniteEvaluation", what) {}
};

struct NoSignChange : Error {
  explicit NoSignChange(const std::string& what)
      : Error("NoSignChange", what) {}
};

struct IterationLimitExceeded : Error {
  explicit IterationLimitExceeded(const std::string& what)
      : Error("IterationLimitExceeded", what) {}
};

struct InconsistentBoundaryFields : Error {
  explicit InconsistentBoundaryFields(const std::string& what)
      : Error("InconsistentBoundaryFields", what) {}
};

struct OutOfDomain : Error {
  explicit OutOfDomain(const std::string& what) : Error("OutOfDomain", what) {}
};

struct WrongEdgePolarity : Error {
  explicit WrongEdgePolarity(const std::string& what)
      : Error("WrongEdgePolarity", what) {}
};

struct BiasExceedsBuiltIn : Error {
  explicit BiasExceedsBuiltIn(const std::string& what)
      : Error("BiasExceedsBuiltIn", what) {}
};

/// Depletion would extend past the wafer surface (x < 0) of a diffused
/// profile.  Carries an estimate of the most negative bias that is still
/// solvable, so callers can report the usable range instead of guessing.
struct SurfaceReached : Error {
  SurfaceReached(const std::string& what, double limit_estimate_volts)
      : Error("SurfaceReached", what), limit_estimate(limit_estimate_volts) {}

  double limit_estimate;  // [V]
};

struct ConvergenceFailure : Error {
  explicit ConvergenceFailure(const std::string& what)
      : Error("ConvergenceFailure", what) {}
};

/// A junction document failed to parse: unreadable file, invalid JSON, or a
/// missing/mistyped field.
struct MalformedDocument : Error {
  explicit MalformedDocument(const std::string& what)
      : Error("MalformedDocument", what) {}
};

}  // namespace scr1d
