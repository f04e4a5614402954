#pragma once

#include <stdexcept>
#include <string>

namespace chamber {

// Error taxonomy shared by the C++ core, the C API status codes and the
// CLI exit codes.
enum class ErrorCode {
    InvalidArgument,    // bad call arguments, dimension mismatch, bad index
    Parse,              // malformed or schema-invalid configuration
    Infeasible,         // domain has empty interior
    EmptyIntersection,  // H_J = {x : x.n_j = a_j for j in J} is empty
    DomainEval,         // potential evaluated outside its domain
    SolverFailure,      // bounded-iteration solver did not converge
    Indeterminate,      // near-critical classification without analytic hint
    Validation,         // root-system axiom failure
    Runtime             // non-finite state and other simulation failures
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace chamber
