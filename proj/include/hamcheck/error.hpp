#ifndef HAMCHECK_ERROR_HPP
#define HAMCHECK_ERROR_HPP

#include <stdexcept>
#include <string>

namespace hamcheck {

enum class ErrorKind {
  invalid_frame,
  dimension_mismatch,
  non_orthonomic,
  passivity_failure,
  mismatched_solved_form,
  not_on_equation,
  not_conserved,
  constraint_not_orthonomic,
  home_mismatch,
  certification_failure,
  need_successor,
  precondition,
};

const char* to_string(ErrorKind kind);

// Every kernel failure is reported through this one exception type; the kind
// is what callers (and the task runner) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hamcheck

#endif  // HAMCHECK_ERROR_HPP
