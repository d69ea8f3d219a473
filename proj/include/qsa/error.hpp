#pragma once

#include <stdexcept>
#include <string>

namespace qsa {

enum class errc {
  invalid_parameter,
  numeric_failure,
  reversibility_violation,
  gap_too_small,
  structural,
  size_guard,
  gap_mismatch,
  configuration,
  precondition,
  certification,
  invalid_state,
  parse,
};

inline const char* errc_name(errc k) {
  switch (k) {
    case errc::invalid_parameter: return "invalid-parameter";
    case errc::numeric_failure: return "numeric-failure";
    case errc::reversibility_violation: return "reversibility-violation";
    case errc::gap_too_small: return "gap-too-small";
    case errc::structural: return "structural";
    case errc::size_guard: return "size-guard";
    case errc::gap_mismatch: return "gap-mismatch";
    case errc::configuration: return "configuration";
    case errc::precondition: return "precondition";
    case errc::certification: return "certification";
    case errc::invalid_state: return "invalid-state";
    case errc::parse: return "parse";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc kind, const std::string& msg)
      : std::runtime_error(std::string(errc_name(kind)) + ": " + msg), kind_(kind) {}
  errc kind() const noexcept { return kind_; }

 private:
  errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& msg) { throw error(kind, msg); }

inline void require(bool cond, errc kind, const std::string& msg) {
  if (!cond) fail(kind, msg);
}

}  // namespace qsa
