#pragma once

#include <stdexcept>
#include <string>

namespace weierdim {

// Every failure raised by the library carries a category so the CLI can map it
// onto a process exit code without string matching.
enum class ErrorKind {
  Config,      // malformed input, schema violation, parameter outside its domain
  Infeasible,  // depth/accuracy/sample budget cannot be met
  Validity,    // scale outside the validity window of a truncation
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& module, const std::string& what)
      : std::runtime_error(module + ": " + what), kind_(kind), module_(module) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

inline Error config_error(const std::string& module, const std::string& what) {
  return Error(ErrorKind::Config, module, what);
}
inline Error infeasible_error(const std::string& module, const std::string& what) {
  return Error(ErrorKind::Infeasible, module, what);
}
inline Error validity_error(const std::string& module, const std::string& what) {
  return Error(ErrorKind::Validity, module, what);
}
inline Error io_error(const std::string& module, const std::string& what) {
  return Error(ErrorKind::Io, module, what);
}

}  // namespace weierdim
