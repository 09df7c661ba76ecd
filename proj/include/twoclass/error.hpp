#ifndef TWOCLASS_ERROR_HPP
#define TWOCLASS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace twoclass {

enum class ErrorKind {
  Domain,
  Schema,
  EmptyRequest,
  InsufficientData,
  EmptyDataset,
  DegenerateRegression,
  DegenerateCurve,
  DivergentMean,
  Io,
};

// Single exception type for the library; the kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

// 2 schema/config, 3 insufficient data, 4 I/O.
int exit_code(ErrorKind kind) noexcept;

}  // namespace twoclass

#endif  // TWOCLASS_ERROR_HPP
