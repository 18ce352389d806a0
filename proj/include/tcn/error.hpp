#ifndef TCN_ERROR_HPP
#define TCN_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace tcn {

enum class ErrorKind {
  EmptySet,
  DuplicateVariable,
  UnknownVariable,
  UnboundedVariable,
  NothingToSplit,
  TooLarge,
  Overflow,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::DuplicateVariable: return "DuplicateVariable";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::UnboundedVariable: return "UnboundedVariable";
    case ErrorKind::NothingToSplit: return "NothingToSplit";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::Overflow: return "Overflow";
  }
  return "Error";
}

/// Every fault raised by the library. `subject` names the offending
/// variable when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string subject = {})
      : std::runtime_error(format(kind, subject)), kind_(kind), subject_(std::move(subject)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  static std::string format(ErrorKind kind, const std::string& subject) {
    std::string s(to_string(kind));
    if (!subject.empty()) {
      s += "(" + subject + ")";
    }
    return s;
  }

  ErrorKind kind_;
  std::string subject_;
};

}  // namespace tcn

#endif
