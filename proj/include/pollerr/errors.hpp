#pragma once

#include <stdexcept>
#include <string>

namespace pollerr {

// Failure kinds, mirrored verbatim in the CLI's error JSON.
namespace errkind {
inline constexpr const char* invalid_argument = "invalid-argument";
inline constexpr const char* parse = "parse-error";
inline constexpr const char* schema = "schema-error";
inline constexpr const char* validation = "validation-error";
inline constexpr const char* degenerate_population = "degenerate-population";
inline constexpr const char* non_invertible = "non-invertible-mechanism";
inline constexpr const char* insufficient_data = "insufficient-data";
inline constexpr const char* singular_design = "singular-design";
inline constexpr const char* under_determined = "under-determined";
inline constexpr const char* unknown_name = "unknown-name";
inline constexpr const char* io = "io-error";
}  // namespace errkind

class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

[[noreturn]] inline void fail(const char* kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace pollerr
