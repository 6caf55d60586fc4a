#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace crmm {

// Error carries a stable machine-readable code next to the human message so
// the CLI can emit structured error JSON without string-matching what().
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

namespace errc {
inline constexpr const char* dimension_mismatch = "dimension_mismatch";
inline constexpr const char* nonfinite_entry = "nonfinite_entry";
inline constexpr const char* indivisible = "indivisible";
inline constexpr const char* degenerate_distribution = "degenerate_distribution";
inline constexpr const char* infinite_variance = "infinite_variance";
inline constexpr const char* draw_cap_exceeded = "draw_cap_exceeded";
inline constexpr const char* undecodable_set = "undecodable_set";
inline constexpr const char* below_threshold = "below_threshold";
inline constexpr const char* bad_format = "bad_format";
inline constexpr const char* io_error = "io_error";
inline constexpr const char* bad_config = "bad_config";
}  // namespace errc

}  // namespace crmm
