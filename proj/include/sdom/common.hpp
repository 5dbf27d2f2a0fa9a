#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace sdom {

enum class ErrorCode {
  InvalidArgument,
  LeafCube,
  Singular,
  NonFinite,
  NotDini,
  Precondition,
  DepthExceeded,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorCode::InvalidArgument, what);
}

/// A point in R^n, n <= 2. Unused trailing coordinates are 0.
using Point = std::array<double, 2>;

/// Worker count used by every parallel loop in the library. 0 means "hardware".
void set_thread_count(unsigned n);
[[nodiscard]] unsigned thread_count();

/// Runs body(i) for i in [0, count). Each index is handled by exactly one
/// worker; callers write results into per-index slots so that the outcome does
/// not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace sdom
