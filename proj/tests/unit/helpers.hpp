#pragma once

#include <optional>
#include <utility>

#include "dst/error.hpp"

/// Kind of the dst::Error thrown by f, or nullopt when nothing was thrown.
template <class F>
std::optional<dst::ErrorKind> error_kind(F&& f) {
  try {
    std::forward<F>(f)();
  } catch (const dst::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}
