#pragma once

#include "doctest.h"
#include "senseme/error.hpp"

namespace testing {

// Error code thrown by fn; fails the test when nothing is thrown.
template <typename Fn>
senseme::ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const senseme::Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return senseme::ErrorCode::SchemaError;
}

}  // namespace testing
