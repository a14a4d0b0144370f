#pragma once

#include <stdexcept>

namespace sievelab {

// A table (prime bitset, spf array, ...) is too small for the request, or a
// construction request exceeds the implementation ceiling.
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sievelab
