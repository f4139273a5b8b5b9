#pragma once

#include <stdexcept>

namespace qmcs {

/// Requested instance exceeds what an exact method can handle.
class SizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qmcs
