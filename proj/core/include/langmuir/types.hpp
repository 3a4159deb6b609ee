#pragma once

#include <stdexcept>
#include <string>

namespace langmuir {

enum class Species { ion, electron };

/// +1 for ions, -1 for electrons: the sign in front of phi in the effective
/// potential L^2/2r^2 +- phi.
constexpr int charge_sign(Species s) { return s == Species::ion ? 1 : -1; }

inline const char* to_string(Species s) { return s == Species::ion ? "ion" : "electron"; }

/// Thrown when an operation's documented precondition does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace langmuir
