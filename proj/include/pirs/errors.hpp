#pragma once

#include <stdexcept>
#include <string>

namespace pirs {

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingularMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when no Hadamard matrix of the requested order can be built.
// `suggested` is the smallest constructible order >= the request, or 0 if
// none exists within the search bound.
struct UnsupportedOrder : std::runtime_error {
  UnsupportedOrder(const std::string& what, int suggested)
      : std::runtime_error(what), suggested_order(suggested) {}
  int suggested_order;
};

struct SizeLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CannotRefine : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pirs
