#pragma once

#include <stdexcept>
#include <string>

namespace contassort {

/// Raised when an integrand evaluates to NaN or infinity.
class NonFiniteError : public std::runtime_error {
public:
  explicit NonFiniteError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised by the inner bisection when the upper level set already fits
/// inside the capacity, so there is no level to search for.
class CapacityNotBindingError : public std::logic_error {
public:
  explicit CapacityNotBindingError(const std::string& what) : std::logic_error(what) {}
};

class EmptyExplorationError : public std::invalid_argument {
public:
  explicit EmptyExplorationError(const std::string& what) : std::invalid_argument(what) {}
};

class HorizonTooShortError : public std::invalid_argument {
public:
  explicit HorizonTooShortError(const std::string& what) : std::invalid_argument(what) {}
};

class BadIndexSetError : public std::invalid_argument {
public:
  explicit BadIndexSetError(const std::string& what) : std::invalid_argument(what) {}
};

class DegenerateFitError : public std::invalid_argument {
public:
  explicit DegenerateFitError(const std::string& what) : std::invalid_argument(what) {}
};

class MismatchedHorizonsError : public std::invalid_argument {
public:
  explicit MismatchedHorizonsError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when purchase data falls outside [0,1] after rescaling.
class BadScaleError : public std::runtime_error {
public:
  explicit BadScaleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace contassort
