#pragma once

#include <stdexcept>
#include <string>

namespace fracgrad {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the documented domain (dimension cap, s range,
/// odd grid size, mismatched grids, support or constraint violations).
class RangeError : public Error {
public:
  using Error::Error;
};

/// The O(N^{2n}) kernel-sum budget or the grid memory cap would be exceeded.
class BudgetError : public Error {
public:
  using Error::Error;
};

/// An optimizer or experiment failed to produce a usable result.
class SolveError : public Error {
public:
  using Error::Error;
};

/// Malformed or missing configuration input.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace fracgrad
