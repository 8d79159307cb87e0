#pragma once

#include <stdexcept>
#include <string>

namespace lidreg {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument: dimension mismatch, out-of-range index, invalid parameter.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A weighted statistic was requested on a weight vector of total weight 0.
class DegenerateWeightsError : public Error {
 public:
  using Error::Error;
};

/// Malformed CSV / config input.
class DataFormatError : public Error {
 public:
  using Error::Error;
};

/// A routine was called with inputs violating its documented precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Downweighting found no supported batch outside the trimmed interval.
class NoProgressError : public Error {
 public:
  using Error::Error;
};

/// No split center/radius satisfied the contraction conditions.
class SearchExhaustedError : public Error {
 public:
  using Error::Error;
};

/// An internal guarantee was broken (e.g. clipping loop ran past its bound).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace lidreg
