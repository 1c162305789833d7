#pragma once

#include <stdexcept>
#include <string>

namespace sushi {

// Base of every error raised by the library. The CLI maps ConfigError to
// exit code 2 and everything else to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class StateError : public Error {
 public:
  using Error::Error;
};

// Illegal action submitted to the engine; carries the offending seat.
class ActionError : public Error {
 public:
  ActionError(int seat, const std::string& what)
      : Error("seat " + std::to_string(seat) + ": " + what), seat_(seat) {}
  int seat() const { return seat_; }

 private:
  int seat_;
};

class TrackingError : public Error {
 public:
  using Error::Error;
};

class PerturbationError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

class StatsError : public Error {
 public:
  using Error::Error;
};

class RemapError : public Error {
 public:
  using Error::Error;
};

class FittingError : public Error {
 public:
  using Error::Error;
};

class ReconstructionError : public Error {
 public:
  using Error::Error;
};

class ComparisonError : public Error {
 public:
  using Error::Error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace sushi
