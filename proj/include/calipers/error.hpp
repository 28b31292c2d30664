#pragma once

#include <stdexcept>
#include <string>

namespace calipers {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DuplicateNameError : public Error {
 public:
  explicit DuplicateNameError(const std::string& name)
      : Error("duplicate name: '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class UnknownNameError : public Error {
 public:
  UnknownNameError(const std::string& what_kind, const std::string& name)
      : Error("unknown " + what_kind + ": '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class UnknownBackendError : public Error {
 public:
  using Error::Error;
};

class UnknownHandleError : public Error {
 public:
  using Error::Error;
};

/// Start on a running clock, stop on a stopped one, set while running.
class StateError : public Error {
 public:
  using Error::Error;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class CheckpointIoError : public Error {
 public:
  using Error::Error;
};

class CorruptCheckpointError : public CheckpointIoError {
 public:
  using CheckpointIoError::CheckpointIoError;
};

class VersionMismatchError : public CheckpointIoError {
 public:
  using CheckpointIoError::CheckpointIoError;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

}  // namespace calipers
