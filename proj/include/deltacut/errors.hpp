#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "deltacut/geometry.hpp"

namespace deltacut {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed files, violated type invariants, invalid
/// configuration. The CLI maps these to exit status 2.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The input was well formed but the mechanism cannot do what was asked
/// (unreachable pose, no assembly, ...). The CLI maps these to exit status 1.
class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidGeometry : public InputError {
 public:
  using InputError::InputError;
};

class InvalidJointAngles : public InputError {
 public:
  using InputError::InputError;
};

/// Inverse kinematics failed. arm() is 1..3 for a per-arm failure, 0 when
/// every arm solves but the pose needs the folded assembly.
class UnreachableError : public DomainError {
 public:
  UnreachableError(int arm, const std::string& what)
      : DomainError(what), arm_(arm) {}
  int arm() const noexcept { return arm_; }

 private:
  int arm_;
};

class NoSolutionError : public DomainError {
 public:
  using DomainError::DomainError;
};

class SingularError : public DomainError {
 public:
  using DomainError::DomainError;
};

class InvalidGridSpec : public InputError {
 public:
  using InputError::InputError;
};

class CellBudgetExceeded : public InputError {
 public:
  using InputError::InputError;
};

class InvalidPrescribedWorkspace : public InputError {
 public:
  using InputError::InputError;
};

class InvalidBounds : public InputError {
 public:
  using InputError::InputError;
};

class InvalidConfig : public InputError {
 public:
  using InputError::InputError;
};

class InvalidFeed : public InputError {
 public:
  using InputError::InputError;
};

class InvalidProgram : public InputError {
 public:
  using InputError::InputError;
};

class EmptyProgram : public InvalidProgram {
 public:
  using InvalidProgram::InvalidProgram;
};

class UnreachableSample : public DomainError {
 public:
  UnreachableSample(std::size_t index, double t, Pose pose, int arm, const std::string& what)
      : DomainError(what), index_(index), t_(t), pose_(pose), arm_(arm) {}
  std::size_t index() const noexcept { return index_; }
  double time() const noexcept { return t_; }
  const Pose& pose() const noexcept { return pose_; }
  int arm() const noexcept { return arm_; }

 private:
  std::size_t index_;
  double t_;
  Pose pose_;
  int arm_;
};

class InvalidStream : public InputError {
 public:
  using InputError::InputError;
};

class UnknownProcess : public InputError {
 public:
  using InputError::InputError;
};

/// File could not be read or parsed.
class ParseError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace deltacut
