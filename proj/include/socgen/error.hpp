// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace socgen {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  /// Short stable tag used by the CLI when printing diagnostics.
  virtual const char* category() const noexcept { return "error"; }
};

/// Invalid arguments while building signals, expressions, statements or
/// modules.
class ConstructionError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "construction"; }
};

/// Hierarchy problems found while flattening a module tree.
class ElaborationError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "elaboration"; }
};

class AnalysisError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "analysis"; }
};

class MultipleDriverError : public AnalysisError {
 public:
  MultipleDriverError(std::string signal, std::string message)
      : AnalysisError(std::move(message)), signal_(std::move(signal)) {}
  const std::string& signal() const noexcept { return signal_; }

 private:
  std::string signal_;
};

class UnresolvedDomainError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class CombLoopError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "comb-loop"; }
};

class SimulationError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "simulation"; }
};

class ExpectationError : public SimulationError {
 public:
  using SimulationError::SimulationError;
  const char* category() const noexcept override { return "expectation"; }
};

class PlatformError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "platform"; }
};

class OverlapError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "overlap"; }
};

class RomOverflowError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "rom-overflow"; }
};

/// Invalid build configuration or unreadable inputs.
class ConfigError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "config"; }
};

}  // namespace socgen
