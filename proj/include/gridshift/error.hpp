// Copyright 2026 The gridshift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace gridshift {

/// Bad input data: missing files, schema violations, invalid scenario keys,
/// dangling references.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SolverStatus { infeasible, unbounded, numerical };

/// Raised by the LP layer and everything built on it.
class SolverError : public std::runtime_error {
 public:
  SolverError(SolverStatus status, const std::string& what)
      : std::runtime_error(what), status_(status) {}

  SolverStatus status() const noexcept { return status_; }

 private:
  SolverStatus status_;
};

}  // namespace gridshift
