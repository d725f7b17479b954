// Copyright 2026 The iotgov Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace iotgov {

enum class ErrorCode {
  // asset registry
  DuplicateId,
  LevelMismatch,
  UnknownParent,
  UnknownNode,
  CycleDetected,
  IllegalTransition,
  UnknownDevice,
  BadCredential,
  // contract registry
  MalformedContract,
  UnknownCanonicalConcept,
  NonMonotonicVersion,
  UnknownContract,
  NoEnforcedVersion,
  // policy engine
  SyntaxError,
  UnknownAttributeRoot,
  BadDuration,
  ConflictUnresolvable,
  DomainTooLarge,
  // canonical mapping
  UnknownConcept,
  NonInvertibleTransform,
  UnmappedSignal,
  UnitMismatch,
  UnsupportedConversion,
  UnparseableTimestamp,
  // boundary enforcement
  IncompatibleContract,
  SlaFailure,
  UnknownSourceContract,
  ResidencyViolation,
  MissingPurpose,
  UnknownQuarantineId,
  IncompleteRecord,
  ChainBroken,
  // quality monitor
  EmptyWindow,
  BadWeights,
  MissingSla,
  UnknownIssueClass,
  // privacy guard
  UnknownScope,
  AccessDenied,
  EmptyInput,
  BudgetExhausted,
  UnknownJurisdiction,
  // simulator / cli
  BadSpec,
  ScenarioInvalid,
  UnknownStream,
  UsageError,
  IoError,
};

std::string_view error_code_name(ErrorCode code);

struct Error {
  ErrorCode code;
  std::string message;

  std::string str() const {
    return std::string(error_code_name(code)) + ": " + message;
  }
};

// Minimal value-or-error return type. Operations that reject per the module
// contracts return one of these instead of throwing; exceptions are reserved
// for programming errors.
template <typename T>
class Result {
 public:
  Result(T value) : value_(std::move(value)) {}  // NOLINT: implicit by intent
  Result(Error error) : error_(std::move(error)) {}
  Result(ErrorCode code, std::string message)
      : error_(Error{code, std::move(message)}) {}

  bool ok() const { return value_.has_value(); }
  explicit operator bool() const { return ok(); }

  const T& value() const& {
    require_ok();
    return *value_;
  }
  T& value() & {
    require_ok();
    return *value_;
  }
  T&& take() && {
    require_ok();
    return std::move(*value_);
  }

  const T& operator*() const& { return value(); }
  const T* operator->() const { return &value(); }

  const Error& error() const {
    if (ok()) throw std::logic_error("Result::error() on ok result");
    return *error_;
  }
  ErrorCode code() const { return error().code; }

 private:
  void require_ok() const {
    if (!ok()) throw std::logic_error("Result::value() on error: " + error_->str());
  }

  std::optional<T> value_;
  std::optional<Error> error_;
};

// Result<void> analogue.
class Status {
 public:
  Status() = default;
  Status(Error error) : error_(std::move(error)) {}  // NOLINT
  Status(ErrorCode code, std::string message)
      : error_(Error{code, std::move(message)}) {}

  static Status ok_status() { return Status(); }

  bool ok() const { return !error_.has_value(); }
  explicit operator bool() const { return ok(); }

  const Error& error() const {
    if (ok()) throw std::logic_error("Status::error() on ok status");
    return *error_;
  }
  ErrorCode code() const { return error().code; }

 private:
  std::optional<Error> error_;
};

}  // namespace iotgov
