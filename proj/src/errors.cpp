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

#include "iotgov/errors.hpp"

namespace iotgov {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::LevelMismatch: return "LevelMismatch";
    case ErrorCode::UnknownParent: return "UnknownParent";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::IllegalTransition: return "IllegalTransition";
    case ErrorCode::UnknownDevice: return "UnknownDevice";
    case ErrorCode::BadCredential: return "BadCredential";
    case ErrorCode::MalformedContract: return "MalformedContract";
    case ErrorCode::UnknownCanonicalConcept: return "UnknownCanonicalConcept";
    case ErrorCode::NonMonotonicVersion: return "NonMonotonicVersion";
    case ErrorCode::UnknownContract: return "UnknownContract";
    case ErrorCode::NoEnforcedVersion: return "NoEnforcedVersion";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownAttributeRoot: return "UnknownAttributeRoot";
    case ErrorCode::BadDuration: return "BadDuration";
    case ErrorCode::ConflictUnresolvable: return "ConflictUnresolvable";
    case ErrorCode::DomainTooLarge: return "DomainTooLarge";
    case ErrorCode::UnknownConcept: return "UnknownConcept";
    case ErrorCode::NonInvertibleTransform: return "NonInvertibleTransform";
    case ErrorCode::UnmappedSignal: return "UnmappedSignal";
    case ErrorCode::UnitMismatch: return "UnitMismatch";
    case ErrorCode::UnsupportedConversion: return "UnsupportedConversion";
    case ErrorCode::UnparseableTimestamp: return "UnparseableTimestamp";
    case ErrorCode::IncompatibleContract: return "IncompatibleContract";
    case ErrorCode::SlaFailure: return "SlaFailure";
    case ErrorCode::UnknownSourceContract: return "UnknownSourceContract";
    case ErrorCode::ResidencyViolation: return "ResidencyViolation";
    case ErrorCode::MissingPurpose: return "MissingPurpose";
    case ErrorCode::UnknownQuarantineId: return "UnknownQuarantineId";
    case ErrorCode::IncompleteRecord: return "IncompleteRecord";
    case ErrorCode::ChainBroken: return "ChainBroken";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::BadWeights: return "BadWeights";
    case ErrorCode::MissingSla: return "MissingSla";
    case ErrorCode::UnknownIssueClass: return "UnknownIssueClass";
    case ErrorCode::UnknownScope: return "UnknownScope";
    case ErrorCode::AccessDenied: return "AccessDenied";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::UnknownJurisdiction: return "UnknownJurisdiction";
    case ErrorCode::BadSpec: return "BadSpec";
    case ErrorCode::ScenarioInvalid: return "ScenarioInvalid";
    case ErrorCode::UnknownStream: return "UnknownStream";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace iotgov
