// Copyright 2026 The qopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qopt {

enum class ErrorKind {
  InvalidArgument,
  Singularity,
  DegenerateSpectrum,
  NotUnitarilyReachable,
  UnsupportedStates,
  ProtocolInconsistency,
  EpsilonTooLarge,
  ZeroTimeTrivial,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::DegenerateSpectrum: return "degenerate-spectrum";
    case ErrorKind::NotUnitarilyReachable: return "not-unitarily-reachable";
    case ErrorKind::UnsupportedStates: return "unsupported-states";
    case ErrorKind::ProtocolInconsistency: return "protocol-inconsistency";
    case ErrorKind::EpsilonTooLarge: return "epsilon-too-large";
    case ErrorKind::ZeroTimeTrivial: return "zero-time-trivial";
  }
  return "unknown";
}

/// Base of every error thrown by the library. The kind is stable and is what
/// the command-line tool maps onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

template <ErrorKind K>
class TypedError : public Error {
 public:
  explicit TypedError(const std::string& what) : Error(K, what) {}
};

using InvalidArgument = TypedError<ErrorKind::InvalidArgument>;
using SingularityError = TypedError<ErrorKind::Singularity>;
using DegenerateSpectrum = TypedError<ErrorKind::DegenerateSpectrum>;
using NotUnitarilyReachable = TypedError<ErrorKind::NotUnitarilyReachable>;
using UnsupportedStates = TypedError<ErrorKind::UnsupportedStates>;
using ProtocolInconsistency = TypedError<ErrorKind::ProtocolInconsistency>;
using EpsilonTooLarge = TypedError<ErrorKind::EpsilonTooLarge>;
using ZeroTimeTrivial = TypedError<ErrorKind::ZeroTimeTrivial>;

}  // namespace qopt
