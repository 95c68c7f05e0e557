// Copyright 2026 The petcarbon Authors
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
#include <string_view>

namespace petcarbon {

/// Failure categories shared by every module. Each thrown petcarbon::Error
/// carries exactly one of these so callers can branch without string matching.
enum class ErrorCode {
  kInvalidArgument,
  kIoError,

  // energy meter
  kBackendUnavailable,
  kReadFailure,
  kInvalidCounter,
  kEmptyWindow,
  kSamplerBusy,

  // carbon model
  kUnknownCountry,

  // harness
  kEmptyInput,
  kZeroBaseline,
  kWorkloadFailure,
  kMeterFailure,
  kNonZeroExit,
  kSpawnFailure,

  // workloads
  kInvalidMessage,
  kKeyMismatch,
  kEmptyCorpus,
  kCryptoFailure,
  kBindFailure,
  kTlsConfigError,
  kConnectFailure,
  kTlsHandshakeFailure,
  kDivergenceDetected,
  kOverflow,
  kInvalidCiphertext,
  kAuthFailure,

  // cli
  kUsageError,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace petcarbon
