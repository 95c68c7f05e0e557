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

#include "petcarbon/common/error.hpp"

namespace petcarbon {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kReadFailure: return "ReadFailure";
    case ErrorCode::kInvalidCounter: return "InvalidCounter";
    case ErrorCode::kEmptyWindow: return "EmptyWindow";
    case ErrorCode::kSamplerBusy: return "SamplerBusy";
    case ErrorCode::kUnknownCountry: return "UnknownCountry";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kZeroBaseline: return "ZeroBaseline";
    case ErrorCode::kWorkloadFailure: return "WorkloadFailure";
    case ErrorCode::kMeterFailure: return "MeterFailure";
    case ErrorCode::kNonZeroExit: return "NonZeroExit";
    case ErrorCode::kSpawnFailure: return "SpawnFailure";
    case ErrorCode::kInvalidMessage: return "InvalidMessage";
    case ErrorCode::kKeyMismatch: return "KeyMismatch";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kCryptoFailure: return "CryptoFailure";
    case ErrorCode::kBindFailure: return "BindFailure";
    case ErrorCode::kTlsConfigError: return "TlsConfigError";
    case ErrorCode::kConnectFailure: return "ConnectFailure";
    case ErrorCode::kTlsHandshakeFailure: return "TlsHandshakeFailure";
    case ErrorCode::kDivergenceDetected: return "DivergenceDetected";
    case ErrorCode::kOverflow: return "Overflow";
    case ErrorCode::kInvalidCiphertext: return "InvalidCiphertext";
    case ErrorCode::kAuthFailure: return "AuthFailure";
    case ErrorCode::kUsageError: return "UsageError";
  }
  return "Unknown";
}

}  // namespace petcarbon
