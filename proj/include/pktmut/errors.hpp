// Copyright 2026 The pktmut Authors
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

#include <stdexcept>
#include <string>

namespace pktmut {

enum class ErrorCode {
  bad_length,
  unrepresentable_length,
  layer_mismatch,
  field_absent,
  value_overflow,
  option_space_exhausted,
  plan_invalid,
  truncate_too_large,
  outer_layer_corrupt,
  prefix_mismatch,
  prefix_timeout,
  frame_too_large,
  short_frame,
  unknown_opcode,
  unknown_key,
  target_unreachable,
  parse_error,
  config_invalid,
  io_error,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::bad_length: return "BadLength";
    case ErrorCode::unrepresentable_length: return "UnrepresentableLength";
    case ErrorCode::layer_mismatch: return "LayerMismatch";
    case ErrorCode::field_absent: return "FieldAbsent";
    case ErrorCode::value_overflow: return "ValueOverflow";
    case ErrorCode::option_space_exhausted: return "OptionSpaceExhausted";
    case ErrorCode::plan_invalid: return "PlanInvalid";
    case ErrorCode::truncate_too_large: return "TruncateTooLarge";
    case ErrorCode::outer_layer_corrupt: return "OuterLayerCorrupt";
    case ErrorCode::prefix_mismatch: return "PrefixMismatch";
    case ErrorCode::prefix_timeout: return "PrefixTimeout";
    case ErrorCode::frame_too_large: return "FrameTooLarge";
    case ErrorCode::short_frame: return "ShortFrame";
    case ErrorCode::unknown_opcode: return "UnknownOpcode";
    case ErrorCode::unknown_key: return "UnknownKey";
    case ErrorCode::target_unreachable: return "TargetUnreachable";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::config_invalid: return "ConfigInvalid";
    case ErrorCode::io_error: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pktmut
