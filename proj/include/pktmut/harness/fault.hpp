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

#include <chrono>
#include <cstdint>
#include <string>

#include "pktmut/errors.hpp"

namespace pktmut {

enum class FaultKind : uint8_t {
  oob_read,
  oob_write,
  div_by_zero,
  integer_wrap_trap,
  hang,
  crash,
};

inline const char* fault_kind_name(FaultKind k) {
  switch (k) {
    case FaultKind::oob_read: return "oob_read";
    case FaultKind::oob_write: return "oob_write";
    case FaultKind::div_by_zero: return "div_by_zero";
    case FaultKind::integer_wrap_trap: return "integer_wrap_trap";
    case FaultKind::hang: return "hang";
    case FaultKind::crash: return "crash";
  }
  return "unknown";
}

inline FaultKind fault_kind_from_name(const std::string& name) {
  if (name == "oob_read") return FaultKind::oob_read;
  if (name == "oob_write") return FaultKind::oob_write;
  if (name == "div_by_zero") return FaultKind::div_by_zero;
  if (name == "integer_wrap_trap") return FaultKind::integer_wrap_trap;
  if (name == "hang") return FaultKind::hang;
  if (name == "crash") return FaultKind::crash;
  throw Error(ErrorCode::parse_error, "unknown fault kind: " + name);
}

// What the oracle observed. Site labels are function-level string literals
// inside the target, stable across runs of the same build.
struct FaultReport {
  FaultKind kind = FaultKind::oob_read;
  std::string site;
  uint64_t offset = 0;
  uint64_t length = 0;
  std::string detail;
  std::string test_case_id;
};

// Dedup key: (kind, site).
struct FaultSignature {
  FaultKind kind = FaultKind::oob_read;
  std::string site;

  bool operator==(const FaultSignature& o) const { return kind == o.kind && site == o.site; }
  bool operator<(const FaultSignature& o) const {
    if (kind != o.kind) return kind < o.kind;
    return site < o.site;
  }

  std::string str() const { return std::string(fault_kind_name(kind)) + "@" + site; }
};

inline FaultSignature signature_of(const FaultReport& r) { return {r.kind, r.site}; }

// Raised by checked accesses; the target boundary converts it into a
// DeliveryResult. Execution of the current test case stops at the first
// fault (fail-fast).
class FaultRaised : public std::exception {
 public:
  explicit FaultRaised(FaultReport report) : report_(std::move(report)) {}
  const FaultReport& report() const { return report_; }
  const char* what() const noexcept override { return "target fault"; }

 private:
  FaultReport report_;
};

// Cooperative watchdog. Armed around deliver/syscall; every checked access
// polls it. A wall-clock deadline and a deterministic access budget both
// trip it, so seeded infinite loops surface in milliseconds regardless of
// host speed.
class ExecutionMonitor {
 public:
  void arm(uint32_t deadline_ms, uint64_t ops_budget) {
    armed_ = true;
    ops_ = 0;
    ops_budget_ = ops_budget;
    deadline_ = std::chrono::steady_clock::now() + std::chrono::milliseconds(deadline_ms);
  }

  void disarm() { armed_ = false; }

  void enter(const char* site) {
    last_site_ = site;
    poll();
  }

  const char* last_site() const { return last_site_; }

  void poll() {
    if (!armed_) return;
    ++ops_;
    if (ops_ > ops_budget_ ||
        ((ops_ == 1 || (ops_ & 63) == 0) && std::chrono::steady_clock::now() >= deadline_)) {
      FaultReport r;
      r.kind = FaultKind::hang;
      r.site = last_site_ ? last_site_ : "";
      r.detail = ops_ > ops_budget_ ? "access budget exceeded" : "deadline exceeded";
      armed_ = false;
      throw FaultRaised(std::move(r));
    }
  }

 private:
  bool armed_ = false;
  uint64_t ops_ = 0;
  uint64_t ops_budget_ = 0;
  std::chrono::steady_clock::time_point deadline_{};
  const char* last_site_ = nullptr;
};

// Checked arithmetic helpers emulating sanitizer traps for non-memory
// fault kinds.

inline uint32_t checked_div(uint32_t a, uint32_t b, const char* site) {
  if (b == 0) {
    FaultReport r;
    r.kind = FaultKind::div_by_zero;
    r.site = site;
    r.detail = "divide " + std::to_string(a) + " by zero";
    throw FaultRaised(std::move(r));
  }
  return a / b;
}

inline uint32_t checked_sub(uint32_t a, uint32_t b, const char* site) {
  if (b > a) {
    FaultReport r;
    r.kind = FaultKind::integer_wrap_trap;
    r.site = site;
    r.detail = "underflow " + std::to_string(a) + " - " + std::to_string(b);
    throw FaultRaised(std::move(r));
  }
  return a - b;
}

}  // namespace pktmut
