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

#include <cstdint>
#include <span>

#include "pktmut/bytes.hpp"
#include "pktmut/errors.hpp"

namespace pktmut {

// RFC 1071 ones-complement accumulator over 16-bit big-endian words.
// Odd trailing byte is treated as the high octet of a zero-padded word.
class ChecksumAccumulator {
 public:
  void add(std::span<const uint8_t> data) {
    size_t i = 0;
    for (; i + 1 < data.size(); i += 2) {
      sum_ += static_cast<uint32_t>((data[i] << 8) | data[i + 1]);
    }
    if (i < data.size()) {
      sum_ += static_cast<uint32_t>(data[i] << 8);
    }
  }

  void add_word(uint16_t word) { sum_ += word; }

  // Folded ones-complement sum.
  uint16_t sum() const {
    uint32_t s = sum_;
    while (s >> 16) s = (s & 0xffff) + (s >> 16);
    return static_cast<uint16_t>(s);
  }

  uint16_t checksum() const { return static_cast<uint16_t>(~sum()); }

 private:
  uint32_t sum_ = 0;
};

// IPv4 header checksum. The stored checksum span (bytes 10..11) is summed
// as zero, so the input may carry either zeros or a previous value there.
inline uint16_t ipv4_header_checksum(std::span<const uint8_t> header) {
  if (header.size() < 20 || header.size() % 2 != 0) {
    throw Error(ErrorCode::bad_length, "ipv4 header must be even and >= 20 bytes");
  }
  ChecksumAccumulator acc;
  for (size_t i = 0; i < header.size(); i += 2) {
    if (i == 10) continue;
    acc.add_word(static_cast<uint16_t>((header[i] << 8) | header[i + 1]));
  }
  return acc.checksum();
}

inline bool ipv4_header_verify(std::span<const uint8_t> header) {
  uint16_t stored = read_be16(header, 10);
  return ipv4_header_checksum(header) == stored;
}

// Network-layer view feeding the transport pseudo-header.
struct NetView {
  bool is_ipv6 = false;
  Bytes src;         // 4 or 16 bytes
  Bytes dst;         // 4 or 16 bytes
  uint8_t protocol = 0;
  uint32_t length = 0;  // upper-layer length for the pseudo-header
};

namespace detail {
inline uint16_t transport_sum(const NetView& net, std::span<const uint8_t> segment,
                              bool zero_checksum_field, size_t checksum_off) {
  ChecksumAccumulator acc;
  acc.add(net.src);
  acc.add(net.dst);
  if (net.is_ipv6) {
    acc.add_word(static_cast<uint16_t>(net.length >> 16));
    acc.add_word(static_cast<uint16_t>(net.length & 0xffff));
    acc.add_word(0);
    acc.add_word(net.protocol);
  } else {
    acc.add_word(net.protocol);
    acc.add_word(static_cast<uint16_t>(net.length & 0xffff));
  }
  size_t i = 0;
  for (; i + 1 < segment.size(); i += 2) {
    if (zero_checksum_field && i == checksum_off) continue;
    acc.add_word(static_cast<uint16_t>((segment[i] << 8) | segment[i + 1]));
  }
  if (i < segment.size()) acc.add_word(static_cast<uint16_t>(segment[i] << 8));
  return acc.sum();
}
}  // namespace detail

// TCP/UDP checksum over pseudo-header + segment. The segment's checksum
// field (offset 16 for TCP, 6 for UDP) is summed as zero. A UDP result of
// 0x0000 is remapped to 0xffff per RFC 768.
inline uint16_t transport_checksum(const NetView& net, std::span<const uint8_t> segment) {
  size_t csum_off = (net.protocol == 17) ? 6 : 16;
  uint16_t csum = static_cast<uint16_t>(~detail::transport_sum(net, segment, true, csum_off));
  if (net.protocol == 17 && csum == 0) csum = 0xffff;
  return csum;
}

inline bool transport_verify(const NetView& net, std::span<const uint8_t> segment) {
  size_t csum_off = (net.protocol == 17) ? 6 : 16;
  if (segment.size() < csum_off + 2) return false;
  uint16_t stored = read_be16(segment, csum_off);
  if (net.protocol == 17 && stored == 0) return true;  // checksum disabled
  return transport_checksum(net, segment) == stored;
}

}  // namespace pktmut
