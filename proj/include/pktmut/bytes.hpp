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
#include <string>
#include <vector>

#include "pktmut/errors.hpp"

namespace pktmut {

using Bytes = std::vector<uint8_t>;

// Big-endian (network order) accessors.

inline uint16_t read_be16(std::span<const uint8_t> b, size_t off) {
  return static_cast<uint16_t>((b[off] << 8) | b[off + 1]);
}

inline uint32_t read_be32(std::span<const uint8_t> b, size_t off) {
  return (static_cast<uint32_t>(b[off]) << 24) |
         (static_cast<uint32_t>(b[off + 1]) << 16) |
         (static_cast<uint32_t>(b[off + 2]) << 8) |
         static_cast<uint32_t>(b[off + 3]);
}

inline void write_be16(Bytes& b, size_t off, uint16_t v) {
  b[off] = static_cast<uint8_t>(v >> 8);
  b[off + 1] = static_cast<uint8_t>(v & 0xff);
}

inline void write_be32(Bytes& b, size_t off, uint32_t v) {
  b[off] = static_cast<uint8_t>(v >> 24);
  b[off + 1] = static_cast<uint8_t>((v >> 16) & 0xff);
  b[off + 2] = static_cast<uint8_t>((v >> 8) & 0xff);
  b[off + 3] = static_cast<uint8_t>(v & 0xff);
}

// Serializes v into `width` big-endian bytes.
inline Bytes be_bytes(uint64_t v, size_t width) {
  Bytes out(width, 0);
  for (size_t i = 0; i < width; ++i) {
    out[width - 1 - i] = static_cast<uint8_t>((v >> (8 * i)) & 0xff);
  }
  return out;
}

inline uint64_t be_value(std::span<const uint8_t> b) {
  uint64_t v = 0;
  for (uint8_t byte : b) v = (v << 8) | byte;
  return v;
}

// Bit-level big-endian access. Bit 0 is the most significant bit of byte 0.

inline uint64_t read_bits(std::span<const uint8_t> b, uint32_t bit_off, uint32_t width) {
  uint64_t v = 0;
  for (uint32_t i = 0; i < width; ++i) {
    uint32_t bit = bit_off + i;
    uint8_t byte = b[bit / 8];
    v = (v << 1) | ((byte >> (7 - bit % 8)) & 1u);
  }
  return v;
}

inline void write_bits(Bytes& b, uint32_t bit_off, uint32_t width, uint64_t value) {
  for (uint32_t i = 0; i < width; ++i) {
    uint32_t bit = bit_off + i;
    uint8_t mask = static_cast<uint8_t>(1u << (7 - bit % 8));
    bool set = (value >> (width - 1 - i)) & 1u;
    if (set) {
      b[bit / 8] |= mask;
    } else {
      b[bit / 8] &= static_cast<uint8_t>(~mask);
    }
  }
}

inline char hex_digit(unsigned v) { return "0123456789abcdef"[v & 0xf]; }

// Two-digit lowercase hex, space-separated, 16 octets per line.
inline std::string hex_dump(std::span<const uint8_t> bytes) {
  std::string out;
  out.reserve(bytes.size() * 3 + bytes.size() / 16 + 1);
  for (size_t i = 0; i < bytes.size(); ++i) {
    out += hex_digit(bytes[i] >> 4);
    out += hex_digit(bytes[i]);
    if (i + 1 == bytes.size()) break;
    out += ((i + 1) % 16 == 0) ? '\n' : ' ';
  }
  return out;
}

inline std::string to_hex(std::span<const uint8_t> bytes) {
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out += hex_digit(b >> 4);
    out += hex_digit(b);
  }
  return out;
}

inline int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

// Parses hex octets, ignoring whitespace and an optional leading "0x".
// Accepts both continuous strings and hex_dump output.
inline Bytes parse_hex(const std::string& text) {
  std::string digits;
  size_t start = 0;
  if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) start = 2;
  for (size_t i = start; i < text.size(); ++i) {
    char c = text[i];
    if (c == ' ' || c == '\n' || c == '\t' || c == '\r') continue;
    if (hex_value(c) < 0) throw Error(ErrorCode::parse_error, "invalid hex character");
    digits += c;
  }
  if (digits.size() % 2 != 0) throw Error(ErrorCode::parse_error, "odd hex digit count");
  Bytes out(digits.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<uint8_t>(hex_value(digits[2 * i]) * 16 + hex_value(digits[2 * i + 1]));
  }
  return out;
}

}  // namespace pktmut
