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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pktmut/bytes.hpp"
#include "pktmut/errors.hpp"
#include "pktmut/packet/protocol.hpp"

namespace pktmut {

struct OptionSpan {
  std::string option;
  uint32_t offset = 0;  // byte offset within the frame
  uint32_t length = 0;  // encoded bytes (type/len/value, excluding padding)
};

struct LayerLayout {
  LayerSpecPtr spec;
  uint32_t offset = 0;      // byte offset of layer start within the frame
  uint32_t header_len = 0;  // fixed header + options/extension region
  std::vector<OptionSpan> options;

  uint32_t field_bit_offset(const FieldDescriptor& f) const {
    return offset * 8 + f.bit_offset;
  }
};

// Raw octets plus the resolved span map produced by encode/decode.
// Immutable value; set_field returns a modified copy.
struct Packet {
  Bytes bytes;
  std::vector<LayerLayout> layers;
  uint32_t payload_offset = 0;

  const LayerLayout* find_layer(const std::string& name) const {
    for (const auto& l : layers) {
      if (l.spec->name == name) return &l;
    }
    return nullptr;
  }

  std::string hex() const { return hex_dump(bytes); }
};

inline uint64_t get_field(const Packet& p, const std::string& layer, const std::string& field) {
  const LayerLayout* l = p.find_layer(layer);
  if (!l) throw Error(ErrorCode::field_absent, "no layer " + layer);
  const FieldDescriptor* f = l->spec->find_field(field);
  if (!f) throw Error(ErrorCode::field_absent, layer + " has no field " + field);
  uint32_t bit = l->field_bit_offset(*f);
  if ((bit + f->bit_width + 7) / 8 > p.bytes.size()) {
    throw Error(ErrorCode::field_absent, layer + "." + field + " truncated away");
  }
  return read_bits(p.bytes, bit, f->bit_width);
}

// Changes exactly the field's bit span. No lengths or checksums are
// re-derived; re-fixing is mutation policy, not field access.
inline Packet set_field(const Packet& p, const std::string& layer, const std::string& field,
                        uint64_t value) {
  const LayerLayout* l = p.find_layer(layer);
  if (!l) throw Error(ErrorCode::field_absent, "no layer " + layer);
  const FieldDescriptor* f = l->spec->find_field(field);
  if (!f) throw Error(ErrorCode::field_absent, layer + " has no field " + field);
  if (value > f->max_value()) {
    throw Error(ErrorCode::value_overflow, layer + "." + field + " cannot hold value");
  }
  uint32_t bit = l->field_bit_offset(*f);
  if ((bit + f->bit_width + 7) / 8 > p.bytes.size()) {
    throw Error(ErrorCode::field_absent, layer + "." + field + " truncated away");
  }
  Packet out = p;
  write_bits(out.bytes, bit, f->bit_width, value);
  return out;
}

}  // namespace pktmut
