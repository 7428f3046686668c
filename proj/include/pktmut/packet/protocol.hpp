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

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pktmut/bytes.hpp"
#include "pktmut/errors.hpp"

namespace pktmut {

// Wire constants.
inline constexpr uint16_t kEthertypeIpv4 = 0x0800;
inline constexpr uint16_t kEthertypeIpv6 = 0x86dd;
inline constexpr uint8_t kIpProtoHopByHop = 0;
inline constexpr uint8_t kIpProtoTcp = 6;
inline constexpr uint8_t kIpProtoUdp = 17;
inline constexpr uint8_t kIpProtoNoNext = 59;
inline constexpr uint8_t kIpProtoDestOpts = 60;

enum class FieldKind : uint8_t { plain, length_like, offset_like, checksum, reserved };

enum class LayerRole : uint8_t { link, network, transport, standalone };

// Container style of the variable region that follows the fixed header.
enum class OptionStyle : uint8_t {
  none,       // no variable region
  tcp,        // TLVs padded with NOPs then EOL to a 4-byte boundary
  ipv4,       // TLVs padded with zero (EOL) bytes to a 4-byte boundary
  ipv6_ext,   // options grouped into 8-byte-aligned extension headers
};

// Extension header class for ipv6-carried options.
enum class ExtClass : uint8_t { in_header, hop_by_hop, destination };

struct FieldDescriptor {
  std::string name;
  uint32_t bit_offset = 0;  // bits from layer start
  uint32_t bit_width = 0;   // 1..32
  uint64_t default_value = 0;
  FieldKind kind = FieldKind::plain;

  uint64_t max_value() const {
    return bit_width >= 64 ? ~0ull : ((1ull << bit_width) - 1);
  }
};

struct OptionDescriptor {
  std::string name;
  uint8_t type_code = 0;
  bool has_length_byte = false;
  uint32_t value_width = 0;  // bytes
  Bytes default_value;
  // For extension-carried options, a length override targets the enclosing
  // extension header's length byte instead of the option's own length byte.
  ExtClass ext_class = ExtClass::in_header;

  uint8_t natural_length() const {
    return static_cast<uint8_t>(2 + default_value.size());
  }
};

struct LayerSpec {
  std::string name;
  LayerRole role = LayerRole::standalone;
  uint32_t base_header_bytes = 0;
  OptionStyle option_style = OptionStyle::none;
  std::vector<FieldDescriptor> fields;
  std::vector<OptionDescriptor> options;

  const FieldDescriptor* find_field(const std::string& field) const {
    for (const auto& f : fields) {
      if (f.name == field) return &f;
    }
    return nullptr;
  }

  const OptionDescriptor* find_option(const std::string& option) const {
    for (const auto& o : options) {
      if (o.name == option) return &o;
    }
    return nullptr;
  }

  const FieldDescriptor* checksum_field() const {
    for (const auto& f : fields) {
      if (f.kind == FieldKind::checksum) return &f;
    }
    return nullptr;
  }

  // Descriptor invariants: widths in range, defaults representable, at most
  // one checksum field, and fields tiling the fixed header exactly.
  void validate() const {
    uint32_t total_bits = 0;
    int checksum_fields = 0;
    std::vector<std::pair<uint32_t, uint32_t>> spans;
    for (const auto& f : fields) {
      if (f.bit_width < 1 || f.bit_width > 32) {
        throw Error(ErrorCode::config_invalid, name + "." + f.name + ": bit_width out of range");
      }
      if (f.bit_offset + f.bit_width > 8 * base_header_bytes) {
        throw Error(ErrorCode::config_invalid, name + "." + f.name + ": span exceeds header");
      }
      if (f.default_value > f.max_value()) {
        throw Error(ErrorCode::config_invalid, name + "." + f.name + ": default overflows width");
      }
      if (f.kind == FieldKind::checksum) ++checksum_fields;
      spans.emplace_back(f.bit_offset, f.bit_offset + f.bit_width);
      total_bits += f.bit_width;
    }
    if (checksum_fields > 1) {
      throw Error(ErrorCode::config_invalid, name + ": multiple checksum fields");
    }
    std::sort(spans.begin(), spans.end());
    uint32_t cursor = 0;
    for (const auto& [lo, hi] : spans) {
      if (lo != cursor) {
        throw Error(ErrorCode::config_invalid, name + ": field spans do not tile header");
      }
      cursor = hi;
    }
    if (cursor != 8 * base_header_bytes || total_bits != 8 * base_header_bytes) {
      throw Error(ErrorCode::config_invalid, name + ": field spans do not cover header");
    }
  }
};

using LayerSpecPtr = std::shared_ptr<const LayerSpec>;

namespace detail {

inline LayerSpecPtr make_spec(LayerSpec spec) {
  spec.validate();
  return std::make_shared<const LayerSpec>(std::move(spec));
}

}  // namespace detail

inline const LayerSpecPtr& ethernet_spec() {
  static const LayerSpecPtr spec = detail::make_spec(LayerSpec{
      .name = "eth",
      .role = LayerRole::link,
      .base_header_bytes = 14,
      .option_style = OptionStyle::none,
      .fields =
          {
              // MAC addresses split hi/lo to respect the 32-bit field cap.
              {"dst_mac_hi", 0, 16, 0x0200, FieldKind::plain},
              {"dst_mac_lo", 16, 32, 0x000000c7, FieldKind::plain},
              {"src_mac_hi", 48, 16, 0x0200, FieldKind::plain},
              {"src_mac_lo", 64, 32, 0x00000001, FieldKind::plain},
              {"ethertype", 96, 16, kEthertypeIpv4, FieldKind::plain},
          },
      .options = {},
  });
  return spec;
}

inline const LayerSpecPtr& ipv4_spec() {
  static const LayerSpecPtr spec = detail::make_spec(LayerSpec{
      .name = "ipv4",
      .role = LayerRole::network,
      .base_header_bytes = 20,
      .option_style = OptionStyle::ipv4,
      .fields =
          {
              {"version", 0, 4, 4, FieldKind::plain},
              {"ihl", 4, 4, 5, FieldKind::length_like},
              {"tos", 8, 8, 0, FieldKind::plain},
              {"total_length", 16, 16, 20, FieldKind::length_like},
              {"identification", 32, 16, 0, FieldKind::plain},
              {"flags", 48, 3, 2, FieldKind::plain},  // DF set
              {"frag_offset", 51, 13, 0, FieldKind::plain},
              {"ttl", 64, 8, 64, FieldKind::plain},
              {"protocol", 72, 8, kIpProtoTcp, FieldKind::plain},
              {"header_checksum", 80, 16, 0, FieldKind::checksum},
              {"src_addr", 96, 32, 0xc0a80001, FieldKind::plain},   // 192.168.0.1
              {"dst_addr", 128, 32, 0xc0a800c7, FieldKind::plain},  // 192.168.0.199
          },
      .options =
          {
              {"eol", 0, false, 0, {}, ExtClass::in_header},
              {"nop", 1, false, 0, {}, ExtClass::in_header},
              {"option_tlv", 7, true, 4, {0, 0, 0, 0}, ExtClass::in_header},
          },
  });
  return spec;
}

inline const LayerSpecPtr& ipv6_spec() {
  static const LayerSpecPtr spec = detail::make_spec(LayerSpec{
      .name = "ipv6",
      .role = LayerRole::network,
      .base_header_bytes = 40,
      .option_style = OptionStyle::ipv6_ext,
      .fields =
          {
              {"version", 0, 4, 6, FieldKind::plain},
              {"traffic_class", 4, 8, 0, FieldKind::plain},
              {"flow_label", 12, 20, 0, FieldKind::plain},
              {"payload_length", 32, 16, 0, FieldKind::length_like},
              {"next_header", 48, 8, kIpProtoTcp, FieldKind::plain},
              {"hop_limit", 56, 8, 64, FieldKind::plain},
              // fd00::1 / fd00::c7, split into 32-bit words.
              {"src_addr_0", 64, 32, 0xfd000000, FieldKind::plain},
              {"src_addr_1", 96, 32, 0, FieldKind::plain},
              {"src_addr_2", 128, 32, 0, FieldKind::plain},
              {"src_addr_3", 160, 32, 1, FieldKind::plain},
              {"dst_addr_0", 192, 32, 0xfd000000, FieldKind::plain},
              {"dst_addr_1", 224, 32, 0, FieldKind::plain},
              {"dst_addr_2", 256, 32, 0, FieldKind::plain},
              {"dst_addr_3", 288, 32, 0xc7, FieldKind::plain},
          },
      .options =
          {
              // Experimental option type 0x1e: top bits 00 = skip if unknown.
              {"hbh_opt", 0x1e, true, 4, {0, 0, 0, 0}, ExtClass::hop_by_hop},
              {"dst_opt", 0x1e, true, 4, {0, 0, 0, 0}, ExtClass::destination},
          },
  });
  return spec;
}

inline const LayerSpecPtr& tcp_spec() {
  static const LayerSpecPtr spec = detail::make_spec(LayerSpec{
      .name = "tcp",
      .role = LayerRole::transport,
      .base_header_bytes = 20,
      .option_style = OptionStyle::tcp,
      .fields =
          {
              {"src_port", 0, 16, 40000, FieldKind::plain},
              {"dst_port", 16, 16, 7777, FieldKind::plain},
              {"seq", 32, 32, 1000, FieldKind::plain},
              {"ack", 64, 32, 0, FieldKind::plain},
              {"data_offset", 96, 4, 5, FieldKind::length_like},
              {"reserved", 100, 4, 0, FieldKind::reserved},
              {"flag_cwr", 104, 1, 0, FieldKind::plain},
              {"flag_ece", 105, 1, 0, FieldKind::plain},
              {"flag_urg", 106, 1, 0, FieldKind::plain},
              {"flag_ack", 107, 1, 0, FieldKind::plain},
              {"flag_psh", 108, 1, 0, FieldKind::plain},
              {"flag_rst", 109, 1, 0, FieldKind::plain},
              {"flag_syn", 110, 1, 0, FieldKind::plain},
              {"flag_fin", 111, 1, 0, FieldKind::plain},
              {"window", 112, 16, 8192, FieldKind::plain},
              {"checksum", 128, 16, 0, FieldKind::checksum},
              {"urgent_ptr", 144, 16, 0, FieldKind::plain},
          },
      .options =
          {
              {"eol", 0, false, 0, {}, ExtClass::in_header},
              {"nop", 1, false, 0, {}, ExtClass::in_header},
              {"mss", 2, true, 2, {0x05, 0xb4}, ExtClass::in_header},  // 1460
              {"wscale", 3, true, 1, {7}, ExtClass::in_header},
              {"sack_permitted", 4, true, 0, {}, ExtClass::in_header},
              {"timestamps", 8, true, 8, {0, 0, 0, 1, 0, 0, 0, 0}, ExtClass::in_header},
          },
  });
  return spec;
}

inline const LayerSpecPtr& udp_spec() {
  static const LayerSpecPtr spec = detail::make_spec(LayerSpec{
      .name = "udp",
      .role = LayerRole::transport,
      .base_header_bytes = 8,
      .option_style = OptionStyle::none,
      .fields =
          {
              {"src_port", 0, 16, 40000, FieldKind::plain},
              {"dst_port", 16, 16, 7777, FieldKind::plain},
              {"length", 32, 16, 8, FieldKind::length_like},
              {"checksum", 48, 16, 0, FieldKind::checksum},
          },
      .options = {},
  });
  return spec;
}

inline LayerSpecPtr find_builtin_spec(const std::string& name) {
  if (name == "eth") return ethernet_spec();
  if (name == "ipv4") return ipv4_spec();
  if (name == "ipv6") return ipv6_spec();
  if (name == "tcp") return tcp_spec();
  if (name == "udp") return udp_spec();
  return nullptr;
}

// Standalone single-layer protocol made of byte-aligned plain fields.
// Used for small closed-form enumeration checks.
inline LayerSpecPtr make_synthetic_spec(const std::string& name,
                                        const std::vector<uint32_t>& field_bit_widths,
                                        uint64_t default_value = 0) {
  LayerSpec spec;
  spec.name = name;
  spec.role = LayerRole::standalone;
  spec.option_style = OptionStyle::none;
  uint32_t bit = 0;
  for (size_t i = 0; i < field_bit_widths.size(); ++i) {
    FieldDescriptor f;
    f.name = "f" + std::to_string(i);
    f.bit_offset = bit;
    f.bit_width = field_bit_widths[i];
    f.default_value = default_value;
    f.kind = FieldKind::plain;
    spec.fields.push_back(std::move(f));
    bit += field_bit_widths[i];
  }
  if (bit % 8 != 0) {
    throw Error(ErrorCode::config_invalid, "synthetic layer must be byte-aligned");
  }
  spec.base_header_bytes = bit / 8;
  return detail::make_spec(std::move(spec));
}

}  // namespace pktmut
