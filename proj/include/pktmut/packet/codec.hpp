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
#include <set>
#include <string>
#include <vector>

#include "pktmut/bytes.hpp"
#include "pktmut/errors.hpp"
#include "pktmut/packet/checksum.hpp"
#include "pktmut/packet/packet.hpp"
#include "pktmut/packet/protocol.hpp"
#include "pktmut/packet/template.hpp"

namespace pktmut {

namespace detail {

struct EncodedRegion {
  Bytes bytes;
  std::vector<OptionSpan> spans;  // offsets relative to region start
};

inline Bytes option_tlv(const OptionDescriptor& desc, const OptionInstance& inst) {
  Bytes tlv;
  tlv.push_back(desc.type_code);
  if (desc.has_length_byte) {
    uint8_t natural = static_cast<uint8_t>(2 + inst.value.size());
    tlv.push_back(desc.ext_class == ExtClass::in_header
                      ? inst.length_override.value_or(natural)
                      : natural);
  }
  tlv.insert(tlv.end(), inst.value.begin(), inst.value.end());
  return tlv;
}

// TCP-style region: TLVs then NOPs-then-EOL padding to a 4-byte boundary.
inline EncodedRegion encode_tcp_options(const TemplateLayer& layer) {
  EncodedRegion region;
  for (const auto& inst : layer.options) {
    const OptionDescriptor* desc = layer.spec->find_option(inst.option);
    Bytes tlv = option_tlv(*desc, inst);
    region.spans.push_back({inst.option, static_cast<uint32_t>(region.bytes.size()),
                            static_cast<uint32_t>(tlv.size())});
    region.bytes.insert(region.bytes.end(), tlv.begin(), tlv.end());
  }
  size_t pad = (4 - region.bytes.size() % 4) % 4;
  if (pad > 0) {
    for (size_t i = 0; i + 1 < pad; ++i) region.bytes.push_back(1);  // NOP
    region.bytes.push_back(0);                                      // EOL
  }
  if (region.bytes.size() > 40) {
    throw Error(ErrorCode::option_space_exhausted, "tcp options exceed 40 bytes");
  }
  return region;
}

// IPv4-style region: TLVs then zero (EOL) padding to a 4-byte boundary.
inline EncodedRegion encode_ipv4_options(const TemplateLayer& layer) {
  EncodedRegion region;
  for (const auto& inst : layer.options) {
    const OptionDescriptor* desc = layer.spec->find_option(inst.option);
    Bytes tlv = option_tlv(*desc, inst);
    region.spans.push_back({inst.option, static_cast<uint32_t>(region.bytes.size()),
                            static_cast<uint32_t>(tlv.size())});
    region.bytes.insert(region.bytes.end(), tlv.begin(), tlv.end());
  }
  while (region.bytes.size() % 4 != 0) region.bytes.push_back(0);
  if (region.bytes.size() > 40) {
    throw Error(ErrorCode::option_space_exhausted, "ipv4 options exceed 40 bytes");
  }
  return region;
}

// IPv6 extension region: one hop-by-hop then one destination header, each
// 8-byte aligned with Pad1/PadN, carrying that class's options in order.
// next_header bytes are chained to `final_proto`.
inline EncodedRegion encode_ipv6_extensions(const TemplateLayer& layer, uint8_t final_proto,
                                            uint8_t* first_proto_out) {
  struct ExtGroup {
    uint8_t proto;
    std::vector<const OptionInstance*> options;
    std::optional<uint8_t> length_override;
  };
  std::vector<ExtGroup> groups;
  auto group_for = [&](ExtClass cls) -> ExtGroup& {
    uint8_t proto = (cls == ExtClass::hop_by_hop) ? kIpProtoHopByHop : kIpProtoDestOpts;
    for (auto& g : groups) {
      if (g.proto == proto) return g;
    }
    groups.push_back(ExtGroup{proto, {}, std::nullopt});
    return groups.back();
  };
  // Hop-by-hop must precede destination; seed group order accordingly.
  for (const auto& inst : layer.options) {
    const OptionDescriptor* desc = layer.spec->find_option(inst.option);
    if (desc->ext_class == ExtClass::hop_by_hop) group_for(ExtClass::hop_by_hop);
  }
  for (const auto& inst : layer.options) {
    const OptionDescriptor* desc = layer.spec->find_option(inst.option);
    ExtGroup& g = group_for(desc->ext_class == ExtClass::hop_by_hop ? ExtClass::hop_by_hop
                                                                    : ExtClass::destination);
    g.options.push_back(&inst);
    if (inst.length_override) g.length_override = inst.length_override;
  }

  EncodedRegion region;
  *first_proto_out = groups.empty() ? final_proto : groups[0].proto;
  for (size_t gi = 0; gi < groups.size(); ++gi) {
    uint8_t next = (gi + 1 < groups.size()) ? groups[gi + 1].proto : final_proto;
    Bytes ext;
    ext.push_back(next);
    ext.push_back(0);  // length byte patched below
    for (const OptionInstance* inst : groups[gi].options) {
      const OptionDescriptor* desc = layer.spec->find_option(inst->option);
      Bytes tlv = option_tlv(*desc, *inst);
      region.spans.push_back(
          {inst->option, static_cast<uint32_t>(region.bytes.size() + ext.size()),
           static_cast<uint32_t>(tlv.size())});
      ext.insert(ext.end(), tlv.begin(), tlv.end());
    }
    size_t pad = (8 - ext.size() % 8) % 8;
    if (pad == 1) {
      ext.push_back(0);  // Pad1
    } else if (pad >= 2) {
      ext.push_back(1);  // PadN
      ext.push_back(static_cast<uint8_t>(pad - 2));
      ext.insert(ext.end(), pad - 2, 0);
    }
    if (ext.size() / 8 - 1 > 255) {
      throw Error(ErrorCode::option_space_exhausted, "ipv6 extension header too long");
    }
    ext[1] = groups[gi].length_override.value_or(static_cast<uint8_t>(ext.size() / 8 - 1));
    region.bytes.insert(region.bytes.end(), ext.begin(), ext.end());
  }
  return region;
}

inline uint8_t transport_proto(const LayerSpec& spec) {
  if (spec.name == "tcp") return kIpProtoTcp;
  if (spec.name == "udp") return kIpProtoUdp;
  return kIpProtoNoNext;
}

inline Bytes addr_bytes_v4(uint32_t addr) { return be_bytes(addr, 4); }

inline Bytes addr_bytes_v6(const std::map<std::string, uint64_t>& resolved,
                           const std::string& prefix) {
  Bytes out;
  for (int i = 0; i < 4; ++i) {
    Bytes w = be_bytes(resolved.at(prefix + std::to_string(i)), 4);
    out.insert(out.end(), w.begin(), w.end());
  }
  return out;
}

}  // namespace detail

// Builds the NetView used for a transport pseudo-header from a network
// layer's resolved field values.
inline NetView net_view_from_values(const LayerSpec& net_spec,
                                    const std::map<std::string, uint64_t>& values,
                                    uint8_t proto, uint32_t upper_length) {
  NetView view;
  view.protocol = proto;
  view.length = upper_length;
  if (net_spec.name == "ipv4") {
    view.is_ipv6 = false;
    view.src = detail::addr_bytes_v4(static_cast<uint32_t>(values.at("src_addr")));
    view.dst = detail::addr_bytes_v4(static_cast<uint32_t>(values.at("dst_addr")));
  } else if (net_spec.name == "ipv6") {
    view.is_ipv6 = true;
    view.src = detail::addr_bytes_v6(values, "src_addr_");
    view.dst = detail::addr_bytes_v6(values, "dst_addr_");
  } else {
    throw Error(ErrorCode::layer_mismatch, "no pseudo-header for " + net_spec.name);
  }
  return view;
}

// Encodes a template into raw octets with a resolved layout.
//
// Length-like fields are computed from the actual layout unless explicitly
// set; explicit values are honored verbatim. Checksum fields are computed
// last, also unless explicitly set.
inline Packet encode(const PacketTemplate& tmpl) {
  tmpl.validate();
  const auto& layers = tmpl.layers();
  size_t n = layers.size();

  std::vector<detail::EncodedRegion> regions(n);
  std::vector<uint8_t> ipv6_first_proto(n, kIpProtoNoNext);
  std::vector<uint32_t> header_len(n);

  for (size_t i = 0; i < n; ++i) {
    const TemplateLayer& layer = layers[i];
    switch (layer.spec->option_style) {
      case OptionStyle::tcp:
        regions[i] = detail::encode_tcp_options(layer);
        break;
      case OptionStyle::ipv4:
        regions[i] = detail::encode_ipv4_options(layer);
        break;
      case OptionStyle::ipv6_ext: {
        uint8_t final_proto =
            (i + 1 < n) ? detail::transport_proto(*layers[i + 1].spec) : kIpProtoNoNext;
        regions[i] = detail::encode_ipv6_extensions(layer, final_proto, &ipv6_first_proto[i]);
        break;
      }
      case OptionStyle::none:
        if (!layer.options.empty()) {
          throw Error(ErrorCode::layer_mismatch, layer.spec->name + " carries no options");
        }
        break;
    }
    header_len[i] = layer.spec->base_header_bytes + static_cast<uint32_t>(regions[i].bytes.size());
  }

  std::vector<uint32_t> offset(n);
  uint32_t total = 0;
  for (size_t i = 0; i < n; ++i) {
    offset[i] = total;
    total += header_len[i];
  }
  uint32_t payload_offset = total;
  total += static_cast<uint32_t>(tmpl.payload().size());

  // Resolve every field value: explicit > context-derived > computed > default.
  std::vector<std::map<std::string, uint64_t>> resolved(n);
  for (size_t i = 0; i < n; ++i) {
    const TemplateLayer& layer = layers[i];
    const std::string& name = layer.spec->name;
    uint32_t inner_bytes = total - offset[i] - header_len[i];
    for (const auto& f : layer.spec->fields) {
      auto explicit_it = layer.field_values.find(f.name);
      if (explicit_it != layer.field_values.end()) {
        resolved[i][f.name] = explicit_it->second;
        continue;
      }
      uint64_t v = f.default_value;
      if (name == "eth" && f.name == "ethertype" && i + 1 < n) {
        v = layers[i + 1].spec->name == "ipv6" ? kEthertypeIpv6 : kEthertypeIpv4;
      } else if (name == "ipv4" && f.name == "ihl") {
        v = header_len[i] / 4;
      } else if (name == "ipv4" && f.name == "total_length") {
        uint64_t len = header_len[i] + inner_bytes;
        if (len > 0xffff) throw Error(ErrorCode::unrepresentable_length, "ipv4 total_length");
        v = len;
      } else if (name == "ipv4" && f.name == "protocol" && i + 1 < n) {
        v = detail::transport_proto(*layers[i + 1].spec);
      } else if (name == "ipv6" && f.name == "payload_length") {
        uint64_t len = static_cast<uint64_t>(regions[i].bytes.size()) + inner_bytes;
        if (len > 0xffff) throw Error(ErrorCode::unrepresentable_length, "ipv6 payload_length");
        v = len;
      } else if (name == "ipv6" && f.name == "next_header") {
        v = !regions[i].bytes.empty()
                ? ipv6_first_proto[i]
                : (i + 1 < n ? detail::transport_proto(*layers[i + 1].spec) : kIpProtoNoNext);
      } else if (name == "tcp" && f.name == "data_offset") {
        v = header_len[i] / 4;
      } else if (name == "udp" && f.name == "length") {
        uint64_t len = header_len[i] + inner_bytes;
        if (len > 0xffff) throw Error(ErrorCode::unrepresentable_length, "udp length");
        v = len;
      }
      resolved[i][f.name] = v;
    }
  }

  Packet packet;
  packet.bytes.assign(total, 0);
  packet.payload_offset = payload_offset;
  for (size_t i = 0; i < n; ++i) {
    const TemplateLayer& layer = layers[i];
    LayerLayout layout;
    layout.spec = layer.spec;
    layout.offset = offset[i];
    layout.header_len = header_len[i];
    for (const auto& f : layer.spec->fields) {
      write_bits(packet.bytes, offset[i] * 8 + f.bit_offset, f.bit_width, resolved[i][f.name]);
    }
    uint32_t region_off = offset[i] + layer.spec->base_header_bytes;
    for (size_t b = 0; b < regions[i].bytes.size(); ++b) {
      packet.bytes[region_off + b] = regions[i].bytes[b];
    }
    for (OptionSpan span : regions[i].spans) {
      span.offset += region_off;
      layout.options.push_back(span);
    }
    packet.layers.push_back(std::move(layout));
  }
  for (size_t b = 0; b < tmpl.payload().size(); ++b) {
    packet.bytes[payload_offset + b] = tmpl.payload()[b];
  }

  // Checksums last, innermost first so outer sums see final inner bytes.
  for (size_t i = n; i-- > 0;) {
    const TemplateLayer& layer = layers[i];
    const FieldDescriptor* csum = layer.spec->checksum_field();
    if (!csum || layer.field_values.count(csum->name)) continue;
    uint16_t value = 0;
    if (layer.spec->name == "ipv4") {
      std::span<const uint8_t> header(packet.bytes.data() + offset[i], header_len[i]);
      value = ipv4_header_checksum(header);
    } else if (layer.spec->name == "tcp" || layer.spec->name == "udp") {
      if (i == 0) continue;  // no network layer beneath: checksum stays zero
      const TemplateLayer& net = layers[i - 1];
      uint32_t seg_len = total - offset[i];
      uint8_t proto = detail::transport_proto(*layer.spec);
      uint32_t pseudo_len =
          layer.spec->name == "udp" ? static_cast<uint32_t>(resolved[i].at("length")) : seg_len;
      NetView view = net_view_from_values(*net.spec, resolved[i - 1], proto, pseudo_len);
      std::span<const uint8_t> segment(packet.bytes.data() + offset[i], seg_len);
      value = transport_checksum(view, segment);
    } else {
      continue;
    }
    write_bits(packet.bytes, offset[i] * 8 + csum->bit_offset, csum->bit_width, value);
  }
  return packet;
}

struct DecodeResult {
  PacketTemplate tmpl;
  Packet packet;
};

namespace detail {

struct OptionParse {
  std::vector<OptionInstance> options;
  std::vector<OptionSpan> spans;  // absolute frame offsets
};

// Shared TLV walk for tcp/ipv4 in-header option regions.
inline OptionParse parse_tlv_region(std::span<const uint8_t> frame, uint32_t begin, uint32_t end,
                                    const LayerSpec& spec, bool strip_trailing_nops) {
  OptionParse out;
  uint32_t cursor = begin;
  bool saw_eol = false;
  while (cursor < end) {
    uint8_t type = frame[cursor];
    if (type == 0) {  // EOL: remainder is padding
      saw_eol = true;
      break;
    }
    if (type == 1) {  // NOP
      out.options.push_back({"nop", {}, std::nullopt});
      out.spans.push_back({"nop", cursor, 1});
      ++cursor;
      continue;
    }
    if (cursor + 1 >= end) throw Error(ErrorCode::parse_error, "truncated option TLV");
    uint8_t len = frame[cursor + 1];
    if (len < 2 || cursor + len > end) throw Error(ErrorCode::parse_error, "bad option length");
    const OptionDescriptor* desc = nullptr;
    for (const auto& o : spec.options) {
      if (o.type_code == type && o.ext_class == ExtClass::in_header) {
        desc = &o;
        break;
      }
    }
    if (!desc) throw Error(ErrorCode::parse_error, "unknown option type in " + spec.name);
    Bytes value(frame.begin() + cursor + 2, frame.begin() + cursor + len);
    out.options.push_back({desc->name, std::move(value), std::nullopt});
    out.spans.push_back({desc->name, cursor, len});
    cursor += len;
  }
  if (strip_trailing_nops && saw_eol) {
    while (!out.options.empty() && out.options.back().option == "nop") {
      out.options.pop_back();
      out.spans.pop_back();
    }
  }
  return out;
}

}  // namespace detail

// Decodes a canonical frame (our encode output or well-formed stack output)
// back into a template whose field values are all explicit. Intended for
// round-trips and for parsing target replies, not for arbitrary mutants.
inline DecodeResult decode(const Bytes& frame, std::optional<LayerSpecPtr> standalone = {}) {
  DecodeResult result;
  result.packet.bytes = frame;
  std::span<const uint8_t> b(frame);

  auto read_layer_fields = [&](const LayerSpecPtr& spec, uint32_t off, TemplateLayer& out) {
    for (const auto& f : spec->fields) {
      out.field_values[f.name] = read_bits(b, off * 8 + f.bit_offset, f.bit_width);
    }
  };

  auto require = [&](bool cond, const char* what) {
    if (!cond) throw Error(ErrorCode::parse_error, what);
  };

  std::vector<TemplateLayer> layers;
  uint32_t cursor = 0;

  if (standalone) {
    require(frame.size() >= (*standalone)->base_header_bytes, "short standalone frame");
    TemplateLayer layer;
    layer.spec = *standalone;
    read_layer_fields(*standalone, 0, layer);
    layers.push_back(std::move(layer));
    result.packet.layers.push_back(
        {*standalone, 0, (*standalone)->base_header_bytes, {}});
    cursor = (*standalone)->base_header_bytes;
  } else {
    require(frame.size() >= 14, "short ethernet frame");
    TemplateLayer eth;
    eth.spec = ethernet_spec();
    read_layer_fields(eth.spec, 0, eth);
    uint16_t ethertype = static_cast<uint16_t>(eth.field_values.at("ethertype"));
    layers.push_back(std::move(eth));
    result.packet.layers.push_back({ethernet_spec(), 0, 14, {}});
    cursor = 14;

    uint8_t next_proto = kIpProtoNoNext;
    if (ethertype == kEthertypeIpv4) {
      require(frame.size() >= cursor + 20, "short ipv4 header");
      TemplateLayer ip;
      ip.spec = ipv4_spec();
      read_layer_fields(ip.spec, cursor, ip);
      uint32_t ihl = static_cast<uint32_t>(ip.field_values.at("ihl"));
      require(ihl >= 5, "bad ihl");
      uint32_t hdr = ihl * 4;
      require(frame.size() >= cursor + hdr, "ipv4 header exceeds frame");
      auto parsed = detail::parse_tlv_region(b, cursor + 20, cursor + hdr, *ip.spec, false);
      ip.options = parsed.options;
      next_proto = static_cast<uint8_t>(ip.field_values.at("protocol"));
      result.packet.layers.push_back({ipv4_spec(), cursor, hdr, parsed.spans});
      layers.push_back(std::move(ip));
      cursor += hdr;
    } else if (ethertype == kEthertypeIpv6) {
      require(frame.size() >= cursor + 40, "short ipv6 header");
      TemplateLayer ip;
      ip.spec = ipv6_spec();
      read_layer_fields(ip.spec, cursor, ip);
      uint8_t next = static_cast<uint8_t>(ip.field_values.at("next_header"));
      uint32_t ext_cursor = cursor + 40;
      std::vector<OptionSpan> spans;
      while (next == kIpProtoHopByHop || next == kIpProtoDestOpts) {
        ExtClass cls = next == kIpProtoHopByHop ? ExtClass::hop_by_hop : ExtClass::destination;
        require(frame.size() >= ext_cursor + 2, "short extension header");
        uint8_t ext_next = frame[ext_cursor];
        uint32_t ext_len = 8u * (frame[ext_cursor + 1] + 1u);
        require(frame.size() >= ext_cursor + ext_len, "extension exceeds frame");
        uint32_t oc = ext_cursor + 2;
        uint32_t oend = ext_cursor + ext_len;
        while (oc < oend) {
          uint8_t type = frame[oc];
          if (type == 0) {  // Pad1
            ++oc;
            continue;
          }
          require(oc + 1 < oend, "truncated ipv6 option");
          uint8_t len = frame[oc + 1];
          require(oc + 2 + len <= oend, "bad ipv6 option length");
          if (type != 1) {  // PadN is padding, everything else is substantive
            const OptionDescriptor* desc = nullptr;
            for (const auto& o : ip.spec->options) {
              if (o.type_code == type && o.ext_class == cls) {
                desc = &o;
                break;
              }
            }
            require(desc != nullptr, "unknown ipv6 option type");
            Bytes value(frame.begin() + oc + 2, frame.begin() + oc + 2 + len);
            ip.options.push_back({desc->name, std::move(value), std::nullopt});
            spans.push_back({desc->name, oc, static_cast<uint32_t>(2 + len)});
          }
          oc += 2 + len;
        }
        next = ext_next;
        ext_cursor += ext_len;
      }
      next_proto = next;
      result.packet.layers.push_back({ipv6_spec(), cursor, ext_cursor - cursor, spans});
      layers.push_back(std::move(ip));
      cursor = ext_cursor;
    } else {
      throw Error(ErrorCode::parse_error, "unknown ethertype");
    }

    if (next_proto == kIpProtoTcp) {
      require(frame.size() >= cursor + 20, "short tcp header");
      TemplateLayer tcp;
      tcp.spec = tcp_spec();
      read_layer_fields(tcp.spec, cursor, tcp);
      uint32_t hdr = static_cast<uint32_t>(tcp.field_values.at("data_offset")) * 4;
      require(hdr >= 20 && frame.size() >= cursor + hdr, "bad tcp data offset");
      auto parsed = detail::parse_tlv_region(b, cursor + 20, cursor + hdr, *tcp.spec, true);
      tcp.options = parsed.options;
      result.packet.layers.push_back({tcp_spec(), cursor, hdr, parsed.spans});
      layers.push_back(std::move(tcp));
      cursor += hdr;
    } else if (next_proto == kIpProtoUdp) {
      require(frame.size() >= cursor + 8, "short udp header");
      TemplateLayer udp;
      udp.spec = udp_spec();
      read_layer_fields(udp.spec, cursor, udp);
      result.packet.layers.push_back({udp_spec(), cursor, 8, {}});
      layers.push_back(std::move(udp));
      cursor += 8;
    }
  }

  result.packet.payload_offset = cursor;
  Bytes payload(frame.begin() + cursor, frame.end());
  // Rebuild through the public surface to keep validation in one place.
  std::vector<LayerSpecPtr> specs;
  for (auto& l : layers) specs.push_back(l.spec);
  PacketTemplate t = PacketTemplate::for_stack(specs, std::move(payload));
  for (size_t i = 0; i < layers.size(); ++i) {
    for (const auto& [name, value] : layers[i].field_values) {
      t.set_field(layers[i].spec->name, name, value);
    }
    for (auto& opt : layers[i].options) {
      t.add_option(layers[i].spec->name, opt);
    }
  }
  result.tmpl = std::move(t);
  return result;
}

// Recomputes lengths and checksums in every layer strictly outside
// `inner_layer` so short frames stay self-consistent where the mutation did
// not reach. Fields named in `exclude` are left untouched. An empty
// inner_layer treats every layer as outer (payload-level mutation).
inline Packet refix_outer_layers(const Packet& packet, const std::string& inner_layer,
                                 const std::set<std::pair<std::string, std::string>>& exclude = {}) {
  Packet out = packet;
  auto excluded = [&](const std::string& layer, const std::string& field) {
    return exclude.count({layer, field}) > 0;
  };

  for (const auto& layout : out.layers) {
    const std::string& name = layout.spec->name;
    if (!inner_layer.empty() && name == inner_layer) break;
    if (layout.offset + layout.header_len > out.bytes.size()) {
      throw Error(ErrorCode::outer_layer_corrupt, name + " header truncated");
    }
    uint32_t remaining = static_cast<uint32_t>(out.bytes.size()) - layout.offset;

    auto set_bits = [&](const FieldDescriptor& f, uint64_t v) {
      write_bits(out.bytes, layout.offset * 8 + f.bit_offset, f.bit_width, v);
    };

    if (name == "ipv4") {
      if (const FieldDescriptor* f = layout.spec->find_field("total_length");
          f && !excluded(name, "total_length")) {
        set_bits(*f, remaining);
      }
    } else if (name == "ipv6") {
      if (const FieldDescriptor* f = layout.spec->find_field("payload_length");
          f && !excluded(name, "payload_length")) {
        set_bits(*f, remaining - 40);
      }
    } else if (name == "udp") {
      if (const FieldDescriptor* f = layout.spec->find_field("length");
          f && !excluded(name, "length")) {
        set_bits(*f, remaining);
      }
    }

    const FieldDescriptor* csum = layout.spec->checksum_field();
    if (!csum || excluded(name, csum->name)) continue;
    if (name == "ipv4") {
      std::span<const uint8_t> header(out.bytes.data() + layout.offset, layout.header_len);
      set_bits(*csum, ipv4_header_checksum(header));
    } else if (name == "tcp" || name == "udp") {
      // Transport as an outer layer: the cut was in the payload.
      const LayerLayout* net = nullptr;
      for (const auto& l : out.layers) {
        if (l.spec->role == LayerRole::network) net = &l;
      }
      if (!net) continue;
      std::map<std::string, uint64_t> values;
      for (const auto& f : net->spec->fields) {
        values[f.name] = read_bits(out.bytes, net->offset * 8 + f.bit_offset, f.bit_width);
      }
      uint32_t seg_len = remaining;
      uint8_t proto = name == "udp" ? kIpProtoUdp : kIpProtoTcp;
      uint32_t pseudo_len = seg_len;
      if (name == "udp") {
        pseudo_len = static_cast<uint32_t>(
            read_bits(out.bytes, layout.offset * 8 + layout.spec->find_field("length")->bit_offset,
                      16));
      }
      NetView view = net_view_from_values(*net->spec, values, proto, pseudo_len);
      // Zero the stored checksum before recomputing.
      set_bits(*csum, 0);
      std::span<const uint8_t> segment(out.bytes.data() + layout.offset, seg_len);
      set_bits(*csum, transport_checksum(view, segment));
    }
  }
  return out;
}

}  // namespace pktmut
