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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pktmut/bytes.hpp"
#include "pktmut/errors.hpp"
#include "pktmut/packet/protocol.hpp"

namespace pktmut {

// One concrete option to encode into a layer's variable region.
struct OptionInstance {
  std::string option;  // descriptor name within the layer
  Bytes value;         // value bytes (descriptor default when empty insert)
  // Overrides the governing length byte: the option's own length byte for
  // TCP/IPv4 TLVs, the extension header length byte for ipv6-carried options.
  std::optional<uint8_t> length_override;

  bool operator==(const OptionInstance& o) const {
    return option == o.option && value == o.value && length_override == o.length_override;
  }
};

struct TemplateLayer {
  LayerSpecPtr spec;
  std::map<std::string, uint64_t> field_values;  // explicitly set fields only
  std::vector<OptionInstance> options;
};

// Layered description of a baseline valid packet. Unset fields encode as
// descriptor defaults (context-derived for ethertype/protocol/next_header,
// computed for length-like fields). All values are honored verbatim once set.
class PacketTemplate {
 public:
  PacketTemplate() = default;

  static PacketTemplate for_stack(const std::vector<LayerSpecPtr>& specs, Bytes payload = {}) {
    PacketTemplate t;
    for (const auto& s : specs) t.layers_.push_back(TemplateLayer{s, {}, {}});
    t.payload_ = std::move(payload);
    t.validate();
    return t;
  }

  // eth + network + transport with all-default fields and empty payload.
  static PacketTemplate canonical(const std::string& network, const std::string& transport) {
    auto net = find_builtin_spec(network);
    auto tr = transport.empty() ? nullptr : find_builtin_spec(transport);
    if (!net || net->role != LayerRole::network) {
      throw Error(ErrorCode::layer_mismatch, "unknown network layer: " + network);
    }
    std::vector<LayerSpecPtr> specs{ethernet_spec(), net};
    if (!transport.empty()) {
      if (!tr || tr->role != LayerRole::transport) {
        throw Error(ErrorCode::layer_mismatch, "unknown transport layer: " + transport);
      }
      specs.push_back(tr);
    }
    return for_stack(specs);
  }

  const std::vector<TemplateLayer>& layers() const { return layers_; }
  std::vector<TemplateLayer>& layers() { return layers_; }
  const Bytes& payload() const { return payload_; }
  void set_payload(Bytes p) { payload_ = std::move(p); }

  const TemplateLayer* find_layer(const std::string& name) const {
    for (const auto& l : layers_) {
      if (l.spec->name == name) return &l;
    }
    return nullptr;
  }

  TemplateLayer* find_layer(const std::string& name) {
    for (auto& l : layers_) {
      if (l.spec->name == name) return &l;
    }
    return nullptr;
  }

  void set_field(const std::string& layer, const std::string& field, uint64_t value) {
    TemplateLayer* l = find_layer(layer);
    if (!l) throw Error(ErrorCode::field_absent, "no layer " + layer);
    const FieldDescriptor* f = l->spec->find_field(field);
    if (!f) throw Error(ErrorCode::field_absent, layer + " has no field " + field);
    if (value > f->max_value()) {
      throw Error(ErrorCode::value_overflow, layer + "." + field + " cannot hold value");
    }
    l->field_values[field] = value;
  }

  void add_option(const std::string& layer, OptionInstance inst) {
    TemplateLayer* l = find_layer(layer);
    if (!l) throw Error(ErrorCode::field_absent, "no layer " + layer);
    const OptionDescriptor* o = l->spec->find_option(inst.option);
    if (!o) throw Error(ErrorCode::field_absent, layer + " has no option " + inst.option);
    if (inst.value.empty() && o->value_width > 0) inst.value = o->default_value;
    l->options.push_back(std::move(inst));
  }

  // Explicit value if set, descriptor default otherwise.
  uint64_t effective_value(const std::string& layer, const std::string& field) const {
    const TemplateLayer* l = find_layer(layer);
    if (!l) throw Error(ErrorCode::field_absent, "no layer " + layer);
    const FieldDescriptor* f = l->spec->find_field(field);
    if (!f) throw Error(ErrorCode::field_absent, layer + " has no field " + field);
    auto it = l->field_values.find(field);
    return it != l->field_values.end() ? it->second : f->default_value;
  }

  // Layer order must be physically valid: a single standalone layer, or
  // link -> network [-> transport].
  void validate() const {
    if (layers_.empty()) throw Error(ErrorCode::layer_mismatch, "empty layer stack");
    if (layers_[0].spec->role == LayerRole::standalone) {
      if (layers_.size() != 1) {
        throw Error(ErrorCode::layer_mismatch, "standalone layer cannot be stacked");
      }
      return;
    }
    if (layers_[0].spec->role != LayerRole::link) {
      throw Error(ErrorCode::layer_mismatch, "stack must start with a link layer");
    }
    if (layers_.size() < 2 || layers_[1].spec->role != LayerRole::network) {
      throw Error(ErrorCode::layer_mismatch, "exactly one network layer required");
    }
    if (layers_.size() == 3 && layers_[2].spec->role != LayerRole::transport) {
      throw Error(ErrorCode::layer_mismatch, "third layer must be transport");
    }
    if (layers_.size() > 3) {
      throw Error(ErrorCode::layer_mismatch, "at most one transport layer");
    }
    for (const auto& l : layers_) {
      for (const auto& [name, value] : l.field_values) {
        const FieldDescriptor* f = l.spec->find_field(name);
        if (!f) throw Error(ErrorCode::field_absent, l.spec->name + " has no field " + name);
        if (value > f->max_value()) {
          throw Error(ErrorCode::value_overflow, l.spec->name + "." + name + " overflows");
        }
      }
      for (const auto& opt : l.options) {
        if (!l.spec->find_option(opt.option)) {
          throw Error(ErrorCode::field_absent, l.spec->name + " has no option " + opt.option);
        }
      }
    }
  }

  bool operator==(const PacketTemplate& o) const {
    if (layers_.size() != o.layers_.size() || payload_ != o.payload_) return false;
    for (size_t i = 0; i < layers_.size(); ++i) {
      if (layers_[i].spec->name != o.layers_[i].spec->name) return false;
      if (layers_[i].options != o.layers_[i].options) return false;
      // Compare effective values so explicit-default and unset agree.
      for (const auto& f : layers_[i].spec->fields) {
        if (effective_value(layers_[i].spec->name, f.name) !=
            o.effective_value(o.layers_[i].spec->name, f.name)) {
          return false;
        }
      }
    }
    return true;
  }

 private:
  std::vector<TemplateLayer> layers_;
  Bytes payload_;
};

}  // namespace pktmut
