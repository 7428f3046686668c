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
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pktmut/bytes.hpp"
#include "pktmut/errors.hpp"
#include "pktmut/packet/template.hpp"

namespace pktmut {

enum class MutationOp : uint8_t { replace, insert, truncate };

// One of the three operators:
//   replace <layer> <field> 0x<hex>          set a header field
//   insert  <layer> <option> 0x<hex>         append an option, hex = value bytes
//   insert  <layer> <option>.len 0x<hex>     append with default value, hex = length byte
//   truncate <n>                             drop n trailing frame bytes
struct MutationInstruction {
  MutationOp op = MutationOp::replace;
  std::string layer;
  std::string target;                       // field name (replace) / option name (insert)
  uint64_t value = 0;                       // replace value / truncate count
  Bytes value_bytes;                        // insert value bytes
  std::optional<uint8_t> length_override;   // insert length-byte form

  static MutationInstruction make_replace(std::string layer, std::string field, uint64_t value) {
    MutationInstruction m;
    m.op = MutationOp::replace;
    m.layer = std::move(layer);
    m.target = std::move(field);
    m.value = value;
    return m;
  }

  static MutationInstruction make_insert(std::string layer, std::string option, Bytes value,
                                         std::optional<uint8_t> length_override = {}) {
    MutationInstruction m;
    m.op = MutationOp::insert;
    m.layer = std::move(layer);
    m.target = std::move(option);
    m.value_bytes = std::move(value);
    m.length_override = length_override;
    return m;
  }

  static MutationInstruction make_truncate(uint64_t count) {
    MutationInstruction m;
    m.op = MutationOp::truncate;
    m.value = count;
    return m;
  }

  bool operator==(const MutationInstruction& o) const {
    return op == o.op && layer == o.layer && target == o.target && value == o.value &&
           value_bytes == o.value_bytes && length_override == o.length_override;
  }
};

struct MutationPlan {
  std::vector<MutationInstruction> instructions;
  std::string scenario_id;  // stamped when the campaign pairs plan and scenario
  uint64_t plan_id = 0;

  bool is_identity() const { return instructions.empty(); }

  size_t entity_count() const {
    size_t n = 0;
    for (const auto& i : instructions) {
      if (i.op != MutationOp::truncate) ++n;
    }
    return n;
  }

  bool has_truncate() const {
    for (const auto& i : instructions) {
      if (i.op == MutationOp::truncate) return true;
    }
    return false;
  }

  // Structural invariants plus reference checks against a template.
  void validate(const PacketTemplate& tmpl) const {
    std::set<std::pair<std::string, std::string>> replaced;
    for (size_t i = 0; i < instructions.size(); ++i) {
      const MutationInstruction& instr = instructions[i];
      switch (instr.op) {
        case MutationOp::truncate:
          if (i + 1 != instructions.size()) {
            throw Error(ErrorCode::plan_invalid, "truncate must be the last instruction");
          }
          if (instr.value < 1) {
            throw Error(ErrorCode::plan_invalid, "truncate count must be >= 1");
          }
          break;
        case MutationOp::replace: {
          if (!replaced.insert({instr.layer, instr.target}).second) {
            throw Error(ErrorCode::plan_invalid,
                        "duplicate replace target " + instr.layer + "." + instr.target);
          }
          const TemplateLayer* l = tmpl.find_layer(instr.layer);
          if (!l) throw Error(ErrorCode::plan_invalid, "no layer " + instr.layer);
          const FieldDescriptor* f = l->spec->find_field(instr.target);
          if (!f) {
            throw Error(ErrorCode::plan_invalid, instr.layer + " has no field " + instr.target);
          }
          if (instr.value > f->max_value()) {
            throw Error(ErrorCode::plan_invalid,
                        "value overflows " + instr.layer + "." + instr.target);
          }
          break;
        }
        case MutationOp::insert: {
          const TemplateLayer* l = tmpl.find_layer(instr.layer);
          if (!l) throw Error(ErrorCode::plan_invalid, "no layer " + instr.layer);
          if (!l->spec->find_option(instr.target)) {
            throw Error(ErrorCode::plan_invalid, instr.layer + " has no option " + instr.target);
          }
          break;
        }
      }
    }
  }

  std::set<std::pair<std::string, std::string>> replace_targets() const {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& i : instructions) {
      if (i.op == MutationOp::replace) out.insert({i.layer, i.target});
    }
    return out;
  }

  bool operator==(const MutationPlan& o) const { return instructions == o.instructions; }
};

inline std::string render_instruction(const MutationInstruction& instr) {
  std::ostringstream out;
  switch (instr.op) {
    case MutationOp::replace: {
      out << "replace " << instr.layer << " " << instr.target << " 0x" << std::hex << instr.value;
      break;
    }
    case MutationOp::insert: {
      out << "insert " << instr.layer << " " << instr.target;
      if (instr.length_override) {
        out << ".len 0x" << hex_digit(*instr.length_override >> 4)
            << hex_digit(*instr.length_override);
      } else {
        out << " 0x" << to_hex(instr.value_bytes);
      }
      break;
    }
    case MutationOp::truncate:
      out << "truncate " << std::dec << instr.value;
      break;
  }
  return out.str();
}

// One instruction per line.
inline std::string render_plan(const MutationPlan& plan) {
  std::string out;
  for (const auto& i : plan.instructions) {
    out += render_instruction(i);
    out += '\n';
  }
  return out;
}

inline MutationInstruction parse_instruction(const std::string& line,
                                             const PacketTemplate& tmpl) {
  std::istringstream in(line);
  std::string op;
  in >> op;
  if (op == "truncate") {
    uint64_t count = 0;
    if (!(in >> count)) throw Error(ErrorCode::plan_invalid, "truncate needs a count");
    return MutationInstruction::make_truncate(count);
  }
  std::string layer, target, value;
  if (!(in >> layer >> target >> value)) {
    throw Error(ErrorCode::plan_invalid, "malformed instruction: " + line);
  }
  if (op == "replace") {
    if (value.rfind("0x", 0) != 0) throw Error(ErrorCode::plan_invalid, "value must be 0x hex");
    uint64_t v = value.size() > 2 ? std::stoull(value.substr(2), nullptr, 16) : 0;
    return MutationInstruction::make_replace(layer, target, v);
  }
  if (op == "insert") {
    // `<option>.len` selects the length-byte form.
    auto dot = target.rfind(".len");
    if (dot != std::string::npos && dot + 4 == target.size()) {
      std::string option = target.substr(0, dot);
      Bytes raw = parse_hex(value);
      if (raw.size() != 1) throw Error(ErrorCode::plan_invalid, "length byte must be one octet");
      const TemplateLayer* l = tmpl.find_layer(layer);
      if (!l) throw Error(ErrorCode::plan_invalid, "no layer " + layer);
      const OptionDescriptor* desc = l->spec->find_option(option);
      if (!desc) throw Error(ErrorCode::plan_invalid, layer + " has no option " + option);
      return MutationInstruction::make_insert(layer, option, desc->default_value, raw[0]);
    }
    return MutationInstruction::make_insert(layer, target, parse_hex(value));
  }
  throw Error(ErrorCode::plan_invalid, "unknown operator: " + op);
}

inline MutationPlan parse_plan(const std::string& text, const PacketTemplate& tmpl) {
  MutationPlan plan;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    plan.instructions.push_back(parse_instruction(line, tmpl));
  }
  plan.validate(tmpl);
  return plan;
}

}  // namespace pktmut
