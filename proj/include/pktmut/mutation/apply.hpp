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

#include <string>

#include "pktmut/errors.hpp"
#include "pktmut/mutation/plan.hpp"
#include "pktmut/packet/codec.hpp"
#include "pktmut/packet/packet.hpp"
#include "pktmut/packet/template.hpp"

namespace pktmut {

// Applies a plan to a template and returns the final frame.
//
// Replaces set field values verbatim (explicitly-set values are never
// recomputed by encode). Inserts append options at the end of the layer's
// option region; covering length fields follow automatically unless the
// same field is a Replace target. A trailing Truncate drops frame bytes,
// after which lengths and checksums in every layer outside the innermost
// mutated layer are re-fixed; the mutated layer's own bytes stay put.
inline Packet apply(const PacketTemplate& tmpl, const MutationPlan& plan) {
  plan.validate(tmpl);
  PacketTemplate work = tmpl;
  uint64_t truncate_count = 0;

  for (const auto& instr : plan.instructions) {
    switch (instr.op) {
      case MutationOp::replace:
        work.set_field(instr.layer, instr.target, instr.value);
        break;
      case MutationOp::insert:
        work.add_option(instr.layer, {instr.target, instr.value_bytes, instr.length_override});
        break;
      case MutationOp::truncate:
        truncate_count = instr.value;
        break;
    }
  }

  Packet packet = encode(work);
  if (truncate_count == 0) return packet;

  if (truncate_count >= packet.bytes.size()) {
    throw Error(ErrorCode::truncate_too_large, "truncate count " +
                                                   std::to_string(truncate_count) +
                                                   " >= frame length " +
                                                   std::to_string(packet.bytes.size()));
  }
  size_t cut = packet.bytes.size() - truncate_count;
  packet.bytes.resize(cut);

  // Innermost mutated layer: the one the cut landed in; a pure payload cut
  // leaves every layer outer.
  std::string inner;
  for (const auto& layout : packet.layers) {
    if (cut >= layout.offset && cut < layout.offset + layout.header_len) {
      inner = layout.spec->name;
      break;
    }
  }
  return refix_outer_layers(packet, inner, plan.replace_targets());
}

}  // namespace pktmut
