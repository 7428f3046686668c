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
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "pktmut/errors.hpp"
#include "pktmut/mutation/apply.hpp"
#include "pktmut/mutation/plan.hpp"
#include "pktmut/packet/codec.hpp"
#include "pktmut/packet/template.hpp"

namespace pktmut {

struct GeneratorConfig {
  uint32_t max_entities = 1;                  // N
  uint32_t value_count = 4;                   // target values per field (4-6 typical)
  std::optional<uint64_t> stride;             // explicit stride wins over value_count
  bool include_truncation = false;
  bool include_reserved = false;
  bool suppress_duplicates = true;
  std::vector<std::string> protocols;         // layer names; empty = all non-link layers

  void validate() const {
    if (!stride && value_count < 2) {
      throw Error(ErrorCode::config_invalid, "value_count must be >= 2");
    }
    if (stride && *stride == 0) {
      throw Error(ErrorCode::config_invalid, "stride must be >= 1");
    }
  }
};

enum class EntityKind : uint8_t { field, option_value, option_length };

// A mutable unit of the packet: a header field, an insertable option's
// value, or an insertable option's governing length byte. Ordinals are
// dense and stable for a fixed template.
struct EntityRef {
  EntityKind kind = EntityKind::field;
  std::string layer;
  std::string name;  // field or option name
  uint32_t ordinal = 0;

  std::string label() const {
    switch (kind) {
      case EntityKind::field: return layer + "." + name;
      case EntityKind::option_value: return layer + "." + name + " (insert)";
      case EntityKind::option_length: return layer + "." + name + ".len (insert)";
    }
    return {};
  }
};

inline bool layer_selected(const GeneratorConfig& config, const TemplateLayer& layer) {
  if (config.protocols.empty()) return layer.spec->role != LayerRole::link;
  return std::find(config.protocols.begin(), config.protocols.end(), layer.spec->name) !=
         config.protocols.end();
}

inline std::vector<EntityRef> list_entities(const PacketTemplate& tmpl,
                                            const GeneratorConfig& config) {
  std::vector<EntityRef> out;
  uint32_t ordinal = 0;
  for (const auto& layer : tmpl.layers()) {
    if (!layer_selected(config, layer)) continue;
    for (const auto& f : layer.spec->fields) {
      if (f.kind == FieldKind::reserved && !config.include_reserved) continue;
      out.push_back({EntityKind::field, layer.spec->name, f.name, ordinal++});
    }
    for (const auto& o : layer.spec->options) {
      if (!o.has_length_byte && o.value_width == 0) continue;  // pure padding markers
      out.push_back({EntityKind::option_value, layer.spec->name, o.name, ordinal++});
      if (o.has_length_byte) {
        out.push_back({EntityKind::option_length, layer.spec->name, o.name, ordinal++});
      }
    }
  }
  return out;
}

// Interpolation lattice for a w-bit domain: {0, S, 2S, ...} clamped to
// [0, 2^w - 1], with the maximum always present. Ascending, duplicate-free.
inline std::vector<uint64_t> interpolate(uint32_t bit_width, const GeneratorConfig& config) {
  uint64_t max = bit_width >= 64 ? ~0ull : ((1ull << bit_width) - 1);
  uint64_t stride;
  if (config.stride) {
    stride = *config.stride;
  } else {
    uint64_t steps = config.value_count - 1;
    stride = max / steps + (max % steps != 0 ? 1 : 0);
    if (stride == 0) stride = 1;
  }
  std::vector<uint64_t> values;
  for (uint64_t v = 0;; v += stride) {
    values.push_back(v);
    if (v > max - stride || stride > max - v) break;  // next step would overflow or exceed
  }
  if (values.back() != max) values.push_back(max);
  return values;
}

namespace detail {

inline const FieldDescriptor& entity_field(const PacketTemplate& tmpl, const EntityRef& e) {
  return *tmpl.find_layer(e.layer)->spec->find_field(e.name);
}

inline const OptionDescriptor& entity_option(const PacketTemplate& tmpl, const EntityRef& e) {
  return *tmpl.find_layer(e.layer)->spec->find_option(e.name);
}

}  // namespace detail

// Values the generator actually sweeps for one entity. Replace sweeps drop
// the template-effective value (replacing with it is the identity); length
// sweeps drop the option's natural encoded length for the same reason.
inline std::vector<uint64_t> sweep_values(const PacketTemplate& tmpl, const EntityRef& entity,
                                          const GeneratorConfig& config) {
  switch (entity.kind) {
    case EntityKind::field: {
      const FieldDescriptor& f = detail::entity_field(tmpl, entity);
      std::vector<uint64_t> values = interpolate(f.bit_width, config);
      uint64_t current = tmpl.effective_value(entity.layer, entity.name);
      values.erase(std::remove(values.begin(), values.end(), current), values.end());
      return values;
    }
    case EntityKind::option_value: {
      const OptionDescriptor& o = detail::entity_option(tmpl, entity);
      if (o.value_width == 0) return {0};  // bare insert, single variant
      return interpolate(8 * o.value_width, config);
    }
    case EntityKind::option_length: {
      const OptionDescriptor& o = detail::entity_option(tmpl, entity);
      std::vector<uint64_t> values = interpolate(8, config);
      uint64_t natural = o.natural_length();
      values.erase(std::remove(values.begin(), values.end(), natural), values.end());
      return values;
    }
  }
  return {};
}

inline MutationInstruction entity_instruction(const PacketTemplate& tmpl, const EntityRef& entity,
                                              uint64_t value) {
  switch (entity.kind) {
    case EntityKind::field:
      return MutationInstruction::make_replace(entity.layer, entity.name, value);
    case EntityKind::option_value: {
      const OptionDescriptor& o = detail::entity_option(tmpl, entity);
      return MutationInstruction::make_insert(entity.layer, entity.name,
                                              be_bytes(value, o.value_width));
    }
    case EntityKind::option_length: {
      const OptionDescriptor& o = detail::entity_option(tmpl, entity);
      return MutationInstruction::make_insert(entity.layer, entity.name, o.default_value,
                                              static_cast<uint8_t>(value));
    }
  }
  throw Error(ErrorCode::config_invalid, "bad entity kind");
}

// All C(E, n) index subsets in lexicographic order.
class SelectionStream {
 public:
  SelectionStream(size_t universe, size_t n) : universe_(universe), n_(n) {
    if (n_ > universe_) {
      done_ = true;
      return;
    }
    current_.resize(n_);
    for (size_t i = 0; i < n_; ++i) current_[i] = i;
  }

  std::optional<std::vector<size_t>> next() {
    if (done_) return std::nullopt;
    std::vector<size_t> out = current_;
    if (n_ == 0) {
      done_ = true;
      return out;
    }
    // Advance to the next combination; position i tops out at U - n + i.
    size_t i = n_;
    while (i-- > 0) {
      if (current_[i] < universe_ - n_ + i) {
        ++current_[i];
        for (size_t j = i + 1; j < n_; ++j) current_[j] = current_[j - 1] + 1;
        return out;
      }
    }
    done_ = true;
    return out;
  }

 private:
  size_t universe_;
  size_t n_;
  std::vector<size_t> current_;
  bool done_ = false;
};

// Number of trailing bytes eligible for the truncation series: everything
// after the innermost protected header (the network layer when present).
inline uint32_t truncation_span(const PacketTemplate& tmpl) {
  Packet baseline = encode(tmpl);
  uint32_t protected_end = 0;
  for (const auto& layout : baseline.layers) {
    if (layout.spec->role == LayerRole::link || layout.spec->role == LayerRole::network) {
      protected_end = layout.offset + layout.header_len;
    }
  }
  uint32_t frame = static_cast<uint32_t>(baseline.bytes.size());
  uint32_t span = frame - protected_end;
  if (span >= frame) span = frame - 1;  // truncate must leave at least one byte
  return span;
}

// Ordered, duplicate-free plan stream:
//   baseline, N=1, N=2, ..., truncation series, Replace+Truncate pairs.
// Within an N level, selections advance in ordinal order and values in
// interpolation order with the last selected entity varying fastest. Plans
// whose encoded bytes equal an earlier plan's bytes are suppressed (unless
// disabled) and do not consume plan ids.
class PlanStream {
 public:
  PlanStream(PacketTemplate tmpl, GeneratorConfig config)
      : tmpl_(std::move(tmpl)), config_(std::move(config)) {
    config_.validate();
    entities_ = list_entities(tmpl_, config_);
    sweeps_.reserve(entities_.size());
    for (const auto& e : entities_) sweeps_.push_back(sweep_values(tmpl_, e, config_));
    field_entities_.clear();
    for (size_t i = 0; i < entities_.size(); ++i) {
      if (entities_[i].kind == EntityKind::field) field_entities_.push_back(i);
    }
    if (config_.include_truncation) trunc_span_ = truncation_span(tmpl_);
    n_ = 0;
  }

  const std::vector<EntityRef>& entities() const { return entities_; }
  uint64_t suppressed() const { return suppressed_; }
  const PacketTemplate& base_template() const { return tmpl_; }

  std::optional<MutationPlan> next() {
    for (;;) {
      std::optional<MutationPlan> candidate = next_candidate();
      if (!candidate) return std::nullopt;
      if (config_.suppress_duplicates) {
        Packet p = apply(tmpl_, *candidate);
        std::string key(p.bytes.begin(), p.bytes.end());
        if (!seen_.insert(std::move(key)).second) {
          ++suppressed_;
          continue;
        }
      }
      candidate->plan_id = next_id_++;
      return candidate;
    }
  }

 private:
  enum class Phase { levels, series, pairs, done };

  std::optional<MutationPlan> next_candidate() {
    while (phase_ == Phase::levels) {
      if (n_ > config_.max_entities || n_ > entities_.size()) {
        phase_ = config_.include_truncation ? Phase::series : Phase::done;
        series_count_ = 1;
        break;
      }
      if (!selection_) {
        selections_.emplace(entities_.size(), n_);
        auto sel = selections_->next();
        if (!sel) {
          ++n_;
          selections_.reset();
          continue;
        }
        selection_ = std::move(sel);
        value_idx_.assign(n_, 0);
      }
      MutationPlan plan;
      for (size_t i = 0; i < n_; ++i) {
        size_t e = (*selection_)[i];
        plan.instructions.push_back(
            entity_instruction(tmpl_, entities_[e], sweeps_[e][value_idx_[i]]));
      }
      advance_values();
      return plan;
    }

    while (phase_ == Phase::series) {
      if (series_count_ > trunc_span_) {
        phase_ = (config_.max_entities >= 2 && trunc_span_ > 0) ? Phase::pairs : Phase::done;
        pair_field_ = 0;
        pair_value_ = 0;
        pair_count_ = 1;
        break;
      }
      MutationPlan plan;
      plan.instructions.push_back(MutationInstruction::make_truncate(series_count_++));
      return plan;
    }

    while (phase_ == Phase::pairs) {
      if (pair_field_ >= field_entities_.size()) {
        phase_ = Phase::done;
        break;
      }
      size_t e = field_entities_[pair_field_];
      MutationPlan plan;
      plan.instructions.push_back(
          entity_instruction(tmpl_, entities_[e], sweeps_[e][pair_value_]));
      plan.instructions.push_back(MutationInstruction::make_truncate(pair_count_));
      if (++pair_count_ > trunc_span_) {
        pair_count_ = 1;
        if (++pair_value_ >= sweeps_[e].size()) {
          pair_value_ = 0;
          ++pair_field_;
        }
      }
      return plan;
    }
    return std::nullopt;
  }

  void advance_values() {
    if (n_ == 0) {
      selection_.reset();
      selections_.reset();
      ++n_;
      return;
    }
    size_t i = n_;
    while (i-- > 0) {
      size_t e = (*selection_)[i];
      if (++value_idx_[i] < sweeps_[e].size()) return;
      value_idx_[i] = 0;
    }
    auto sel = selections_->next();
    if (sel) {
      selection_ = std::move(sel);
      value_idx_.assign(n_, 0);
    } else {
      selection_.reset();
      selections_.reset();
      ++n_;
    }
  }

  PacketTemplate tmpl_;
  GeneratorConfig config_;
  std::vector<EntityRef> entities_;
  std::vector<std::vector<uint64_t>> sweeps_;
  std::vector<size_t> field_entities_;

  Phase phase_ = Phase::levels;
  size_t n_ = 0;
  std::optional<SelectionStream> selections_;
  std::optional<std::vector<size_t>> selection_;
  std::vector<size_t> value_idx_;

  uint32_t trunc_span_ = 0;
  uint32_t series_count_ = 1;

  size_t pair_field_ = 0;
  size_t pair_value_ = 0;
  uint32_t pair_count_ = 1;

  std::unordered_set<std::string> seen_;
  uint64_t suppressed_ = 0;
  uint64_t next_id_ = 0;
};

inline std::vector<MutationPlan> generate(const PacketTemplate& tmpl,
                                          const GeneratorConfig& config) {
  PlanStream stream(tmpl, config);
  std::vector<MutationPlan> out;
  while (auto plan = stream.next()) out.push_back(std::move(*plan));
  return out;
}

// Closed-form stream length before duplicate suppression: elementary
// symmetric sums of the per-entity sweep sizes, plus the truncation phases.
inline uint64_t count_plans(const PacketTemplate& tmpl, const GeneratorConfig& config) {
  GeneratorConfig cfg = config;
  cfg.validate();
  std::vector<EntityRef> entities = list_entities(tmpl, cfg);
  std::vector<uint64_t> sizes;
  sizes.reserve(entities.size());
  for (const auto& e : entities) sizes.push_back(sweep_values(tmpl, e, cfg).size());

  size_t levels = std::min<size_t>(cfg.max_entities, sizes.size());
  std::vector<uint64_t> sym(levels + 1, 0);
  sym[0] = 1;
  for (uint64_t s : sizes) {
    for (size_t n = levels; n >= 1; --n) sym[n] += sym[n - 1] * s;
  }
  uint64_t count = 1;  // baseline
  for (size_t n = 1; n <= levels; ++n) count += sym[n];

  if (cfg.include_truncation) {
    uint64_t span = truncation_span(tmpl);
    count += span;
    if (cfg.max_entities >= 2) {
      for (size_t i = 0; i < entities.size(); ++i) {
        if (entities[i].kind == EntityKind::field) count += sizes[i] * span;
      }
    }
  }
  return count;
}

}  // namespace pktmut
