// Copyright 2026 The recnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "recnet/error.hpp"
#include "recnet/number_format.hpp"
#include "recnet/prefix_sum_tree.hpp"

namespace recnet {

using Vertex = std::int64_t;

// attr_t(i) = q(i) * I[t - i < N]
struct WindowRecency {
  std::int64_t N = 1;
};

// attr_t(i) = q(i) * exp(-(t - i) / N)
struct ExponentialRecency {
  std::int64_t N = 1;
};

// attr = q^alpha1 * d^alpha2 * exp(-alpha3 * age / tau). Exploratory.
struct GeneralFactorized {
  int alpha1 = 1;
  int alpha2 = 0;
  int alpha3 = 1;
  double tau = 1.0;
};

// attr = d * (age + 1)^(-exponent). Exploratory; the +1 keeps the newest
// vertex (age 0) finite.
struct AgePower {
  double exponent = 1.0;
};

using AttractivenessKind =
    std::variant<WindowRecency, ExponentialRecency, GeneralFactorized, AgePower>;

// True for the two kinds with closed-form predictions.
inline bool has_theory(const AttractivenessKind& kind) {
  return std::holds_alternative<WindowRecency>(kind) ||
         std::holds_alternative<ExponentialRecency>(kind);
}

inline bool is_window(const AttractivenessKind& kind) {
  return std::holds_alternative<WindowRecency>(kind);
}

inline bool uses_degree(const AttractivenessKind& kind) {
  if (const auto* g = std::get_if<GeneralFactorized>(&kind)) {
    return g->alpha2 == 1;
  }
  return std::holds_alternative<AgePower>(kind);
}

inline void validate(const AttractivenessKind& kind) {
  std::visit(
      [](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, WindowRecency> ||
                      std::is_same_v<K, ExponentialRecency>) {
          detail::require(k.N >= 1, "attractiveness: N must be >= 1");
        } else if constexpr (std::is_same_v<K, GeneralFactorized>) {
          auto bit = [](int v) { return v == 0 || v == 1; };
          detail::require(bit(k.alpha1) && bit(k.alpha2) && bit(k.alpha3),
                          "attractiveness: general exponents must be 0 or 1");
          detail::require(std::isfinite(k.tau) && k.tau > 0.0,
                          "attractiveness: tau must be > 0");
        } else {
          detail::require(std::isfinite(k.exponent) && k.exponent > 0.0,
                          "attractiveness: agepower exponent must be > 0");
        }
      },
      kind);
}

// Weight of a vertex born at step `birth` with quality q and current total
// degree `degree`, evaluated at step `now` (the graph has `now` vertices).
inline double attr_value(const AttractivenessKind& kind, double q,
                         std::int64_t degree, std::int64_t birth,
                         std::int64_t now) {
  detail::require(birth >= 1, "attr_value: birth must be >= 1");
  detail::require(birth <= now, "attr_value: birth after now");
  const auto age = static_cast<double>(now - birth);
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, WindowRecency>) {
          return now - birth < k.N ? q : 0.0;
        } else if constexpr (std::is_same_v<K, ExponentialRecency>) {
          return q * std::exp(-age / static_cast<double>(k.N));
        } else if constexpr (std::is_same_v<K, GeneralFactorized>) {
          double w = 1.0;
          if (k.alpha1 == 1) w *= q;
          if (k.alpha2 == 1) w *= static_cast<double>(degree);
          if (k.alpha3 == 1) w *= std::exp(-age / k.tau);
          return w;
        } else {
          return static_cast<double>(degree) * std::pow(age + 1.0, -k.exponent);
        }
      },
      kind);
}

// CLI / file-header spelling: window, exp, general:<a1><a2><a3>:<tau>,
// agepower:<exponent>. N is carried separately for the recency kinds.
inline std::string kind_name(const AttractivenessKind& kind) {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, WindowRecency>) {
          return "window";
        } else if constexpr (std::is_same_v<K, ExponentialRecency>) {
          return "exp";
        } else if constexpr (std::is_same_v<K, GeneralFactorized>) {
          return "general:" + std::to_string(k.alpha1) +
                 std::to_string(k.alpha2) + std::to_string(k.alpha3) + ":" +
                 format_double(k.tau);
        } else {
          return "agepower:" + format_double(k.exponent);
        }
      },
      kind);
}

inline AttractivenessKind parse_kind(std::string_view text, std::int64_t N) {
  if (text == "window") return WindowRecency{N};
  if (text == "exp" || text == "exponential") return ExponentialRecency{N};
  constexpr std::string_view general = "general:";
  constexpr std::string_view agepower = "agepower:";
  if (text.starts_with(general)) {
    auto rest = text.substr(general.size());
    if (rest.size() < 5 || rest[3] != ':') {
      throw InvalidArgument("kind: expected general:<a1><a2><a3>:<tau>");
    }
    GeneralFactorized g;
    int* bits[] = {&g.alpha1, &g.alpha2, &g.alpha3};
    for (int i = 0; i < 3; ++i) {
      if (rest[i] != '0' && rest[i] != '1') {
        throw InvalidArgument("kind: general exponents must be 0 or 1");
      }
      *bits[i] = rest[i] - '0';
    }
    g.tau = parse_double(rest.substr(4), "tau");
    AttractivenessKind kind = g;
    validate(kind);
    return kind;
  }
  if (text.starts_with(agepower)) {
    AttractivenessKind kind =
        AgePower{parse_double(text.substr(agepower.size()), "exponent")};
    validate(kind);
    return kind;
  }
  throw InvalidArgument("kind: unknown attractiveness kind '" +
                        std::string(text) + "'");
}

struct IndexOptions {
  // Rebase when the newest decay exponent exceeds this many natural-log units.
  double rescale_cap = 300.0;
  // At rebase, decayed weights below epsilon * total are dropped.
  double truncation_epsilon = 1e-15;

  void validate() const {
    detail::require(std::isfinite(rescale_cap) && rescale_cap > 0.0,
                    "index: rescale cap must be > 0");
    detail::require(truncation_epsilon >= 0.0 && truncation_epsilon < 1.0,
                    "index: truncation epsilon must lie in [0, 1)");
  }
};

// Incremental weighted-sampling index over the vertices 1..t of a growing
// graph. Keys live in a prefix-sum tree; time decay is folded into a shared
// factor exp(-(t - base) / scale) so a step never touches old entries.
//
// Slot k holds vertex first_vertex_ + k. Slots below live_ are logically zero
// (evicted window vertices) but remain in the tree until the next compaction.
class WeightIndex {
 public:
  explicit WeightIndex(AttractivenessKind kind, IndexOptions options = {})
      : kind_(kind), options_(options) {
    validate(kind_);
    options_.validate();
    if (const auto* w = std::get_if<WindowRecency>(&kind_)) {
      window_ = w->N;
    } else if (const auto* e = std::get_if<ExponentialRecency>(&kind_)) {
      decay_scale_ = static_cast<double>(e->N);
    } else if (const auto* g = std::get_if<GeneralFactorized>(&kind_)) {
      if (g->alpha3 == 1) decay_scale_ = g->tau;
    } else {
      dense_ = true;
    }
  }

  const AttractivenessKind& kind() const noexcept { return kind_; }
  std::int64_t current_step() const noexcept { return step_; }
  double truncation_epsilon() const noexcept {
    return options_.truncation_epsilon;
  }

  // First vertex with (possibly) nonzero weight.
  Vertex window_start() const noexcept {
    return first_vertex_ + static_cast<Vertex>(live_);
  }

  // Appends vertex t+1 with quality q and advances to step t+1.
  // `degree` is the new vertex's initial total degree; it only matters for
  // degree-dependent kinds.
  void push(double q, std::int64_t degree = 1) {
    ++step_;
    quality_.push_back(q);
    degree_.push_back(degree);
    if (dense_) {
      refresh_dense();
      return;
    }
    if (decay_scale_ > 0.0 &&
        static_cast<double>(step_ - base_) / decay_scale_ >
            options_.rescale_cap) {
      key_.push_back(0.0);
      tree_.push_back(0.0);
      rebase();
      return;
    }
    const double key = key_for(key_.size());
    key_.push_back(key);
    tree_.push_back(key);
    if (window_ > 0) {
      const Vertex oldest_alive = std::max<Vertex>(1, step_ - window_ + 1);
      while (window_start() < oldest_alive) ++live_;
      if (live_ >= static_cast<std::size_t>(std::max<std::int64_t>(window_, 32))) {
        compact(live_);
      }
    }
  }

  // Registers one more incident edge on vertex v (degree-dependent kinds).
  void record_edge(Vertex v) {
    if (!uses_degree(kind_)) return;
    const std::size_t slot = slot_of(v);
    if (slot >= degree_.size()) return;
    ++degree_[slot];
    if (slot < live_) return;
    const double updated = key_for(slot);
    tree_.add(slot, updated - key_[slot]);
    key_[slot] = updated;
  }

  // Q(t): sum of the logical weights of vertices 1..t.
  double total() const { return key_total() * decay_factor(); }

  // Logical weight of vertex v at the current step.
  double weight(Vertex v) const {
    if (v < 1 || v > step_) throw InvalidArgument("weight: vertex out of range");
    if (v < window_start()) return 0.0;
    return key_[slot_of(v)] * decay_factor();
  }

  // Smallest vertex whose cumulative weight exceeds u * total. Zero-weight
  // vertices are never returned.
  Vertex sample(double u) const {
    const double base = tree_.prefix(live_);
    const double span = tree_.prefix(key_.size()) - base;
    if (!(span > 0.0)) throw InvalidArgument("sample: all weights are zero");
    if (!std::isfinite(span)) throw InvalidArgument("sample: total weight is not finite");
    std::size_t slot = tree_.upper_bound(base + u * span);
    slot = std::clamp(slot, live_, key_.size() - 1);
    if (key_[slot] == 0.0) slot = nearest_nonzero(slot);
    return first_vertex_ + static_cast<Vertex>(slot);
  }

 private:
  std::size_t slot_of(Vertex v) const {
    return static_cast<std::size_t>(v - first_vertex_);
  }

  Vertex vertex_of(std::size_t slot) const {
    return first_vertex_ + static_cast<Vertex>(slot);
  }

  double decay_factor() const {
    if (decay_scale_ <= 0.0) return 1.0;
    return std::exp(-static_cast<double>(step_ - base_) / decay_scale_);
  }

  double key_total() const {
    return tree_.prefix(key_.size()) - tree_.prefix(live_);
  }

  // Shifted key of a slot relative to the current base.
  double key_for(std::size_t slot) const {
    const double q = quality_[slot];
    const double d = static_cast<double>(degree_[slot]);
    return std::visit(
        [&](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, WindowRecency>) {
            return q;
          } else if constexpr (std::is_same_v<K, ExponentialRecency>) {
            return q * std::exp(static_cast<double>(vertex_of(slot) - base_) /
                                decay_scale_);
          } else if constexpr (std::is_same_v<K, GeneralFactorized>) {
            double w = 1.0;
            if (k.alpha1 == 1) w *= q;
            if (k.alpha2 == 1) w *= d;
            if (k.alpha3 == 1) {
              w *= std::exp(static_cast<double>(vertex_of(slot) - base_) /
                            decay_scale_);
            }
            return w;
          } else {
            const auto age = static_cast<double>(step_ - vertex_of(slot));
            return d * std::pow(age + 1.0, -k.exponent);
          }
        },
        kind_);
  }

  // Drops slots [0, count) and rebuilds the tree from exact keys.
  void compact(std::size_t count) {
    key_.erase(key_.begin(), key_.begin() + static_cast<std::ptrdiff_t>(count));
    quality_.erase(quality_.begin(),
                   quality_.begin() + static_cast<std::ptrdiff_t>(count));
    degree_.erase(degree_.begin(),
                  degree_.begin() + static_cast<std::ptrdiff_t>(count));
    first_vertex_ += static_cast<Vertex>(count);
    live_ -= count;
    tree_.assign(key_);
  }

  // Moves the decay base to the current step, recomputing every key and
  // dropping the leading run of entries that fell below the truncation cutoff.
  void rebase() {
    base_ = step_;
    double sum = 0.0;
    for (std::size_t s = live_; s < key_.size(); ++s) {
      key_[s] = key_for(s);
      sum += key_[s];
    }
    const double cutoff = options_.truncation_epsilon * sum;
    std::size_t drop = live_;
    for (std::size_t s = live_; s < key_.size(); ++s) {
      if (key_[s] < cutoff || key_[s] == 0.0) key_[s] = 0.0;
    }
    while (drop + 1 < key_.size() && key_[drop] == 0.0) ++drop;
    live_ = drop;
    compact(live_);
  }

  void refresh_dense() {
    key_.resize(quality_.size());
    for (std::size_t s = 0; s < key_.size(); ++s) key_[s] = key_for(s);
    tree_.assign(key_);
  }

  std::size_t nearest_nonzero(std::size_t slot) const {
    for (std::size_t s = slot; s < key_.size(); ++s) {
      if (key_[s] > 0.0) return s;
    }
    for (std::size_t s = slot; s-- > live_;) {
      if (key_[s] > 0.0) return s;
    }
    throw InvalidArgument("sample: all weights are zero");
  }

  AttractivenessKind kind_;
  IndexOptions options_;
  std::int64_t window_ = 0;
  double decay_scale_ = 0.0;
  bool dense_ = false;

  std::int64_t step_ = 0;
  std::int64_t base_ = 0;
  Vertex first_vertex_ = 1;
  std::size_t live_ = 0;
  std::vector<double> key_;
  std::vector<double> quality_;
  std::vector<std::int64_t> degree_;
  PrefixSumTree tree_;
};

}  // namespace recnet
