#pragma once

#include <any>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ropt/element.hpp"

namespace ropt {

/// Identity of a point as issued by a solver. Values are never reused within
/// a store.
using PointKey = std::uint64_t;

/// Key for one-off evaluations that must not be cached (finite-difference
/// probes, diagnostics).
inline constexpr PointKey kTransientKey = 0;

/// Per-point storage shared between the cost and its derivatives.
///
/// The system slots (cost, gradients) are filled by the evaluation functions
/// in problem.hpp. User slots hold arbitrary intermediate results keyed by
/// name, e.g. a matrix product needed by both cost and gradient.
class CacheEntry {
 public:
  template <class T, class F>
  const T& get_or_compute(const std::string& key, F&& compute) {
    auto it = user_.find(key);
    if (it == user_.end()) {
      it = user_.emplace(key, std::any(T(compute()))).first;
    }
    return std::any_cast<const T&>(it->second);
  }

  template <class T>
  const T* find(const std::string& key) const {
    auto it = user_.find(key);
    return it == user_.end() ? nullptr : std::any_cast<T>(&it->second);
  }

  template <class T>
  void put(const std::string& key, T value) {
    user_[key] = std::move(value);
  }

  bool contains(const std::string& key) const { return user_.count(key) > 0; }

  std::optional<double> cost;
  std::optional<Tangent> gradient;
  std::optional<Ambient> euclidean_gradient;

 private:
  std::map<std::string, std::any> user_;
};

struct EvalCounters {
  std::size_t cost_evals = 0;
  std::size_t grad_evals = 0;
  std::size_t hess_evals = 0;
};

/// Cache for one solver run: entries for at most `capacity` most recently
/// used point keys, plus evaluation counters.
///
/// With caching disabled, keys are still issued and counters still run, but
/// nothing is retained, so every query recomputes.
class CacheStore {
 public:
  explicit CacheStore(bool enabled = true, std::size_t capacity = 2);

  PointKey new_key() { return next_key_++; }

  /// Entry for key, created on first use and marked most recent; nullptr for
  /// kTransientKey or when caching is disabled.
  CacheEntry* lookup(PointKey key);

  /// Drops the entry for key, if any.
  void discard(PointKey key);

  bool enabled() const { return enabled_; }
  std::size_t size() const { return entries_.size(); }
  bool holds(PointKey key) const;

  const EvalCounters& counters() const { return counters_; }
  EvalCounters& counters() { return counters_; }

  /// Records a message once per store; returns true the first time.
  bool note_once(const std::string& message);
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  bool enabled_;
  std::size_t capacity_;
  PointKey next_key_ = 1;
  std::deque<std::pair<PointKey, CacheEntry>> entries_;  // most recent last
  EvalCounters counters_;
  std::vector<std::string> notes_;
};

}  // namespace ropt
