#include "ropt/cache.hpp"

#include <algorithm>

#include "ropt/errors.hpp"

namespace ropt {

CacheStore::CacheStore(bool enabled, std::size_t capacity)
    : enabled_(enabled), capacity_(capacity) {
  if (capacity_ == 0) throw ArgumentError("CacheStore: capacity must be >= 1");
}

CacheEntry* CacheStore::lookup(PointKey key) {
  if (!enabled_ || key == kTransientKey) return nullptr;
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [key](const auto& e) { return e.first == key; });
  if (it != entries_.end()) {
    if (std::next(it) != entries_.end()) {
      auto moved = std::move(*it);
      entries_.erase(it);
      entries_.push_back(std::move(moved));
    }
    return &entries_.back().second;
  }
  entries_.emplace_back(key, CacheEntry{});
  while (entries_.size() > capacity_) entries_.pop_front();
  return &entries_.back().second;
}

void CacheStore::discard(PointKey key) {
  std::erase_if(entries_, [key](const auto& e) { return e.first == key; });
}

bool CacheStore::holds(PointKey key) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [key](const auto& e) { return e.first == key; });
}

bool CacheStore::note_once(const std::string& message) {
  if (std::find(notes_.begin(), notes_.end(), message) != notes_.end()) {
    return false;
  }
  notes_.push_back(message);
  return true;
}

}  // namespace ropt
