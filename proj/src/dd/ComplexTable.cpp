#include "dd/ComplexTable.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dd {

RealTable::RealTable(const fp tolerance) : tolerance_(tolerance) {
  if (!(tolerance > 0.) || !std::isfinite(tolerance)) {
    throw std::invalid_argument("tolerance must be positive and finite");
  }
  zero_ = insert(0., IMMORTAL);
  one_ = insert(1., IMMORTAL);
}

RealEntry* RealTable::insert(const fp value, const std::uint32_t ref) {
  RealEntry* e = nullptr;
  if (free_.empty()) {
    e = &pool_.emplace_back(RealEntry{value, ref});
  } else {
    e = free_.back();
    free_.pop_back();
    *e = RealEntry{value, ref};
  }
  buckets_[bucketOf(value)].push_back(e);
  ++live_;
  return e;
}

const RealEntry* RealTable::lookup(const fp value) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("cannot intern non-finite value " + std::to_string(value));
  }
  if (std::abs(value) < tolerance_) {
    return zero_;
  }

  // candidates lie in (value - tol, value + tol); pick the closest one
  const fp home = bucketOf(value);
  const fp other = bucketOf(value - tolerance_) == home ? bucketOf(value + tolerance_) : home - 1;
  const RealEntry* best = nullptr;
  fp bestDist = tolerance_;
  for (const fp b : {home, other}) {
    const auto it = buckets_.find(b);
    if (it == buckets_.end()) {
      continue;
    }
    for (const auto* e : it->second) {
      const fp dist = std::abs(e->value - value);
      if (dist < bestDist || (dist == bestDist && best != nullptr && e->value < best->value)) {
        bestDist = dist;
        best = e;
      }
    }
  }
  if (best != nullptr) {
    return best;
  }
  return insert(value, 0U);
}

void RealTable::incRef(const RealEntry* entry) {
  auto* e = const_cast<RealEntry*>(entry);
  if (e->ref != IMMORTAL) {
    ++e->ref;
  }
}

void RealTable::decRef(const RealEntry* entry) {
  auto* e = const_cast<RealEntry*>(entry);
  if (e->ref == IMMORTAL) {
    return;
  }
  if (e->ref == 0U) {
    throw std::logic_error("reference count underflow in real table");
  }
  --e->ref;
}

std::size_t RealTable::garbageCollect() {
  std::size_t collected = 0;
  for (auto it = buckets_.begin(); it != buckets_.end();) {
    auto& entries = it->second;
    std::erase_if(entries, [&](RealEntry* e) {
      if (e->ref != 0U) {
        return false;
      }
      free_.push_back(e);
      ++collected;
      return true;
    });
    it = entries.empty() ? buckets_.erase(it) : std::next(it);
  }
  live_ -= collected;
  return collected;
}

ComplexRef ComplexTable::lookup(const fp re, const fp im) {
  return {reals_.lookup(re), reals_.lookup(im)};
}

} // namespace dd
