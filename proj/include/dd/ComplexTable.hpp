#pragma once

#include "dd/Definitions.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <deque>
#include <limits>
#include <unordered_map>
#include <vector>

namespace dd {

/// A stored real number. Entries live in a deque so their addresses stay
/// stable until they are swept.
struct RealEntry {
  fp value;
  std::uint32_t ref;
};

inline constexpr std::uint32_t IMMORTAL = std::numeric_limits<std::uint32_t>::max();

/// Handle to an interned complex number. Two handles are equal iff they point
/// to the same pair of stored components.
struct ComplexRef {
  const RealEntry* r = nullptr;
  const RealEntry* i = nullptr;

  [[nodiscard]] ComplexValue value() const { return {r->value, i->value}; }
  [[nodiscard]] fp real() const { return r->value; }
  [[nodiscard]] fp imag() const { return i->value; }

  friend bool operator==(const ComplexRef&, const ComplexRef&) = default;
};

/// Tolerance-bucketed table of real numbers. A lookup returns an existing
/// entry if one lies strictly within the tolerance, otherwise it inserts.
class RealTable {
public:
  explicit RealTable(fp tolerance);

  RealTable(const RealTable&) = delete;
  RealTable& operator=(const RealTable&) = delete;

  const RealEntry* lookup(fp value);

  [[nodiscard]] const RealEntry* zero() const { return zero_; }
  [[nodiscard]] const RealEntry* one() const { return one_; }

  static void incRef(const RealEntry* entry);
  static void decRef(const RealEntry* entry);

  /// Removes all entries whose reference count dropped to zero.
  std::size_t garbageCollect();

  [[nodiscard]] std::size_t size() const { return live_; }
  [[nodiscard]] fp tolerance() const { return tolerance_; }

private:
  /// Buckets are 2 * tolerance wide, so a lookup inspects at most two.
  [[nodiscard]] fp bucketOf(fp value) const { return std::floor(value / (2 * tolerance_)); }
  RealEntry* insert(fp value, std::uint32_t ref);

  fp tolerance_;
  std::deque<RealEntry> pool_;
  std::vector<RealEntry*> free_;
  std::unordered_map<fp, std::vector<RealEntry*>> buckets_;
  std::size_t live_ = 0;
  const RealEntry* zero_;
  const RealEntry* one_;
};

/// Interns complex numbers as pairs of real-table entries.
class ComplexTable {
public:
  explicit ComplexTable(fp tolerance) : reals_(tolerance) {}

  /// Throws std::invalid_argument for non-finite input.
  ComplexRef lookup(fp re, fp im);
  ComplexRef lookup(const ComplexValue& c) { return lookup(c.real(), c.imag()); }

  [[nodiscard]] ComplexRef zero() const { return {reals_.zero(), reals_.zero()}; }
  [[nodiscard]] ComplexRef one() const { return {reals_.one(), reals_.zero()}; }

  static void incRef(const ComplexRef& c) {
    RealTable::incRef(c.r);
    RealTable::incRef(c.i);
  }
  static void decRef(const ComplexRef& c) {
    RealTable::decRef(c.r);
    RealTable::decRef(c.i);
  }

  std::size_t garbageCollect() { return reals_.garbageCollect(); }
  [[nodiscard]] std::size_t size() const { return reals_.size(); }
  [[nodiscard]] fp tolerance() const { return reals_.tolerance(); }

  [[nodiscard]] bool approximatelyZero(const ComplexValue& c) const {
    return std::abs(c.real()) < tolerance() && std::abs(c.imag()) < tolerance();
  }

private:
  RealTable reals_;
};

} // namespace dd

template <> struct std::hash<dd::ComplexRef> {
  std::size_t operator()(const dd::ComplexRef& c) const noexcept {
    const auto a = reinterpret_cast<std::uintptr_t>(c.r);
    const auto b = reinterpret_cast<std::uintptr_t>(c.i);
    return a * 0x9E3779B97F4A7C15ULL ^ (b + 0x7F4A7C159E3779B9ULL + (a << 6U) + (a >> 2U));
  }
};
