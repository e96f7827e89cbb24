#pragma once

#include "dd/Definitions.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>

namespace dd {

/// Runtime knobs of a decision diagram package. The floating point width is
/// fixed at build time via `dd::fp`.
struct EngineConfig {
  fp tolerance = DEFAULT_TOLERANCE;
  /// Buckets per qubit level in the unique tables.
  std::size_t uniqueTableBuckets = std::size_t{1} << 12U;
  /// Slots per operation kind in the compute tables.
  std::size_t computeTableEntries = std::size_t{1} << 14U;
  /// Live nodes in a unique table before a collection is attempted.
  std::size_t gcThreshold = std::size_t{1} << 17U;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument if an invariant is broken.
  void validate() const;

  /// Parses `key = value` lines. `#` starts a comment. Unknown keys throw.
  static EngineConfig parse(std::istream& in, EngineConfig base);
  static EngineConfig parse(std::istream& in);
  static EngineConfig fromFile(const std::filesystem::path& path, EngineConfig base);
  static EngineConfig fromFile(const std::filesystem::path& path);

  /// Applies QDD_TOLERANCE, QDD_UNIQUE_BUCKETS, QDD_COMPUTE_ENTRIES,
  /// QDD_GC_THRESHOLD and QDD_SEED if set.
  EngineConfig withEnvironment() const;

  void set(const std::string& key, const std::string& value);
};

} // namespace dd
