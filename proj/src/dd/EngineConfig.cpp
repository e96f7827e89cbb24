#include "dd/EngineConfig.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>

namespace dd {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::size_t parseCount(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  const auto parsed = std::stoull(value, &pos);
  if (pos != value.size()) {
    throw std::invalid_argument("invalid value for " + key + ": " + value);
  }
  return static_cast<std::size_t>(parsed);
}

} // namespace

void EngineConfig::validate() const {
  if (!(tolerance > 0.) || !std::isfinite(tolerance)) {
    throw std::invalid_argument("tolerance must be positive");
  }
  if (!std::has_single_bit(uniqueTableBuckets)) {
    throw std::invalid_argument("uniqueTableBuckets must be a power of two");
  }
  if (!std::has_single_bit(computeTableEntries)) {
    throw std::invalid_argument("computeTableEntries must be a power of two");
  }
}

void EngineConfig::set(const std::string& key, const std::string& value) {
  try {
    if (key == "tolerance") {
      std::size_t pos = 0;
      tolerance = std::stod(value, &pos);
      if (pos != value.size()) {
        throw std::invalid_argument("trailing characters");
      }
    } else if (key == "unique_table_buckets") {
      uniqueTableBuckets = parseCount(key, value);
    } else if (key == "compute_table_entries") {
      computeTableEntries = parseCount(key, value);
    } else if (key == "gc_threshold") {
      gcThreshold = parseCount(key, value);
    } else if (key == "seed") {
      seed = parseCount(key, value);
    } else {
      throw std::invalid_argument("unknown configuration key '" + key + "'");
    }
  } catch (const std::logic_error& e) {
    if (std::string(e.what()).starts_with("unknown configuration key")) {
      throw;
    }
    throw std::invalid_argument("invalid value for " + key + ": '" + value + "'");
  }
}

EngineConfig EngineConfig::parse(std::istream& in, EngineConfig base) {
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("line " + std::to_string(lineNo) + ": expected key = value");
    }
    base.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  base.validate();
  return base;
}

EngineConfig EngineConfig::fromFile(const std::filesystem::path& path, EngineConfig base) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open configuration file " + path.string());
  }
  return parse(in, base);
}

EngineConfig EngineConfig::withEnvironment() const {
  EngineConfig cfg = *this;
  const std::pair<const char*, const char*> vars[] = {
      {"QDD_TOLERANCE", "tolerance"},
      {"QDD_UNIQUE_BUCKETS", "unique_table_buckets"},
      {"QDD_COMPUTE_ENTRIES", "compute_table_entries"},
      {"QDD_GC_THRESHOLD", "gc_threshold"},
      {"QDD_SEED", "seed"},
  };
  for (const auto& [env, key] : vars) {
    if (const char* value = std::getenv(env); value != nullptr) {
      cfg.set(key, value);
    }
  }
  cfg.validate();
  return cfg;
}

EngineConfig EngineConfig::parse(std::istream& in) { return parse(in, EngineConfig{}); }

EngineConfig EngineConfig::fromFile(const std::filesystem::path& path) { return fromFile(path, EngineConfig{}); }

} // namespace dd
