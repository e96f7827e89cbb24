#pragma once

#include "dd/Package.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace viz {

struct StyleOptions {
  enum class Mode : std::uint8_t { Classic, Colored };
  Mode mode = Mode::Classic;
  bool showWeights = true;
  bool retractZeroStubs = true;
  /// Colored mode only: draw nodes as rounded boxes instead of circles.
  bool modernNodes = false;

  static StyleOptions classic() { return {}; }
  static StyleOptions colored() { return {Mode::Colored, false, true, false}; }
};

/// HLS colour of a phase: hue = arg(w)/2pi * 360 degrees (0 = red),
/// saturation 0.7, lightness 0.5. Returned as "#rrggbb".
std::string phaseColor(std::complex<double> w);
/// Pen width for an edge weight magnitude (linear, at least 0.5).
double penWidth(double magnitude);
/// 4 significant digits, "a+bi" form for complex values.
std::string formatWeight(std::complex<double> w);

std::string toDot(const dd::VectorDD& v, const StyleOptions& style = {});
std::string toDot(const dd::MatrixDD& m, const StyleOptions& style = {});

/// Flat, engine-independent copy of a decision diagram. Zero edges are not
/// listed; a missing slot means a zero successor. Edges into the terminal
/// have no `to`.
struct DDSnapshot {
  struct Node {
    std::uint64_t id = 0;
    std::int32_t level = 0;
    std::string label;
  };
  struct Edge {
    std::uint64_t from = 0;
    std::optional<std::uint64_t> to;
    std::uint32_t slot = 0;
    std::complex<double> weight;
  };
  std::string kind;
  std::size_t numQubits = 0;
  /// Top node, or nullopt if the root edge points at the terminal.
  std::optional<std::uint64_t> root;
  std::complex<double> rootWeight;
  /// Breadth-first from the root, successors in slot order.
  std::vector<Node> nodes;
  std::vector<Edge> edges;
};

DDSnapshot toSnapshot(const dd::VectorDD& v);
DDSnapshot toSnapshot(const dd::MatrixDD& m);

nlohmann::ordered_json toJson(const DDSnapshot& s);
DDSnapshot snapshotFromJson(const nlohmann::json& j);

} // namespace viz
