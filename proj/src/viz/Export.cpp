#include "viz/Export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <numbers>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace viz {

namespace {

constexpr double WEIGHT_EPS = 1e-10;

bool isOne(std::complex<double> w) { return std::abs(w - 1.) < WEIGHT_EPS; }

double hueToChannel(double p, double q, double t) {
  if (t < 0) {
    t += 1;
  }
  if (t > 1) {
    t -= 1;
  }
  if (t < 1. / 6) {
    return p + (q - p) * 6 * t;
  }
  if (t < 1. / 2) {
    return q;
  }
  if (t < 2. / 3) {
    return p + (q - p) * (2. / 3 - t) * 6;
  }
  return p;
}

std::string formatNumber(double x) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.4g", x);
  std::string s(buf.data());
  return s == "-0" ? "0" : s;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
    }
    out += c;
  }
  return out + "\"";
}

template <class NodeT> std::string nodeName(const NodeT* n) {
  return n->isTerminal() ? std::string("t") : "n" + std::to_string(n->id);
}

template <class NodeT> std::vector<const NodeT*> collect(const NodeT* root) {
  std::vector<const NodeT*> order;
  if (root->isTerminal()) {
    return order;
  }
  std::unordered_set<const NodeT*> seen{root};
  std::deque<const NodeT*> queue{root};
  while (!queue.empty()) {
    const auto* n = queue.front();
    queue.pop_front();
    order.push_back(n);
    for (const auto& e : n->e) {
      if (!e.node->isTerminal() && e.w.value() != 0. && seen.insert(e.node).second) {
        queue.push_back(e.node);
      }
    }
  }
  return order;
}

template <class NodeT> std::string edgeAttributes(std::complex<double> w, const StyleOptions& style) {
  std::vector<std::string> attrs;
  if (style.mode == StyleOptions::Mode::Classic) {
    if (!isOne(w)) {
      attrs.emplace_back("style=dashed");
    }
  } else {
    attrs.push_back("color=" + quote(phaseColor(w)));
    attrs.push_back("penwidth=" + formatNumber(penWidth(std::abs(w))));
  }
  if (style.showWeights && !isOne(w)) {
    attrs.push_back("label=" + quote(formatWeight(w)));
  }
  if (attrs.empty()) {
    return {};
  }
  std::string out = " [";
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    out += (i > 0 ? ", " : "") + attrs[i];
  }
  return out + "]";
}

template <class NodeT> std::string dot(const dd::Edge<NodeT>& root, const StyleOptions& style) {
  std::ostringstream out;
  const bool colored = style.mode == StyleOptions::Mode::Colored;
  out << "digraph DD {\n";
  out << "  rankdir=TB;\n";
  out << "  node [shape=" << (colored && style.modernNodes ? "box, style=rounded" : "circle")
      << ", fontname=\"Helvetica\"];\n";
  out << "  edge [arrowhead=none];\n";
  out << "  root [shape=point, width=0.05];\n";
  out << "  t [shape=box, label=\"1\"];\n";

  const auto rootW = root.w.value();
  if (rootW == 0.) {
    out << "  root -> t [label=\"0\", style=dashed];\n}\n";
    return out.str();
  }
  const auto nodes = collect(root.node);
  std::map<dd::Qubit, std::vector<const NodeT*>, std::greater<>> levels;
  for (const auto* n : nodes) {
    levels[n->level].push_back(n);
    out << "  " << nodeName(n) << " [label=\"q" << n->level << "\"];\n";
  }
  for (const auto& [level, members] : levels) {
    out << "  { rank=same;";
    for (const auto* n : members) {
      out << " " << nodeName(n) << ";";
    }
    out << " }\n";
  }
  out << "  root -> " << nodeName(root.node) << edgeAttributes<NodeT>(rootW, style) << ";\n";
  std::size_t stub = 0;
  for (const auto* n : nodes) {
    for (std::size_t i = 0; i < n->e.size(); ++i) {
      const auto& e = n->e[i];
      const auto w = e.w.value();
      if (w == 0.) {
        if (!style.retractZeroStubs) {
          const auto name = "z" + std::to_string(stub++);
          out << "  " << name << " [shape=point, width=0.05];\n";
          out << "  " << nodeName(n) << " -> " << name << " [label=\"0\", style=dotted];\n";
        }
        continue;
      }
      out << "  " << nodeName(n) << " -> " << nodeName(e.node) << edgeAttributes<NodeT>(w, style) << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

template <class NodeT> DDSnapshot snapshot(const dd::Edge<NodeT>& root, std::size_t numQubits, std::string kind) {
  DDSnapshot s;
  s.kind = std::move(kind);
  s.numQubits = numQubits;
  s.rootWeight = root.w.value();
  if (!root.node->isTerminal() && s.rootWeight != 0.) {
    s.root = root.node->id;
  }
  if (s.rootWeight == 0.) {
    return s;
  }
  for (const auto* n : collect(root.node)) {
    s.nodes.push_back({n->id, n->level, "q" + std::to_string(n->level)});
    for (std::size_t i = 0; i < n->e.size(); ++i) {
      const auto& e = n->e[i];
      if (e.w.value() == 0.) {
        continue;
      }
      DDSnapshot::Edge edge{n->id, std::nullopt, static_cast<std::uint32_t>(i), e.w.value()};
      if (!e.node->isTerminal()) {
        edge.to = e.node->id;
      }
      s.edges.push_back(edge);
    }
  }
  return s;
}

nlohmann::ordered_json complexJson(std::complex<double> c) { return nlohmann::ordered_json::array({c.real(), c.imag()}); }

std::complex<double> complexFromJson(const nlohmann::json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

} // namespace

std::string phaseColor(std::complex<double> w) {
  double phase = std::arg(w);
  if (phase < 0) {
    phase += 2 * std::numbers::pi;
  }
  const double h = phase / (2 * std::numbers::pi);
  constexpr double l = 0.5;
  constexpr double s = 0.7;
  const double q = l < 0.5 ? l * (1 + s) : l + s - l * s;
  const double p = 2 * l - q;
  const auto channel = [](double v) { return static_cast<int>(std::lround(std::clamp(v, 0., 1.) * 255)); };
  std::array<char, 8> buf{};
  std::snprintf(buf.data(), buf.size(), "#%02x%02x%02x", channel(hueToChannel(p, q, h + 1. / 3)),
                channel(hueToChannel(p, q, h)), channel(hueToChannel(p, q, h - 1. / 3)));
  return buf.data();
}

double penWidth(double magnitude) { return std::max(0.5, 2. * magnitude); }

std::string formatWeight(std::complex<double> w) {
  const bool hasRe = std::abs(w.real()) >= WEIGHT_EPS;
  const bool hasIm = std::abs(w.imag()) >= WEIGHT_EPS;
  if (!hasIm) {
    return formatNumber(hasRe ? w.real() : 0.);
  }
  const auto im = std::abs(w.imag()) == 1. ? std::string{} : formatNumber(std::abs(w.imag()));
  if (!hasRe) {
    return (w.imag() < 0 ? "-" : "") + im + "i";
  }
  return formatNumber(w.real()) + (w.imag() < 0 ? "-" : "+") + im + "i";
}

std::string toDot(const dd::VectorDD& v, const StyleOptions& style) { return dot(v.root, style); }
std::string toDot(const dd::MatrixDD& m, const StyleOptions& style) { return dot(m.root, style); }

DDSnapshot toSnapshot(const dd::VectorDD& v) { return snapshot(v.root, v.numQubits, "vector"); }
DDSnapshot toSnapshot(const dd::MatrixDD& m) { return snapshot(m.root, m.numQubits, "matrix"); }

nlohmann::ordered_json toJson(const DDSnapshot& s) {
  nlohmann::ordered_json j;
  j["kind"] = s.kind;
  j["numQubits"] = s.numQubits;
  j["root"] = s.root ? nlohmann::ordered_json(*s.root) : nlohmann::ordered_json("terminal");
  j["rootWeight"] = complexJson(s.rootWeight);
  auto& nodes = j["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : s.nodes) {
    nodes.push_back({{"id", n.id}, {"level", n.level}, {"label", n.label}});
  }
  auto& edges = j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : s.edges) {
    nlohmann::ordered_json edge;
    edge["from"] = e.from;
    edge["to"] = e.to ? nlohmann::ordered_json(*e.to) : nlohmann::ordered_json("terminal");
    edge["slot"] = e.slot;
    edge["weight"] = complexJson(e.weight);
    edges.push_back(std::move(edge));
  }
  return j;
}

DDSnapshot snapshotFromJson(const nlohmann::json& j) {
  DDSnapshot s;
  s.kind = j.at("kind").get<std::string>();
  s.numQubits = j.at("numQubits").get<std::size_t>();
  if (!j.at("root").is_string()) {
    s.root = j.at("root").get<std::uint64_t>();
  }
  s.rootWeight = complexFromJson(j.at("rootWeight"));
  for (const auto& n : j.at("nodes")) {
    s.nodes.push_back({n.at("id").get<std::uint64_t>(), n.at("level").get<std::int32_t>(),
                       n.at("label").get<std::string>()});
  }
  for (const auto& e : j.at("edges")) {
    DDSnapshot::Edge edge;
    edge.from = e.at("from").get<std::uint64_t>();
    if (!e.at("to").is_string()) {
      edge.to = e.at("to").get<std::uint64_t>();
    }
    edge.slot = e.at("slot").get<std::uint32_t>();
    edge.weight = complexFromJson(e.at("weight"));
    s.edges.push_back(edge);
  }
  return s;
}

} // namespace viz
