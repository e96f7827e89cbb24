#include "qc/Qasm.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace qc {

QasmError::QasmError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message), line_(line),
      column_(column), message_(message) {}

namespace {

constexpr std::uint64_t MAX_REGISTER_BITS = std::uint64_t{1} << 16U;

enum class Tok : std::uint8_t { Ident, Int, Real, String, Symbol, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.;
  std::uint64_t integer = 0;
  std::size_t line = 1;
  std::size_t col = 1;
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skipSpaceAndComments();
      Token t;
      t.line = line_;
      t.col = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_') {
        t.kind = Tok::Ident;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) != 0 || src_[pos_] == '_')) {
          t.text += advance();
        }
      } else if (std::isdigit(static_cast<unsigned char>(c)) != 0 ||
                 (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])) != 0)) {
        lexNumber(t);
      } else if (c == '"') {
        t.kind = Tok::String;
        advance();
        while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') {
          t.text += advance();
        }
        if (pos_ >= src_.size() || src_[pos_] != '"') {
          throw QasmError(t.line, t.col, "unterminated string");
        }
        advance();
      } else {
        t.kind = Tok::Symbol;
        const auto two = src_.substr(pos_, 2);
        if (two == "->" || two == "==") {
          t.text = std::string(two);
          advance();
          advance();
        } else if (std::string_view(";,[](){}+-*/^").find(c) != std::string_view::npos) {
          t.text = std::string(1, advance());
        } else {
          throw QasmError(t.line, t.col, std::string("unexpected character '") + c + "'");
        }
      }
      out.push_back(std::move(t));
    }
  }

private:
  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skipSpaceAndComments() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) != 0) {
        advance();
      } else if (src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') {
          advance();
        }
      } else if (src_.substr(pos_, 2) == "/*") {
        const auto line = line_;
        const auto col = col_;
        advance();
        advance();
        while (pos_ < src_.size() && src_.substr(pos_, 2) != "*/") {
          advance();
        }
        if (pos_ >= src_.size()) {
          throw QasmError(line, col, "unterminated comment");
        }
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  void lexNumber(Token& t) {
    const auto start = pos_;
    bool isReal = false;
    const auto digits = [this] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])) != 0) {
        advance();
      }
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      isReal = true;
      advance();
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      const auto save = std::tuple{pos_, line_, col_};
      advance();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
        advance();
      }
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])) != 0) {
        isReal = true;
        digits();
      } else {
        std::tie(pos_, line_, col_) = save;
      }
    }
    t.text = std::string(src_.substr(start, pos_ - start));
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    if (isReal) {
      t.kind = Tok::Real;
      const auto res = std::from_chars(first, last, t.number);
      if (res.ec != std::errc{} || !std::isfinite(t.number)) {
        throw QasmError(t.line, t.col, "number out of range");
      }
    } else {
      t.kind = Tok::Int;
      const auto res = std::from_chars(first, last, t.integer);
      if (res.ec != std::errc{}) {
        throw QasmError(t.line, t.col, "integer literal too large");
      }
      t.number = static_cast<double>(t.integer);
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

struct GateName {
  OpType type;
  std::size_t controls;
};

std::optional<GateName> resolveGate(std::string_view name) {
  static const std::unordered_map<std::string_view, OpType> base{
      {"id", OpType::I},  {"x", OpType::X},     {"y", OpType::Y},     {"z", OpType::Z},   {"h", OpType::H},
      {"s", OpType::S},   {"sdg", OpType::Sdg}, {"t", OpType::T},     {"tdg", OpType::Tdg}, {"p", OpType::P},
      {"u1", OpType::P},  {"rx", OpType::RX},   {"ry", OpType::RY},   {"rz", OpType::RZ}, {"u2", OpType::U2},
      {"u3", OpType::U3}, {"u", OpType::U3},    {"swap", OpType::SWAP}};
  if (name == "U") {
    return GateName{OpType::U3, 0};
  }
  if (name == "CX") {
    return GateName{OpType::X, 1};
  }
  for (std::size_t k = 0; k < name.size(); ++k) {
    if (k > 0 && name[k - 1] != 'c') {
      break;
    }
    if (const auto it = base.find(name.substr(k)); it != base.end()) {
      return GateName{it->second, k};
    }
  }
  return std::nullopt;
}

struct Argument {
  std::vector<Qubit> bits;
  bool wholeRegister = false;
  const Token* where = nullptr;
};

class Parser {
public:
  Parser(std::vector<Token> tokens, std::string name) : toks_(std::move(tokens)) { circ_.name = std::move(name); }

  QuantumCircuit run() {
    if (peekIdent("OPENQASM")) {
      next();
      const auto& v = next();
      if (v.kind != Tok::Real && v.kind != Tok::Int) {
        fail(v, "expected version number");
      }
      if (std::floor(v.number) != 2.) {
        fail(v, "only OpenQASM 2 is supported");
      }
      expect(";");
    }
    while (peek().kind != Tok::End) {
      statement();
    }
    return std::move(circ_);
  }

private:
  [[noreturn]] static void fail(const Token& t, const std::string& msg) { throw QasmError(t.line, t.col, msg); }

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& next() {
    const auto& t = peek();
    if (pos_ < toks_.size() - 1) {
      ++pos_;
    }
    return t;
  }
  bool peekSymbol(std::string_view s) const { return peek().kind == Tok::Symbol && peek().text == s; }
  bool peekIdent(std::string_view s) const { return peek().kind == Tok::Ident && peek().text == s; }

  const Token& expect(std::string_view symbol) {
    if (!peekSymbol(symbol)) {
      fail(peek(), "expected '" + std::string(symbol) + "'" + describe(peek()));
    }
    return next();
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::End) {
      return " but reached end of input";
    }
    return " but found '" + t.text + "'";
  }

  const Token& expectIdent() {
    if (peek().kind != Tok::Ident) {
      fail(peek(), "expected identifier" + describe(peek()));
    }
    return next();
  }

  std::uint64_t expectInt() {
    if (peek().kind != Tok::Int) {
      fail(peek(), "expected integer" + describe(peek()));
    }
    return next().integer;
  }

  void statement() {
    const auto& head = peek();
    if (head.kind != Tok::Ident) {
      fail(head, "expected statement" + describe(head));
    }
    const auto& kw = head.text;
    if (kw == "include") {
      next();
      if (peek().kind != Tok::String) {
        fail(peek(), "expected file name" + describe(peek()));
      }
      next();
      expect(";");
    } else if (kw == "qreg" || kw == "creg") {
      next();
      declareRegister(kw == "qreg");
    } else if (kw == "gate" || kw == "opaque") {
      fail(head, "custom gate definitions ('" + kw + "') are not supported");
    } else if (kw == "barrier") {
      next();
      barrier(head);
    } else if (kw == "measure") {
      next();
      measure(head);
    } else if (kw == "reset") {
      next();
      reset(head);
    } else if (kw == "if") {
      next();
      conditional();
    } else {
      gateCall(std::nullopt);
    }
  }

  void declareRegister(bool quantum) {
    const auto& nameTok = expectIdent();
    if (qregs_.contains(nameTok.text) || cregs_.contains(nameTok.text)) {
      fail(nameTok, "register '" + nameTok.text + "' already declared");
    }
    expect("[");
    const auto& sizeTok = peek();
    const auto size = expectInt();
    if (size == 0) {
      fail(sizeTok, "register size must be positive");
    }
    if (size > MAX_REGISTER_BITS || (quantum ? circ_.numQubits() : circ_.numClbits()) + size > MAX_REGISTER_BITS) {
      fail(sizeTok, "register too large");
    }
    expect("]");
    expect(";");
    if (quantum) {
      qregs_[nameTok.text] = circ_.addQubitRegister(nameTok.text, size);
    } else {
      cregs_[nameTok.text] = circ_.addClassicalRegister(nameTok.text, size);
    }
  }

  Argument argument(bool quantum) {
    const auto& nameTok = expectIdent();
    auto& regs = quantum ? qregs_ : cregs_;
    const auto it = regs.find(nameTok.text);
    if (it == regs.end()) {
      fail(nameTok, std::string("unknown ") + (quantum ? "quantum" : "classical") + " register '" + nameTok.text +
                        "'");
    }
    Argument arg;
    arg.where = &nameTok;
    const auto& reg = it->second;
    if (peekSymbol("[")) {
      next();
      const auto& idxTok = peek();
      const auto idx = expectInt();
      if (idx >= reg.size) {
        fail(idxTok, "index " + std::to_string(idx) + " out of range for register '" + reg.name + "' of size " +
                         std::to_string(reg.size));
      }
      expect("]");
      arg.bits.push_back(static_cast<Qubit>(reg.start + idx));
    } else {
      arg.wholeRegister = true;
      for (std::size_t i = 0; i < reg.size; ++i) {
        arg.bits.push_back(static_cast<Qubit>(reg.start + i));
      }
    }
    return arg;
  }

  std::vector<Argument> argumentList() {
    std::vector<Argument> args{argument(true)};
    while (peekSymbol(",")) {
      next();
      args.push_back(argument(true));
    }
    return args;
  }

  /// Number of instances a broadcast statement expands to.
  static std::size_t broadcastWidth(const std::vector<Argument>& args, const Token& at) {
    std::size_t width = 1;
    bool seen = false;
    for (const auto& a : args) {
      if (!a.wholeRegister) {
        continue;
      }
      if (seen && a.bits.size() != width) {
        fail(at, "register arguments have different sizes");
      }
      width = a.bits.size();
      seen = true;
    }
    return width;
  }

  void append(Operation op, const Token& at) {
    try {
      circ_.append(std::move(op));
    } catch (const CircuitError& e) {
      fail(at, e.what());
    }
  }

  void barrier(const Token& head) {
    Operation op;
    op.type = OpType::Barrier;
    std::unordered_set<Qubit> seen;
    for (const auto& a : argumentList()) {
      for (const auto q : a.bits) {
        if (seen.insert(q).second) {
          op.targets.push_back(q);
        }
      }
    }
    expect(";");
    append(std::move(op), head);
  }

  void measure(const Token& head) {
    const auto q = argument(true);
    expect("->");
    const auto c = argument(false);
    expect(";");
    if (q.bits.size() != c.bits.size()) {
      fail(head, "measure operands have different sizes");
    }
    for (std::size_t i = 0; i < q.bits.size(); ++i) {
      Operation op;
      op.type = OpType::Measure;
      op.targets = {q.bits[i]};
      op.clbits = {static_cast<Clbit>(c.bits[i])};
      append(std::move(op), head);
    }
  }

  void reset(const Token& head) {
    const auto q = argument(true);
    expect(";");
    for (const auto b : q.bits) {
      Operation op;
      op.type = OpType::Reset;
      op.targets = {b};
      append(std::move(op), head);
    }
  }

  void conditional() {
    expect("(");
    const auto& regTok = expectIdent();
    const auto it = cregs_.find(regTok.text);
    if (it == cregs_.end()) {
      fail(regTok, "unknown classical register '" + regTok.text + "'");
    }
    expect("==");
    const auto& valTok = peek();
    const auto value = expectInt();
    expect(")");
    const auto& reg = it->second;
    if (reg.size < 64 && value >> reg.size != 0) {
      fail(valTok, "value does not fit register '" + reg.name + "'");
    }
    if (peekIdent("measure") || peekIdent("reset") || peekIdent("barrier") || peekIdent("if")) {
      fail(peek(), "only gates may be classically controlled");
    }
    gateCall(ClassicalCondition{reg.start, reg.size, value});
  }

  void gateCall(std::optional<ClassicalCondition> condition) {
    const auto& nameTok = expectIdent();
    const auto gate = resolveGate(nameTok.text);
    if (!gate) {
      fail(nameTok, "unknown gate '" + nameTok.text + "'");
    }
    std::vector<double> params;
    if (peekSymbol("(")) {
      next();
      if (!peekSymbol(")")) {
        params.push_back(expression());
        while (peekSymbol(",")) {
          next();
          params.push_back(expression());
        }
      }
      expect(")");
    }
    if (params.size() != numParams(gate->type)) {
      fail(nameTok, "gate '" + nameTok.text + "' expects " + std::to_string(numParams(gate->type)) +
                        " parameter(s), got " + std::to_string(params.size()));
    }
    const auto args = argumentList();
    expect(";");
    const auto arity = gate->controls + numTargets(gate->type);
    if (args.size() != arity) {
      fail(nameTok, "gate '" + nameTok.text + "' expects " + std::to_string(arity) + " qubit argument(s), got " +
                        std::to_string(args.size()));
    }
    const auto width = broadcastWidth(args, nameTok);
    for (std::size_t i = 0; i < width; ++i) {
      Operation op;
      op.type = gate->type;
      op.params = params;
      op.condition = condition;
      for (std::size_t a = 0; a < args.size(); ++a) {
        const auto q = args[a].wholeRegister ? args[a].bits[i] : args[a].bits[0];
        (a < gate->controls ? op.controls : op.targets).push_back(q);
      }
      append(std::move(op), nameTok);
    }
  }

  // expression := term (('+' | '-') term)*
  double expression() {
    double v = term();
    while (peekSymbol("+") || peekSymbol("-")) {
      const bool plus = next().text == "+";
      const double rhs = term();
      v = plus ? v + rhs : v - rhs;
    }
    return v;
  }

  double term() {
    double v = unary();
    while (peekSymbol("*") || peekSymbol("/")) {
      const auto& op = next();
      const double rhs = unary();
      if (op.text == "/" && rhs == 0.) {
        fail(op, "division by zero");
      }
      v = op.text == "*" ? v * rhs : v / rhs;
    }
    return v;
  }

  double unary() {
    if (peekSymbol("-")) {
      next();
      return -unary();
    }
    if (peekSymbol("+")) {
      next();
      return unary();
    }
    return power();
  }

  double power() {
    const auto& at = peek();
    const double base = primary();
    if (peekSymbol("^")) {
      next();
      const double v = std::pow(base, unary());
      if (!std::isfinite(v)) {
        fail(at, "expression is not finite");
      }
      return v;
    }
    return base;
  }

  double primary() {
    const auto& t = next();
    if (t.kind == Tok::Int || t.kind == Tok::Real) {
      return t.number;
    }
    if (t.kind == Tok::Symbol && t.text == "(") {
      const double v = expression();
      expect(")");
      return v;
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "pi") {
        return std::numbers::pi;
      }
      static const std::unordered_map<std::string_view, double (*)(double)> fns{
          {"sin", [](double x) { return std::sin(x); }},  {"cos", [](double x) { return std::cos(x); }},
          {"tan", [](double x) { return std::tan(x); }},  {"exp", [](double x) { return std::exp(x); }},
          {"ln", [](double x) { return std::log(x); }},   {"sqrt", [](double x) { return std::sqrt(x); }}};
      if (const auto it = fns.find(t.text); it != fns.end()) {
        expect("(");
        const double arg = expression();
        expect(")");
        const double v = it->second(arg);
        if (!std::isfinite(v)) {
          fail(t, t.text + " of " + std::to_string(arg) + " is not finite");
        }
        return v;
      }
      fail(t, "unknown identifier '" + t.text + "' in expression");
    }
    fail(t, "expected expression" + describe(t));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  QuantumCircuit circ_;
  std::unordered_map<std::string, Register> qregs_;
  std::unordered_map<std::string, Register> cregs_;
};

std::string formatAngle(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

std::string bitName(const std::vector<Register>& regs, std::size_t index) {
  for (const auto& r : regs) {
    if (index >= r.start && index < r.start + r.size) {
      return r.name + "[" + std::to_string(index - r.start) + "]";
    }
  }
  throw std::logic_error("bit " + std::to_string(index) + " belongs to no register");
}

} // namespace

QuantumCircuit parseQasm(std::string_view text, std::string name) {
  return Parser(Lexer(text).run(), std::move(name)).run();
}

QuantumCircuit parseQasmFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parseQasm(ss.str(), path.stem().string());
}

std::string emitQasm(const QuantumCircuit& c) {
  std::ostringstream out;
  out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  for (const auto& r : c.qregs()) {
    out << "qreg " << r.name << "[" << r.size << "];\n";
  }
  for (const auto& r : c.cregs()) {
    out << "creg " << r.name << "[" << r.size << "];\n";
  }
  const auto qubit = [&c](Qubit q) { return bitName(c.qregs(), static_cast<std::size_t>(q)); };
  for (const auto& op : c) {
    switch (op.type) {
    case OpType::Barrier: {
      if (op.targets.empty()) {
        continue;
      }
      out << "barrier ";
      for (std::size_t i = 0; i < op.targets.size(); ++i) {
        out << (i > 0 ? "," : "") << qubit(op.targets[i]);
      }
      out << ";\n";
      continue;
    }
    case OpType::Measure:
      out << "measure " << qubit(op.targets[0]) << " -> " << bitName(c.cregs(), op.clbits[0]) << ";\n";
      continue;
    case OpType::Reset:
      out << "reset " << qubit(op.targets[0]) << ";\n";
      continue;
    default:
      break;
    }
    if (op.condition) {
      const auto& cond = *op.condition;
      const auto reg = std::find_if(c.cregs().begin(), c.cregs().end(), [&cond](const Register& r) {
        return r.start == cond.start && r.size == cond.width;
      });
      if (reg == c.cregs().end()) {
        throw std::logic_error("classical condition does not match a declared register");
      }
      out << "if(" << reg->name << "==" << cond.value << ") ";
    }
    out << std::string(op.controls.size(), 'c') << toString(op.type);
    if (!op.params.empty()) {
      out << "(";
      for (std::size_t i = 0; i < op.params.size(); ++i) {
        out << (i > 0 ? "," : "") << formatAngle(op.params[i]);
      }
      out << ")";
    }
    out << " ";
    bool first = true;
    for (const auto q : op.controls) {
      out << (first ? "" : ",") << qubit(q);
      first = false;
    }
    for (const auto q : op.targets) {
      out << (first ? "" : ",") << qubit(q);
      first = false;
    }
    out << ";\n";
  }
  return out.str();
}

} // namespace qc
