#include "gearquest/plan_dsl.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <limits>

namespace gearquest {

namespace {

struct ActionSpec {
  ActionKind kind;
  std::string_view name;
  std::array<std::string_view, 2> params;
  int arity;
};

constexpr std::array<ActionSpec, 8> kActions{{
    {ActionKind::kMove, "move", {"x", "y"}, 2},
    {ActionKind::kGather, "gather", {}, 0},
    {ActionKind::kFight, "fight", {}, 0},
    {ActionKind::kCraft, "craft", {"item_id", "qty"}, 2},
    {ActionKind::kEquip, "equip", {"item_id"}, 1},
    {ActionKind::kUnequip, "unequip", {"slot"}, 1},
    {ActionKind::kRecycle, "recycle", {"item_id", "qty"}, 2},
    {ActionKind::kRest, "rest", {}, 0},
}};

const ActionSpec& spec_of(ActionKind kind) { return kActions[static_cast<std::size_t>(kind)]; }

constexpr std::array<std::string_view, 25> kKeywords{
    "while", "if",     "elif",   "else",  "def",    "import", "from",   "class",    "return",
    "lambda", "try",   "except", "finally", "with", "break",  "continue", "pass",   "global",
    "nonlocal", "async", "await", "yield", "del",   "assert", "raise"};

std::string quote(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\'': out += "\\'"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '\'';
  return out;
}

enum class Tok : std::uint8_t { kName, kInt, kFloat, kString, kOp, kNewline, kIndent, kDedent, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;  // name, operator, decoded string, or digits
  long long value = 0;
  bool overflow = false;
  int line = 1;
  int col = 1;
};

struct ParseFailure {
  Diagnostic diagnostic;
};

[[noreturn]] void fail(int line, int col, std::string_view category, std::string message) {
  throw ParseFailure{Diagnostic{line, col, std::string(category), std::move(message)}};
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    indents_.push_back(0);
    while (pos_ < src_.size()) {
      if (depth_ == 0 && at_line_start_) {
        if (!indentation(out)) continue;
      }
      const char c = src_[pos_];
      if (c == '\n') {
        newline(out);
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
        advance();
        continue;
      }
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        continue;
      }
      if (c == '\\') {
        fail(line_, col_, diag::kSyntax, "line continuation is not supported");
      }
      if (is_name_start(c)) {
        out.push_back(name());
      } else if (is_digit(c)) {
        out.push_back(number());
      } else if (c == '\'' || c == '"') {
        out.push_back(string());
      } else if (static_cast<unsigned char>(c) < 0x80 && c > 0x20 && c != 0x7f) {
        Token t = make(Tok::kOp);
        t.text = std::string(1, c);
        if (c == '(' || c == '[' || c == '{') ++depth_;
        if ((c == ')' || c == ']' || c == '}') && depth_ > 0) --depth_;
        advance();
        out.push_back(std::move(t));
      } else {
        fail(line_, col_, diag::kSyntax, "unexpected character (byte 0x" + hex(c) + ")");
      }
    }
    if (depth_ > 0) fail(line_, col_, diag::kSyntax, "unexpected end of input inside brackets");
    if (!out.empty() && out.back().kind != Tok::kNewline && out.back().kind != Tok::kDedent) {
      out.push_back(make(Tok::kNewline));
    }
    while (indents_.size() > 1) {
      indents_.pop_back();
      out.push_back(make(Tok::kDedent));
    }
    out.push_back(make(Tok::kEnd));
    return out;
  }

 private:
  static bool is_name_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static std::string hex(char c) {
    static constexpr char kDigits[] = "0123456789abcdef";
    const auto u = static_cast<unsigned char>(c);
    return {kDigits[u >> 4], kDigits[u & 15]};
  }

  Token make(Tok kind) const {
    Token t;
    t.kind = kind;
    t.line = line_;
    t.col = col_;
    return t;
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void newline(std::vector<Token>& out) {
    if (depth_ == 0) {
      if (!out.empty() && out.back().kind != Tok::kNewline && out.back().kind != Tok::kIndent &&
          out.back().kind != Tok::kDedent) {
        out.push_back(make(Tok::kNewline));
      }
      at_line_start_ = true;
    }
    advance();
  }

  // Measures leading whitespace; returns false if the line was blank and consumed.
  bool indentation(std::vector<Token>& out) {
    int width = 0;
    std::size_t p = pos_;
    while (p < src_.size() && (src_[p] == ' ' || src_[p] == '\t' || src_[p] == '\f' || src_[p] == '\r')) {
      if (src_[p] == '\t') width = (width / 8 + 1) * 8;
      else if (src_[p] == ' ') ++width;
      ++p;
    }
    if (p == src_.size() || src_[p] == '\n' || src_[p] == '#') {
      while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      if (pos_ < src_.size()) advance();
      return false;
    }
    while (pos_ < p) advance();
    at_line_start_ = false;
    if (width > indents_.back()) {
      indents_.push_back(width);
      out.push_back(make(Tok::kIndent));
    } else {
      while (width < indents_.back()) {
        indents_.pop_back();
        out.push_back(make(Tok::kDedent));
      }
      if (width != indents_.back()) fail(line_, col_, diag::kSyntax, "unindent does not match any outer indentation level");
    }
    return true;
  }

  Token name() {
    Token t = make(Tok::kName);
    while (pos_ < src_.size() && (is_name_start(src_[pos_]) || is_digit(src_[pos_]))) {
      t.text += src_[pos_];
      advance();
    }
    return t;
  }

  Token number() {
    Token t = make(Tok::kInt);
    while (pos_ < src_.size() && (is_digit(src_[pos_]) || is_name_start(src_[pos_]) || src_[pos_] == '.')) {
      t.text += src_[pos_];
      advance();
    }
    const bool digits_only = std::all_of(t.text.begin(), t.text.end(), is_digit);
    if (!digits_only) {
      const bool decimal = std::all_of(t.text.begin(), t.text.end(), [](char c) { return is_digit(c) || c == '.'; }) &&
                           std::count(t.text.begin(), t.text.end(), '.') == 1;
      if (!decimal) fail(t.line, t.col, diag::kSyntax, "invalid numeric literal '" + t.text + "'");
      t.kind = Tok::kFloat;
      return t;
    }
    if (t.text.size() > 1 && t.text[0] == '0') {
      fail(t.line, t.col, diag::kSyntax, "leading zeros in integer literal '" + t.text + "'");
    }
    const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) t.overflow = true;
    return t;
  }

  Token string() {
    Token t = make(Tok::kString);
    const char q = src_[pos_];
    const bool triple = src_.substr(pos_, 3) == std::string(3, q);
    for (int i = 0; i < (triple ? 3 : 1); ++i) advance();
    while (true) {
      if (pos_ >= src_.size()) fail(t.line, t.col, diag::kSyntax, "unterminated string literal");
      const char c = src_[pos_];
      if (triple && src_.substr(pos_, 3) == std::string(3, q)) {
        for (int i = 0; i < 3; ++i) advance();
        break;
      }
      if (!triple && c == q) {
        advance();
        break;
      }
      if (!triple && c == '\n') fail(t.line, t.col, diag::kSyntax, "unterminated string literal");
      if (c == '\\') {
        advance();
        if (pos_ >= src_.size()) fail(t.line, t.col, diag::kSyntax, "unterminated string literal");
        const char e = src_[pos_];
        switch (e) {
          case 'n': t.text += '\n'; break;
          case 't': t.text += '\t'; break;
          case 'r': t.text += '\r'; break;
          case '\\': t.text += '\\'; break;
          case '\'': t.text += '\''; break;
          case '"': t.text += '"'; break;
          case '\n': break;
          default:
            t.text += '\\';
            t.text += e;
        }
        advance();
        continue;
      }
      t.text += c;
      advance();
    }
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  int depth_ = 0;
  bool at_line_start_ = true;
  std::vector<int> indents_;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  PlanProgram program() {
    PlanProgram p;
    while (peek().kind != Tok::kEnd) {
      if (peek().kind == Tok::kIndent) fail_at(peek(), diag::kSyntax, "unexpected indent");
      if (peek().kind == Tok::kNewline || peek().kind == Tok::kDedent) {
        ++i_;
        continue;
      }
      statement(p.statements, 0);
    }
    return p;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(i_ + ahead, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = peek();
    if (i_ < toks_.size() - 1) ++i_;
    return t;
  }

  [[noreturn]] static void fail_at(const Token& t, std::string_view category, std::string message) {
    fail(t.line, t.col, category, std::move(message));
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::kName: return "'" + t.text + "'";
      case Tok::kInt:
      case Tok::kFloat: return "number " + t.text;
      case Tok::kString: return "string literal";
      case Tok::kOp: return "'" + t.text + "'";
      case Tok::kNewline: return "end of line";
      case Tok::kIndent: return "indent";
      case Tok::kDedent: return "dedent";
      case Tok::kEnd: return "end of input";
    }
    return "token";
  }

  bool is_op(const Token& t, char c) const { return t.kind == Tok::kOp && t.text.size() == 1 && t.text[0] == c; }

  void expect_op(char c, std::string_view context) {
    const Token& t = peek();
    if (!is_op(t, c)) {
      fail_at(t, diag::kSyntax, "expected '" + std::string(1, c) + "' " + std::string(context) + ", found " + describe(t));
    }
    next();
  }

  void statement(std::vector<Statement>& out, int depth) {
    const Token& head = peek();
    if (head.kind == Tok::kName && head.text == "for") {
      for_loop(out, depth);
      return;
    }
    simple_statements(out);
    end_of_line();
  }

  void end_of_line() {
    const Token& t = peek();
    if (t.kind == Tok::kNewline) {
      next();
      return;
    }
    if (t.kind == Tok::kEnd || t.kind == Tok::kDedent) return;
    fail_at(t, diag::kSyntax, "unexpected " + describe(t) + " after statement");
  }

  void simple_statements(std::vector<Statement>& out) {
    while (true) {
      out.push_back(call());
      if (!is_op(peek(), ';')) return;
      next();
      const Tok k = peek().kind;
      if (k == Tok::kNewline || k == Tok::kEnd || k == Tok::kDedent) return;
    }
  }

  void for_loop(std::vector<Statement>& out, int depth) {
    const Token& head = next();
    if (depth + 1 > kMaxLoopNesting) {
      fail_at(head, diag::kNesting, "loops may be nested at most " + std::to_string(kMaxLoopNesting) + " deep");
    }
    const Token& var = next();
    if (var.kind != Tok::kName) fail_at(var, diag::kForbiddenConstruct, "loop target must be a single name");
    if (is_op(peek(), ',')) fail_at(peek(), diag::kForbiddenConstruct, "loop target must be a single name");
    const Token& in = next();
    if (in.kind != Tok::kName || in.text != "in") fail_at(in, diag::kSyntax, "expected 'in' in for statement");
    const Token& range = next();
    if (range.kind != Tok::kName || range.text != "range" || !is_op(peek(), '(')) {
      fail_at(range, diag::kForbiddenConstruct, "loops must iterate over range(<positive integer literal>)");
    }
    next();
    const Token& bound = next();
    if (bound.kind != Tok::kInt) {
      fail_at(bound, diag::kForbiddenConstruct, "non-literal loop bound: range() takes one positive integer literal");
    }
    if (!is_op(peek(), ')')) {
      fail_at(peek(), diag::kForbiddenConstruct, "range() takes exactly one positive integer literal");
    }
    next();
    if (bound.overflow || bound.value < 1 || bound.value > std::numeric_limits<int>::max()) {
      fail_at(bound, diag::kForbiddenConstruct, "loop bound must be a positive integer, got " + bound.text);
    }
    expect_op(':', "after for header");

    Statement s;
    s.line = head.line;
    s.col = head.col;
    ForLoop loop;
    loop.count = static_cast<int>(bound.value);
    if (peek().kind == Tok::kNewline) {
      next();
      if (peek().kind != Tok::kIndent) fail_at(peek(), diag::kSyntax, "expected an indented block after for");
      next();
      while (peek().kind != Tok::kDedent && peek().kind != Tok::kEnd) {
        if (peek().kind == Tok::kIndent) fail_at(peek(), diag::kSyntax, "unexpected indent");
        if (peek().kind == Tok::kNewline) {
          next();
          continue;
        }
        statement(loop.body, depth + 1);
      }
      if (peek().kind == Tok::kDedent) next();
    } else {
      if (peek().kind == Tok::kName && peek().text == "for") {
        fail_at(peek(), diag::kSyntax, "a compound statement cannot follow ':' on the same line");
      }
      simple_statements(loop.body);
      end_of_line();
    }
    s.node = std::move(loop);
    out.push_back(std::move(s));
  }

  struct Arg {
    const Token* tok = nullptr;
    bool negative = false;
    std::string keyword;
  };

  Statement call() {
    const Token& name = peek();
    if (name.kind != Tok::kName) {
      if (name.kind == Tok::kString) fail_at(name, diag::kForbiddenConstruct, "bare expression statements are not allowed");
      fail_at(name, diag::kSyntax, "expected an action call, found " + describe(name));
    }
    if (std::find(kKeywords.begin(), kKeywords.end(), name.text) != kKeywords.end()) {
      fail_at(name, diag::kForbiddenConstruct, "'" + name.text + "' is not allowed; only action calls and for loops");
    }
    next();
    const Token& after = peek();
    if (is_op(after, '=') || ((is_op(after, '+') || is_op(after, '-') || is_op(after, '*') || is_op(after, '/')) &&
                              is_op(peek(1), '='))) {
      fail_at(name, diag::kForbiddenConstruct, "variable assignment to '" + name.text + "' is not allowed");
    }
    if (is_op(after, ':')) fail_at(name, diag::kForbiddenConstruct, "variable annotation is not allowed");
    if (is_op(after, '.')) {
      std::string dotted = name.text;
      while (is_op(peek(), '.') && peek(1).kind == Tok::kName) {
        next();
        dotted += "." + next().text;
      }
      fail_at(name, diag::kUnknownAction, "unknown action '" + dotted + "'");
    }
    if (!is_op(after, '(')) {
      fail_at(after, diag::kSyntax, "expected '(' after '" + name.text + "', found " + describe(after));
    }
    const auto kind = action_kind_from_string(name.text);
    if (!kind) fail_at(name, diag::kUnknownAction, "unknown action '" + name.text + "'");
    next();

    std::vector<Arg> args;
    if (!is_op(peek(), ')')) {
      while (true) {
        Arg a;
        if (peek().kind == Tok::kName && is_op(peek(1), '=')) {
          a.keyword = next().text;
          next();
        }
        if (is_op(peek(), '-')) {
          a.negative = true;
          next();
        }
        const Token& v = peek();
        if (v.kind == Tok::kName) {
          fail_at(v, diag::kForbiddenConstruct, "variables are not allowed as arguments ('" + v.text + "')");
        }
        if (v.kind != Tok::kInt && v.kind != Tok::kFloat && v.kind != Tok::kString) {
          fail_at(v, diag::kSyntax, "expected a literal argument, found " + describe(v));
        }
        if (a.negative && v.kind == Tok::kString) fail_at(v, diag::kArity, "cannot negate a string");
        a.tok = &next();
        if (peek().kind == Tok::kOp && !is_op(peek(), ',') && !is_op(peek(), ')')) {
          fail_at(peek(), diag::kForbiddenConstruct, "expressions are not allowed in arguments");
        }
        args.push_back(a);
        if (is_op(peek(), ',')) {
          next();
          if (is_op(peek(), ')')) break;
          continue;
        }
        break;
      }
    }
    expect_op(')', "to close the argument list");
    Statement s;
    s.line = name.line;
    s.col = name.col;
    s.node = build(*kind, name, args);
    return s;
  }

  static Action build(ActionKind kind, const Token& name, std::vector<Arg>& args) {
    const ActionSpec& spec = spec_of(kind);
    std::array<const Arg*, 2> slots{nullptr, nullptr};
    bool seen_keyword = false;
    for (std::size_t i = 0; i < args.size(); ++i) {
      const Arg& a = args[i];
      std::size_t index = i;
      if (!a.keyword.empty()) {
        seen_keyword = true;
        const auto* it = std::find(spec.params.begin(), spec.params.begin() + spec.arity, a.keyword);
        if (it == spec.params.begin() + spec.arity) {
          fail_at(*a.tok, diag::kArity, std::string(spec.name) + "() has no parameter '" + a.keyword + "'");
        }
        index = static_cast<std::size_t>(it - spec.params.begin());
      } else if (seen_keyword) {
        fail_at(*a.tok, diag::kSyntax, "positional argument follows keyword argument");
      }
      if (index >= static_cast<std::size_t>(spec.arity)) {
        fail_at(name, diag::kArity, std::string(spec.name) + "() takes " + std::to_string(spec.arity) +
                                        " argument" + (spec.arity == 1 ? "" : "s") + ", got " +
                                        std::to_string(args.size()));
      }
      if (slots[index] != nullptr) {
        fail_at(*a.tok, diag::kArity, std::string(spec.name) + "() got multiple values for '" +
                                          std::string(spec.params[index]) + "'");
      }
      slots[index] = &a;
    }
    for (int i = 0; i < spec.arity; ++i) {
      if (slots[i] == nullptr) {
        fail_at(name, diag::kArity, std::string(spec.name) + "() takes " + std::to_string(spec.arity) +
                                        " argument" + (spec.arity == 1 ? "" : "s") + ", got " +
                                        std::to_string(args.size()));
      }
    }
    auto int_arg = [&](int i, bool positive) -> int {
      const Arg& a = *slots[i];
      const Token& t = *a.tok;
      const std::string param(spec.params[i]);
      if (t.kind != Tok::kInt) fail_at(t, diag::kArity, std::string(spec.name) + "(): '" + param + "' must be an integer");
      if (t.overflow || t.value > std::numeric_limits<int>::max()) {
        fail_at(t, diag::kArity, std::string(spec.name) + "(): '" + param + "' is out of range");
      }
      const int v = a.negative ? -static_cast<int>(t.value) : static_cast<int>(t.value);
      if (positive && v < 1) fail_at(t, diag::kArity, std::string(spec.name) + "(): '" + param + "' must be positive");
      return v;
    };
    auto str_arg = [&](int i) -> std::string {
      const Token& t = *slots[i]->tok;
      if (t.kind != Tok::kString) {
        fail_at(t, diag::kArity, std::string(spec.name) + "(): '" + std::string(spec.params[i]) + "' must be a string");
      }
      return t.text;
    };
    switch (kind) {
      case ActionKind::kMove: return Action::move(int_arg(0, false), int_arg(1, false));
      case ActionKind::kGather: return Action::gather();
      case ActionKind::kFight: return Action::fight();
      case ActionKind::kRest: return Action::rest();
      case ActionKind::kCraft: return Action::craft(str_arg(0), int_arg(1, true));
      case ActionKind::kRecycle: return Action::recycle(str_arg(0), int_arg(1, true));
      case ActionKind::kEquip: return Action::equip(str_arg(0));
      case ActionKind::kUnequip: return Action::unequip(str_arg(0));
    }
    return Action::rest();
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

std::size_t saturating_length(const std::vector<Statement>& body) {
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max() / 2;
  std::size_t total = 0;
  for (const auto& s : body) {
    std::size_t n = 1;
    if (const auto* loop = std::get_if<ForLoop>(&s.node)) {
      const std::size_t inner = saturating_length(loop->body);
      const auto count = static_cast<std::size_t>(loop->count);
      n = (inner != 0 && count > kMax / inner) ? kMax : inner * count;
    }
    total = std::min(kMax, total + n);
  }
  return total;
}

void unroll(const std::vector<Statement>& body, std::vector<Action>& out) {
  for (const auto& s : body) {
    if (const auto* loop = std::get_if<ForLoop>(&s.node)) {
      for (int i = 0; i < loop->count; ++i) unroll(loop->body, out);
    } else {
      out.push_back(std::get<Action>(s.node));
    }
  }
}

void emit(const std::vector<Statement>& body, int indent, std::string& out) {
  for (const auto& s : body) {
    out.append(static_cast<std::size_t>(indent) * 4, ' ');
    if (const auto* loop = std::get_if<ForLoop>(&s.node)) {
      out += "for _ in range(" + std::to_string(loop->count) + "):\n";
      emit(loop->body, indent + 1, out);
    } else {
      out += to_string(std::get<Action>(s.node));
      out += '\n';
    }
  }
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string_view to_string(ActionKind kind) { return spec_of(kind).name; }

std::optional<ActionKind> action_kind_from_string(std::string_view name) {
  for (const auto& spec : kActions) {
    if (spec.name == name) return spec.kind;
  }
  return std::nullopt;
}

std::string to_string(const Action& a) {
  const std::string name(to_string(a.kind));
  switch (a.kind) {
    case ActionKind::kMove: return name + "(" + std::to_string(a.x) + ", " + std::to_string(a.y) + ")";
    case ActionKind::kCraft:
    case ActionKind::kRecycle: return name + "(" + quote(a.id) + ", " + std::to_string(a.qty) + ")";
    case ActionKind::kEquip:
    case ActionKind::kUnequip: return name + "(" + quote(a.id) + ")";
    case ActionKind::kGather:
    case ActionKind::kFight:
    case ActionKind::kRest: return name + "()";
  }
  return name + "()";
}

std::string extract_code(std::string_view text) {
  std::string_view last;
  bool found = false;
  std::size_t pos = 0;
  while (true) {
    const std::size_t open = text.find("```", pos);
    if (open == std::string_view::npos) break;
    std::size_t body = text.find('\n', open + 3);
    body = body == std::string_view::npos ? text.size() : body + 1;
    const std::size_t close = text.find("```", body);
    found = true;
    if (close == std::string_view::npos) {
      last = text.substr(body);
      break;
    }
    last = text.substr(body, close - body);
    pos = close + 3;
  }
  return std::string(trim(found ? last : text));
}

ParseResult parse(std::string_view source) {
  try {
    Lexer lexer(source);
    Parser parser(lexer.run());
    return parser.program();
  } catch (const ParseFailure& f) {
    return f.diagnostic;
  }
}

std::size_t flattened_length(const PlanProgram& program) { return saturating_length(program.statements); }

std::vector<Action> flatten(const PlanProgram& program, std::size_t cap) {
  const std::size_t n = flattened_length(program);
  if (n > cap) {
    throw PlanTooLongError("plan unrolls to " + std::to_string(n) + " actions, more than the limit of " +
                           std::to_string(cap));
  }
  std::vector<Action> out;
  out.reserve(n);
  unroll(program.statements, out);
  return out;
}

std::string unparse(const PlanProgram& program) {
  std::string out;
  emit(program.statements, 0, out);
  return out;
}

}  // namespace gearquest
