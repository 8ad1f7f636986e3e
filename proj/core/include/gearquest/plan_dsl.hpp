#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gearquest {

enum class ActionKind : std::uint8_t { kMove, kGather, kFight, kCraft, kEquip, kUnequip, kRecycle, kRest };

std::string_view to_string(ActionKind kind);
std::optional<ActionKind> action_kind_from_string(std::string_view name);

struct Action {
  ActionKind kind = ActionKind::kGather;
  int x = 0;  // move
  int y = 0;  // move
  std::string id;  // item id for craft/equip/recycle, slot name for unequip
  int qty = 0;     // craft/recycle

  static Action move(int x, int y) { return {ActionKind::kMove, x, y, {}, 0}; }
  static Action gather() { return {ActionKind::kGather, 0, 0, {}, 0}; }
  static Action fight() { return {ActionKind::kFight, 0, 0, {}, 0}; }
  static Action rest() { return {ActionKind::kRest, 0, 0, {}, 0}; }
  static Action craft(std::string item, int qty) { return {ActionKind::kCraft, 0, 0, std::move(item), qty}; }
  static Action recycle(std::string item, int qty) { return {ActionKind::kRecycle, 0, 0, std::move(item), qty}; }
  static Action equip(std::string item) { return {ActionKind::kEquip, 0, 0, std::move(item), 0}; }
  static Action unequip(std::string slot) { return {ActionKind::kUnequip, 0, 0, std::move(slot), 0}; }

  bool operator==(const Action&) const = default;
};

// Call syntax, e.g. craft('copper_sword', 2).
std::string to_string(const Action& action);

struct Statement;

struct ForLoop {
  int count = 1;
  std::vector<Statement> body;
  bool operator==(const ForLoop&) const;
};

struct Statement {
  std::variant<Action, ForLoop> node;
  int line = 0;
  int col = 0;

  bool is_loop() const { return std::holds_alternative<ForLoop>(node); }
  // Source positions do not take part in comparison.
  bool operator==(const Statement& other) const { return node == other.node; }
};

inline bool ForLoop::operator==(const ForLoop& other) const {
  return count == other.count && body == other.body;
}

struct PlanProgram {
  std::vector<Statement> statements;
  bool operator==(const PlanProgram&) const = default;
};

inline constexpr int kMaxLoopNesting = 2;
inline constexpr std::size_t kMaxFlattenedActions = 10000;

namespace diag {
inline constexpr std::string_view kSyntax = "syntax";
inline constexpr std::string_view kForbiddenConstruct = "forbidden_construct";
inline constexpr std::string_view kUnknownAction = "unknown_action";
inline constexpr std::string_view kArity = "arity";
inline constexpr std::string_view kNesting = "nesting";
inline constexpr std::string_view kTooLong = "too_long";
}  // namespace diag

struct Diagnostic {
  int line = 0;  // 1-based
  int col = 0;   // 1-based
  std::string category;
  std::string message;
  bool operator==(const Diagnostic&) const = default;
};

using ParseResult = std::variant<PlanProgram, Diagnostic>;

// Last fenced block of a model reply (an unterminated final fence runs to the
// end of the text), else the whole text trimmed.
std::string extract_code(std::string_view text);

ParseResult parse(std::string_view source);

class PlanTooLongError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Actions after unrolling loops; saturates instead of overflowing.
std::size_t flattened_length(const PlanProgram& program);

// Throws PlanTooLongError when the result would exceed `cap` actions.
std::vector<Action> flatten(const PlanProgram& program, std::size_t cap = kMaxFlattenedActions);

// Canonical text: four-space indentation, single-quoted ids, loop variable `_`.
std::string unparse(const PlanProgram& program);

}  // namespace gearquest
