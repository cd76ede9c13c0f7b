#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sheetaudit/cell_ref.hpp"

namespace sheetaudit {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class BinOp { Add, Sub, Mul, Div };
enum class Func { Sum, Lookup };

char to_symbol(BinOp op);
std::string to_string(Func f);  // "SUM", "LOOKUP"

struct NumberLit {
    std::string lexeme;  // as written; preserved by the renderer
    double value = 0;
};
struct TextLit {
    std::string text;
};
struct RefNode {
    CellRef ref;
};
struct RangeNode {
    RangeRef range;
};
struct UnaryNeg {
    ExprPtr operand;
};
struct BinaryExpr {
    BinOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};
struct FuncCall {
    Func fn;
    std::vector<ExprPtr> args;
};

/// Formula syntax tree. Immutable once built; rewrites (seeding) build
/// fresh trees sharing unchanged subtrees.
struct Expr {
    std::variant<NumberLit, TextLit, RefNode, RangeNode, UnaryNeg, BinaryExpr, FuncCall> node;
};

ExprPtr make_number(std::string lexeme, double value);
ExprPtr make_number(double value);
ExprPtr make_text(std::string text);
ExprPtr make_ref(CellRef ref);
ExprPtr make_range(RangeRef range);
ExprPtr make_neg(ExprPtr operand);
ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_call(Func fn, std::vector<ExprPtr> args);

/// Parse a formula cell's source text. `source` must begin with '='
/// (it is stripped before parsing). Grammar: decimals, quoted text,
/// A1 refs, rectangular ranges (function arguments only), + - * / with
/// standard precedence and left associativity, unary minus,
/// parentheses, SUM and LOOKUP. Function names and refs are
/// case-insensitive. Throws ParseError with a character offset.
ExprPtr parse_formula(std::string_view source);

/// Canonical rendering including the leading '='. Parentheses are
/// emitted exactly where the tree's grouping deviates from operator
/// precedence, so render/parse round-trips to an identical tree.
std::string render_formula(const Expr& e);

/// Structural equality; numbers compare by value, so "=b2+2.50" and
/// "=B2+2.5" are equal. This is the normalization CHECK_KEY_FUNCTIONS
/// relies on.
bool ast_equal(const Expr& a, const Expr& b);

/// Walk every plain cell reference (not range corners).
void visit_refs(const Expr& e, const std::function<void(const CellRef&)>& fn);

/// Walk every range.
void visit_ranges(const Expr& e, const std::function<void(const RangeRef&)>& fn);

/// Leaf sequence in evaluation order, rendered to strings; grouping
/// changes preserve it, which is how seed-kind fidelity is checked.
std::vector<std::string> leaf_sequence(const Expr& e);

}  // namespace sheetaudit
