#include "sheetaudit/formula.hpp"

namespace sheetaudit {

char to_symbol(BinOp op) {
    switch (op) {
        case BinOp::Add: return '+';
        case BinOp::Sub: return '-';
        case BinOp::Mul: return '*';
        case BinOp::Div: return '/';
    }
    return '?';
}

std::string to_string(Func f) { return f == Func::Sum ? "SUM" : "LOOKUP"; }

namespace {

int precedence(BinOp op) { return (op == BinOp::Add || op == BinOp::Sub) ? 1 : 2; }

// is_right: rhs of a left-associative operator needs parens at equal
// precedence (a-(b-c), a/(b*c)).
void render(const Expr& e, std::string& out, int parent_prec, bool is_right) {
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, NumberLit>) {
                out += node.lexeme;
            } else if constexpr (std::is_same_v<T, TextLit>) {
                out += '"';
                for (char c : node.text) {
                    out += c;
                    if (c == '"') out += '"';
                }
                out += '"';
            } else if constexpr (std::is_same_v<T, RefNode>) {
                out += node.ref.to_string();
            } else if constexpr (std::is_same_v<T, RangeNode>) {
                out += node.range.to_string();
            } else if constexpr (std::is_same_v<T, UnaryNeg>) {
                bool wrap = parent_prec > 0;
                if (wrap) out += '(';
                out += '-';
                render(*node.operand, out, 3, false);
                if (wrap) out += ')';
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                int prec = precedence(node.op);
                bool wrap = prec < parent_prec || (prec == parent_prec && is_right);
                if (wrap) out += '(';
                render(*node.lhs, out, prec, false);
                out += to_symbol(node.op);
                render(*node.rhs, out, prec, true);
                if (wrap) out += ')';
            } else {
                out += to_string(node.fn);
                out += '(';
                bool first = true;
                for (const auto& a : node.args) {
                    if (!first) out += ',';
                    first = false;
                    render(*a, out, 0, false);
                }
                out += ')';
            }
        },
        e.node);
}

}  // namespace

std::string render_formula(const Expr& e) {
    std::string out = "=";
    render(e, out, 0, false);
    return out;
}

}  // namespace sheetaudit
