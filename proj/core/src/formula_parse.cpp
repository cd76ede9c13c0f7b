#include <cctype>
#include <cstdlib>

#include "sheetaudit/error.hpp"
#include "sheetaudit/formula.hpp"
#include "sheetaudit/value.hpp"

namespace sheetaudit {

ExprPtr make_number(std::string lexeme, double value) {
    return std::make_shared<Expr>(Expr{NumberLit{std::move(lexeme), value}});
}
ExprPtr make_number(double value) { return make_number(format_number(value), value); }
ExprPtr make_text(std::string text) { return std::make_shared<Expr>(Expr{TextLit{std::move(text)}}); }
ExprPtr make_ref(CellRef ref) { return std::make_shared<Expr>(Expr{RefNode{ref}}); }
ExprPtr make_range(RangeRef range) { return std::make_shared<Expr>(Expr{RangeNode{range}}); }
ExprPtr make_neg(ExprPtr operand) { return std::make_shared<Expr>(Expr{UnaryNeg{std::move(operand)}}); }
ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs) {
    return std::make_shared<Expr>(Expr{BinaryExpr{op, std::move(lhs), std::move(rhs)}});
}
ExprPtr make_call(Func fn, std::vector<ExprPtr> args) {
    return std::make_shared<Expr>(Expr{FuncCall{fn, std::move(args)}});
}

namespace {

// Recursive-descent parser over the raw source (offsets reported
// against the original string, '=' included).
class Parser {
public:
    explicit Parser(std::string_view src) : src_(src), pos_(0) {}

    ExprPtr parse() {
        if (src_.empty() || src_[0] != '=') throw ParseError("formula must begin with '='", 0);
        pos_ = 1;
        ExprPtr e = parse_expr();
        skip_ws();
        if (pos_ != src_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_;

    void skip_ws() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }

    ExprPtr parse_expr() {
        ExprPtr lhs = parse_term();
        while (true) {
            char c = peek();
            if (c != '+' && c != '-') break;
            ++pos_;
            lhs = make_binary(c == '+' ? BinOp::Add : BinOp::Sub, lhs, parse_term());
        }
        return lhs;
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_factor();
        while (true) {
            char c = peek();
            if (c != '*' && c != '/') break;
            ++pos_;
            lhs = make_binary(c == '*' ? BinOp::Mul : BinOp::Div, lhs, parse_factor());
        }
        return lhs;
    }

    ExprPtr parse_factor() {
        if (eat('-')) return make_neg(parse_factor());
        return parse_primary();
    }

    ExprPtr parse_primary() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of formula");
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (c == '"') return parse_text();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_name(false);
        fail(std::string("unexpected character '") + c + "'");
    }

    ExprPtr parse_text() {
        std::size_t start = pos_;
        ++pos_;  // opening quote
        std::string out;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '"') {
                if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '"') {
                    out += '"';
                    pos_ += 2;
                    continue;
                }
                ++pos_;
                return make_text(std::move(out));
            }
            out += c;
            ++pos_;
        }
        throw ParseError("unterminated text literal", start);
    }

    ExprPtr parse_number() {
        std::size_t start = pos_;
        bool seen_dot = false;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '.' && !seen_dot) {
                seen_dot = true;
                ++pos_;
            } else {
                break;
            }
        }
        std::string lexeme(src_.substr(start, pos_ - start));
        if (lexeme == ".") throw ParseError("malformed number", start);
        double value = std::strtod(lexeme.c_str(), nullptr);
        return make_number(std::move(lexeme), value);
    }

    // Identifier: either an A1 reference (possibly a range head) or a
    // function name. `range_ok` is true only in function-argument
    // position; a ':' anywhere else is a syntax error.
    ExprPtr parse_name(bool range_ok) {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])))) {
            ++pos_;
        }
        std::string word(src_.substr(start, pos_ - start));
        if (word.empty()) fail("expected name");

        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == '(') return parse_call(word, start);

        auto ref = CellRef::parse(word);
        if (!ref) throw ParseError("unknown name '" + word + "'", start);

        if (peek() == ':') {
            if (!range_ok) throw ParseError("range not allowed here", pos_);
            ++pos_;
            skip_ws();
            std::size_t second = pos_;
            while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            auto other = CellRef::parse(src_.substr(second, pos_ - second));
            if (!other) throw ParseError("malformed range", second);
            return make_range(RangeRef::normalized(*ref, *other));
        }
        return make_ref(*ref);
    }

    ExprPtr parse_call(const std::string& word, std::size_t name_offset) {
        std::string upper;
        for (char c : word) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));

        Func fn;
        if (upper == "SUM") {
            fn = Func::Sum;
        } else if (upper == "LOOKUP") {
            fn = Func::Lookup;
        } else {
            throw ParseError("unknown function name '" + word + "'", name_offset);
        }

        if (!eat('(')) fail("expected '('");
        std::vector<ExprPtr> args;
        if (peek() == ')') fail("function requires at least one argument");
        while (true) {
            args.push_back(parse_arg());
            if (eat(',')) continue;
            if (eat(')')) break;
            fail("expected ',' or ')'");
        }
        validate_call(fn, args, name_offset);
        return make_call(fn, std::move(args));
    }

    // An argument may be a range only here; SUM additionally restricts
    // arguments to references, ranges, and plain numbers.
    ExprPtr parse_arg() {
        skip_ws();
        if (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) {
            std::size_t save = pos_;
            ExprPtr name = parse_name(true);
            // A bare ref may still continue as an expression (B2+1).
            if (std::holds_alternative<RangeNode>(name->node)) return name;
            char c = peek();
            if (c == ',' || c == ')') return name;
            pos_ = save;
        }
        return parse_expr();
    }

    void validate_call(Func fn, const std::vector<ExprPtr>& args, std::size_t offset) {
        if (fn == Func::Sum) {
            for (const auto& a : args) {
                bool ok = std::holds_alternative<RefNode>(a->node) ||
                          std::holds_alternative<RangeNode>(a->node) ||
                          std::holds_alternative<NumberLit>(a->node);
                if (!ok) throw ParseError("SUM arguments must be references, ranges, or numbers", offset);
            }
        } else {
            if (args.size() != 3)
                throw ParseError("LOOKUP takes (key, key range, result range)", offset);
            if (!std::holds_alternative<RangeNode>(args[1]->node) ||
                !std::holds_alternative<RangeNode>(args[2]->node))
                throw ParseError("LOOKUP key and result arguments must be ranges", offset);
            if (std::holds_alternative<RangeNode>(args[0]->node))
                throw ParseError("LOOKUP key must be a plain expression", offset);
        }
    }
};

}  // namespace

ExprPtr parse_formula(std::string_view source) { return Parser(source).parse(); }

void visit_refs(const Expr& e, const std::function<void(const CellRef&)>& fn) {
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, RefNode>) {
                fn(node.ref);
            } else if constexpr (std::is_same_v<T, UnaryNeg>) {
                visit_refs(*node.operand, fn);
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                visit_refs(*node.lhs, fn);
                visit_refs(*node.rhs, fn);
            } else if constexpr (std::is_same_v<T, FuncCall>) {
                for (const auto& a : node.args) visit_refs(*a, fn);
            }
        },
        e.node);
}

void visit_ranges(const Expr& e, const std::function<void(const RangeRef&)>& fn) {
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, RangeNode>) {
                fn(node.range);
            } else if constexpr (std::is_same_v<T, UnaryNeg>) {
                visit_ranges(*node.operand, fn);
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                visit_ranges(*node.lhs, fn);
                visit_ranges(*node.rhs, fn);
            } else if constexpr (std::is_same_v<T, FuncCall>) {
                for (const auto& a : node.args) visit_ranges(*a, fn);
            }
        },
        e.node);
}

bool ast_equal(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& na) -> bool {
            using T = std::decay_t<decltype(na)>;
            const auto& nb = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, NumberLit>) {
                return na.value == nb.value;
            } else if constexpr (std::is_same_v<T, TextLit>) {
                return na.text == nb.text;
            } else if constexpr (std::is_same_v<T, RefNode>) {
                return na.ref == nb.ref;
            } else if constexpr (std::is_same_v<T, RangeNode>) {
                return na.range == nb.range;
            } else if constexpr (std::is_same_v<T, UnaryNeg>) {
                return ast_equal(*na.operand, *nb.operand);
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                return na.op == nb.op && ast_equal(*na.lhs, *nb.lhs) && ast_equal(*na.rhs, *nb.rhs);
            } else {
                if (na.fn != nb.fn || na.args.size() != nb.args.size()) return false;
                for (std::size_t i = 0; i < na.args.size(); ++i)
                    if (!ast_equal(*na.args[i], *nb.args[i])) return false;
                return true;
            }
        },
        a.node);
}

std::vector<std::string> leaf_sequence(const Expr& e) {
    std::vector<std::string> out;
    std::function<void(const Expr&)> walk = [&](const Expr& x) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, NumberLit>) {
                    out.push_back(node.lexeme);
                } else if constexpr (std::is_same_v<T, TextLit>) {
                    out.push_back('"' + node.text + '"');
                } else if constexpr (std::is_same_v<T, RefNode>) {
                    out.push_back(node.ref.to_string());
                } else if constexpr (std::is_same_v<T, RangeNode>) {
                    out.push_back(node.range.to_string());
                } else if constexpr (std::is_same_v<T, UnaryNeg>) {
                    out.push_back("-u");
                    walk(*node.operand);
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    walk(*node.lhs);
                    walk(*node.rhs);
                } else {
                    out.push_back(to_string(node.fn));
                    for (const auto& a : node.args) walk(*a);
                }
            },
            x.node);
    };
    walk(e);
    return out;
}

}  // namespace sheetaudit
