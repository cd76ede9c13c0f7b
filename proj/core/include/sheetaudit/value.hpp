#pragma once

#include <string>
#include <variant>

namespace sheetaudit {

/// In-grid evaluation failures. CYCLE dominates the other kinds during
/// propagation so that every cell downstream of a reference cycle stays
/// CYCLE.
enum class EvalError { Div0, BadRef, Cycle, Type };

std::string to_string(EvalError e);  // "#DIV/0!", "#REF!", "#CYCLE!", "#TYPE!"

/// The result of evaluating one cell: empty, a number, text, or an
/// error. Numbers are computed at full double precision; the 2-decimal
/// currency convention only applies when rendering and comparing.
class Value {
public:
    Value() = default;
    static Value empty() { return Value(); }
    static Value number(double v) { return Value(v); }
    static Value text(std::string t) { return Value(std::move(t)); }
    static Value error(EvalError e) { return Value(e); }

    bool is_empty() const { return std::holds_alternative<std::monostate>(v_); }
    bool is_number() const { return std::holds_alternative<double>(v_); }
    bool is_text() const { return std::holds_alternative<std::string>(v_); }
    bool is_error() const { return std::holds_alternative<EvalError>(v_); }

    double number() const { return std::get<double>(v_); }
    const std::string& text() const { return std::get<std::string>(v_); }
    EvalError error() const { return std::get<EvalError>(v_); }

    bool same_kind(const Value& other) const { return v_.index() == other.v_.index(); }

    /// Equality under the audit tolerance: same kind, numbers within
    /// |a-b| <= tol, text and error kinds exact.
    static bool close(const Value& a, const Value& b, double tol);

    bool operator==(const Value&) const = default;

    /// Plain rendering: text verbatim, numbers trimmed, errors as
    /// "#DIV/0!" style tags, empty as "".
    std::string to_display() const;

private:
    explicit Value(double v) : v_(v) {}
    explicit Value(std::string t) : v_(std::move(t)) {}
    explicit Value(EvalError e) : v_(e) {}

    std::variant<std::monostate, double, std::string, EvalError> v_;
};

/// Currency-style rendering: thousands separators, two decimals unless
/// the rounded value is integral ("5,500", "-2,700", "4,773.99").
std::string format_currency(double v);

/// Shortest decimal rendering that round-trips through parsing.
std::string format_number(double v);

}  // namespace sheetaudit
