#include "sheetaudit/value.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace sheetaudit {

std::string to_string(EvalError e) {
    switch (e) {
        case EvalError::Div0: return "#DIV/0!";
        case EvalError::BadRef: return "#REF!";
        case EvalError::Cycle: return "#CYCLE!";
        case EvalError::Type: return "#TYPE!";
    }
    return "#ERR!";
}

bool Value::close(const Value& a, const Value& b, double tol) {
    if (!a.same_kind(b)) return false;
    if (a.is_number()) return std::fabs(a.number() - b.number()) <= tol;
    return a == b;
}

std::string Value::to_display() const {
    if (is_empty()) return "";
    if (is_text()) return text();
    if (is_error()) return to_string(error());
    return format_number(number());
}

std::string format_number(double v) {
    char buf[512];
    // Shortest %g form that round-trips; exponent notation is not part
    // of the formula grammar, so skip candidates that carry one.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        std::string s = buf;
        if (s.find('e') != std::string::npos || s.find('E') != std::string::npos) continue;
        if (std::strtod(buf, nullptr) == v) return s;
    }
    std::snprintf(buf, sizeof buf, "%.17f", v);
    std::string s = buf;
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

std::string format_currency(double v) {
    double rounded = std::round(v * 100.0) / 100.0;
    bool integral = std::round(rounded) == rounded;
    char buf[64];
    std::snprintf(buf, sizeof buf, integral ? "%.0f" : "%.2f", rounded);
    std::string digits = buf;

    std::string sign;
    if (!digits.empty() && digits[0] == '-') {
        sign = "-";
        digits.erase(0, 1);
    }
    auto dot = digits.find('.');
    std::string whole = dot == std::string::npos ? digits : digits.substr(0, dot);
    std::string frac = dot == std::string::npos ? "" : digits.substr(dot);

    std::string grouped;
    int count = 0;
    for (auto it = whole.rbegin(); it != whole.rend(); ++it) {
        if (count != 0 && count % 3 == 0) grouped += ',';
        grouped += *it;
        ++count;
    }
    std::string out(grouped.rbegin(), grouped.rend());
    return sign + out + frac;
}

}  // namespace sheetaudit
