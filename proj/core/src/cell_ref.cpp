#include "sheetaudit/cell_ref.hpp"

#include <cctype>

#include "sheetaudit/error.hpp"

namespace sheetaudit {

std::string CellRef::to_string() const {
    std::string out;
    out += static_cast<char>('A' + col - 1);
    out += std::to_string(row);
    return out;
}

std::optional<CellRef> CellRef::parse(std::string_view text) {
    if (text.size() < 2) return std::nullopt;
    char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    if (c < 'A' || c > 'Z') return std::nullopt;
    int row = 0;
    for (std::size_t i = 1; i < text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
        row = row * 10 + (text[i] - '0');
        if (row > CellRef::kMaxRow) return std::nullopt;
    }
    if (row < 1) return std::nullopt;
    return CellRef{row, c - 'A' + 1};
}

CellRef CellRef::parse_or_throw(std::string_view text) {
    auto ref = parse(text);
    if (!ref) throw ParseError("malformed cell reference '" + std::string(text) + "'", 0);
    return *ref;
}

RangeRef RangeRef::normalized(CellRef a, CellRef b) {
    RangeRef r;
    r.top_left = CellRef{std::min(a.row, b.row), std::min(a.col, b.col)};
    r.bottom_right = CellRef{std::max(a.row, b.row), std::max(a.col, b.col)};
    return r;
}

std::vector<CellRef> RangeRef::cells() const {
    std::vector<CellRef> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (int r = top_left.row; r <= bottom_right.row; ++r)
        for (int c = top_left.col; c <= bottom_right.col; ++c) out.push_back(CellRef{r, c});
    return out;
}

std::string RangeRef::to_string() const {
    return top_left.to_string() + ":" + bottom_right.to_string();
}

std::optional<RangeRef> RangeRef::parse(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    auto a = CellRef::parse(text.substr(0, colon));
    auto b = CellRef::parse(text.substr(colon + 1));
    if (!a || !b) return std::nullopt;
    return normalized(*a, *b);
}

}  // namespace sheetaudit
