#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sheetaudit {

/// A1-style cell address. Columns span A..Z, rows 1..999 (desk-scale
/// models only). Ordering is row-major so iteration over a std::map
/// keyed by CellRef walks the grid row by row.
struct CellRef {
    int row = 1;  // 1..999
    int col = 1;  // 1..26, A=1

    static constexpr int kMaxRow = 999;
    static constexpr int kMaxCol = 26;

    auto operator<=>(const CellRef&) const = default;

    bool valid() const {
        return row >= 1 && row <= kMaxRow && col >= 1 && col <= kMaxCol;
    }

    CellRef offset(int drow, int dcol) const { return CellRef{row + drow, col + dcol}; }

    /// "D10". Requires a valid ref.
    std::string to_string() const;

    /// Parse "D10" (case-insensitive). Full-match only; out-of-bounds
    /// addresses and trailing garbage yield nullopt.
    static std::optional<CellRef> parse(std::string_view text);

    /// Parsing variant that throws ParseError for malformed input.
    static CellRef parse_or_throw(std::string_view text);
};

/// Rectangular cell range with normalized corners (top-left has the
/// smaller row and column).
struct RangeRef {
    CellRef top_left;
    CellRef bottom_right;

    static RangeRef normalized(CellRef a, CellRef b);

    auto operator<=>(const RangeRef&) const = default;

    int rows() const { return bottom_right.row - top_left.row + 1; }
    int cols() const { return bottom_right.col - top_left.col + 1; }
    int size() const { return rows() * cols(); }

    /// True for a single row or single column (what SUM/LOOKUP walk).
    bool single_line() const { return rows() == 1 || cols() == 1; }

    bool contains(CellRef c) const {
        return c.row >= top_left.row && c.row <= bottom_right.row &&
               c.col >= top_left.col && c.col <= bottom_right.col;
    }

    bool overlaps(const RangeRef& other) const {
        return top_left.row <= other.bottom_right.row && other.top_left.row <= bottom_right.row &&
               top_left.col <= other.bottom_right.col && other.top_left.col <= bottom_right.col;
    }

    /// All member cells in row-major order.
    std::vector<CellRef> cells() const;

    /// "B2:G2".
    std::string to_string() const;

    /// Parse "B2:G2" (case-insensitive, corners normalized).
    static std::optional<RangeRef> parse(std::string_view text);
};

}  // namespace sheetaudit
