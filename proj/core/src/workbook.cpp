#include "sheetaudit/workbook.hpp"

#include <cctype>
#include <cstdlib>

#include "sheetaudit/error.hpp"
#include "sheetaudit/value.hpp"

namespace sheetaudit {

bool valid_date(std::string_view t) {
    if (t.size() != 10 || t[4] != '-' || t[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    int year = (t[0] - '0') * 1000 + (t[1] - '0') * 100 + (t[2] - '0') * 10 + (t[3] - '0');
    int month = (t[5] - '0') * 10 + (t[6] - '0');
    int day = (t[8] - '0') * 10 + (t[9] - '0');
    if (month < 1 || month > 12 || day < 1) return false;
    static const int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int limit = days[month - 1];
    bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    if (month == 2 && leap) limit = 29;
    return day <= limit;
}

Cell Cell::number(std::string lexeme, double value) {
    Cell c;
    c.content_ = NumberContent{std::move(lexeme), value};
    return c;
}

Cell Cell::number(double value) { return number(format_number(value), value); }

Cell Cell::text(std::string t) {
    Cell c;
    c.content_ = TextContent{std::move(t)};
    return c;
}

Cell Cell::formula(std::string source) {
    Cell c;
    ExprPtr ast = parse_formula(source);
    c.content_ = FormulaContent{std::move(source), std::move(ast)};
    return c;
}

namespace {

// Full-field numeric parse; "12x", "", and non-finite spellings like
// "inf" are not numbers.
std::optional<double> parse_full_number(const std::string& field) {
    if (field.empty()) return std::nullopt;
    const char* begin = field.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + field.size()) return std::nullopt;
    if (!std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

Cell Cell::from_field(const std::string& field) {
    if (field.empty()) return Cell();
    if (field[0] == '=') return Cell::formula(field);
    if (auto num = parse_full_number(field)) return Cell::number(field, *num);
    return Cell::text(field);
}

std::string Cell::source_text() const {
    if (is_empty()) return "";
    if (is_number()) return number().lexeme;
    if (is_text()) return text().text;
    return formula().source;
}

const Cell* Workbook::cell(CellRef ref) const {
    auto it = cells_.find(ref);
    return it == cells_.end() ? nullptr : &it->second;
}

void Workbook::set_cell(CellRef ref, Cell cell) {
    if (!ref.valid()) throw Error("cell reference out of bounds: " + ref.to_string());
    if (cell.is_empty())
        cells_.erase(ref);
    else
        cells_[ref] = std::move(cell);
}

void Workbook::add_region(const std::string& name, RangeRef range) {
    if (name.empty()) throw Error("region name must be non-empty");
    if (regions_.contains(name)) throw Error("duplicate region name '" + name + "'");
    regions_.emplace(name, range);
}

std::optional<RangeRef> Workbook::used_extent() const {
    if (cells_.empty()) return std::nullopt;
    int min_row = CellRef::kMaxRow, max_row = 1, min_col = CellRef::kMaxCol, max_col = 1;
    for (const auto& [ref, cell] : cells_) {
        min_row = std::min(min_row, ref.row);
        max_row = std::max(max_row, ref.row);
        min_col = std::min(min_col, ref.col);
        max_col = std::max(max_col, ref.col);
    }
    return RangeRef{CellRef{min_row, min_col}, CellRef{max_row, max_col}};
}

bool Workbook::content_equal(const Workbook& other) const {
    if (cells_.size() != other.cells_.size()) return false;
    auto it = other.cells_.begin();
    for (const auto& [ref, cell] : cells_) {
        if (it->first != ref || !cell.content_equal(it->second)) return false;
        ++it;
    }
    return true;
}

}  // namespace sheetaudit
