#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "sheetaudit/formula.hpp"

namespace sheetaudit {

/// Workbook metadata naming who built the model, when, and why.
/// All three fields are non-empty whenever a guide is present.
struct UserGuide {
    std::string builder;
    std::string date;  // YYYY-MM-DD
    std::string purpose;

    bool operator==(const UserGuide&) const = default;
};

/// True for a syntactically valid YYYY-MM-DD calendar date.
bool valid_date(std::string_view text);

struct NumberContent {
    std::string lexeme;  // grid field as written
    double value = 0;
};
struct TextContent {
    std::string text;
};
struct FormulaContent {
    std::string source;  // including '='; re-parses to `ast`
    ExprPtr ast;
};

/// One cell's stored content. Equality and diffing work on the source
/// text, so "content identical" means byte-identical grid fields.
class Cell {
public:
    Cell() = default;
    static Cell number(std::string lexeme, double value);
    static Cell number(double value);
    static Cell text(std::string t);
    static Cell formula(std::string source);  // parses; throws ParseError

    /// Interpret a raw grid field: '='-prefixed fields are formulas,
    /// full numeric fields are numbers, "" is empty, anything else text.
    static Cell from_field(const std::string& field);

    bool is_empty() const { return std::holds_alternative<std::monostate>(content_); }
    bool is_number() const { return std::holds_alternative<NumberContent>(content_); }
    bool is_text() const { return std::holds_alternative<TextContent>(content_); }
    bool is_formula() const { return std::holds_alternative<FormulaContent>(content_); }

    const NumberContent& number() const { return std::get<NumberContent>(content_); }
    const TextContent& text() const { return std::get<TextContent>(content_); }
    const FormulaContent& formula() const { return std::get<FormulaContent>(content_); }

    /// The grid field that reproduces this cell ("" for empty).
    std::string source_text() const;

    bool content_equal(const Cell& other) const { return source_text() == other.source_text(); }

private:
    std::variant<std::monostate, NumberContent, TextContent, FormulaContent> content_;
};

/// A single-sheet spreadsheet model: named grid of cells plus optional
/// user guide and named regions. Immutable by convention after load;
/// operations that change cells copy the workbook first.
class Workbook {
public:
    Workbook() = default;
    explicit Workbook(std::string name) : name_(std::move(name)) {}

    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    const std::map<CellRef, Cell>& cells() const { return cells_; }
    const Cell* cell(CellRef ref) const;
    void set_cell(CellRef ref, Cell cell);  // empty content erases

    const std::optional<UserGuide>& guide() const { return guide_; }
    void set_guide(std::optional<UserGuide> g) { guide_ = std::move(g); }

    const std::map<std::string, RangeRef>& regions() const { return regions_; }
    void add_region(const std::string& name, RangeRef range);  // throws on duplicate

    /// Smallest rectangle covering every non-empty cell.
    std::optional<RangeRef> used_extent() const;

    bool content_equal(const Workbook& other) const;

private:
    std::string name_;
    std::map<CellRef, Cell> cells_;
    std::optional<UserGuide> guide_;
    std::map<std::string, RangeRef> regions_;
};

/// Grid file format: UTF-8 text; header records first, one per line --
///   #name <text>
///   #guide builder=<text>;date=<YYYY-MM-DD>;purpose=<text>   (optional)
///   #region <name>=<A1>:<A1>                                 (repeatable)
/// then comma-separated rows (row 1 = spreadsheet row 1). A field
/// beginning with '=' is a formula, '"'-quoting covers fields
/// containing commas or quotes, and an empty field is an empty cell.
Workbook load_workbook(std::istream& in, const std::string& default_name = "");
Workbook load_workbook(const std::string& text, const std::string& default_name = "");
Workbook load_workbook_file(const std::filesystem::path& path);

std::string save_workbook(const Workbook& wb);
void save_workbook_file(const Workbook& wb, const std::filesystem::path& path);

}  // namespace sheetaudit
