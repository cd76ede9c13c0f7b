#include <fstream>
#include <sstream>

#include "sheetaudit/error.hpp"
#include "sheetaudit/workbook.hpp"

namespace sheetaudit {

namespace {

std::vector<std::string> split_csv_line(const std::string& line, int grid_row) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    i += 2;
                    continue;
                }
                quoted = false;
                ++i;
                continue;
            }
            cur += c;
            ++i;
            continue;
        }
        if (c == '"' && cur.empty()) {
            quoted = true;
            ++i;
            continue;
        }
        if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
            ++i;
            continue;
        }
        cur += c;
        ++i;
    }
    if (quoted)
        throw LoadError("unterminated quoted field", grid_row, static_cast<int>(fields.size()) + 1);
    fields.push_back(std::move(cur));
    return fields;
}

std::string csv_quote(const std::string& field) {
    bool needs = field.find_first_of(",\"\n") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

// "#guide builder=<text>;date=<date>;purpose=<text>"
UserGuide parse_guide_header(const std::string& body, int line_no) {
    UserGuide g;
    std::size_t pos = 0;
    while (pos <= body.size()) {
        auto semi = body.find(';', pos);
        std::string item = body.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos);
        auto eq = item.find('=');
        if (eq == std::string::npos) throw LoadError("malformed #guide record", line_no, 1);
        std::string key = item.substr(0, eq);
        std::string val = item.substr(eq + 1);
        if (key == "builder")
            g.builder = val;
        else if (key == "date")
            g.date = val;
        else if (key == "purpose")
            g.purpose = val;
        else
            throw LoadError("unknown #guide field '" + key + "'", line_no, 1);
        if (semi == std::string::npos) break;
        pos = semi + 1;
    }
    if (g.builder.empty() || g.date.empty() || g.purpose.empty())
        throw LoadError("#guide requires non-empty builder, date, and purpose", line_no, 1);
    if (!valid_date(g.date)) throw LoadError("#guide date is not a valid YYYY-MM-DD date", line_no, 1);
    return g;
}

}  // namespace

Workbook load_workbook(std::istream& in, const std::string& default_name) {
    Workbook wb(default_name);
    std::string line;
    int line_no = 0;
    int grid_row = 0;
    bool in_grid = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();

        if (!in_grid && line.rfind("#", 0) == 0) {
            if (line.rfind("#name ", 0) == 0) {
                wb.set_name(line.substr(6));
            } else if (line.rfind("#guide ", 0) == 0) {
                wb.set_guide(parse_guide_header(line.substr(7), line_no));
            } else if (line.rfind("#region ", 0) == 0) {
                std::string body = line.substr(8);
                auto eq = body.find('=');
                if (eq == std::string::npos) throw LoadError("malformed #region record", line_no, 1);
                std::string name = body.substr(0, eq);
                auto range = RangeRef::parse(body.substr(eq + 1));
                if (!range) throw LoadError("malformed #region range", line_no, 1);
                try {
                    wb.add_region(name, *range);
                } catch (const Error& e) {
                    throw LoadError(e.what(), line_no, 1);
                }
            } else {
                throw LoadError("unknown header record", line_no, 1);
            }
            continue;
        }

        in_grid = true;
        ++grid_row;
        if (grid_row > CellRef::kMaxRow)
            throw LoadError("grid exceeds the maximum of 999 rows", grid_row, 1);
        auto fields = split_csv_line(line, grid_row);
        if (static_cast<int>(fields.size()) > CellRef::kMaxCol)
            throw LoadError("grid exceeds the maximum of 26 columns", grid_row, CellRef::kMaxCol + 1);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (fields[i].empty()) continue;
            try {
                wb.set_cell(CellRef{grid_row, static_cast<int>(i) + 1}, Cell::from_field(fields[i]));
            } catch (const ParseError& e) {
                throw LoadError(e.what(), grid_row, static_cast<int>(i) + 1);
            }
        }
    }

    // Regions must sit inside the grid actually present.
    auto extent = wb.used_extent();
    for (const auto& [name, range] : wb.regions()) {
        bool inside = extent && extent->contains(range.top_left) && extent->contains(range.bottom_right);
        if (!inside) throw LoadError("region '" + name + "' lies outside the used extent");
    }
    return wb;
}

Workbook load_workbook(const std::string& text, const std::string& default_name) {
    std::istringstream in(text);
    return load_workbook(in, default_name);
}

Workbook load_workbook_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open grid file: " + path.string());
    try {
        return load_workbook(in, path.stem().string());
    } catch (const LoadError& e) {
        throw LoadError(path.string() + ": " + e.what());
    }
}

std::string save_workbook(const Workbook& wb) {
    std::string out;
    if (!wb.name().empty()) out += "#name " + wb.name() + "\n";
    if (wb.guide()) {
        const auto& g = *wb.guide();
        out += "#guide builder=" + g.builder + ";date=" + g.date + ";purpose=" + g.purpose + "\n";
    }
    for (const auto& [name, range] : wb.regions())
        out += "#region " + name + "=" + range.to_string() + "\n";

    auto extent = wb.used_extent();
    if (!extent) return out;
    int max_row = extent->bottom_right.row;
    int max_col = extent->bottom_right.col;
    for (int r = 1; r <= max_row; ++r) {
        // Trailing empty fields are trimmed per row.
        int last = 0;
        for (int c = 1; c <= max_col; ++c)
            if (wb.cell(CellRef{r, c})) last = c;
        std::string line;
        for (int c = 1; c <= last; ++c) {
            if (c > 1) line += ',';
            const Cell* cell = wb.cell(CellRef{r, c});
            if (cell) line += csv_quote(cell->source_text());
        }
        out += line + "\n";
    }
    return out;
}

void save_workbook_file(const Workbook& wb, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write grid file: " + path.string());
    out << save_workbook(wb);
}

}  // namespace sheetaudit
