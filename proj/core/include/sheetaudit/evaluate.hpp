#pragma once

#include <map>
#include <set>
#include <vector>

#include "sheetaudit/value.hpp"
#include "sheetaudit/workbook.hpp"

namespace sheetaudit {

using ValueMap = std::map<CellRef, Value>;

/// Evaluate every non-empty cell in dependency order. Cells on a
/// reference cycle, and every cell downstream of one, evaluate to
/// Error(CYCLE); all other failures surface as in-grid Error values
/// (DIV0, TYPE, BADREF). Pure: identical workbooks yield identical
/// maps regardless of insertion history.
ValueMap evaluate(const Workbook& wb);

/// Cells read by `cell`'s formula, ranges expanded. Unknown or
/// non-formula cells yield the empty set.
std::set<CellRef> precedents(const Workbook& wb, CellRef cell);

/// Direct readers of `cell`. Unknown cells yield the empty set.
std::set<CellRef> dependents(const Workbook& wb, CellRef cell);

/// Precedent/dependent edges for every cell, including positions that
/// are referenced but hold no content (they still carry propagation).
struct DependencyGraph {
    std::map<CellRef, std::vector<CellRef>> precedents;
    std::map<CellRef, std::vector<CellRef>> dependents;

    static DependencyGraph build(const Workbook& wb);

    /// Everything transitively downstream of `roots` (excluding them).
    std::set<CellRef> reachable_dependents(const std::set<CellRef>& roots) const;

    /// Everything `cell` transitively depends on (excluding itself).
    std::set<CellRef> reachable_precedents(CellRef cell) const;
};

}  // namespace sheetaudit
