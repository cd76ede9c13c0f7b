#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "sheetaudit/rng.hpp"
#include "sheetaudit/workbook.hpp"

namespace sheetaudit::testgen {

struct GenOptions {
    int max_cells = 60;
    int max_cols = 6;
    int literal_rows = 3;
    bool with_lookup = true;
    bool with_parens = true;
    bool with_guide = false;
};

/// Random error-free workbook: numeric literals on top, formula rows
/// below referencing strictly earlier rows (acyclic by construction),
/// mixing arith chains, parenthesized groups, SUM ranges, and simple
/// exact-match lookups. Denominators are nonzero literals.
Workbook random_workbook(Rng& rng, const GenOptions& opts = {});

/// Rewire one formula to read a cell downstream of it, creating at
/// least one reference cycle. Returns the rewritten cell.
CellRef inject_cycle(Workbook& wb, Rng& rng);

}  // namespace sheetaudit::testgen
