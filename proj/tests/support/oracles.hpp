#pragma once

#include <map>
#include <set>

#include "sheetaudit/evaluate.hpp"
#include "sheetaudit/workbook.hpp"

namespace sheetaudit::testgen {

/// Independent evaluation oracle: recompute every formula against the
/// current value map until nothing changes. Written against the AST
/// directly and shares no code with the dependency-ordered evaluator.
/// Only meaningful on acyclic sheets.
ValueMap fixed_point_oracle(const Workbook& wb);

/// Brute-force cycle oracle: scan precedent edges straight out of the
/// ASTs and return every cell that lies on a reference cycle or can
/// reach one.
std::set<CellRef> expected_cycle_cells(const Workbook& wb);

}  // namespace sheetaudit::testgen
