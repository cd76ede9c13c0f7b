#include <benchmark/benchmark.h>

#include "sheetaudit/audit.hpp"
#include "sheetaudit/cohort.hpp"
#include "sheetaudit/evaluate.hpp"
#include "sheetaudit/seeding.hpp"

using namespace sheetaudit;

namespace {

// Ladder sheet: one literal row, then `rows` rows of formulas where
// each cell adds the cell above to a SUM over the first row.
Workbook ladder_sheet(int rows, int cols) {
    Workbook wb("bench");
    for (int c = 1; c <= cols; ++c) wb.set_cell(CellRef{1, c}, Cell::number(static_cast<double>(c)));
    RangeRef first_row{CellRef{1, 1}, CellRef{1, cols}};
    for (int r = 2; r <= rows + 1; ++r) {
        for (int c = 1; c <= cols; ++c) {
            std::string above = CellRef{r - 1, c}.to_string();
            wb.set_cell(CellRef{r, c},
                        Cell::formula("=" + above + "+SUM(" + first_row.to_string() + ")"));
        }
    }
    return wb;
}

void BM_Evaluate(benchmark::State& state) {
    Workbook wb = ladder_sheet(static_cast<int>(state.range(0)), 10);
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(wb));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(wb.cells().size()));
}
BENCHMARK(BM_Evaluate)->Arg(10)->Arg(40)->Arg(90);

void BM_PlanSeeds(benchmark::State& state) {
    Workbook wb = ladder_sheet(5, 10);
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(plan_seeds(wb, 3, all_seed_kinds(), ++seed));
}
BENCHMARK(BM_PlanSeeds);

void BM_Diff(benchmark::State& state) {
    Workbook ref = ladder_sheet(8, 10);
    SeedManifest m = plan_seeds(ref, 3, all_seed_kinds(), 7);
    Workbook subject = apply_seeds(ref, m);
    for (auto _ : state) benchmark::DoNotOptimize(diff_workbooks(ref, subject));
}
BENCHMARK(BM_Diff);

void BM_AuditScript(benchmark::State& state) {
    Workbook ref = ladder_sheet(8, 10);
    AuditScript script;
    script.steps.push_back(AuditStep{SetInputStep{CellRef{1, 1}, "42"}, 0});
    script.steps.push_back(AuditStep{ExpectValueStep{CellRef{9, 9}, 0.0, 1e18}, 1});
    script.steps.push_back(AuditStep{CheckKeyFunctionsStep{3, ""}, 1});
    for (auto _ : state) benchmark::DoNotOptimize(run_audit_script(ref, ref, script));
}
BENCHMARK(BM_AuditScript);

void BM_MakePairing(benchmark::State& state) {
    std::vector<std::string> names;
    for (int i = 0; i < static_cast<int>(state.range(0)); ++i)
        names.push_back("student" + std::to_string(i));
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(make_pairing(names, ++seed));
}
BENCHMARK(BM_MakePairing)->Arg(10)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
