#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "generators.hpp"
#include "sheetaudit/error.hpp"
#include "sheetaudit/evaluate.hpp"
#include "sheetaudit/seeding.hpp"

using namespace sheetaudit;

namespace {

const std::string kFixtures = SHEETAUDIT_FIXTURE_DIR;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::set<CellRef> content_diff_cells(const Workbook& a, const Workbook& b) {
    std::set<CellRef> all;
    for (const auto& [ref, cell] : a.cells()) all.insert(ref);
    for (const auto& [ref, cell] : b.cells()) all.insert(ref);
    std::set<CellRef> out;
    for (CellRef ref : all) {
        const Cell* ca = a.cell(ref);
        const Cell* cb = b.cell(ref);
        std::string sa = ca ? ca->source_text() : "";
        std::string sb = cb ? cb->source_text() : "";
        if (sa != sb) out.insert(ref);
    }
    return out;
}

}  // namespace

TEST_CASE("count=0 yields an empty manifest and an identical workbook") {
    Workbook ref = load_workbook_file(kFixtures + "/nightclub_ref.grid");
    SeedManifest m = plan_seeds(ref, 0, all_seed_kinds(), 1);
    CHECK(m.seeds.empty());
    CHECK(apply_seeds(ref, m).content_equal(ref));
}

TEST_CASE("plan_seeds is deterministic: byte-equal manifests on repeat runs") {
    Rng rng(3);
    testgen::GenOptions opts;
    opts.max_cells = 40;
    Workbook ref = testgen::random_workbook(rng, opts);
    SeedManifest a = plan_seeds(ref, 3, all_seed_kinds(), 77);
    SeedManifest b = plan_seeds(ref, 3, all_seed_kinds(), 77);
    CHECK(a == b);
    CHECK(a.to_json() == b.to_json());
    // A different seed draws a different plan.
    SeedManifest c = plan_seeds(ref, 3, all_seed_kinds(), 78);
    CHECK(a.to_json() != c.to_json());
}

TEST_CASE("bundled manifest reproduces the seeded accumulating-profit row") {
    Workbook ref = load_workbook_file(kFixtures + "/nightclub_ref.grid");
    SeedManifest m = SeedManifest::from_json(slurp(kFixtures + "/nightclub_manifest.json"));
    REQUIRE(m.seeds.size() == 1);
    CHECK(m.seeds[0].cell == CellRef{10, 4});
    CHECK(m.seeds[0].kind == SeedKind::WrongReference);

    // The running-sum formula loses its prior-accumulation term: the
    // displaced reference reads the month-profit row instead.
    Workbook seeded = apply_seeds(ref, m);
    ValueMap values = evaluate(seeded);
    const double expected[] = {4500, 4500, -2700, 100, 600, 600};
    for (int c = 0; c < 6; ++c)
        CHECK(values.at(CellRef{10, 2 + c}).number() == doctest::Approx(expected[c]));

    // plan_seeds with the frozen rng seed regenerates it exactly.
    SeedManifest replanned = plan_seeds(ref, 1, {SeedKind::WrongReference}, m.rng_seed);
    CHECK(replanned == m);
}

TEST_CASE("apply_seeds touches exactly the manifest cells") {
    Rng rng(21);
    for (int i = 0; i < 30; ++i) {
        Workbook ref = testgen::random_workbook(rng);
        int count = 1 + static_cast<int>(rng.below(3));
        SeedManifest m = plan_seeds(ref, count, all_seed_kinds(), 1000 + i);
        Workbook seeded = apply_seeds(ref, m);

        std::set<CellRef> expected;
        for (const Seed& s : m.seeds) expected.insert(s.cell);
        CHECK(content_diff_cells(ref, seeded) == expected);

        // Seeded workbooks always save and re-load cleanly.
        Workbook reloaded = load_workbook(save_workbook(seeded));
        CHECK(reloaded.content_equal(seeded));
    }
}

TEST_CASE("each seed applied alone is observable") {
    Rng rng(22);
    for (int i = 0; i < 20; ++i) {
        Workbook ref = testgen::random_workbook(rng);
        SeedManifest m = plan_seeds(ref, 2, all_seed_kinds(), 2000 + i);
        ValueMap ref_values = evaluate(ref);
        for (const Seed& s : m.seeds) {
            SeedManifest lone;
            lone.reference_name = m.reference_name;
            lone.seeds.push_back(s);
            ValueMap seeded_values = evaluate(apply_seeds(ref, lone));
            bool differs = seeded_values.size() != ref_values.size();
            for (const auto& [cell, v] : seeded_values) {
                auto it = ref_values.find(cell);
                if (it == ref_values.end() || !Value::close(it->second, v, 0.005)) differs = true;
            }
            CHECK(differs);
        }
    }
}

TEST_CASE("kind fidelity") {
    Rng rng(23);
    int typo_seen = 0, precedence_seen = 0, wrongref_seen = 0;
    for (int i = 0; i < 60; ++i) {
        Workbook ref = testgen::random_workbook(rng);
        SeedManifest m = plan_seeds(ref, 3, all_seed_kinds(), 3000 + i);
        for (const Seed& s : m.seeds) {
            switch (s.kind) {
                case SeedKind::TypoConstant: {
                    // Exactly one digit of the literal differs.
                    ++typo_seen;
                    REQUIRE(s.original.size() == s.mutated.size());
                    int diffs = 0;
                    for (std::size_t k = 0; k < s.original.size(); ++k)
                        if (s.original[k] != s.mutated[k]) ++diffs;
                    CHECK(diffs == 1);
                    break;
                }
                case SeedKind::Precedence: {
                    // Grouping changes; the operand sequence does not.
                    ++precedence_seen;
                    ExprPtr before = parse_formula(s.original);
                    ExprPtr after = parse_formula(s.mutated);
                    CHECK_FALSE(ast_equal(*before, *after));
                    CHECK(leaf_sequence(*before) == leaf_sequence(*after));
                    break;
                }
                case SeedKind::WrongReference: {
                    // Only reference operands change, by one step.
                    ++wrongref_seen;
                    auto before = leaf_sequence(*parse_formula(s.original));
                    auto after = leaf_sequence(*parse_formula(s.mutated));
                    REQUIRE(before.size() == after.size());
                    int changed = 0;
                    for (std::size_t k = 0; k < before.size(); ++k) {
                        if (before[k] == after[k]) continue;
                        ++changed;
                        auto r1 = CellRef::parse(before[k]);
                        auto r2 = CellRef::parse(after[k]);
                        if (r1 && r2) {
                            int d = std::abs(r1->row - r2->row) + std::abs(r1->col - r2->col);
                            CHECK(d == 1);
                        } else {
                            auto g1 = RangeRef::parse(before[k]);
                            auto g2 = RangeRef::parse(after[k]);
                            REQUIRE(g1.has_value());
                            REQUIRE(g2.has_value());
                            int d = std::abs(g1->top_left.row - g2->top_left.row) +
                                    std::abs(g1->top_left.col - g2->top_left.col);
                            CHECK(d == 1);
                            CHECK(g1->rows() == g2->rows());
                            CHECK(g1->cols() == g2->cols());
                        }
                    }
                    CHECK(changed == 1);
                    break;
                }
                default: break;
            }
        }
    }
    // The generator must actually exercise these kinds.
    CHECK(typo_seen > 0);
    CHECK(precedence_seen > 0);
    CHECK(wrongref_seen > 0);
}

TEST_CASE("apply_seeds rejects a manifest built against different content") {
    Workbook ref = load_workbook_file(kFixtures + "/nightclub_ref.grid");
    SeedManifest m = SeedManifest::from_json(slurp(kFixtures + "/nightclub_manifest.json"));
    Workbook other = ref;
    other.set_cell(CellRef{10, 4}, Cell::formula("=C10+D9+0"));
    try {
        apply_seeds(other, m);
        FAIL("expected MismatchError");
    } catch (const MismatchError& e) {
        CHECK(std::string(e.what()).find("D10") != std::string::npos);
    }
}

TEST_CASE("infeasible plans name the dead kind") {
    // No ranges anywhere: RANGE_OMISSION applies to no cell.
    Workbook wb("t");
    wb.set_cell(CellRef{1, 1}, Cell::number(5.0));
    wb.set_cell(CellRef{2, 1}, Cell::formula("=A1+1"));
    try {
        plan_seeds(wb, 1, {SeedKind::RangeOmission}, 9);
        FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
        CHECK(std::string(e.what()).find("RANGE_OMISSION") != std::string::npos);
    }

    // More seeds than eligible cells.
    CHECK_THROWS_AS(plan_seeds(wb, 5, all_seed_kinds(), 9), InfeasibleError);

    // Reference with an error value is rejected up front.
    Workbook bad("bad");
    bad.set_cell(CellRef{1, 1}, Cell::formula("=1/0"));
    CHECK_THROWS_AS(plan_seeds(bad, 1, all_seed_kinds(), 9), InfeasibleError);
}

TEST_CASE("manifest JSON round-trips") {
    SeedManifest m;
    m.rng_seed = 114;
    m.reference_name = "nightclub";
    m.seeds.push_back(Seed{CellRef{10, 4}, SeedKind::WrongReference, "=C10+D9", "=C9+D9"});
    CHECK(SeedManifest::from_json(m.to_json()) == m);
    CHECK_THROWS_AS(SeedManifest::from_json("{"), Error);
    CHECK_THROWS_AS(SeedManifest::from_json("{\"rng_seed\":1}"), Error);
}
