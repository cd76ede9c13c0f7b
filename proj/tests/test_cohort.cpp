#include <doctest.h>

#include <fstream>
#include <map>
#include <sstream>

#include "generators.hpp"
#include "sheetaudit/cohort.hpp"
#include "sheetaudit/error.hpp"

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

// Brute-force checker: walk the edges and confirm one n-cycle with no
// self-edges, 2-cycles, or 3-cycles.
void check_ring_structure(const PairingAssignment& p, std::size_t n) {
    REQUIRE(p.edges.size() == n);
    for (const auto& [a, b] : p.edges) {
        CHECK(a != b);
        CHECK(p.edges.at(b) != a);                // no mutual pair
        CHECK(p.edges.at(p.edges.at(b)) != a);    // no mutual triple
    }
    std::string cur = p.ring.front();
    std::size_t steps = 0;
    do {
        cur = p.edges.at(cur);
        ++steps;
    } while (cur != p.ring.front() && steps <= n);
    CHECK(steps == n);  // a single cycle covers everyone
}

}  // namespace

TEST_CASE("four names make a valid ring") {
    auto p = make_pairing({"A", "B", "C", "D"}, 42);
    check_ring_structure(p, 4);
    // Deterministic for a fixed seed.
    CHECK(make_pairing({"A", "B", "C", "D"}, 42).ring == p.ring);
}

TEST_CASE("rings of size two or three are forbidden mutual audits") {
    CHECK_THROWS_AS(make_pairing({"A", "B"}, 1), InfeasibleError);
    CHECK_THROWS_AS(make_pairing({"A", "B", "C"}, 1), InfeasibleError);
    CHECK_THROWS_AS(make_pairing({"A", "B", "C", "A"}, 1), Error);  // duplicates
}

TEST_CASE("every assignment passes the cycle checker across sizes and seeds") {
    std::vector<std::string> names;
    for (int i = 0; i < 20; ++i) names.push_back("s" + std::to_string(i));
    for (std::size_t n = 4; n <= 20; ++n) {
        std::vector<std::string> cohort(names.begin(), names.begin() + static_cast<long>(n));
        for (std::uint64_t seed = 1; seed <= 20; ++seed)
            check_ring_structure(make_pairing(cohort, seed), n);
    }
}

TEST_CASE("pairing JSON round-trips") {
    auto p = make_pairing({"A", "B", "C", "D", "E"}, 9);
    PairingAssignment q = PairingAssignment::from_json(p.to_json());
    CHECK(q.ring == p.ring);
    CHECK(q.edges == p.edges);
    CHECK(q.rng_seed == 9);
    CHECK_THROWS_AS(PairingAssignment::from_json("[]"), Error);
}

namespace {

AuditReport report_flagging(const std::string& workbook_name, const std::vector<CellRef>& cells) {
    AuditReport r;
    r.auditor = "Auditor";
    r.workbook_name = workbook_name;
    int step = 0;
    for (CellRef cell : cells) {
        AuditFinding f;
        f.step = step++;
        f.kind = "EXPECT_VALUE";
        f.passed = false;
        f.cells.push_back(cell);
        r.findings.push_back(f);
    }
    return r;
}

}  // namespace

TEST_CASE("auditor grading against the seeded night-club model") {
    Workbook ref = load_workbook_file(kFixtures + "/nightclub_ref.grid");
    SeedManifest m = SeedManifest::from_json(slurp(kFixtures + "/nightclub_manifest.json"));
    Workbook subject = apply_seeds(ref, m);

    SUBCASE("flagging exactly the seeded cell is a perfect audit") {
        AuditorGrade g = grade_auditor(report_flagging(subject.name(), {CellRef{10, 4}}), m, ref, subject);
        CHECK(g.true_findings == 1);
        CHECK(g.false_findings == 0);
        CHECK(g.missed == 0);
        CHECK(g.precision == doctest::Approx(1.0));
        CHECK(g.recall == doctest::Approx(1.0));
    }

    SUBCASE("flagging nothing: vacuous precision, zero recall") {
        AuditorGrade g = grade_auditor(report_flagging(subject.name(), {}), m, ref, subject);
        CHECK(g.precision == doctest::Approx(1.0));
        CHECK(g.recall == doctest::Approx(0.0));
        CHECK(g.missed == 1);
    }

    SUBCASE("wrong workbook identity is rejected") {
        CHECK_THROWS_AS(grade_auditor(report_flagging("other", {CellRef{10, 4}}), m, ref, subject),
                        MismatchError);
        // Subject that the manifest did not produce is rejected too.
        CHECK_THROWS_AS(grade_auditor(report_flagging(ref.name(), {CellRef{10, 4}}), m, ref, ref),
                        MismatchError);
    }
}

TEST_CASE("half right on a two-seed model scores 0.5/0.5") {
    Rng rng(51);
    Workbook ref;
    SeedManifest m;
    // Find a generated sheet where two seeds plant cleanly.
    for (int attempt = 0;; ++attempt) {
        REQUIRE(attempt < 20);
        ref = testgen::random_workbook(rng);
        try {
            m = plan_seeds(ref, 2, all_seed_kinds(), 321);
            break;
        } catch (const InfeasibleError&) { continue; }
    }
    Workbook subject = apply_seeds(ref, m);

    CellRef seeded = m.seeds[0].cell;
    CellRef innocent{1, 1};
    REQUIRE(innocent != m.seeds[0].cell);
    REQUIRE(innocent != m.seeds[1].cell);

    AuditorGrade g = grade_auditor(report_flagging(subject.name(), {seeded, innocent}), m, ref, subject);
    CHECK(g.true_findings == 1);
    CHECK(g.false_findings == 1);
    CHECK(g.missed == 1);
    CHECK(g.precision == doctest::Approx(0.5));
    CHECK(g.recall == doctest::Approx(0.5));
}

TEST_CASE("recall is 1 whenever the flagged set covers the root set") {
    Rng rng(52);
    for (int i = 0; i < 10; ++i) {
        Workbook ref = testgen::random_workbook(rng);
        SeedManifest m = plan_seeds(ref, 1 + static_cast<int>(rng.below(3)), all_seed_kinds(), 800 + i);
        Workbook subject = apply_seeds(ref, m);
        std::vector<CellRef> flagged;
        for (const Seed& s : m.seeds) flagged.push_back(s.cell);
        flagged.push_back(CellRef{1, 1});  // overshoot is allowed
        AuditorGrade g = grade_auditor(report_flagging(subject.name(), flagged), m, ref, subject);
        CHECK(g.recall == doctest::Approx(1.0));
        CHECK(g.precision >= 0.0);
        CHECK(g.precision <= 1.0);
    }
}

TEST_CASE("corpus metrics definitions") {
    Rng rng(53);

    SUBCASE("empty corpus is an error") {
        CHECK_THROWS_AS(compute_metrics({}), Error);
    }

    SUBCASE("zero seeded errors yield zero rates") {
        std::vector<SheetResult> corpus;
        for (int i = 0; i < 4; ++i) corpus.push_back({testgen::random_workbook(rng), {}});
        CorpusMetrics m = compute_metrics(corpus);
        CHECK(m.sheets_with_errors == 0);
        CHECK(m.pct_with_errors == doctest::Approx(0.0));
        CHECK(m.cell_error_rate == doctest::Approx(0.0));
    }

    SUBCASE("every sheet seeded once gives pct_with_errors of exactly 1") {
        std::vector<SheetResult> corpus;
        for (int i = 0; i < 6; ++i) {
            Workbook wb = testgen::random_workbook(rng);
            SeedManifest m = plan_seeds(wb, 1, all_seed_kinds(), 900 + i);
            std::set<CellRef> bad;
            for (const Seed& s : m.seeds) bad.insert(s.cell);
            corpus.push_back({wb, bad});
        }
        CorpusMetrics m = compute_metrics(corpus);
        CHECK(m.pct_with_errors == doctest::Approx(1.0));
    }

    SUBCASE("formula-cell accounting") {
        Workbook wb("tiny");
        wb.set_cell(CellRef{1, 1}, Cell::number(1.0));
        wb.set_cell(CellRef{1, 2}, Cell::number(2.0));
        wb.set_cell(CellRef{2, 1}, Cell::formula("=A1+B1"));
        wb.set_cell(CellRef{2, 2}, Cell::formula("=A1*B1"));
        // One erroneous literal and one erroneous formula: the sheet
        // counts as with-errors, but CER counts the formula cell only.
        CorpusMetrics m = compute_metrics({{wb, {CellRef{1, 1}, CellRef{2, 1}}}});
        CHECK(m.sheets_with_errors == 1);
        CHECK(m.formula_cells_total == 2);
        CHECK(m.erroneous_formula_cells == 1);
        CHECK(m.cell_error_rate == doctest::Approx(0.5));
    }
}

TEST_CASE("feedback tally counts, percentages, and conservation") {
    SUBCASE("21 of 42 yes rounds to 50 percent") {
        std::vector<std::array<bool, 5>> responses;
        for (int i = 0; i < 42; ++i)
            responses.push_back({i < 21, false, false, false, false});
        FeedbackTally t = tally_feedback(responses);
        CHECK(t.respondents == 42);
        CHECK(t.questions[0].yes == 21);
        CHECK(t.questions[0].yes_percent == 50);
    }

    SUBCASE("all-yes responses tally 100 percent everywhere") {
        std::vector<std::array<bool, 5>> responses(7, {true, true, true, true, true});
        FeedbackTally t = tally_feedback(responses);
        for (const QuestionTally& q : t.questions) {
            CHECK(q.yes == 7);
            CHECK(q.yes_percent == 100);
        }
    }

    SUBCASE("no 42-respondent count reaches exactly 72 percent") {
        // Oracle: enumerate every k, with half-up rounding; 30/42 is the
        // nearest feasible count and lands on 71.
        for (int k = 0; k <= 42; ++k) CHECK(percent_rounded(k, 42) != 72);
        CHECK(percent_rounded(30, 42) == 71);
    }

    SUBCASE("conservation: yes + no equals the respondent count") {
        Rng rng(54);
        for (int trial = 0; trial < 50; ++trial) {
            int n = 1 + static_cast<int>(rng.below(60));
            std::vector<std::array<bool, 5>> responses;
            for (int i = 0; i < n; ++i) {
                std::array<bool, 5> row{};
                for (auto& cell : row) cell = rng.below(2) == 0;
                responses.push_back(row);
            }
            FeedbackTally t = tally_feedback(responses);
            for (const QuestionTally& q : t.questions) {
                CHECK(q.yes + q.no == n);
                CHECK(q.yes_percent == percent_rounded(q.yes, n));
            }
        }
    }

    SUBCASE("empty response list is an error") {
        CHECK_THROWS_AS(tally_feedback({}), Error);
    }
}

TEST_CASE("responses file parses yes/no/not-sure and enforces shape") {
    auto rows = parse_responses("yes,no,Not Sure,YES,no\nno,no,no,no,yes\n");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::array<bool, 5>{true, false, false, true, false});
    CHECK(rows[1] == std::array<bool, 5>{false, false, false, false, true});

    CHECK_THROWS_AS(parse_responses("yes,no\n"), Error);
    CHECK_THROWS_AS(parse_responses("yes,no,maybe,yes,no\n"), Error);

    // The bundled fixture reproduces the published feedback column.
    FeedbackTally t = tally_feedback(parse_responses(slurp(kFixtures + "/feedback_responses.txt")));
    CHECK(t.respondents == 42);
    CHECK(t.questions[0].yes_percent == 50);
    CHECK(t.questions[1].yes_percent == 64);
    CHECK(t.questions[2].yes_percent == 71);
    CHECK(t.questions[3].yes_percent == 45);
    CHECK(t.questions[4].yes_percent == 55);
}
