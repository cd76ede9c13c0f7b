#include <doctest.h>

#include "generators.hpp"
#include "sheetaudit/error.hpp"
#include "sheetaudit/workbook.hpp"

using namespace sheetaudit;

namespace {
const std::string kFixtures = SHEETAUDIT_FIXTURE_DIR;
}

TEST_CASE("night-club grid loads with 6 data columns and 9 labeled rows") {
    Workbook wb = load_workbook_file(kFixtures + "/nightclub_ref.grid");
    CHECK(wb.name() == "nightclub");

    auto extent = wb.used_extent();
    REQUIRE(extent.has_value());
    CHECK(extent->bottom_right == CellRef{10, 7});  // rows 1..10, cols A..G

    // Month header plus six data columns.
    CHECK(wb.cell(CellRef{1, 2})->text().text == "Jan");
    CHECK(wb.cell(CellRef{1, 7})->text().text == "June");

    // Nine labeled rows under the header, each with a column-A label.
    int labeled = 0;
    for (int r = 2; r <= 10; ++r)
        if (const Cell* c = wb.cell(CellRef{r, 1}); c && c->is_text()) ++labeled;
    CHECK(labeled == 9);

    // '='-prefixed fields parsed as formulas, other fields as literals.
    CHECK(wb.cell(CellRef{2, 2})->is_number());
    CHECK(wb.cell(CellRef{4, 2})->is_formula());
    CHECK(wb.cell(CellRef{4, 2})->source_text() == "=B2+B3");

    REQUIRE(wb.guide().has_value());
    CHECK(wb.guide()->builder == "B. Breakspeare");
    CHECK(wb.regions().size() == 3);
    CHECK(wb.regions().at("profit") == *RangeRef::parse("B9:G10"));
}

TEST_CASE("empty file loads as an empty workbook") {
    Workbook wb = load_workbook(std::string(""));
    CHECK(wb.cells().empty());
    CHECK_FALSE(wb.used_extent().has_value());
    CHECK(save_workbook(wb) == "");
}

TEST_CASE("syntax error in a field reports its grid position") {
    try {
        load_workbook(std::string("a,b\nok,=SUM(\n"));
        FAIL("expected LoadError");
    } catch (const LoadError& e) {
        CHECK(e.row() == 2);
        CHECK(e.column() == 2);
    }
}

TEST_CASE("quoted fields carry commas and quotes") {
    Workbook wb = load_workbook(std::string("\"a,b\",\"say \"\"hi\"\"\",3\n"));
    CHECK(wb.cell(CellRef{1, 1})->text().text == "a,b");
    CHECK(wb.cell(CellRef{1, 2})->text().text == "say \"hi\"");
    CHECK(wb.cell(CellRef{1, 3})->number().value == 3);
}

TEST_CASE("header validation") {
    CHECK_THROWS_AS(load_workbook(std::string("#guide builder=x;date=nope;purpose=y\n")), LoadError);
    CHECK_THROWS_AS(load_workbook(std::string("#guide builder=;date=2000-01-01;purpose=y\n")), LoadError);
    CHECK_THROWS_AS(load_workbook(std::string("#region r=A1:ZZ9\n")), LoadError);
    CHECK_THROWS_AS(load_workbook(std::string("#region a=A1:B2\n#region a=A1:B2\nx\n")), LoadError);
    CHECK_THROWS_AS(load_workbook(std::string("#bogus thing\n")), LoadError);
    // Region outside the used extent.
    CHECK_THROWS_AS(load_workbook(std::string("#region r=A1:C3\nx,y\n")), LoadError);
    // Valid guide parses.
    Workbook wb = load_workbook(std::string("#guide builder=b;date=2000-02-29;purpose=p\nx\n"));
    CHECK(wb.guide()->date == "2000-02-29");
    CHECK_THROWS_AS(load_workbook(std::string("#guide builder=b;date=2001-02-29;purpose=p\nx\n")),
                    LoadError);
}

TEST_CASE("save/load round-trips generated workbooks") {
    Rng rng(99);
    for (int i = 0; i < 40; ++i) {
        testgen::GenOptions opts;
        opts.with_guide = (i % 3 == 0);
        Workbook wb = testgen::random_workbook(rng, opts);
        Workbook reloaded = load_workbook(save_workbook(wb));
        CHECK(wb.content_equal(reloaded));
        CHECK(reloaded.name() == wb.name());
        CHECK(save_workbook(reloaded) == save_workbook(wb));
    }
}

TEST_CASE("grid size limits are enforced") {
    std::string too_wide;
    for (int i = 0; i < 27; ++i) too_wide += "x,";
    CHECK_THROWS_AS(load_workbook(too_wide + "\n"), LoadError);
}
