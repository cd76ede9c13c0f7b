#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sheetaudit/evaluate.hpp"
#include "sheetaudit/workbook.hpp"

namespace sheetaudit {

// --- divergence diff -------------------------------------------------

enum class DivergenceClass {
    Root,        // the cell's content differs from the reference
    Propagated,  // content identical, value wrong via some precedent
};

struct Divergence {
    CellRef cell;
    Value reference_value;
    Value subject_value;
    DivergenceClass classification = DivergenceClass::Root;
};

/// Compare a subject against its reference. Every content-differing
/// cell is reported as ROOT (extra and missing cells included); every
/// content-identical cell whose evaluated value drifts beyond the
/// 0.005 tolerance (or changes kind) is PROPAGATED. Output is in
/// row-major cell order.
std::vector<Divergence> diff_workbooks(const Workbook& reference, const Workbook& subject);

// --- audit scripts ----------------------------------------------------

/// Machine-checkable checklist steps. SET_INPUT carries no marks; the
/// rest award their full marks on pass and zero otherwise.
struct SetInputStep {
    CellRef cell;
    std::string literal;  // grid-field text: number or plain text
};
struct ExpectValueStep {
    CellRef cell;
    double expected = 0;
    double tolerance = 0.005;
};
enum class GuideField { Builder, Date, Purpose };
struct CheckGuideFieldStep {
    GuideField field;
};
struct CheckRegionExistsStep {
    std::string region;
};
struct CheckKeyFunctionsStep {
    int count = 3;
    std::string region;  // empty: sample over the whole sheet
};

struct AuditStep {
    std::variant<SetInputStep, ExpectValueStep, CheckGuideFieldStep, CheckRegionExistsStep,
                 CheckKeyFunctionsStep>
        action;
    int marks = 0;
};

struct AuditScript {
    std::string title;
    std::vector<AuditStep> steps;

    int total_marks() const;

    std::string to_json() const;
    static AuditScript from_json(const std::string& text);
};

std::string to_string(GuideField f);
GuideField guide_field_from_string(const std::string& name);

// --- audit report -----------------------------------------------------

struct AuditFinding {
    int step = 0;
    std::string kind;  // step tag, e.g. "EXPECT_VALUE"
    bool passed = false;
    std::string observed;
    int marks_awarded = 0;
    std::vector<CellRef> cells;  // cells this finding flags as wrong
};

struct AuditReport {
    std::string auditor;
    std::string audited;
    std::string date;  // YYYY-MM-DD
    std::string workbook_name;
    std::vector<AuditFinding> findings;
    int total_mark = 0;
    int max_mark = 0;
    std::string narrative;

    std::string to_json() const;
    static AuditReport from_json(const std::string& text);

    /// One-page plain-text rendering: auditor, date, workbook identity,
    /// and the findings grouped under the four peer-audit checks.
    std::string render_text() const;
};

/// Execute a script against a working copy of the subject. SET_INPUT
/// mutates the copy and triggers re-evaluation; EXPECT_VALUE compares
/// within its tolerance; guide and region checks consult workbook
/// metadata; CHECK_KEY_FUNCTIONS deterministically samples formula
/// cells (seeded by the subject's name) and compares normalized ASTs
/// against the reference. A step naming a nonexistent cell fails, it
/// never throws.
AuditReport run_audit_script(const Workbook& subject, const Workbook& reference,
                             const AuditScript& script, const std::string& auditor = "",
                             const std::string& audited = "", const std::string& date = "");

// --- user guide and self-audit -----------------------------------------

struct GuideCheck {
    bool builder = false;
    bool date = false;
    bool purpose = false;

    bool operator==(const GuideCheck&) const = default;
};

/// Field-presence check: each flag is true when the guide exists, the
/// field is non-empty, and (for date) parses as a calendar date.
GuideCheck check_user_guide(const Workbook& wb);

// --- risk table --------------------------------------------------------

struct RiskEntry {
    std::string event;
    std::vector<std::string> causes;
    std::string effect;
    int likelihood = 1;  // 1..5
    int impact = 1;      // 1..5
};

struct RiskTable {
    std::vector<RiskEntry> entries;

    std::string to_json() const;
    static RiskTable from_json(const std::string& text);
};

struct RankedRisk {
    RiskEntry entry;
    int score = 0;  // likelihood x impact
};

struct RiskRanking {
    std::vector<RankedRisk> ranked;     // descending score, ties by entry order
    std::vector<CellRef> hottest_cells;  // top-5 formula cells by how much
                                         // of the sheet they transitively read
};

/// Score and order a risk table, and point at the structurally most
/// critical formula cells of the workbook. Throws on an empty table.
RiskRanking rank_risks(const RiskTable& risk, const Workbook& wb);

// --- self-audit ---------------------------------------------------------

/// The six pre-flight declarations. Three are backed by observable
/// evidence (modularisation, user guide, risk table) and get overridden
/// by what the workbook and files actually show.
struct SelfAuditChecklist {
    bool development_stages = false;
    bool modularisation = false;
    bool logical_model = false;
    bool key_function_plan = false;
    bool user_guide = false;
    bool risk_table = false;

    std::string to_json() const;
    static SelfAuditChecklist from_json(const std::string& text);
};

struct SelfAuditItem {
    std::string name;
    bool declared = false;
    std::optional<bool> evidence;  // nullopt: declaration-only item
    bool reported = false;
    std::string note;  // filled when declaration and evidence disagree
};

struct SelfAuditReport {
    std::vector<SelfAuditItem> items;
    int discrepancies = 0;

    std::string to_json() const;
};

SelfAuditReport self_audit(const Workbook& wb, const SelfAuditChecklist& declarations,
                           const std::optional<RiskTable>& risk);

}  // namespace sheetaudit
