#include "sheetaudit/audit.hpp"

#include <algorithm>
#include <cmath>

#include "sheetaudit/error.hpp"
#include "sheetaudit/rng.hpp"

namespace sheetaudit {

std::vector<Divergence> diff_workbooks(const Workbook& reference, const Workbook& subject) {
    ValueMap ref_values = evaluate(reference);
    ValueMap sub_values = evaluate(subject);

    std::set<CellRef> all_cells;
    for (const auto& [ref, cell] : reference.cells()) all_cells.insert(ref);
    for (const auto& [ref, cell] : subject.cells()) all_cells.insert(ref);

    auto value_at = [](const ValueMap& m, CellRef ref) {
        auto it = m.find(ref);
        return it == m.end() ? Value::empty() : it->second;
    };
    auto source_at = [](const Workbook& wb, CellRef ref) {
        const Cell* c = wb.cell(ref);
        return c ? c->source_text() : std::string();
    };

    std::vector<Divergence> out;
    for (CellRef cell : all_cells) {
        bool content_differs = source_at(reference, cell) != source_at(subject, cell);
        Value rv = value_at(ref_values, cell);
        Value sv = value_at(sub_values, cell);
        bool value_differs = !Value::close(rv, sv, 0.005);
        if (!content_differs && !value_differs) continue;
        Divergence d;
        d.cell = cell;
        d.reference_value = rv;
        d.subject_value = sv;
        d.classification = content_differs ? DivergenceClass::Root : DivergenceClass::Propagated;
        out.push_back(std::move(d));
    }
    return out;
}

int AuditScript::total_marks() const {
    int total = 0;
    for (const AuditStep& s : steps) total += s.marks;
    return total;
}

std::string to_string(GuideField f) {
    switch (f) {
        case GuideField::Builder: return "builder";
        case GuideField::Date: return "date";
        case GuideField::Purpose: return "purpose";
    }
    return "?";
}

GuideField guide_field_from_string(const std::string& name) {
    if (name == "builder") return GuideField::Builder;
    if (name == "date") return GuideField::Date;
    if (name == "purpose") return GuideField::Purpose;
    throw Error("unknown guide field '" + name + "'");
}

GuideCheck check_user_guide(const Workbook& wb) {
    GuideCheck out;
    if (!wb.guide()) return out;
    const UserGuide& g = *wb.guide();
    out.builder = !g.builder.empty();
    out.date = !g.date.empty() && valid_date(g.date);
    out.purpose = !g.purpose.empty();
    return out;
}

namespace {

std::string describe_value(const Value& v) {
    if (v.is_empty()) return "(empty)";
    if (v.is_number()) return format_currency(v.number());
    return v.to_display();
}

struct StepRunner {
    const Workbook& reference;
    Workbook working;  // the audited copy SET_INPUT mutates
    ValueMap values;
    bool dirty = true;

    const ValueMap& current_values() {
        if (dirty) {
            values = evaluate(working);
            dirty = false;
        }
        return values;
    }

    AuditFinding run(int index, const AuditStep& step) {
        AuditFinding f;
        f.step = index;
        std::visit([&](const auto& action) { execute(action, f); }, step.action);
        f.marks_awarded = f.passed ? step.marks : 0;
        return f;
    }

    void execute(const SetInputStep& s, AuditFinding& f) {
        f.kind = "SET_INPUT";
        if (!working.cell(s.cell)) {
            f.passed = false;
            f.observed = s.cell.to_string() + " does not exist; input not applied";
            return;
        }
        working.set_cell(s.cell, Cell::from_field(s.literal));
        dirty = true;
        f.passed = true;
        f.observed = s.cell.to_string() + " set to " + s.literal;
    }

    void execute(const ExpectValueStep& s, AuditFinding& f) {
        f.kind = "EXPECT_VALUE";
        auto it = current_values().find(s.cell);
        Value v = it == current_values().end() ? Value::empty() : it->second;
        f.passed = v.is_number() && std::fabs(v.number() - s.expected) <= s.tolerance;
        f.observed = s.cell.to_string() + " = " + describe_value(v) + ", expected " +
                     format_currency(s.expected);
        if (!f.passed) f.cells.push_back(s.cell);
    }

    void execute(const CheckGuideFieldStep& s, AuditFinding& f) {
        f.kind = "CHECK_GUIDE_FIELD";
        GuideCheck check = check_user_guide(working);
        switch (s.field) {
            case GuideField::Builder: f.passed = check.builder; break;
            case GuideField::Date: f.passed = check.date; break;
            case GuideField::Purpose: f.passed = check.purpose; break;
        }
        f.observed = "user guide " + to_string(s.field) + (f.passed ? " present" : " missing");
    }

    void execute(const CheckRegionExistsStep& s, AuditFinding& f) {
        f.kind = "CHECK_REGION_EXISTS";
        f.passed = working.regions().contains(s.region);
        f.observed = "region '" + s.region + (f.passed ? "' declared" : "' not declared");
    }

    // Deterministic sample (seeded by the workbook's name) of formula
    // cells from the declared region, AST-compared against reference.
    void execute(const CheckKeyFunctionsStep& s, AuditFinding& f) {
        f.kind = "CHECK_KEY_FUNCTIONS";
        std::vector<CellRef> candidates;
        auto eligible = [&](CellRef ref) {
            const Cell* c = reference.cell(ref);
            return c && c->is_formula();
        };
        if (!s.region.empty()) {
            auto it = reference.regions().find(s.region);
            if (it == reference.regions().end()) {
                f.passed = false;
                f.observed = "key-function region '" + s.region + "' not declared in reference";
                return;
            }
            for (CellRef ref : it->second.cells())
                if (eligible(ref)) candidates.push_back(ref);
        } else {
            for (const auto& [ref, cell] : reference.cells())
                if (cell.is_formula()) candidates.push_back(ref);
        }
        if (candidates.empty()) {
            f.passed = false;
            f.observed = "no formula cells available for the key-function check";
            return;
        }

        Rng rng(fnv1a(working.name()));
        rng.shuffle(candidates);
        std::size_t take = std::min<std::size_t>(candidates.size(), static_cast<std::size_t>(s.count));
        std::vector<CellRef> sample(candidates.begin(), candidates.begin() + take);
        std::sort(sample.begin(), sample.end());

        std::string checked;
        for (CellRef ref : sample) {
            const Cell* subject_cell = working.cell(ref);
            bool match = subject_cell && subject_cell->is_formula() &&
                         ast_equal(*subject_cell->formula().ast, *reference.cell(ref)->formula().ast);
            if (!match) f.cells.push_back(ref);
            if (!checked.empty()) checked += ", ";
            checked += ref.to_string();
        }
        f.passed = f.cells.empty();
        f.observed = "key functions " + checked + (f.passed ? " match the reference" : " include mismatches");
    }
};

}  // namespace

AuditReport run_audit_script(const Workbook& subject, const Workbook& reference,
                             const AuditScript& script, const std::string& auditor,
                             const std::string& audited, const std::string& date) {
    AuditReport report;
    report.auditor = auditor;
    report.audited = audited;
    report.date = date;
    report.workbook_name = subject.name();
    report.max_mark = script.total_marks();

    StepRunner runner{reference, subject, {}, true};
    for (std::size_t i = 0; i < script.steps.size(); ++i) {
        AuditFinding f = runner.run(static_cast<int>(i), script.steps[i]);
        report.total_mark += f.marks_awarded;
        report.findings.push_back(std::move(f));
    }
    return report;
}

RiskRanking rank_risks(const RiskTable& risk, const Workbook& wb) {
    if (risk.entries.empty()) throw Error("risk table is empty");
    for (const RiskEntry& e : risk.entries) {
        if (e.likelihood < 1 || e.likelihood > 5 || e.impact < 1 || e.impact > 5)
            throw Error("risk likelihood and impact must be within 1..5");
    }

    RiskRanking out;
    for (const RiskEntry& e : risk.entries) out.ranked.push_back({e, e.likelihood * e.impact});
    std::stable_sort(out.ranked.begin(), out.ranked.end(),
                     [](const RankedRisk& a, const RankedRisk& b) { return a.score > b.score; });

    // Criticality proxy: how many live cells a formula transitively
    // reads. The bottom-line aggregates rank first.
    DependencyGraph graph = DependencyGraph::build(wb);
    std::vector<std::pair<int, CellRef>> counts;
    for (const auto& [ref, cell] : wb.cells()) {
        if (!cell.is_formula()) continue;
        int n = 0;
        for (CellRef p : graph.reachable_precedents(ref))
            if (wb.cell(p)) ++n;
        counts.emplace_back(n, ref);
    }
    std::sort(counts.begin(), counts.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::size_t i = 0; i < counts.size() && i < 5; ++i) out.hottest_cells.push_back(counts[i].second);
    return out;
}

namespace {

bool regions_modularised(const Workbook& wb) {
    if (wb.regions().empty()) return false;
    std::vector<RangeRef> ranges;
    for (const auto& [name, range] : wb.regions()) ranges.push_back(range);
    for (std::size_t i = 0; i < ranges.size(); ++i)
        for (std::size_t j = i + 1; j < ranges.size(); ++j)
            if (ranges[i].overlaps(ranges[j])) return false;
    return true;
}

SelfAuditItem make_item(const std::string& name, bool declared, std::optional<bool> evidence) {
    SelfAuditItem item;
    item.name = name;
    item.declared = declared;
    item.evidence = evidence;
    item.reported = evidence.has_value() ? *evidence : declared;
    if (evidence.has_value() && declared != *evidence) {
        item.note = *evidence ? "declared no but evidence present" : "declared yes but evidence absent";
    }
    return item;
}

}  // namespace

SelfAuditReport self_audit(const Workbook& wb, const SelfAuditChecklist& declarations,
                           const std::optional<RiskTable>& risk) {
    SelfAuditReport report;
    bool guide_present = check_user_guide(wb).builder && check_user_guide(wb).date &&
                         check_user_guide(wb).purpose;
    bool risk_present = risk.has_value() && !risk->entries.empty();

    report.items.push_back(make_item("development_stages", declarations.development_stages, std::nullopt));
    report.items.push_back(
        make_item("modularisation", declarations.modularisation, regions_modularised(wb)));
    report.items.push_back(make_item("logical_model", declarations.logical_model, std::nullopt));
    report.items.push_back(make_item("key_function_plan", declarations.key_function_plan, std::nullopt));
    report.items.push_back(make_item("user_guide", declarations.user_guide, guide_present));
    report.items.push_back(make_item("risk_table", declarations.risk_table, risk_present));

    for (const SelfAuditItem& item : report.items)
        if (!item.note.empty()) ++report.discrepancies;
    return report;
}

}  // namespace sheetaudit
