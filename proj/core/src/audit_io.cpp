#include <json.hpp>

#include "sheetaudit/audit.hpp"
#include "sheetaudit/error.hpp"

namespace sheetaudit {

namespace {

using nlohmann::json;

json step_to_json(const AuditStep& step) {
    json j;
    std::visit(
        [&](const auto& action) {
            using T = std::decay_t<decltype(action)>;
            if constexpr (std::is_same_v<T, SetInputStep>) {
                j["kind"] = "SET_INPUT";
                j["cell"] = action.cell.to_string();
                j["value"] = action.literal;
            } else if constexpr (std::is_same_v<T, ExpectValueStep>) {
                j["kind"] = "EXPECT_VALUE";
                j["cell"] = action.cell.to_string();
                j["expected"] = action.expected;
                j["tolerance"] = action.tolerance;
            } else if constexpr (std::is_same_v<T, CheckGuideFieldStep>) {
                j["kind"] = "CHECK_GUIDE_FIELD";
                j["field"] = to_string(action.field);
            } else if constexpr (std::is_same_v<T, CheckRegionExistsStep>) {
                j["kind"] = "CHECK_REGION_EXISTS";
                j["region"] = action.region;
            } else {
                j["kind"] = "CHECK_KEY_FUNCTIONS";
                j["count"] = action.count;
                if (!action.region.empty()) j["region"] = action.region;
            }
        },
        step.action);
    j["marks"] = step.marks;
    return j;
}

AuditStep step_from_json(const json& j) {
    AuditStep step;
    step.marks = j.value("marks", 0);
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "SET_INPUT") {
        SetInputStep s;
        s.cell = CellRef::parse_or_throw(j.at("cell").get<std::string>());
        const auto& v = j.at("value");
        s.literal = v.is_string() ? v.get<std::string>() : format_number(v.get<double>());
        if (step.marks != 0) throw Error("SET_INPUT steps carry 0 marks");
        step.action = std::move(s);
    } else if (kind == "EXPECT_VALUE") {
        ExpectValueStep s;
        s.cell = CellRef::parse_or_throw(j.at("cell").get<std::string>());
        s.expected = j.at("expected").get<double>();
        s.tolerance = j.value("tolerance", 0.005);
        step.action = std::move(s);
    } else if (kind == "CHECK_GUIDE_FIELD") {
        step.action = CheckGuideFieldStep{guide_field_from_string(j.at("field").get<std::string>())};
    } else if (kind == "CHECK_REGION_EXISTS") {
        step.action = CheckRegionExistsStep{j.at("region").get<std::string>()};
    } else if (kind == "CHECK_KEY_FUNCTIONS") {
        CheckKeyFunctionsStep s;
        s.count = j.value("count", 3);
        s.region = j.value("region", std::string());
        if (s.count < 1) throw Error("CHECK_KEY_FUNCTIONS count must be positive");
        step.action = std::move(s);
    } else {
        throw Error("unknown audit step kind '" + kind + "'");
    }
    if (step.marks < 0) throw Error("step marks must be non-negative");
    return step;
}

}  // namespace

std::string AuditScript::to_json() const {
    json j;
    j["title"] = title;
    j["steps"] = json::array();
    for (const AuditStep& s : steps) j["steps"].push_back(step_to_json(s));
    return j.dump(2) + "\n";
}

AuditScript AuditScript::from_json(const std::string& text) {
    AuditScript script;
    try {
        json j = json::parse(text);
        script.title = j.value("title", "");
        for (const auto& item : j.at("steps")) script.steps.push_back(step_from_json(item));
    } catch (const json::exception& e) {
        throw Error(std::string("malformed audit script JSON: ") + e.what());
    }
    return script;
}

std::string AuditReport::to_json() const {
    json j;
    j["auditor"] = auditor;
    j["audited"] = audited;
    j["date"] = date;
    j["workbook_name"] = workbook_name;
    j["total_mark"] = total_mark;
    j["max_mark"] = max_mark;
    j["narrative"] = narrative;
    j["findings"] = json::array();
    for (const AuditFinding& f : findings) {
        json cells = json::array();
        for (CellRef c : f.cells) cells.push_back(c.to_string());
        j["findings"].push_back({{"step", f.step},
                                 {"kind", f.kind},
                                 {"passed", f.passed},
                                 {"observed", f.observed},
                                 {"marks_awarded", f.marks_awarded},
                                 {"cells", std::move(cells)}});
    }
    return j.dump(2) + "\n";
}

AuditReport AuditReport::from_json(const std::string& text) {
    AuditReport r;
    try {
        json j = json::parse(text);
        r.auditor = j.value("auditor", "");
        r.audited = j.value("audited", "");
        r.date = j.value("date", "");
        r.workbook_name = j.at("workbook_name").get<std::string>();
        r.total_mark = j.at("total_mark").get<int>();
        r.max_mark = j.value("max_mark", 0);
        r.narrative = j.value("narrative", "");
        for (const auto& item : j.at("findings")) {
            AuditFinding f;
            f.step = item.at("step").get<int>();
            f.kind = item.value("kind", "");
            f.passed = item.at("passed").get<bool>();
            f.observed = item.value("observed", "");
            f.marks_awarded = item.value("marks_awarded", 0);
            for (const auto& c : item.value("cells", json::array()))
                f.cells.push_back(CellRef::parse_or_throw(c.get<std::string>()));
            r.findings.push_back(std::move(f));
        }
    } catch (const json::exception& e) {
        throw Error(std::string("malformed audit report JSON: ") + e.what());
    }
    return r;
}

std::string AuditReport::render_text() const {
    std::string out;
    out += "PEER AUDIT REPORT\n";
    out += "=================\n";
    out += "Auditor:   " + auditor + "\n";
    out += "Audited:   " + audited + "\n";
    out += "Date:      " + date + "\n";
    out += "Workbook:  " + workbook_name + "\n\n";

    auto section = [&](const std::string& heading, std::initializer_list<const char*> kinds) {
        std::string body;
        for (const AuditFinding& f : findings) {
            for (const char* k : kinds) {
                if (f.kind != k) continue;
                body += "  [" + std::string(f.passed ? "PASS" : "FAIL") + "] " + f.observed;
                if (f.marks_awarded > 0) body += " (" + std::to_string(f.marks_awarded) + " mark)";
                body += "\n";
            }
        }
        if (!body.empty()) out += heading + "\n" + body + "\n";
    };

    section("1. User guide", {"CHECK_GUIDE_FIELD"});
    section("2. Modularisation", {"CHECK_REGION_EXISTS"});
    section("3. Key functions", {"CHECK_KEY_FUNCTIONS"});
    section("4. Sample-input tests", {"SET_INPUT", "EXPECT_VALUE"});

    out += "MARK GIVEN: " + std::to_string(total_mark) + " / " + std::to_string(max_mark) + "\n";
    if (!narrative.empty()) out += "\nNarrative:\n" + narrative + "\n";
    return out;
}

std::string RiskTable::to_json() const {
    json j;
    j["entries"] = json::array();
    for (const RiskEntry& e : entries) {
        j["entries"].push_back({{"event", e.event},
                                {"causes", e.causes},
                                {"effect", e.effect},
                                {"likelihood", e.likelihood},
                                {"impact", e.impact}});
    }
    return j.dump(2) + "\n";
}

RiskTable RiskTable::from_json(const std::string& text) {
    RiskTable t;
    try {
        json j = json::parse(text);
        for (const auto& item : j.at("entries")) {
            RiskEntry e;
            e.event = item.at("event").get<std::string>();
            for (const auto& c : item.value("causes", json::array()))
                e.causes.push_back(c.get<std::string>());
            e.effect = item.value("effect", "");
            e.likelihood = item.at("likelihood").get<int>();
            e.impact = item.at("impact").get<int>();
            t.entries.push_back(std::move(e));
        }
    } catch (const json::exception& e) {
        throw Error(std::string("malformed risk table JSON: ") + e.what());
    }
    return t;
}

std::string SelfAuditChecklist::to_json() const {
    json j;
    j["development_stages"] = development_stages;
    j["modularisation"] = modularisation;
    j["logical_model"] = logical_model;
    j["key_function_plan"] = key_function_plan;
    j["user_guide"] = user_guide;
    j["risk_table"] = risk_table;
    return j.dump(2) + "\n";
}

SelfAuditChecklist SelfAuditChecklist::from_json(const std::string& text) {
    SelfAuditChecklist c;
    try {
        json j = json::parse(text);
        c.development_stages = j.at("development_stages").get<bool>();
        c.modularisation = j.at("modularisation").get<bool>();
        c.logical_model = j.at("logical_model").get<bool>();
        c.key_function_plan = j.at("key_function_plan").get<bool>();
        c.user_guide = j.at("user_guide").get<bool>();
        c.risk_table = j.at("risk_table").get<bool>();
    } catch (const json::exception& e) {
        throw Error(std::string("malformed declarations JSON: ") + e.what());
    }
    return c;
}

std::string SelfAuditReport::to_json() const {
    json j;
    j["discrepancies"] = discrepancies;
    j["items"] = json::array();
    for (const SelfAuditItem& item : items) {
        json entry = {{"name", item.name},
                      {"declared", item.declared},
                      {"reported", item.reported},
                      {"note", item.note}};
        if (item.evidence.has_value()) entry["evidence"] = *item.evidence;
        j["items"].push_back(std::move(entry));
    }
    return j.dump(2) + "\n";
}

}  // namespace sheetaudit
