#include <json.hpp>

#include "sheetaudit/cohort.hpp"
#include "sheetaudit/error.hpp"

namespace sheetaudit {

using nlohmann::json;

std::string PairingAssignment::to_json() const {
    json j;
    j["rng_seed"] = rng_seed;
    j["ring"] = ring;
    j["edges"] = edges;
    return j.dump(2) + "\n";
}

PairingAssignment PairingAssignment::from_json(const std::string& text) {
    PairingAssignment p;
    try {
        json j = json::parse(text);
        p.rng_seed = j.at("rng_seed").get<std::uint64_t>();
        p.ring = j.at("ring").get<std::vector<std::string>>();
        p.edges = j.at("edges").get<std::map<std::string, std::string>>();
    } catch (const json::exception& e) {
        throw Error(std::string("malformed pairing JSON: ") + e.what());
    }
    return p;
}

std::string AuditorGrade::to_json() const {
    json j;
    j["auditor"] = auditor;
    j["true_findings"] = true_findings;
    j["false_findings"] = false_findings;
    j["missed"] = missed;
    j["precision"] = precision;
    j["recall"] = recall;
    return j.dump(2) + "\n";
}

std::string CorpusMetrics::to_json() const {
    json j;
    j["sheets_total"] = sheets_total;
    j["sheets_with_errors"] = sheets_with_errors;
    j["pct_with_errors"] = pct_with_errors;
    j["pct_with_errors_percent"] = pct_with_errors_percent();
    j["formula_cells_total"] = formula_cells_total;
    j["erroneous_formula_cells"] = erroneous_formula_cells;
    j["cell_error_rate"] = cell_error_rate;
    return j.dump(2) + "\n";
}

std::string FeedbackTally::to_json() const {
    json j;
    j["respondents"] = respondents;
    j["questions"] = json::array();
    for (const QuestionTally& q : questions)
        j["questions"].push_back({{"yes", q.yes}, {"no", q.no}, {"yes_percent", q.yes_percent}});
    return j.dump(2) + "\n";
}

}  // namespace sheetaudit
