#include "sheetaudit/cohort.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "sheetaudit/error.hpp"
#include "sheetaudit/rng.hpp"

namespace sheetaudit {

PairingAssignment make_pairing(const std::vector<std::string>& names, std::uint64_t rng_seed) {
    if (names.size() < 4)
        throw InfeasibleError("pairing infeasible: need at least 4 participants, got " +
                              std::to_string(names.size()) +
                              " (smaller rings are forbidden mutual pairs or triples)");
    std::set<std::string> unique(names.begin(), names.end());
    if (unique.size() != names.size()) throw Error("duplicate names in roster");

    PairingAssignment out;
    out.rng_seed = rng_seed;
    out.ring = names;
    Rng rng(rng_seed);
    rng.shuffle(out.ring);
    for (std::size_t i = 0; i < out.ring.size(); ++i)
        out.edges[out.ring[i]] = out.ring[(i + 1) % out.ring.size()];
    return out;
}

AuditorGrade grade_auditor(const AuditReport& report, const SeedManifest& manifest,
                           const Workbook& reference, const Workbook& subject) {
    if (report.workbook_name != subject.name())
        throw MismatchError("report names workbook '" + report.workbook_name +
                            "' but the subject is '" + subject.name() + "'");
    if (!apply_seeds(reference, manifest).content_equal(subject))
        throw MismatchError("manifest applied to the reference does not reproduce the subject");

    std::set<CellRef> flagged;
    for (const AuditFinding& f : report.findings) {
        if (f.passed) continue;
        flagged.insert(f.cells.begin(), f.cells.end());
    }

    std::set<CellRef> roots;
    for (const Divergence& d : diff_workbooks(reference, subject))
        if (d.classification == DivergenceClass::Root) roots.insert(d.cell);

    AuditorGrade grade;
    grade.auditor = report.auditor;
    for (CellRef cell : flagged) {
        if (roots.contains(cell))
            ++grade.true_findings;
        else
            ++grade.false_findings;
    }
    for (CellRef cell : roots)
        if (!flagged.contains(cell)) ++grade.missed;

    grade.precision = (grade.true_findings + grade.false_findings) == 0
                          ? 1.0
                          : static_cast<double>(grade.true_findings) /
                                (grade.true_findings + grade.false_findings);
    grade.recall = (grade.true_findings + grade.missed) == 0
                       ? 1.0
                       : static_cast<double>(grade.true_findings) / (grade.true_findings + grade.missed);
    return grade;
}

int percent_rounded(int part, int whole) { return (part * 200 + whole) / (2 * whole); }

int CorpusMetrics::pct_with_errors_percent() const {
    return percent_rounded(sheets_with_errors, sheets_total);
}

CorpusMetrics compute_metrics(const std::vector<SheetResult>& results) {
    if (results.empty()) throw Error("metrics require a non-empty corpus");

    CorpusMetrics m;
    m.sheets_total = static_cast<int>(results.size());
    for (const SheetResult& r : results) {
        if (!r.erroneous_cells.empty()) ++m.sheets_with_errors;
        for (const auto& [ref, cell] : r.workbook.cells())
            if (cell.is_formula()) {
                ++m.formula_cells_total;
                if (r.erroneous_cells.contains(ref)) ++m.erroneous_formula_cells;
            }
    }
    m.pct_with_errors = static_cast<double>(m.sheets_with_errors) / m.sheets_total;
    m.cell_error_rate = m.formula_cells_total == 0
                            ? 0.0
                            : static_cast<double>(m.erroneous_formula_cells) / m.formula_cells_total;
    return m;
}

FeedbackTally tally_feedback(const std::vector<std::array<bool, kFeedbackQuestions>>& responses) {
    if (responses.empty()) throw Error("feedback tally requires at least one response");
    FeedbackTally t;
    t.respondents = static_cast<int>(responses.size());
    for (const auto& response : responses) {
        for (int q = 0; q < kFeedbackQuestions; ++q) {
            if (response[static_cast<std::size_t>(q)])
                ++t.questions[static_cast<std::size_t>(q)].yes;
            else
                ++t.questions[static_cast<std::size_t>(q)].no;
        }
    }
    for (auto& q : t.questions) q.yes_percent = percent_rounded(q.yes, t.respondents);
    return t;
}

namespace {

std::string normalize_answer(std::string token) {
    std::string out;
    for (char c : token) {
        if (c == ' ' || c == '\t' || c == '_' || c == '-') continue;
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

}  // namespace

std::vector<std::array<bool, kFeedbackQuestions>> parse_responses(const std::string& text) {
    std::vector<std::array<bool, kFeedbackQuestions>> out;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        std::string line = text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        pos = end == std::string::npos ? text.size() : end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::array<bool, kFeedbackQuestions> response{};
        int field = 0;
        std::size_t start = 0;
        while (true) {
            auto comma = line.find(',', start);
            std::string token = line.substr(start, comma == std::string::npos ? std::string::npos
                                                                              : comma - start);
            std::string norm = normalize_answer(token);
            if (field >= kFeedbackQuestions)
                throw Error("response line " + std::to_string(line_no) + " has more than 5 answers");
            if (norm == "yes" || norm == "y")
                response[static_cast<std::size_t>(field)] = true;
            else if (norm == "no" || norm == "n" || norm == "notsure")
                response[static_cast<std::size_t>(field)] = false;
            else
                throw Error("response line " + std::to_string(line_no) + ": unrecognized answer '" +
                            token + "'");
            ++field;
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (field != kFeedbackQuestions)
            throw Error("response line " + std::to_string(line_no) + " must answer all 5 questions");
        out.push_back(response);
    }
    return out;
}

}  // namespace sheetaudit
