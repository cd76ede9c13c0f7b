#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sheetaudit/audit.hpp"
#include "sheetaudit/seeding.hpp"

namespace sheetaudit {

// --- auditor pairing ---------------------------------------------------

/// A cohort arranged as one ring: each participant audits the next
/// name, wrapping from the bottom of the list to the top. The single
/// n-cycle structure rules out self-audits, mutual pairs, and mutual
/// triples for any n >= 4.
struct PairingAssignment {
    std::uint64_t rng_seed = 0;
    std::vector<std::string> ring;
    std::map<std::string, std::string> edges;  // auditor -> auditee

    std::string to_json() const;
    static PairingAssignment from_json(const std::string& text);
};

/// Uniform random ring over the given names. Deterministic for fixed
/// (names, rng_seed). Throws InfeasibleError for fewer than 4 names
/// (a 2- or 3-ring would itself be a forbidden mutual pair/triple) and
/// Error for duplicates.
PairingAssignment make_pairing(const std::vector<std::string>& names, std::uint64_t rng_seed);

// --- auditor grading -----------------------------------------------------

struct AuditorGrade {
    std::string auditor;
    int true_findings = 0;
    int false_findings = 0;
    int missed = 0;
    double precision = 1.0;  // true/(true+false), 1 when both zero
    double recall = 1.0;     // true/(true+missed), 1 when both zero

    std::string to_json() const;
};

/// Grade a report against ground truth: cells flagged by failed
/// findings are matched (by identity) against the ROOT divergences the
/// manifest planted. Throws MismatchError when the report names a
/// different workbook or the manifest did not produce the subject.
AuditorGrade grade_auditor(const AuditReport& report, const SeedManifest& manifest,
                           const Workbook& reference, const Workbook& subject);

// --- corpus metrics -------------------------------------------------------

/// One audited sheet and the cells known to be wrong in it (from a
/// manifest or from a diff's ROOT set).
struct SheetResult {
    Workbook workbook;
    std::set<CellRef> erroneous_cells;
};

struct CorpusMetrics {
    int sheets_total = 0;
    int sheets_with_errors = 0;
    double pct_with_errors = 0;  // sheets_with_errors / sheets_total
    int formula_cells_total = 0;
    int erroneous_formula_cells = 0;
    double cell_error_rate = 0;  // erroneous formula cells / formula cells

    /// Display rounding, half-up to whole percent.
    int pct_with_errors_percent() const;

    std::string to_json() const;
};

/// Corpus-level error rates. The cell error rate counts formula cells
/// only, in both numerator and denominator. Throws on an empty corpus.
CorpusMetrics compute_metrics(const std::vector<SheetResult>& results);

// --- feedback tally ---------------------------------------------------------

inline constexpr int kFeedbackQuestions = 5;

struct QuestionTally {
    int yes = 0;
    int no = 0;           // "not sure" folds in here
    int yes_percent = 0;  // rounded half-up
};

struct FeedbackTally {
    int respondents = 0;
    std::array<QuestionTally, kFeedbackQuestions> questions;

    std::string to_json() const;
};

/// Count yes/no per question over complete 5-answer responses.
/// Throws on an empty response list.
FeedbackTally tally_feedback(const std::vector<std::array<bool, kFeedbackQuestions>>& responses);

/// Parse a responses file: one line per respondent, five comma-
/// separated answers; "yes" counts as yes, "no" and "not sure" as no.
std::vector<std::array<bool, kFeedbackQuestions>> parse_responses(const std::string& text);

/// Round half-up to a whole percent (exact integer arithmetic).
int percent_rounded(int part, int whole);

}  // namespace sheetaudit
