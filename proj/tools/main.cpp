#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sheetaudit/audit.hpp"
#include "sheetaudit/cohort.hpp"
#include "sheetaudit/error.hpp"
#include "sheetaudit/evaluate.hpp"
#include "sheetaudit/seeding.hpp"

namespace fs = std::filesystem;
using namespace sheetaudit;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// Failed runs must never leave a half-written file behind: write to a
// temp name in the same directory, then rename into place.
void atomic_write(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write file: " + tmp.string());
        out << content;
        if (!out.good()) throw Error("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string today_iso() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    localtime_r(&now, &tm);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday);
    return buf;
}

json value_to_json(const Value& v) {
    if (v.is_empty()) return nullptr;
    if (v.is_number()) return v.number();
    if (v.is_text()) return v.text();
    return to_string(v.error());
}

// --- eval ------------------------------------------------------------

void cmd_eval(const std::string& grid_path, bool as_json) {
    Workbook wb = load_workbook_file(grid_path);
    ValueMap values = evaluate(wb);

    if (as_json) {
        json j;
        j["name"] = wb.name();
        j["cells"] = json::object();
        for (const auto& [ref, v] : values) j["cells"][ref.to_string()] = value_to_json(v);
        std::cout << j.dump(2) << "\n";
        return;
    }

    auto extent = wb.used_extent();
    if (!extent) {
        std::cout << "(empty workbook)\n";
        return;
    }
    int max_row = extent->bottom_right.row;
    int max_col = extent->bottom_right.col;

    // Column-aligned table, numbers in currency style.
    std::vector<std::vector<std::string>> table(static_cast<std::size_t>(max_row + 1));
    std::vector<std::size_t> width(static_cast<std::size_t>(max_col + 1), 1);
    for (int r = 0; r <= max_row; ++r) {
        auto& row = table[static_cast<std::size_t>(r)];
        row.resize(static_cast<std::size_t>(max_col + 1));
        for (int c = 1; c <= max_col; ++c) {
            std::string text;
            if (r == 0) {
                text = std::string(1, static_cast<char>('A' + c - 1));
            } else {
                auto it = values.find(CellRef{r, c});
                if (it != values.end())
                    text = it->second.is_number() ? format_currency(it->second.number())
                                                  : it->second.to_display();
            }
            width[static_cast<std::size_t>(c)] =
                std::max(width[static_cast<std::size_t>(c)], text.size());
            row[static_cast<std::size_t>(c)] = std::move(text);
        }
    }
    for (int r = 0; r <= max_row; ++r) {
        std::string line;
        if (r == 0) {
            line = "    ";
        } else {
            char buf[8];
            std::snprintf(buf, sizeof buf, "%3d ", r);
            line = buf;
        }
        for (int c = 1; c <= max_col; ++c) {
            const std::string& text = table[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            line += text;
            line += std::string(width[static_cast<std::size_t>(c)] - text.size() + 2, ' ');
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        std::cout << line << "\n";
    }
}

// --- seed ------------------------------------------------------------

void cmd_seed(const std::string& grid_path, int count, const std::string& kinds_csv,
              std::uint64_t rng_seed, const std::string& out_dir, bool as_json) {
    Workbook ref = load_workbook_file(grid_path);

    std::set<SeedKind> kinds;
    if (kinds_csv.empty()) {
        kinds = all_seed_kinds();
    } else {
        std::istringstream in(kinds_csv);
        std::string token;
        while (std::getline(in, token, ',')) kinds.insert(seed_kind_from_string(token));
    }

    SeedManifest manifest = plan_seeds(ref, count, kinds, rng_seed);
    Workbook seeded = apply_seeds(ref, manifest);

    fs::path dir = out_dir;
    fs::create_directories(dir);
    std::string stem = fs::path(grid_path).stem().string();
    fs::path seeded_path = dir / (stem + "_seeded.grid");
    fs::path manifest_path = dir / (stem + "_manifest.json");
    atomic_write(seeded_path, save_workbook(seeded));
    atomic_write(manifest_path, manifest.to_json());

    if (as_json) {
        json j;
        j["seeded"] = seeded_path.string();
        j["manifest"] = manifest_path.string();
        j["seed_count"] = manifest.seeds.size();
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "planted " << manifest.seeds.size() << " seed(s) in " << ref.name() << "\n";
        std::cout << "seeded grid: " << seeded_path.string() << "\n";
        std::cout << "manifest (instructor-only): " << manifest_path.string() << "\n";
    }
}

// --- diff ------------------------------------------------------------

json diff_to_json(const std::vector<Divergence>& diffs) {
    json arr = json::array();
    for (const Divergence& d : diffs) {
        arr.push_back({{"cell", d.cell.to_string()},
                       {"classification",
                        d.classification == DivergenceClass::Root ? "ROOT" : "PROPAGATED"},
                       {"reference_value", value_to_json(d.reference_value)},
                       {"subject_value", value_to_json(d.subject_value)}});
    }
    return json{{"divergences", std::move(arr)}};
}

void cmd_diff(const std::string& ref_path, const std::string& subject_path, bool as_json) {
    Workbook ref = load_workbook_file(ref_path);
    Workbook subject = load_workbook_file(subject_path);
    auto diffs = diff_workbooks(ref, subject);

    if (as_json) {
        std::cout << diff_to_json(diffs).dump(2) << "\n";
        return;
    }
    int roots = 0, propagated = 0;
    for (const Divergence& d : diffs) {
        bool root = d.classification == DivergenceClass::Root;
        (root ? roots : propagated) += 1;
        std::cout << (root ? "ROOT       " : "PROPAGATED ") << d.cell.to_string() << ": reference "
                  << d.reference_value.to_display() << ", subject " << d.subject_value.to_display()
                  << "\n";
    }
    std::cout << diffs.size() << " divergence(s): " << roots << " root, " << propagated
              << " propagated\n";
}

// --- self-audit --------------------------------------------------------

void cmd_self_audit(const std::string& grid_path, const std::string& declare_path,
                    const std::string& risk_path, bool as_json) {
    Workbook wb = load_workbook_file(grid_path);
    SelfAuditChecklist declarations = SelfAuditChecklist::from_json(slurp(declare_path));
    std::optional<RiskTable> risk;
    if (!risk_path.empty()) risk = RiskTable::from_json(slurp(risk_path));

    SelfAuditReport report = self_audit(wb, declarations, risk);
    if (as_json) {
        std::cout << report.to_json();
        return;
    }
    std::cout << "Self-audit checklist for " << wb.name() << "\n";
    for (const SelfAuditItem& item : report.items) {
        std::cout << "  " << (item.reported ? "yes" : "no ") << "  " << item.name;
        if (!item.note.empty()) std::cout << "  [" << item.note << "]";
        std::cout << "\n";
    }
    std::cout << report.discrepancies << " discrepancy(ies) between declarations and evidence\n";
}

// --- peer-audit ----------------------------------------------------------

void cmd_peer_audit(const std::string& subject_path, const std::string& ref_path,
                    const std::string& script_path, const std::string& auditor,
                    const std::string& audited, std::string date, const std::string& out_dir,
                    bool as_json) {
    Workbook subject = load_workbook_file(subject_path);
    Workbook ref = load_workbook_file(ref_path);
    AuditScript script = AuditScript::from_json(slurp(script_path));
    if (date.empty()) date = today_iso();
    if (!valid_date(date)) throw Error("--date must be YYYY-MM-DD");

    AuditReport report = run_audit_script(subject, ref, script, auditor, audited, date);

    fs::path dir = out_dir;
    fs::create_directories(dir);
    std::string stem = fs::path(subject_path).stem().string();
    fs::path json_path = dir / (stem + "_report.json");
    fs::path text_path = dir / (stem + "_report.txt");
    atomic_write(json_path, report.to_json());
    atomic_write(text_path, report.render_text());

    if (as_json) {
        std::cout << report.to_json();
    } else {
        std::cout << report.render_text();
        std::cout << "\nwrote " << json_path.string() << " and " << text_path.string() << "\n";
    }
}

// --- pair -----------------------------------------------------------------

std::vector<std::string> read_roster(const std::string& path) {
    std::istringstream in(slurp(path));
    std::vector<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) names.push_back(line);
    }
    return names;
}

void cmd_pair(const std::string& roster_path, std::uint64_t rng_seed, const std::string& out_path,
              bool as_json) {
    PairingAssignment pairing = make_pairing(read_roster(roster_path), rng_seed);
    if (!out_path.empty()) atomic_write(out_path, pairing.to_json());

    if (as_json) {
        std::cout << pairing.to_json();
        return;
    }
    std::cout << "Audit ring (each audits the next, wrapping to the top):\n";
    for (const std::string& name : pairing.ring)
        std::cout << "  " << name << " -> " << pairing.edges.at(name) << "\n";
    if (!out_path.empty()) std::cout << "wrote " << out_path << "\n";
}

// --- grade -------------------------------------------------------------------

void cmd_grade(const std::string& report_path, const std::string& manifest_path,
               const std::string& ref_path, const std::string& subject_path, bool as_json) {
    AuditReport report = AuditReport::from_json(slurp(report_path));
    SeedManifest manifest = SeedManifest::from_json(slurp(manifest_path));
    Workbook ref = load_workbook_file(ref_path);
    Workbook subject = load_workbook_file(subject_path);

    AuditorGrade grade = grade_auditor(report, manifest, ref, subject);
    if (as_json) {
        std::cout << grade.to_json();
        return;
    }
    std::cout << "Auditor: " << grade.auditor << "\n";
    std::cout << "  true findings:  " << grade.true_findings << "\n";
    std::cout << "  false findings: " << grade.false_findings << "\n";
    std::cout << "  missed:         " << grade.missed << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "  precision %.2f, recall %.2f\n", grade.precision, grade.recall);
    std::cout << buf;
}

// --- metrics -------------------------------------------------------------------

std::set<CellRef> root_cells_from_diff_json(const std::string& text) {
    std::set<CellRef> out;
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.contains("divergences")) throw Error("malformed diff JSON");
    for (const auto& d : j.at("divergences"))
        if (d.at("classification").get<std::string>() == "ROOT")
            out.insert(CellRef::parse_or_throw(d.at("cell").get<std::string>()));
    return out;
}

void cmd_metrics(const std::string& dir, bool as_json) {
    std::vector<fs::path> grids;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".grid")
            grids.push_back(entry.path());
    std::sort(grids.begin(), grids.end());
    if (grids.empty()) throw Error("no .grid files in " + dir);

    std::vector<SheetResult> results;
    for (const fs::path& grid : grids) {
        SheetResult result;
        result.workbook = load_workbook_file(grid);
        fs::path manifest_path = grid.parent_path() / (grid.stem().string() + ".manifest.json");
        fs::path diff_path = grid.parent_path() / (grid.stem().string() + ".diff.json");
        if (fs::exists(manifest_path)) {
            SeedManifest m = SeedManifest::from_json(slurp(manifest_path));
            for (const Seed& s : m.seeds) result.erroneous_cells.insert(s.cell);
        } else if (fs::exists(diff_path)) {
            result.erroneous_cells = root_cells_from_diff_json(slurp(diff_path));
        } else {
            throw Error("no " + manifest_path.filename().string() + " or " +
                        diff_path.filename().string() + " beside " + grid.filename().string());
        }
        results.push_back(std::move(result));
    }

    CorpusMetrics metrics = compute_metrics(results);
    if (as_json) {
        std::cout << metrics.to_json();
        return;
    }
    std::cout << "sheets: " << metrics.sheets_total << ", with errors: " << metrics.sheets_with_errors
              << " (" << metrics.pct_with_errors_percent() << "%)\n";
    char buf[128];
    std::snprintf(buf, sizeof buf, "cell error rate: %d/%d formula cells (%.1f%%)\n",
                  metrics.erroneous_formula_cells, metrics.formula_cells_total,
                  metrics.cell_error_rate * 100.0);
    std::cout << buf;
}

// --- tally ------------------------------------------------------------------------

void cmd_tally(const std::string& responses_path, bool as_json) {
    FeedbackTally tally = tally_feedback(parse_responses(slurp(responses_path)));
    if (as_json) {
        std::cout << tally.to_json();
        return;
    }
    std::cout << tally.respondents << " respondents\n";
    for (int q = 0; q < kFeedbackQuestions; ++q) {
        const QuestionTally& t = tally.questions[static_cast<std::size_t>(q)];
        std::cout << "  Q" << (q + 1) << ": yes " << t.yes << ", no/not-sure " << t.no << "  ("
                  << t.yes_percent << "% yes)\n";
    }
}

// --- verify-bundle -------------------------------------------------------------------

int cmd_verify_bundle(const std::string& ref_path, const std::string& seeded_path,
                      const std::string& manifest_path, const std::string& script_path,
                      const std::string& roster_path) {
    Workbook ref = load_workbook_file(ref_path);
    Workbook seeded = load_workbook_file(seeded_path);
    SeedManifest manifest = SeedManifest::from_json(slurp(manifest_path));
    AuditScript script = AuditScript::from_json(slurp(script_path));

    int failures = 0;
    auto check = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
        if (!ok) ++failures;
    };

    check("manifest names the reference", manifest.reference_name == ref.name());

    bool applies = true;
    std::string apply_note;
    try {
        applies = apply_seeds(ref, manifest).content_equal(seeded);
    } catch (const Error& e) {
        applies = false;
        apply_note = e.what();
    }
    check("seeded grid = apply_seeds(reference, manifest)", applies);
    if (!apply_note.empty()) std::cout << "      " << apply_note << "\n";

    AuditReport clean = run_audit_script(ref, ref, script);
    check("script awards full marks on the reference (" + std::to_string(clean.total_mark) + "/" +
              std::to_string(clean.max_mark) + ")",
          clean.total_mark == clean.max_mark);

    AuditReport seeded_run = run_audit_script(seeded, ref, script);
    check("script does not award full marks on the seeded grid (" +
              std::to_string(seeded_run.total_mark) + "/" + std::to_string(seeded_run.max_mark) + ")",
          seeded_run.total_mark < seeded_run.max_mark);

    if (!roster_path.empty()) {
        bool ok = true;
        std::string note;
        try {
            make_pairing(read_roster(roster_path), 1);
        } catch (const Error& e) {
            ok = false;
            note = e.what();
        }
        check("roster admits a valid pairing", ok);
        if (!note.empty()) std::cout << "      " << note << "\n";
    }

    std::cout << (failures == 0 ? "bundle OK\n" : "bundle INVALID\n");
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sheetaudit: evaluate, seed, audit, and grade small spreadsheet models"};
    app.require_subcommand(1);

    // eval
    std::string eval_grid;
    bool eval_json = false;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a grid and print the computed values");
    eval_cmd->add_option("grid", eval_grid, "grid file")->required();
    eval_cmd->add_flag("--json", eval_json, "structured output");

    // seed
    std::string seed_grid, seed_kinds, seed_out = ".";
    int seed_count = 1;
    std::uint64_t seed_rng = 0;
    bool seed_json = false;
    auto* seed_cmd = app.add_subcommand("seed", "Plant taxonomy errors into a reference grid");
    seed_cmd->add_option("grid", seed_grid, "reference grid file")->required();
    seed_cmd->add_option("--count", seed_count, "number of seeds")->required();
    seed_cmd->add_option("--kinds", seed_kinds, "comma-separated error kinds (default: all)");
    seed_cmd->add_option("--seed", seed_rng, "RNG seed")->required();
    seed_cmd->add_option("--out-dir", seed_out, "output directory");
    seed_cmd->add_flag("--json", seed_json, "structured output");

    // diff
    std::string diff_ref, diff_subject;
    bool diff_json = false;
    auto* diff_cmd = app.add_subcommand("diff", "Divergences of a subject against its reference");
    diff_cmd->add_option("reference", diff_ref, "reference grid")->required();
    diff_cmd->add_option("subject", diff_subject, "subject grid")->required();
    diff_cmd->add_flag("--json", diff_json, "structured output");

    // self-audit
    std::string sa_grid, sa_declare, sa_risk;
    bool sa_json = false;
    auto* sa_cmd = app.add_subcommand("self-audit", "Pre-flight checklist with evidence overrides");
    sa_cmd->add_option("grid", sa_grid, "grid file")->required();
    sa_cmd->add_option("--declare", sa_declare, "declarations JSON")->required();
    sa_cmd->add_option("--risk", sa_risk, "risk table JSON");
    sa_cmd->add_flag("--json", sa_json, "structured output");

    // peer-audit
    std::string pa_subject, pa_ref, pa_script, pa_auditor, pa_audited, pa_date, pa_out = ".";
    bool pa_json = false;
    auto* pa_cmd = app.add_subcommand("peer-audit", "Run an audit script and write the report");
    pa_cmd->add_option("subject", pa_subject, "audited grid")->required();
    pa_cmd->add_option("--ref", pa_ref, "reference grid")->required();
    pa_cmd->add_option("--script", pa_script, "audit script JSON")->required();
    pa_cmd->add_option("--auditor", pa_auditor, "auditor name")->required();
    pa_cmd->add_option("--audited", pa_audited, "audited student name")->required();
    pa_cmd->add_option("--date", pa_date, "report date YYYY-MM-DD (default: today)");
    pa_cmd->add_option("--out-dir", pa_out, "output directory");
    pa_cmd->add_flag("--json", pa_json, "structured output");

    // pair
    std::string pair_roster, pair_out;
    std::uint64_t pair_seed = 0;
    bool pair_json = false;
    auto* pair_cmd = app.add_subcommand("pair", "Constrained random auditor pairing");
    pair_cmd->add_option("roster", pair_roster, "one name per line")->required();
    pair_cmd->add_option("--seed", pair_seed, "RNG seed")->required();
    pair_cmd->add_option("--out", pair_out, "write the pairing JSON here");
    pair_cmd->add_flag("--json", pair_json, "structured output");

    // grade
    std::string grade_report, grade_manifest, grade_ref, grade_subject;
    bool grade_json = false;
    auto* grade_cmd = app.add_subcommand("grade", "Grade an audit report against ground truth");
    grade_cmd->add_option("report", grade_report, "audit report JSON")->required();
    grade_cmd->add_option("--manifest", grade_manifest, "seed manifest JSON")->required();
    grade_cmd->add_option("--ref", grade_ref, "reference grid")->required();
    grade_cmd->add_option("--subject", grade_subject, "audited grid")->required();
    grade_cmd->add_flag("--json", grade_json, "structured output");

    // metrics
    std::string metrics_dir;
    bool metrics_json = false;
    auto* metrics_cmd = app.add_subcommand("metrics", "Corpus error metrics over a results directory");
    metrics_cmd->add_option("results-dir", metrics_dir, "directory of .grid + manifest/diff pairs")
        ->required();
    metrics_cmd->add_flag("--json", metrics_json, "structured output");

    // tally
    std::string tally_path;
    bool tally_json = false;
    auto* tally_cmd = app.add_subcommand("tally", "Tally a 5-question feedback response file");
    tally_cmd->add_option("responses", tally_path, "responses file")->required();
    tally_cmd->add_flag("--json", tally_json, "structured output");

    // verify-bundle
    std::string vb_ref, vb_seeded, vb_manifest, vb_script, vb_roster;
    auto* vb_cmd = app.add_subcommand("verify-bundle", "Self-test an exercise bundle");
    vb_cmd->add_option("--ref", vb_ref, "reference grid")->required();
    vb_cmd->add_option("--seeded", vb_seeded, "seeded grid")->required();
    vb_cmd->add_option("--manifest", vb_manifest, "seed manifest JSON")->required();
    vb_cmd->add_option("--script", vb_script, "audit script JSON")->required();
    vb_cmd->add_option("--roster", vb_roster, "optional roster file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*eval_cmd) cmd_eval(eval_grid, eval_json);
        if (*seed_cmd) cmd_seed(seed_grid, seed_count, seed_kinds, seed_rng, seed_out, seed_json);
        if (*diff_cmd) cmd_diff(diff_ref, diff_subject, diff_json);
        if (*sa_cmd) cmd_self_audit(sa_grid, sa_declare, sa_risk, sa_json);
        if (*pa_cmd)
            cmd_peer_audit(pa_subject, pa_ref, pa_script, pa_auditor, pa_audited, pa_date, pa_out,
                           pa_json);
        if (*pair_cmd) cmd_pair(pair_roster, pair_seed, pair_out, pair_json);
        if (*grade_cmd) cmd_grade(grade_report, grade_manifest, grade_ref, grade_subject, grade_json);
        if (*metrics_cmd) cmd_metrics(metrics_dir, metrics_json);
        if (*tally_cmd) cmd_tally(tally_path, tally_json);
        if (*vb_cmd) return cmd_verify_bundle(vb_ref, vb_seeded, vb_manifest, vb_script, vb_roster);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
