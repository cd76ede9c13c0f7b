#include "sheetaudit/seeding.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <optional>

#include "sheetaudit/error.hpp"
#include "sheetaudit/evaluate.hpp"
#include "sheetaudit/rng.hpp"

namespace sheetaudit {

std::set<SeedKind> formula_seed_kinds() {
    return {SeedKind::Precedence, SeedKind::WrongReference, SeedKind::RangeOmission,
            SeedKind::FormulaToConstant};
}

std::set<SeedKind> all_seed_kinds() {
    return {kAllSeedKinds, kAllSeedKinds + std::size(kAllSeedKinds)};
}

std::string to_string(SeedKind kind) {
    switch (kind) {
        case SeedKind::TypoConstant: return "TYPO_CONSTANT";
        case SeedKind::Precedence: return "PRECEDENCE";
        case SeedKind::WrongReference: return "WRONG_REFERENCE";
        case SeedKind::RangeOmission: return "RANGE_OMISSION";
        case SeedKind::FormulaToConstant: return "FORMULA_TO_CONSTANT";
        case SeedKind::DataEntry: return "DATA_ENTRY";
    }
    return "?";
}

SeedKind seed_kind_from_string(const std::string& name) {
    for (SeedKind k : kAllSeedKinds)
        if (to_string(k) == name) return k;
    throw Error("unknown error kind '" + name + "'");
}

namespace {

// --- structural applicability -------------------------------------

bool has_rotation_site(const Expr& e) {
    bool found = false;
    std::function<void(const Expr&)> walk = [&](const Expr& x) {
        if (found) return;
        if (const auto* bin = std::get_if<BinaryExpr>(&x.node)) {
            if (std::holds_alternative<BinaryExpr>(bin->lhs->node) ||
                std::holds_alternative<BinaryExpr>(bin->rhs->node))
                found = true;
            walk(*bin->lhs);
            walk(*bin->rhs);
        } else if (const auto* neg = std::get_if<UnaryNeg>(&x.node)) {
            walk(*neg->operand);
        } else if (const auto* call = std::get_if<FuncCall>(&x.node)) {
            for (const auto& a : call->args) walk(*a);
        }
    };
    walk(e);
    return found;
}

bool has_reference_site(const Expr& e) {
    bool found = false;
    visit_refs(e, [&](const CellRef&) { found = true; });
    visit_ranges(e, [&](const RangeRef&) { found = true; });
    return found;
}

bool has_shrinkable_range(const Expr& e) {
    bool found = false;
    visit_ranges(e, [&](const RangeRef& r) {
        if (r.single_line() && r.size() >= 2) found = true;
    });
    return found;
}

bool lexeme_has_digit(const std::string& lexeme) {
    return std::any_of(lexeme.begin(), lexeme.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

// --- mutation helpers ----------------------------------------------

// Replace one uniformly chosen digit with a different uniformly chosen
// digit. No sign flips, no structural edits.
std::string perturb_digit(const std::string& text, Rng& rng) {
    std::vector<std::size_t> digit_positions;
    for (std::size_t i = 0; i < text.size(); ++i)
        if (std::isdigit(static_cast<unsigned char>(text[i]))) digit_positions.push_back(i);
    std::size_t pos = rng.pick(digit_positions);
    char old = text[pos];
    char replacement;
    do {
        replacement = static_cast<char>('0' + rng.below(10));
    } while (replacement == old);
    std::string out = text;
    out[pos] = replacement;
    return out;
}

std::optional<std::string> mutate_typo(const Cell& cell, Rng& rng) {
    if (!cell.is_number() || !lexeme_has_digit(cell.number().lexeme)) return std::nullopt;
    return perturb_digit(cell.number().lexeme, rng);
}

// Wrong dataset value: another numeric literal from the same workbook,
// or a decimal-point slip when the sheet has no alternative values.
std::optional<std::string> mutate_data_entry(const Workbook& wb, CellRef target, const Cell& cell,
                                             Rng& rng) {
    if (!cell.is_number()) return std::nullopt;
    std::vector<std::string> candidates;
    for (const auto& [ref, other] : wb.cells()) {
        if (ref == target || !other.is_number()) continue;
        if (other.number().value != cell.number().value) candidates.push_back(other.number().lexeme);
    }
    if (!candidates.empty()) return rng.pick(candidates);

    const std::string& lexeme = cell.number().lexeme;
    auto dot = lexeme.find('.');
    if (dot == std::string::npos) return lexeme + "0";
    std::string out = lexeme;
    out.erase(dot, 1);  // 1352.17 -> 135217, the missed-decimal slip
    return out;
}

// Tree rotations re-parenthesize the infix operator chain while
// keeping the leaf sequence intact:
//   (a op2 b) op1 c  <->  a op2 (b op1 c)
struct RotationSite {
    const BinaryExpr* parent;
    bool left_child;  // which side holds the nested BinaryExpr
};

ExprPtr rebuild_with_rotation(const Expr& e, const BinaryExpr* target, bool left_child);

ExprPtr rebuild_children(const Expr& e, const BinaryExpr* target, bool left_child) {
    return std::visit(
        [&](const auto& node) -> ExprPtr {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, UnaryNeg>) {
                return make_neg(rebuild_with_rotation(*node.operand, target, left_child));
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                return make_binary(node.op, rebuild_with_rotation(*node.lhs, target, left_child),
                                   rebuild_with_rotation(*node.rhs, target, left_child));
            } else if constexpr (std::is_same_v<T, FuncCall>) {
                std::vector<ExprPtr> args;
                for (const auto& a : node.args)
                    args.push_back(rebuild_with_rotation(*a, target, left_child));
                return make_call(node.fn, std::move(args));
            } else {
                return std::make_shared<Expr>(e);
            }
        },
        e.node);
}

ExprPtr rebuild_with_rotation(const Expr& e, const BinaryExpr* target, bool left_child) {
    if (const auto* bin = std::get_if<BinaryExpr>(&e.node); bin == target) {
        if (left_child) {
            // (a op2 b) op1 c -> a op2 (b op1 c)
            const auto& inner = std::get<BinaryExpr>(bin->lhs->node);
            return make_binary(inner.op, inner.lhs, make_binary(bin->op, inner.rhs, bin->rhs));
        }
        // a op1 (b op2 c) -> (a op1 b) op2 c
        const auto& inner = std::get<BinaryExpr>(bin->rhs->node);
        return make_binary(inner.op, make_binary(bin->op, bin->lhs, inner.lhs), inner.rhs);
    }
    return rebuild_children(e, target, left_child);
}

std::optional<std::string> mutate_precedence(const Cell& cell, Rng& rng) {
    if (!cell.is_formula()) return std::nullopt;
    const Expr& ast = *cell.formula().ast;

    std::vector<RotationSite> sites;
    std::function<void(const Expr&)> walk = [&](const Expr& x) {
        if (const auto* bin = std::get_if<BinaryExpr>(&x.node)) {
            if (std::holds_alternative<BinaryExpr>(bin->lhs->node))
                sites.push_back({bin, true});
            if (std::holds_alternative<BinaryExpr>(bin->rhs->node))
                sites.push_back({bin, false});
            walk(*bin->lhs);
            walk(*bin->rhs);
        } else if (const auto* neg = std::get_if<UnaryNeg>(&x.node)) {
            walk(*neg->operand);
        } else if (const auto* call = std::get_if<FuncCall>(&x.node)) {
            for (const auto& a : call->args) walk(*a);
        }
    };
    walk(ast);
    if (sites.empty()) return std::nullopt;

    RotationSite site = rng.pick(sites);
    ExprPtr mutated = rebuild_with_rotation(ast, site.parent, site.left_child);
    if (ast_equal(*mutated, ast)) return std::nullopt;
    return render_formula(*mutated);
}

// Displace one plain reference, or one whole range, by a single row or
// column, staying inside the addressable grid.
struct DisplacementSite {
    bool is_range;
    CellRef ref;
    RangeRef range;
};

ExprPtr rebuild_with_displacement(const Expr& e, const DisplacementSite& site, int drow, int dcol,
                                  bool& done) {
    return std::visit(
        [&](const auto& node) -> ExprPtr {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, RefNode>) {
                if (!done && !site.is_range && node.ref == site.ref) {
                    done = true;
                    return make_ref(node.ref.offset(drow, dcol));
                }
                return std::make_shared<Expr>(e);
            } else if constexpr (std::is_same_v<T, RangeNode>) {
                if (!done && site.is_range && node.range == site.range) {
                    done = true;
                    return make_range(RangeRef{node.range.top_left.offset(drow, dcol),
                                               node.range.bottom_right.offset(drow, dcol)});
                }
                return std::make_shared<Expr>(e);
            } else if constexpr (std::is_same_v<T, UnaryNeg>) {
                return make_neg(rebuild_with_displacement(*node.operand, site, drow, dcol, done));
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                ExprPtr lhs = rebuild_with_displacement(*node.lhs, site, drow, dcol, done);
                ExprPtr rhs = rebuild_with_displacement(*node.rhs, site, drow, dcol, done);
                return make_binary(node.op, std::move(lhs), std::move(rhs));
            } else if constexpr (std::is_same_v<T, FuncCall>) {
                std::vector<ExprPtr> args;
                for (const auto& a : node.args)
                    args.push_back(rebuild_with_displacement(*a, site, drow, dcol, done));
                return make_call(node.fn, std::move(args));
            } else {
                return std::make_shared<Expr>(e);
            }
        },
        e.node);
}

std::optional<std::string> mutate_wrong_reference(const Cell& cell, Rng& rng) {
    if (!cell.is_formula()) return std::nullopt;
    const Expr& ast = *cell.formula().ast;

    std::vector<DisplacementSite> sites;
    visit_refs(ast, [&](const CellRef& r) { sites.push_back({false, r, {}}); });
    visit_ranges(ast, [&](const RangeRef& r) { sites.push_back({true, {}, r}); });
    if (sites.empty()) return std::nullopt;
    DisplacementSite site = rng.pick(sites);

    static constexpr int kOffsets[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
    std::vector<std::pair<int, int>> valid;
    for (auto [drow, dcol] : kOffsets) {
        CellRef a = site.is_range ? site.range.top_left : site.ref;
        CellRef b = site.is_range ? site.range.bottom_right : site.ref;
        if (a.offset(drow, dcol).valid() && b.offset(drow, dcol).valid())
            valid.emplace_back(drow, dcol);
    }
    if (valid.empty()) return std::nullopt;
    auto [drow, dcol] = rng.pick(valid);

    bool done = false;
    ExprPtr mutated = rebuild_with_displacement(ast, site, drow, dcol, done);
    return render_formula(*mutated);
}

// Shrink one single-line range by dropping its first or last cell.
ExprPtr rebuild_with_shrink(const Expr& e, const RangeRef& target, const RangeRef& replacement,
                            bool& done) {
    return std::visit(
        [&](const auto& node) -> ExprPtr {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, RangeNode>) {
                if (!done && node.range == target) {
                    done = true;
                    return make_range(replacement);
                }
                return std::make_shared<Expr>(e);
            } else if constexpr (std::is_same_v<T, UnaryNeg>) {
                return make_neg(rebuild_with_shrink(*node.operand, target, replacement, done));
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                ExprPtr lhs = rebuild_with_shrink(*node.lhs, target, replacement, done);
                ExprPtr rhs = rebuild_with_shrink(*node.rhs, target, replacement, done);
                return make_binary(node.op, std::move(lhs), std::move(rhs));
            } else if constexpr (std::is_same_v<T, FuncCall>) {
                std::vector<ExprPtr> args;
                for (const auto& a : node.args)
                    args.push_back(rebuild_with_shrink(*a, target, replacement, done));
                return make_call(node.fn, std::move(args));
            } else {
                return std::make_shared<Expr>(e);
            }
        },
        e.node);
}

std::optional<std::string> mutate_range_omission(const Cell& cell, Rng& rng) {
    if (!cell.is_formula()) return std::nullopt;
    const Expr& ast = *cell.formula().ast;

    std::vector<RangeRef> candidates;
    visit_ranges(ast, [&](const RangeRef& r) {
        if (r.single_line() && r.size() >= 2) candidates.push_back(r);
    });
    if (candidates.empty()) return std::nullopt;
    RangeRef target = rng.pick(candidates);

    bool drop_front = rng.below(2) == 0;
    RangeRef shrunk = target;
    bool vertical = target.cols() == 1 && target.rows() > 1;
    if (drop_front) {
        if (vertical)
            shrunk.top_left.row += 1;
        else
            shrunk.top_left.col += 1;
    } else {
        if (vertical)
            shrunk.bottom_right.row -= 1;
        else
            shrunk.bottom_right.col -= 1;
    }

    bool done = false;
    ExprPtr mutated = rebuild_with_shrink(ast, target, shrunk, done);
    return render_formula(*mutated);
}

// Paste-as-value gone stale: the current value rendered to two
// decimals, with one digit perturbed so the constant no longer agrees
// with the live computation.
std::optional<std::string> mutate_formula_to_constant(const Cell& cell, const ValueMap& reference_values,
                                                      CellRef target, Rng& rng) {
    if (!cell.is_formula()) return std::nullopt;
    auto it = reference_values.find(target);
    if (it == reference_values.end() || !it->second.is_number()) return std::nullopt;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", it->second.number());
    return perturb_digit(buf, rng);
}

// Observability: the lone seed must change at least one evaluated
// value beyond the audit tolerance (or change a value's kind).
bool observably_differs(const ValueMap& a, const ValueMap& b) {
    if (a.size() != b.size()) return true;
    auto ia = a.begin();
    auto ib = b.begin();
    for (; ia != a.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return true;
        if (!Value::close(ia->second, ib->second, 0.005)) return true;
    }
    return false;
}

}  // namespace

std::set<SeedKind> applicable_kinds(const Workbook& wb, CellRef cell) {
    const Cell* c = wb.cell(cell);
    if (!c) return {};
    std::set<SeedKind> kinds;
    if (c->is_number() && lexeme_has_digit(c->number().lexeme)) {
        kinds.insert(SeedKind::TypoConstant);
        kinds.insert(SeedKind::DataEntry);
    }
    if (c->is_formula()) {
        kinds.insert(SeedKind::FormulaToConstant);
        const Expr& ast = *c->formula().ast;
        if (has_rotation_site(ast)) kinds.insert(SeedKind::Precedence);
        if (has_reference_site(ast)) kinds.insert(SeedKind::WrongReference);
        if (has_shrinkable_range(ast)) kinds.insert(SeedKind::RangeOmission);
    }
    return kinds;
}

SeedManifest plan_seeds(const Workbook& reference, int count, const std::set<SeedKind>& kinds,
                        std::uint64_t rng_seed) {
    if (count < 0) throw Error("seed count must be non-negative");
    if (kinds.empty()) throw Error("at least one error kind is required");

    ValueMap reference_values = evaluate(reference);
    for (const auto& [ref, value] : reference_values)
        if (value.is_error())
            throw InfeasibleError("reference workbook evaluates with an error at " + ref.to_string());

    // Eligible pool: cells with at least one requested, applicable kind.
    std::vector<CellRef> pool;
    std::set<SeedKind> seen_kinds;
    for (const auto& [ref, cell] : reference.cells()) {
        std::set<SeedKind> app = applicable_kinds(reference, ref);
        bool usable = false;
        for (SeedKind k : app) {
            if (kinds.contains(k)) {
                usable = true;
                seen_kinds.insert(k);
            }
        }
        if (usable) pool.push_back(ref);
    }

    std::string dead_kinds;
    for (SeedKind k : kinds)
        if (!seen_kinds.contains(k)) dead_kinds += (dead_kinds.empty() ? "" : ", ") + to_string(k);

    if (static_cast<int>(pool.size()) < count) {
        std::string msg = "seed plan infeasible: " + std::to_string(count) + " seeds requested but only " +
                          std::to_string(pool.size()) + " eligible cells";
        if (!dead_kinds.empty()) msg += " (kind(s) applicable nowhere: " + dead_kinds + ")";
        throw InfeasibleError(msg);
    }

    SeedManifest manifest;
    manifest.rng_seed = rng_seed;
    manifest.reference_name = reference.name();

    Rng rng(rng_seed);
    for (int i = 0; i < count; ++i) {
        bool planted = false;
        for (int attempt = 0; attempt < 100 && !planted; ++attempt) {
            CellRef target = pool[static_cast<std::size_t>(rng.below(pool.size()))];
            const Cell& cell = *reference.cell(target);

            std::vector<SeedKind> drawable;
            for (SeedKind k : applicable_kinds(reference, target))
                if (kinds.contains(k)) drawable.push_back(k);
            SeedKind kind = rng.pick(drawable);

            std::optional<std::string> mutated;
            switch (kind) {
                case SeedKind::TypoConstant: mutated = mutate_typo(cell, rng); break;
                case SeedKind::Precedence: mutated = mutate_precedence(cell, rng); break;
                case SeedKind::WrongReference: mutated = mutate_wrong_reference(cell, rng); break;
                case SeedKind::RangeOmission: mutated = mutate_range_omission(cell, rng); break;
                case SeedKind::FormulaToConstant:
                    mutated = mutate_formula_to_constant(cell, reference_values, target, rng);
                    break;
                case SeedKind::DataEntry: mutated = mutate_data_entry(reference, target, cell, rng); break;
            }
            if (!mutated || *mutated == cell.source_text()) continue;

            // Cells must stay pairwise distinct across the manifest.
            bool duplicate = false;
            for (const Seed& s : manifest.seeds)
                if (s.cell == target) duplicate = true;
            if (duplicate) continue;

            Workbook candidate = reference;
            candidate.set_cell(target, Cell::from_field(*mutated));
            if (!observably_differs(reference_values, evaluate(candidate))) continue;

            manifest.seeds.push_back(Seed{target, kind, cell.source_text(), *mutated});
            planted = true;
        }
        if (!planted) {
            std::string msg = "seed plan infeasible: no observable mutation found after 100 draws for seed " +
                              std::to_string(i + 1) + " of " + std::to_string(count);
            if (!dead_kinds.empty()) msg += " (kind(s) applicable nowhere: " + dead_kinds + ")";
            throw InfeasibleError(msg);
        }
    }
    return manifest;
}

Workbook apply_seeds(const Workbook& reference, const SeedManifest& manifest) {
    Workbook out = reference;
    for (const Seed& seed : manifest.seeds) {
        const Cell* cell = reference.cell(seed.cell);
        std::string current = cell ? cell->source_text() : "";
        if (current != seed.original)
            throw MismatchError("manifest does not match reference at " + seed.cell.to_string() +
                                ": expected '" + seed.original + "', found '" + current + "'");
        out.set_cell(seed.cell, Cell::from_field(seed.mutated));
    }
    return out;
}

}  // namespace sheetaudit
