#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "sheetaudit/workbook.hpp"

namespace sheetaudit {

/// The error taxonomy available for seeding training models.
enum class SeedKind {
    TypoConstant,       // one digit of a numeric literal perturbed
    Precedence,         // grouping changed, operand sequence kept
    WrongReference,     // one reference displaced by a row or column
    RangeOmission,      // a range shrunk by one cell
    FormulaToConstant,  // formula replaced by a stale constant
    DataEntry,          // input literal replaced by a wrong dataset value
};

constexpr SeedKind kAllSeedKinds[] = {
    SeedKind::TypoConstant,      SeedKind::Precedence,        SeedKind::WrongReference,
    SeedKind::RangeOmission,     SeedKind::FormulaToConstant, SeedKind::DataEntry,
};

/// Kinds that rewrite formula cells (the complement touches literals).
std::set<SeedKind> formula_seed_kinds();
std::set<SeedKind> all_seed_kinds();

std::string to_string(SeedKind kind);           // "WRONG_REFERENCE" etc.
SeedKind seed_kind_from_string(const std::string& name);

/// One injected error: where, what kind, and the exact content swap.
/// `original` must match the reference cell byte-for-byte before the
/// seed applies; `mutated` always loads cleanly.
struct Seed {
    CellRef cell;
    SeedKind kind;
    std::string original;
    std::string mutated;

    bool operator==(const Seed&) const = default;
};

/// Ground truth for a seeded exercise: the RNG seed that produced it,
/// the reference it was planned against, and the seeds in injection
/// order. This is the document the instructor withholds.
struct SeedManifest {
    std::uint64_t rng_seed = 0;
    std::string reference_name;
    std::vector<Seed> seeds;

    bool operator==(const SeedManifest&) const = default;

    std::string to_json() const;
    static SeedManifest from_json(const std::string& text);
};

/// Structurally applicable kinds for one cell (numeric literal vs
/// formula, and which rewrites the formula's shape admits).
std::set<SeedKind> applicable_kinds(const Workbook& wb, CellRef cell);

/// Plan `count` distinct-cell seeds drawn uniformly over eligible
/// cells and their applicable kinds. Every seed is observable: applied
/// alone, it changes at least one evaluated value by more than 0.005
/// (or changes a value's kind). Unobservable draws are rejected and
/// redrawn, up to 100 attempts per seed. Deterministic in
/// (reference, count, kinds, rng_seed).
///
/// Throws InfeasibleError when the reference has no Error-free
/// evaluation, too few eligible cells, or the draw budget runs out;
/// the message names any requested kind that applies nowhere.
SeedManifest plan_seeds(const Workbook& reference, int count, const std::set<SeedKind>& kinds,
                        std::uint64_t rng_seed);

/// Apply a manifest to its reference. The result differs from the
/// reference in exactly the manifest cells; everything else is
/// byte-identical. Throws MismatchError naming the first cell whose
/// content does not match `original`.
Workbook apply_seeds(const Workbook& reference, const SeedManifest& manifest);

}  // namespace sheetaudit
