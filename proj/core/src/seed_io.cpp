#include <json.hpp>

#include "sheetaudit/error.hpp"
#include "sheetaudit/seeding.hpp"

namespace sheetaudit {

std::string SeedManifest::to_json() const {
    nlohmann::json j;
    j["rng_seed"] = rng_seed;
    j["reference_name"] = reference_name;
    j["seeds"] = nlohmann::json::array();
    for (const Seed& s : seeds) {
        j["seeds"].push_back({{"cell", s.cell.to_string()},
                              {"kind", to_string(s.kind)},
                              {"original", s.original},
                              {"mutated", s.mutated}});
    }
    return j.dump(2) + "\n";
}

SeedManifest SeedManifest::from_json(const std::string& text) {
    SeedManifest m;
    try {
        nlohmann::json j = nlohmann::json::parse(text);
        m.rng_seed = j.at("rng_seed").get<std::uint64_t>();
        m.reference_name = j.at("reference_name").get<std::string>();
        for (const auto& item : j.at("seeds")) {
            Seed s;
            s.cell = CellRef::parse_or_throw(item.at("cell").get<std::string>());
            s.kind = seed_kind_from_string(item.at("kind").get<std::string>());
            s.original = item.at("original").get<std::string>();
            s.mutated = item.at("mutated").get<std::string>();
            m.seeds.push_back(std::move(s));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed manifest JSON: ") + e.what());
    }
    return m;
}

}  // namespace sheetaudit
