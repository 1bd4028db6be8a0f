#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "sectorprimes/bv.hpp"
#include "sectorprimes/counting.hpp"

namespace sp {

inline constexpr const char* kLibraryVersion = "1.0.0";

std::string int128_to_string(__int128 v);

nlohmann::json to_json(const FieldContext& ctx);
nlohmann::json to_json(const SectorSpec& s);
nlohmann::json to_json(const CountQuery& q);
nlohmann::json to_json(const CountReport& r);
nlohmann::json to_json(const VonMangoldtReport& r);
nlohmann::json to_json(const SmoothedSumReport& r);
nlohmann::json to_json(const FitResult& r);
nlohmann::json to_json(const BVReport& r);
nlohmann::json to_json(const IdentityResult& r);

// Columns: p, norm, class_idx, angle, in_sector
void write_ideal_csv(std::ostream& os, const std::vector<IdealRow>& rows);

// Columns: q, admissible, phi_q, max_a, argmax_a, discrepancy, normalized
void write_bv_csv(std::ostream& os, const BVReport& r);

// Envelope shared by every JSON artifact: version, resolved config, field metadata, results.
nlohmann::json make_envelope(const std::string& command, const nlohmann::json& config, const nlohmann::json& field,
                             const nlohmann::json& results);

}  // namespace sp
