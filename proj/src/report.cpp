#include "sectorprimes/report.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

namespace sp {

using nlohmann::json;

std::string int128_to_string(__int128 v)
{
    if (v == 0) return "0";
    const bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    std::string s;
    while (u > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

namespace {

json form_json(const QuadForm& f) { return json::array({f.a, f.b, f.c}); }

json exact_json(const ExactSum& s)
{
    return json{{"value", s.value()}, {"fixed_point", int128_to_string(s.raw())}, {"frac_bits", ExactSum::kFracBits}};
}

}  // namespace

json to_json(const FieldContext& ctx)
{
    const auto& f = ctx.field;
    json j;
    j["m"] = f.m;
    j["disc"] = f.disc;
    j["signature"] = {f.r1, f.r2};
    j["narrow_class_number"] = ctx.class_count();
    j["reduced_form_count"] = ctx.group.reduced_form_count;
    json forms = json::array();
    for (const auto& q : ctx.group.forms) forms.push_back(form_json(q));
    j["class_forms"] = forms;
    j["identity_class"] = ctx.group.identity_idx;
    if (f.imaginary()) {
        j["roots_of_unity"] = f.unit_count;
    } else {
        j["fundamental_unit"] = {{"a", f.fund_unit->a.str()}, {"b", f.fund_unit->b.str()},
                                 {"den", f.fund_unit->den}, {"norm", f.fund_unit->norm}};
        j["log_totally_positive_unit"] = f.log_tot_pos_unit;
    }
    json hb;
    hb["phase_scale"] = ctx.basis.phase_scale;
    hb["exponent"] = ctx.basis.exponent;
    hb["v"] = ctx.basis.v;
    hb["half_turn_unit"] = ctx.basis.half_turn_unit;
    hb["anchors"] = ctx.basis.anchors;
    json gens = json::array();
    for (const auto& g : ctx.basis.generators) {
        gens.push_back({{"class", g.class_idx}, {"order", g.order}, {"power_class", g.power_class}, {"branch", g.branch}});
    }
    hb["anchor_generators"] = gens;
    hb["consistency_residual"] = ctx.basis.consistency_residual;
    j["angle_map"] = hb;
    json pbs = json::array();
    for (std::size_t i = 0; i < ctx.automorphisms.size(); ++i) {
        pbs.push_back({{"automorphism", to_string(ctx.automorphisms[i])}, {"pullback", ctx.pullbacks[i].entries}});
    }
    j["pullbacks"] = pbs;
    return j;
}

json to_json(const SectorSpec& s)
{
    json phi = json::array();
    for (int i = 0; i < s.phi0.dim; ++i) phi.push_back(s.phi0[i]);
    return {{"phi0", phi}, {"delta", s.delta}, {"mode", to_string(s.mode)}, {"ref_x", s.ref_x}};
}

json to_json(const CountQuery& q)
{
    json j{{"class_idx", q.class_idx}, {"sector", to_json(q.sector)}, {"x", q.x}, {"h", q.h},
           {"delta_prime", q.delta_prime}, {"weight", to_string(q.weight)}, {"threads", q.threads},
           {"interval", {q.lo(), q.hi()}}};
    j["residue"] = q.residue ? json{{"a", q.residue->a}, {"q", q.residue->q}} : json(nullptr);
    return j;
}

json to_json(const CountReport& r)
{
    json j;
    j["query"] = to_json(r.query);
    j["weighted_sum"] = r.weighted_sum;
    j["exact"] = exact_json(r.exact);
    j["count"] = r.count;
    j["primes_in_interval"] = r.primes_in_interval;
    j["ramified_skipped"] = r.ramified_skipped;
    j["main_term_prediction"] = r.main_term_prediction ? json(*r.main_term_prediction) : json(nullptr);
    j["ratio"] = r.ratio ? json(*r.ratio) : json(nullptr);
    j["warnings"] = r.warnings;
    j["cache_hit"] = r.cache_hit;
    return j;
}

json to_json(const VonMangoldtReport& r)
{
    return {{"value", r.value},
            {"exact", exact_json(r.exact)},
            {"prime_ideal_sum", r.prime_ideal_sum},
            {"power_part", r.power_part},
            {"sector_prime_sum", r.sector_prime_sum},
            {"power_terms", r.power_terms},
            {"bound_scale", r.bound_scale},
            {"ratio", r.ratio}};
}

json to_json(const SmoothedSumReport& r)
{
    return {{"lower", r.lower},
            {"exact", r.exact},
            {"upper", r.upper},
            {"lower_fixed_point", int128_to_string(r.lower_sum.raw())},
            {"exact_fixed_point", int128_to_string(r.exact_sum.raw())},
            {"upper_fixed_point", int128_to_string(r.upper_sum.raw())},
            {"main_term_lower", r.main_term_lower},
            {"main_term_upper", r.main_term_upper},
            {"F0_lower", r.F0_lower},
            {"F0_upper", r.F0_upper},
            {"G1_lower", r.G1_lower},
            {"G1_upper", r.G1_upper},
            {"region_volume", r.region_volume},
            {"effective_class", r.effective_class ? json(*r.effective_class) : json(nullptr)},
            {"ideals_scanned", r.ideals_scanned}};
}

json to_json(const FitResult& r)
{
    json pts = json::array();
    for (const auto& p : r.points) {
        pts.push_back({{"x", p.x}, {"h", p.h}, {"sum", p.sum}, {"scale", p.scale}, {"ratio", p.ratio},
                       {"residual", p.residual}});
    }
    return {{"c_hat", r.c_hat}, {"points", pts}};
}

json to_json(const BVReport& r)
{
    json rows = json::array();
    for (const auto& row : r.per_q) {
        rows.push_back({{"q", row.q},
                        {"admissible", row.admissible},
                        {"surrogate", row.surrogate},
                        {"phi_q", row.phi_q},
                        {"expected", row.expected},
                        {"max_discrepancy", row.max_discrepancy},
                        {"argmax_a", row.argmax_a},
                        {"count_at_max", row.count_at_max},
                        {"normalized", row.normalized},
                        {"partition_ok", row.partition_ok}});
    }
    return {{"query", to_json(r.query.base)},
            {"theta", r.query.theta},
            {"A", r.query.A},
            {"Q", r.Q},
            {"c_hat", r.c_hat},
            {"main_term_scale", r.main_term_scale},
            {"per_q", rows},
            {"total", r.total},
            {"normalized_total", r.normalized_total},
            {"unrestricted_sum", r.unrestricted_sum},
            {"prime_power_correction", r.prime_power_correction},
            {"warnings", r.warnings}};
}

json to_json(const IdentityResult& r)
{
    return {{"p", r.p},
            {"lhs", r.lhs},
            {"rhs_num", r.rhs_num},
            {"rhs_den", r.rhs_den},
            {"subset_terms", r.subset_terms},
            {"holds", r.holds()}};
}

void write_ideal_csv(std::ostream& os, const std::vector<IdealRow>& rows)
{
    os << "p,norm,class_idx,angle,in_sector\n";
    os << std::setprecision(17);
    for (const auto& r : rows) {
        os << r.p << ',' << r.norm << ',' << r.class_idx << ',' << r.angle << ',' << (r.in_sector ? 1 : 0) << '\n';
    }
}

void write_bv_csv(std::ostream& os, const BVReport& r)
{
    os << "q,admissible,phi_q,max_a,argmax_a,discrepancy,normalized\n";
    os << std::setprecision(17);
    for (const auto& row : r.per_q) {
        os << row.q << ',' << (row.admissible ? 1 : 0) << ',' << row.phi_q << ',' << row.count_at_max << ','
           << row.argmax_a << ',' << row.max_discrepancy << ',' << row.normalized << '\n';
    }
}

json make_envelope(const std::string& command, const json& config, const json& field, const json& results)
{
    return {{"library", "sectorprimes"},
            {"version", kLibraryVersion},
            {"command", command},
            {"config", config},
            {"field", field},
            {"results", results}};
}

}  // namespace sp
