#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "sectorprimes/bv.hpp"
#include "sectorprimes/config.hpp"
#include "sectorprimes/counting.hpp"
#include "sectorprimes/errors.hpp"
#include "sectorprimes/report.hpp"
#include "sectorprimes/selberg.hpp"

using nlohmann::json;
using namespace sp;

namespace {

constexpr int kExitInvariant = 2;
constexpr int kExitResource = 3;
constexpr int kExitUsage = 1;

struct Options {
    std::string config_file;
    std::map<std::string, std::string> flags;
};

void add_config_flags(CLI::App* cmd, Options& opts)
{
    cmd->set_help_flag("--help", "print this help message and exit");
    cmd->add_option("-c,--config", opts.config_file, "key=value configuration file");
    for (const auto& k : ExperimentConfig::keys()) {
        cmd->add_option_function<std::string>(
            std::string("--") + k.name, [&opts, name = std::string(k.name)](const std::string& v) { opts.flags[name] = v; },
            k.help);
    }
}

ExperimentConfig resolve(const Options& opts)
{
    ExperimentConfig cfg;
    if (!opts.config_file.empty()) cfg.merge(ExperimentConfig::load_file(opts.config_file));
    for (const auto& [k, v] : opts.flags) cfg.set(k, v);  // flags win
    return cfg;
}

FieldContext make_context(const ExperimentConfig& cfg)
{
    return FieldContext::make(cfg.get_int("m"), cfg.get_int("disc_bound"));
}

int class_index(const ExperimentConfig& cfg, const FieldContext& ctx)
{
    const std::string& v = cfg.get("class");
    if (v == "identity") return ctx.group.identity_idx;
    const std::int64_t idx = cfg.get_int("class");
    if (idx < 0 || idx >= ctx.class_count()) throw InvalidInput("config key 'class': index out of range");
    return static_cast<int>(idx);
}

ScaleMode scale_mode(const ExperimentConfig& cfg)
{
    const std::string& v = cfg.get("mode");
    if (v == "per_prime") return ScaleMode::per_prime;
    if (v == "fixed_x") return ScaleMode::fixed_x;
    throw InvalidInput("config key 'mode': expected per_prime or fixed_x");
}

SectorSpec sector_from(const ExperimentConfig& cfg, double x)
{
    SectorSpec s;
    s.phi0 = AngleVec(cfg.get_double("phi0"));
    s.delta = cfg.get_double("delta");
    s.mode = scale_mode(cfg);
    s.ref_x = x;
    return s;
}

CountQuery query_from(const ExperimentConfig& cfg, const FieldContext& ctx, double x)
{
    CountQuery q = CountQuery::standard(class_index(cfg, ctx), sector_from(cfg, x), x, cfg.get_double("delta_prime"));
    if (auto h = cfg.get_optional_double("h")) q.h = *h;
    const auto a = cfg.get_optional_int("residue_a");
    const auto m = cfg.get_optional_int("residue_q");
    if (a.has_value() != m.has_value()) throw InvalidInput("config keys 'residue_a' and 'residue_q' go together");
    if (a) {
        if (*m < 1 || *a < 0) throw InvalidInput("config key 'residue_q': must be >= 1 with residue_a >= 0");
        q.residue = Residue{static_cast<u64>(*a), static_cast<u64>(*m)};
    }
    q.threads = static_cast<int>(cfg.get_int("threads"));
    return q;
}

std::optional<SieveCache> cache_from(const ExperimentConfig& cfg)
{
    if (cfg.has("cache_dir")) return SieveCache(cfg.get("cache_dir"));
    return SieveCache::from_env();
}

void emit_json(const ExperimentConfig& cfg, const json& j)
{
    const std::string text = j.dump(2);
    if (cfg.has("out_json")) {
        std::ofstream out(cfg.get("out_json"));
        if (!out) throw ResourceError("cannot write " + cfg.get("out_json"));
        out << text << "\n";
    } else {
        std::cout << text << "\n";
    }
}

template <class F>
void with_csv(const ExperimentConfig& cfg, bool stdout_fallback, F&& write)
{
    if (cfg.has("out_csv")) {
        std::ofstream out(cfg.get("out_csv"));
        if (!out) throw ResourceError("cannot write " + cfg.get("out_csv"));
        write(out);
    } else if (stdout_fallback) {
        write(std::cout);
    }
}

int cmd_enumerate(const ExperimentConfig& cfg)
{
    const FieldContext ctx = make_context(cfg);
    const u64 lo = static_cast<u64>(cfg.get_int("p_min")), hi = static_cast<u64>(cfg.get_int("p_max"));
    if (hi < lo || lo < 2) throw InvalidInput("config keys 'p_min'/'p_max': need 2 <= p_min <= p_max");
    const SectorSpec sector = sector_from(cfg, static_cast<double>(lo));
    std::vector<IdealRow> rows;
    for (u64 p : primes_up_to(hi)) {
        if (p < lo) continue;
        const PrimeIdeals pi = scan_prime(ctx, p);
        for (std::size_t i = 0; i < pi.ideals.size(); ++i) {
            const auto& id = pi.ideals[i];
            const bool sect = in_sector(AngleVec(pi.angles[i]), sector, static_cast<double>(id.norm));
            rows.push_back(IdealRow{p, id.norm, id.class_idx, pi.angles[i], sect, false, id.form});
        }
    }
    with_csv(cfg, true, [&](std::ostream& os) { write_ideal_csv(os, rows); });
    if (cfg.has("out_json")) {
        emit_json(cfg, make_envelope("enumerate", cfg.to_json(), to_json(ctx), {{"ideals", rows.size()}}));
    }
    return 0;
}

int cmd_count(const ExperimentConfig& cfg)
{
    const FieldContext ctx = make_context(cfg);
    auto cache = cache_from(cfg);
    CountQuery q = query_from(cfg, ctx, cfg.get_double("x"));
    q.record_primes = cfg.has("out_csv");
    CountReport rep = sector_prime_sum(ctx, q, cache ? &*cache : nullptr);
    if (auto c = cfg.get_optional_double("c_hat")) calibrate(rep, ctx, *c);
    const VonMangoldtReport vm = von_mangoldt_sum(ctx, q, cache ? &*cache : nullptr);
    with_csv(cfg, false, [&](std::ostream& os) { write_ideal_csv(os, rep.per_prime); });
    emit_json(cfg, make_envelope("count", cfg.to_json(), to_json(ctx),
                                 {{"sector_prime_sum", to_json(rep)}, {"von_mangoldt_sum", to_json(vm)}}));
    return 0;
}

int cmd_identity_check(const ExperimentConfig& cfg)
{
    const FieldContext ctx = make_context(cfg);
    const u64 lo = static_cast<u64>(cfg.get_int("p_min")), hi = static_cast<u64>(cfg.get_int("p_max"));
    if (hi < lo) throw InvalidInput("config keys 'p_min'/'p_max': need p_min <= p_max");
    std::mt19937_64 rng(static_cast<u64>(cfg.get_int("seed")));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<SectorSpec> sectors;
    for (std::int64_t i = 0; i < cfg.get_int("sectors"); ++i) {
        SectorSpec s;
        s.phi0 = AngleVec(unit(rng));
        s.delta = 0.45 * unit(rng);
        s.mode = scale_mode(cfg);
        s.ref_x = static_cast<double>(std::max<u64>(hi, 2));
        sectors.push_back(s);
    }
    u64 pass = 0, fail = 0, ramified = 0, ones = 0;
    json failures = json::array();
    for (u64 p : primes_up_to(hi)) {
        if (p < lo) continue;
        const PrimeIdeals pi = scan_prime(ctx, p, true);
        if (pi.kind == SplitKind::ramified) {
            ++ramified;
            continue;
        }
        for (int c = 0; c < ctx.class_count(); ++c) {
            for (const auto& s : sectors) {
                const IdentityResult r = inclusion_exclusion_identity(ctx, pi, c, s);
                if (r.holds()) {
                    ++pass;
                    ones += static_cast<u64>(r.lhs);
                } else {
                    ++fail;
                    if (failures.size() < 20) failures.push_back(to_json(r));
                }
            }
        }
    }
    std::cerr << "identity-check: " << pass << " pass, " << fail << " fail (" << ones << " with lhs = 1, " << ramified
              << " ramified primes skipped)\n";
    json res{{"pass", pass}, {"fail", fail}, {"lhs_one", ones}, {"ramified_skipped", ramified},
             {"pass_rate", pass + fail == 0 ? 1.0 : static_cast<double>(pass) / static_cast<double>(pass + fail)},
             {"failures", failures}};
    emit_json(cfg, make_envelope("identity-check", cfg.to_json(), to_json(ctx), res));
    return fail == 0 ? 0 : kExitInvariant;
}

int cmd_selberg(const ExperimentConfig& cfg)
{
    const int d = static_cast<int>(cfg.get_int("dim"));
    const int M = static_cast<int>(cfg.get_int("M"));
    const double kappa = cfg.get_double("kappa");
    const double tol = cfg.get_double("tol_identity");
    if (d < 1 || d > 3) throw InvalidInput("config key 'dim': must be 1, 2 or 3");
    if (M < 1) throw InvalidInput("config key 'M': must be >= 1");
    if (!(kappa > 0.0 && kappa < 1.0)) throw InvalidInput("config key 'kappa': must lie in (0, 1)");
    std::mt19937_64 rng(static_cast<u64>(cfg.get_int("seed")));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> corner(d);
    for (auto& c : corner) c = unit(rng);
    const SelbergApprox up = selberg_box(M, corner, kappa, Sign::majorant);
    const SelbergApprox dn = selberg_box(M, corner, kappa, Sign::minorant);
    const double vol = std::pow(kappa, d);
    const double err_up = std::fabs((up.zero_coeff().real() - vol) - majorant_defect(d, kappa, M));
    const double err_dn = std::fabs((vol - dn.zero_coeff().real()) - minorant_defect(d, kappa, M));
    const auto samples = cfg.get_int("samples");
    u64 viol = 0;
    double worst = 0.0;
    double phi[3];
    for (std::int64_t i = 0; i < samples; ++i) {
        // half the points inside or near the box, half uniform
        for (int j = 0; j < d; ++j) {
            phi[j] = (i % 2 == 0) ? corner[j] - kappa + 3.0 * kappa * unit(rng) : unit(rng);
            phi[j] -= std::floor(phi[j]);
        }
        const double ind = up.indicator(phi) ? 1.0 : 0.0;
        const double a = dn.eval(phi), b = up.eval(phi);
        const double breach = std::max(a - ind, ind - b);
        worst = std::max(worst, breach);
        if (breach > tol) ++viol;
    }
    const CoeffBoundReport cb_up = coeff_bound_check(up);
    const CoeffBoundReport cb_dn = coeff_bound_check(dn);
    const bool ok = err_up <= tol && err_dn <= tol && viol == 0;
    json res{{"dim", d},
             {"kappa", kappa},
             {"M", M},
             {"corner", corner},
             {"majorant_zero_identity_error", err_up},
             {"minorant_zero_identity_error", err_dn},
             {"sandwich_samples", samples},
             {"sandwich_violations", viol},
             {"worst_breach", worst},
             {"coeff_bound_ratio_majorant", cb_up.max_ratio},
             {"coeff_bound_ratio_minorant", cb_dn.max_ratio},
             {"tolerance", tol},
             {"pass", ok}};
    emit_json(cfg, make_envelope("selberg", cfg.to_json(), json(nullptr), res));
    return ok ? 0 : kExitInvariant;
}

int cmd_fit(const ExperimentConfig& cfg)
{
    const FieldContext ctx = make_context(cfg);
    auto cache = cache_from(cfg);
    const FitResult fit = asymptotic_fit(ctx, class_index(cfg, ctx), AngleVec(cfg.get_double("phi0")),
                                         cfg.get_double("delta"), cfg.get_double("delta_prime"),
                                         cfg.get_list("x_ladder"), cache ? &*cache : nullptr,
                                         static_cast<int>(cfg.get_int("threads")));
    emit_json(cfg, make_envelope("fit", cfg.to_json(), to_json(ctx), to_json(fit)));
    return 0;
}

int cmd_bv(const ExperimentConfig& cfg)
{
    const FieldContext ctx = make_context(cfg);
    auto cache = cache_from(cfg);
    BVQuery bq;
    bq.base = query_from(cfg, ctx, cfg.get_double("x"));
    if (bq.base.residue) throw InvalidInput("config keys 'residue_a'/'residue_q' are not used by bv");
    bq.theta = cfg.get_double("theta");
    bq.A = cfg.get_double("A");
    bq.c_hat = cfg.get_optional_double("c_hat");
    if (auto Q = cfg.get_optional_int("Q")) bq.Q_override = static_cast<u64>(*Q);
    json res;
    if (bq.c_hat) {
        const BVReport rep = bv_discrepancy(ctx, bq, cache ? &*cache : nullptr);
        with_csv(cfg, false, [&](std::ostream& os) { write_bv_csv(os, rep); });
        res = {{"reports", json::array({to_json(rep)})}};
    } else {
        const BVLadder lad = bv_ladder(ctx, bq, cfg.get_list("x_ladder"), cache ? &*cache : nullptr);
        json reps = json::array();
        for (const auto& r : lad.reports) reps.push_back(to_json(r));
        with_csv(cfg, false, [&](std::ostream& os) { write_bv_csv(os, lad.reports.back()); });
        res = {{"calibration", to_json(lad.fit)}, {"reports", reps}};
    }
    emit_json(cfg, make_envelope("bv", cfg.to_json(), to_json(ctx), res));
    return 0;
}

int cmd_cache(const ExperimentConfig& cfg, const std::string& action)
{
    auto cache = cache_from(cfg);
    if (!cache) {
        throw InvalidInput(std::string("no cache directory: set config key 'cache_dir' or ") + SieveCache::kEnvVar);
    }
    if (action == "purge") {
        std::cout << "removed " << cache->purge() << " file(s) from " << cache->dir().string() << "\n";
        return 0;
    }
    json files = json::array();
    bool all_ok = true;
    for (const auto& f : cache->inspect()) {
        files.push_back({{"path", f.path.string()}, {"start", f.start}, {"end", f.end}, {"version", f.version},
                         {"wheel", f.wheel}, {"checksum_ok", f.checksum_ok}});
        all_ok = all_ok && f.checksum_ok;
    }
    std::cout << json{{"cache_dir", cache->dir().string()}, {"files", files}}.dump(2) << "\n";
    return all_ok ? 0 : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Primes in sectors of quadratic fields: enumeration, identities, smoothing, discrepancy"};
    app.require_subcommand(1);
    Options opts;
    std::string cache_action = "inspect";

    auto* enumerate = app.add_subcommand("enumerate", "CSV of prime ideals with angles and classes");
    auto* count = app.add_subcommand("count", "sector prime sum and von Mangoldt sum");
    auto* identity = app.add_subcommand("identity-check", "inclusion-exclusion identity over a prime range");
    auto* selberg = app.add_subcommand("selberg", "Selberg box approximation identities and sandwich");
    auto* fit = app.add_subcommand("fit", "asymptotic fit over an x-ladder");
    auto* bv = app.add_subcommand("bv", "discrepancy over moduli q <= Q");
    auto* cache = app.add_subcommand("cache", "inspect or purge the sieve cache");
    for (auto* c : {enumerate, count, identity, selberg, fit, bv, cache}) add_config_flags(c, opts);
    cache->add_option("action", cache_action, "inspect or purge")->check(CLI::IsMember({"inspect", "purge"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        const ExperimentConfig cfg = resolve(opts);
        if (*enumerate) return cmd_enumerate(cfg);
        if (*count) return cmd_count(cfg);
        if (*identity) return cmd_identity_check(cfg);
        if (*selberg) return cmd_selberg(cfg);
        if (*fit) return cmd_fit(cfg);
        if (*bv) return cmd_bv(cfg);
        if (*cache) return cmd_cache(cfg, cache_action);
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return kExitResource;
    } catch (const InvalidInput& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
