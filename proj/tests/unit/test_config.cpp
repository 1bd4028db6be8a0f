#include "doctest.h"
#include "sectorprimes/config.hpp"
#include "sectorprimes/errors.hpp"
#include "sectorprimes/report.hpp"

#include <algorithm>
#include <sstream>

using namespace sp;

TEST_CASE("config parse, echo and re-parse")
{
    const std::string text =
        "# experiment\n"
        "m = -5\n"
        "delta = 0.15   # radius exponent\n"
        "x = 1e6\n"
        "x_ladder = 1e6, 1e7\n"
        "residue_a = 3\n"
        "residue_q = 4\n"
        "mode = fixed_x\n";
    const auto cfg = ExperimentConfig::parse_text(text);
    CHECK(cfg.get_int("m") == -5);
    CHECK(cfg.get_double("delta") == 0.15);
    CHECK(cfg.get_int("x") == 1000000);
    CHECK(cfg.get_list("x_ladder") == std::vector<double>{1e6, 1e7});
    CHECK(cfg.get_optional_int("residue_q") == 4);
    CHECK(cfg.is_explicit("delta"));
    CHECK_FALSE(cfg.is_explicit("theta"));
    const auto again = ExperimentConfig::parse_text(cfg.to_text());
    CHECK(again == cfg);
    CHECK(again.to_json() == cfg.to_json());
}

TEST_CASE("config errors name the key")
{
    try {
        ExperimentConfig::parse_text("bogus = 1\n");
        FAIL("expected an error");
    } catch (const InvalidInput& e) {
        CHECK(std::string(e.what()).find("bogus") != std::string::npos);
    }
    CHECK_THROWS_AS(ExperimentConfig::parse_text("delta = abc\n"), InvalidInput);
    CHECK_THROWS_AS(ExperimentConfig::parse_text("m\n"), InvalidInput);
    ExperimentConfig c;
    CHECK_THROWS_AS(c.set("threads", "2.5"), InvalidInput);
}

TEST_CASE("config merge keeps explicit values")
{
    auto file = ExperimentConfig::parse_text("delta = 0.2\nx = 1e5\n");
    ExperimentConfig flags;
    flags.set("delta", "0.1");
    file.merge(flags);
    CHECK(file.get_double("delta") == 0.1);
    CHECK(file.get_double("x") == 1e5);
}

TEST_CASE("report serialization")
{
    CHECK(int128_to_string(0) == "0");
    CHECK(int128_to_string(-(static_cast<__int128>(1) << 100)) == "-1267650600228229401496703205376");
    const auto ctx = FieldContext::make(-1);
    CountQuery q;
    q.sector.phi0 = AngleVec(0.0);
    q.x = 100;
    q.h = 100;
    q.record_primes = true;
    const auto rep = sector_prime_sum(ctx, q);
    const auto j = to_json(rep);
    CHECK(j["count"] == 10);
    CHECK(j["query"]["interval"][1] == 200);
    const auto env = make_envelope("count", ExperimentConfig().to_json(), to_json(ctx), j);
    CHECK(env["library"] == "sectorprimes");
    CHECK(env["field"]["disc"] == -4);
    CHECK(env["field"]["pullbacks"][1]["pullback"][0] == -1);
    std::ostringstream os;
    write_ideal_csv(os, rep.per_prime);
    const std::string csv = os.str();
    CHECK(csv.rfind("p,norm,class_idx,angle,in_sector\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + static_cast<long>(rep.per_prime.size()));
}
