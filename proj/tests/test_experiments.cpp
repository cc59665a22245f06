#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <cmath>
#include <string>
#include <vector>

#include "gridft/experiments.hpp"

using namespace gridft;

TEST_CASE("sweep csv format") {
    SweepPoint pt;
    pt.p = 0.5;
    pt.sigma = 0.25;
    pt.M = 10;
    pt.R = 3;
    pt.trials = 1000;
    pt.error = 0.125;
    pt.ci_lo = 0.1;
    pt.ci_hi = 0.15;
    pt.neurons = 176;
    pt.censored = true;
    CHECK(sweep_csv({pt}) ==
          "p,sigma,M,R,trials,error,ci_lo,ci_hi,neurons,censored\n"
          "0.5,0.25,10,3,1000,0.125,0.1,0.15,176,1\n");
    CHECK(sweep_csv({}) == "p,sigma,M,R,trials,error,ci_lo,ci_hi,neurons,censored\n");
}

TEST_CASE("metadata sidecar") {
    Metadata md;
    md.add("target", "nand");
    md.add("trials", std::size_t(100));
    md.add("sigma", 0.5);
    CHECK(md.text() == "target=nand\ntrials=100\nsigma=0.5\n");
}

TEST_CASE("monte carlo config validation") {
    MonteCarloConfig ok;
    CHECK_NOTHROW(ok.validate());

    MonteCarloConfig c = ok;
    c.trials = 99;
    CHECK_THROWS_AS(c.validate(), std::domain_error);
    c = ok;
    c.p_grid.clear();
    CHECK_THROWS_AS(c.validate(), std::domain_error);
    c = ok;
    c.p_grid = {1.5};
    CHECK_THROWS_AS(c.validate(), std::domain_error);
    c = ok;
    c.sigma_grid = {-0.1};
    CHECK_THROWS_AS(c.validate(), std::domain_error);
    c = ok;
    c.confidence = 1.0;
    CHECK_THROWS_AS(c.validate(), std::domain_error);
}

TEST_CASE("parallel scheduler") {
    for (unsigned threads : {1u, 4u}) {
        std::vector<std::size_t> slots(100, 0);
        run_parallel(slots.size(), threads, [&](std::size_t i) { slots[i] = i * i; });
        for (std::size_t i = 0; i < slots.size(); ++i) CHECK(slots[i] == i * i);
    }

    // more workers than items
    std::vector<int> three(3, 0);
    run_parallel(3, 8, [&](std::size_t i) { three[i] = 1; });
    CHECK(three == std::vector<int>{1, 1, 1});

    // a worker exception surfaces to the caller
    for (unsigned threads : {1u, 4u}) {
        CHECK_THROWS_AS(run_parallel(60, threads,
                                     [](std::size_t i) {
                                         if (i == 50) throw std::runtime_error("boom");
                                     }),
                        std::runtime_error);
    }
}

TEST_CASE("representation scale draws") {
    RngStream rng(123);
    for (int i = 0; i < 200; ++i) {
        std::uint64_t s = draw_scale(rng);
        CHECK(s >= 1);
        CHECK(s <= (std::uint64_t(1) << 58));
    }

    // same stream state, same draw
    RngStream a(9), b(9);
    CHECK(draw_scale(a) == draw_scale(b));

    const auto moduli = odd_prime_moduli(4);
    RngStream capped(321);
    for (int i = 0; i < 200; ++i) {
        std::uint64_t s = draw_scale_capped(capped, moduli);
        CHECK(max_wrong_pair_score(moduli, {0, s, 2 * s}) <= 0.0);
    }
}

TEST_CASE("estimates are independent of the thread count") {
    EstimateOptions eo;
    eo.target = Target::NandGate;
    eo.noise = NoiseModel{0.3, 0.1};
    eo.M = 4;
    eo.R = 1;
    eo.trials = 400;
    eo.seed = 7;
    eo.threads = 1;
    EstimateResult r1 = estimate_logical_error(eo);
    eo.threads = 4;
    EstimateResult r4 = estimate_logical_error(eo);

    CHECK(sweep_csv({r1.point}) == sweep_csv({r4.point}));
    CHECK(r1.per_assignment == r4.per_assignment);
    CHECK(r1.worst_assignment == r4.worst_assignment);
    CHECK(r1.step_errors == r4.step_errors);
    CHECK(r1.point.trials == 100);  // per assignment
    CHECK(r1.point.neurons == 23);  // 3MR + 2MD + 3R at M=4, R=1
}

TEST_CASE("zero-noise gate estimate obeys the rule of three") {
    // M=10 keeps the code product near 1e11, so the full-alias scale draws
    // that defeat smaller products (s = 0 mod the product slips past the
    // wrong-pair cap because aliased candidates are skipped) never occur
    EstimateOptions eo;
    eo.target = Target::NandGate;
    eo.M = 10;
    eo.R = 1;
    eo.trials = 400;
    eo.seed = 5;
    eo.threads = 1;
    EstimateResult r = estimate_logical_error(eo);
    CHECK(r.step_errors == 0);
    CHECK(r.point.error == 0.0);
    CHECK(r.point.ci_lo == 0.0);
    CHECK_THAT(r.point.ci_hi,
               Catch::Matchers::WithinAbs(1.0 - std::pow(0.05, 1.0 / 100.0), 1e-12));
    CHECK(r.point.ci_hi < 0.03);
    CHECK(r.point.neurons == 53);
}

TEST_CASE("step decoding is an upper bound on oracle decoding") {
    EstimateOptions eo;
    eo.target = Target::DecodeRoundtrip;
    eo.noise = NoiseModel{0.12, 0.0};
    eo.M = 6;
    eo.R = 1;
    eo.trials = 1600;
    eo.seed = 3;
    eo.threads = 1;
    EstimateResult r = estimate_logical_error(eo);
    CHECK(r.point.trials == 200);
    CHECK(r.point.neurons == 26);  // MR + 2MD + 8R at M=6, R=1
    CHECK(r.oracle_errors >= 1);
    CHECK(r.step_errors >= r.oracle_errors);
    CHECK(r.step_errors <= 1500);  // interior, not saturated
}

TEST_CASE("multiplier ensemble estimate") {
    // uncapped per-trial scales with the averaged threshold leave a small
    // noiseless floor from near-aliased scale draws; that floor is part of
    // the ensemble being measured
    EstimateOptions eo;
    eo.target = Target::Multiplier;
    eo.M = 10;
    eo.R = 1;
    eo.trials = 1600;
    eo.seed = 9;
    eo.threads = 1;
    EstimateResult r = estimate_logical_error(eo);
    CHECK(r.point.neurons == 512);  // 48M + 32 at R=1
    CHECK(r.point.error <= 0.15);
    CHECK(r.per_assignment.size() == 16);
}

TEST_CASE("estimate guards") {
    EstimateOptions eo;
    eo.trials = 99;
    CHECK_THROWS_AS(estimate_logical_error(eo), std::domain_error);
    eo.trials = 400;
    eo.M = 0;
    CHECK_THROWS_AS(estimate_logical_error(eo), std::domain_error);
}

TEST_CASE("minimal modulus-count fitting") {
    FitOptions fo;
    fo.target = Target::DecodeRoundtrip;
    fo.sigmas = {0.0, 0.05, 0.1};
    fo.epsilons = {0.2, 0.1, 0.05};
    fo.trials = 800;
    fo.M_budget = 16;
    fo.seed = 2;
    fo.threads = 1;
    MOfEpsResult res = fit_M_of_eps(fo);

    REQUIRE(res.cells.size() == 9);
    for (const MOfEpsCell& c : res.cells) {
        CHECK(c.trials == 100);
        CHECK(c.M_min >= 1);
        CHECK(c.M_min <= 16);
        if (c.censored) {
            CHECK(c.M_min == 16);
            CHECK(c.error > c.eps);
        } else {
            CHECK(c.error <= c.eps);
        }
        CHECK(c.ci.lo <= c.error);
        CHECK(c.error <= c.ci.hi);
    }
    // tighter targets never need fewer moduli (cells are eps-major per sigma)
    for (std::size_t i = 0; i + 1 < res.cells.size(); ++i)
        if (res.cells[i].sigma == res.cells[i + 1].sigma)
            CHECK(res.cells[i].M_min <= res.cells[i + 1].M_min);
    CHECK(res.probes.size() >= 9);
    CHECK(res.has_sigma0);
}

TEST_CASE("fitting censors at the modulus budget") {
    FitOptions fo;
    fo.target = Target::DecodeRoundtrip;
    fo.sigmas = {0.0, 0.3, 0.4};
    fo.epsilons = {0.1, 0.05, 0.01};
    fo.trials = 400;
    fo.M_budget = 2;
    fo.seed = 4;
    fo.threads = 1;
    MOfEpsResult res = fit_M_of_eps(fo);
    REQUIRE(res.cells.size() == 9);
    for (const MOfEpsCell& c : res.cells) {
        CHECK(c.censored);
        CHECK(c.M_min == 2);
    }
}

TEST_CASE("fitting guards") {
    FitOptions ok;
    ok.threads = 1;

    FitOptions fo = ok;
    fo.sigmas = {0.0, 0.1};
    CHECK_THROWS_AS(fit_M_of_eps(fo), std::domain_error);
    fo = ok;
    fo.epsilons = {0.1, 0.05};
    CHECK_THROWS_AS(fit_M_of_eps(fo), std::domain_error);
    fo = ok;
    fo.M_budget = 1;
    CHECK_THROWS_AS(fit_M_of_eps(fo), std::domain_error);
    fo = ok;
    fo.M_budget = 257;
    CHECK_THROWS_AS(fit_M_of_eps(fo), std::domain_error);
}

TEST_CASE("phase diagram classification") {
    SECTION("single quiet cell") {
        PhaseDiagramOptions po;
        po.p_grid = {0.0};
        po.sigma_grid = {0.0};
        po.M = 10;
        po.R = 1;
        po.trials = 400;
        po.seed = 1;
        po.threads = 1;
        PhaseDiagramResult res = phase_diagram(po);
        REQUIRE(res.points.size() == 1);
        CHECK(res.points[0].error == 0.0);
        CHECK(res.threshold == ep_threshold());
        CHECK(res.boundary.empty());
    }

    SECTION("crossing along the failure axis") {
        PhaseDiagramOptions po;
        po.p_grid = {0.0, 0.9};
        po.sigma_grid = {0.0};
        po.M = 4;
        po.R = 1;
        po.trials = 400;
        po.seed = 6;
        po.threads = 1;
        PhaseDiagramResult res = phase_diagram(po);
        REQUIRE(res.points.size() == 2);
        CHECK(res.points[0].error <= res.threshold);
        CHECK(res.points[1].error > res.threshold);
        REQUIRE(res.boundary.size() == 1);
        CHECK(res.boundary[0].first > 0.0);
        CHECK(res.boundary[0].first < 0.9);
        CHECK(res.boundary[0].second == 0.0);
    }

    SECTION("guards") {
        PhaseDiagramOptions po;
        po.p_grid.clear();
        CHECK_THROWS_AS(phase_diagram(po), std::domain_error);
        po.p_grid = {1.5};
        CHECK_THROWS_AS(phase_diagram(po), std::domain_error);
        po.p_grid = {0.0};
        po.sigma_grid = {-1.0};
        CHECK_THROWS_AS(phase_diagram(po), std::domain_error);
    }
}

TEST_CASE("target names") {
    CHECK(std::string(target_name(Target::NandGate)) == "nand");
    CHECK(std::string(target_name(Target::Multiplier)) == "multiplier");
    CHECK(std::string(target_name(Target::DecodeRoundtrip)) == "roundtrip");
}
