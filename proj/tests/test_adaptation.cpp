#include "iavs/adaptation.hpp"
#include "iavs/errors.hpp"
#include "iavs/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace iavs;

namespace {

double logistic(double l) { return 1.0 / (1.0 + std::exp(-l)); }
double logit(double x) { return std::log(x / (1.0 - x)); }

AdaptConfig half_step(double tau) {
    AdaptConfig c;
    c.tau = tau;
    c.phi0 = 0.5;
    c.epsilon = 0.0;
    return c;
}

} // namespace

TEST_CASE("IA worked example") {
    // eps = 0, A = 0.2, phi = 0.5, a = 0.75, tau = 0.25
    ProposalParams eta({0.2}, {0.5}, 0.0);
    ia_update(eta, FlipRecord{{0}, {}}, 0.75, 1, half_step(0.25));
    CHECK(eta.add(0) == doctest::Approx(logistic(logit(0.2) + 0.25)));
    CHECK(eta.add(0) == doctest::Approx(0.2430).epsilon(1e-3));
    CHECK(eta.del(0) == doctest::Approx(0.5));
}

TEST_CASE("IA moves D for deletions and nothing without flips") {
    ProposalParams eta({0.2, 0.3}, {0.5, 0.6}, 0.0);
    const auto before = eta;
    ia_update(eta, FlipRecord{}, 1.0, 1, half_step(0.25));
    CHECK(eta == before);
    ia_update(eta, FlipRecord{{}, {1}}, 0.05, 1, half_step(0.25));
    CHECK(eta.del(1) == doctest::Approx(logistic(logit(0.6) - 0.1)));
    CHECK(eta.add(1) == before.add(1));
    CHECK(eta.add(0) == before.add(0));
}

TEST_CASE("RAPA worked example") {
    // w = 0.5, a_fwd = 0.75, a_rev = 0.4, tau = 0.25, phi = 0.5
    auto cfg = half_step(0.25);
    cfg.w = 0.5;
    ProposalParams eta({0.2, 0.3}, {0.5, 0.6}, 0.0);
    rapa_update(eta, FlipRecord{{0}, {1}}, 0.75, 0.4, 1, cfg);
    const double forward = 0.5 * (0.75 - 0.25) * (1.0 - 0.5 * 0.75); // 0.15625
    const double reverse = 0.5 * (0.4 - 0.25) * (0.5 * 0.75);         // 0.028125
    CHECK(eta.add(0) == doctest::Approx(logistic(logit(0.2) + forward)));
    CHECK(eta.del(0) == doctest::Approx(logistic(logit(0.5) + reverse)));
    CHECK(eta.del(1) == doctest::Approx(logistic(logit(0.6) + forward)));
    CHECK(eta.add(1) == doctest::Approx(logistic(logit(0.3) + reverse)));
}

TEST_CASE("RAPA with w = 0 is IA") {
    auto rng = make_rng(3, 0);
    AdaptConfig cfg;
    cfg.w = 0.0;
    ProposalParams a(std::vector<double>(6, 0.1), std::vector<double>(6, 0.4), cfg.epsilon);
    auto b = a;
    for (std::size_t i = 1; i <= 2000; ++i) {
        FlipRecord f;
        for (std::size_t j = 0; j < 6; ++j) {
            const double u = uniform01(rng);
            if (u < 0.2)
                f.add_flips.push_back(j);
            else if (u < 0.35)
                f.del_flips.push_back(j);
        }
        const double af = uniform01(rng), ar = uniform01(rng);
        ia_update(a, f, af, i, cfg);
        b = rapa_updated(b, f, af, ar, i, cfg);
        REQUIRE(a == b);
    }
}

TEST_CASE("updates keep parameters inside the band and increments bounded") {
    auto rng = make_rng(11, 0);
    for (auto rule : {AdaptRule::Individual, AdaptRule::ReverseAccelerated}) {
        AdaptConfig cfg;
        cfg.tau = 0.3;
        cfg.epsilon = 0.01;
        cfg.phi0 = 5.0;
        ProposalParams eta(std::vector<double>(4, 0.3), std::vector<double>(4, 0.3), cfg.epsilon);
        for (std::size_t i = 1; i <= 20000; ++i) {
            FlipRecord f;
            for (std::size_t j = 0; j < 4; ++j) {
                const double u = uniform01(rng);
                if (u < 0.3)
                    f.add_flips.push_back(j);
                else if (u < 0.5)
                    f.del_flips.push_back(j);
            }
            // extreme acceptances push towards the boundaries
            const double af = i % 1000 < 500 ? 1.0 : 0.0;
            const auto before = eta;
            adapt(rule, eta, f, af, uniform01(rng), i, cfg);
            const double bound = 2.0 * step_size(i, cfg) * std::max(cfg.tau, 1.0 - cfg.tau) + 1e-12;
            for (std::size_t j = 0; j < 4; ++j) {
                REQUIRE(eta.add(j) > cfg.epsilon);
                REQUIRE(eta.add(j) < 1.0 - cfg.epsilon);
                REQUIRE(eta.del(j) > cfg.epsilon);
                REQUIRE(eta.del(j) < 1.0 - cfg.epsilon);
                REQUIRE(std::abs(eta.add_logit(j) - before.add_logit(j)) <= bound);
                REQUIRE(std::abs(eta.del_logit(j) - before.del_logit(j)) <= bound);
            }
        }
    }
}

TEST_CASE("step sizes and counter") {
    AdaptConfig cfg;
    cfg.phi0 = 2.0;
    cfg.lambda = 0.75;
    CHECK(step_size(1, cfg) == 2.0);
    CHECK(step_size(16, cfg) == doctest::Approx(2.0 / 8.0));
    cfg.phi0 = 0.0;
    CHECK(step_size(5, cfg) == 0.0);
    AdaptCounter c;
    CHECK(c.next() == 1);
    CHECK(c.next() == 2);
    CHECK(c.value() == 3);
    c.reset();
    CHECK(c.value() == 1);
}

TEST_CASE("initial proposal parameters") {
    AdaptConfig cfg;
    const auto eta = init_proposal_params(100, 0.05, cfg);
    CHECK(eta.add(7) == doctest::Approx(1.0 / (0.95 * 100)));
    CHECK(eta.del(7) == doctest::Approx(1.0 / (0.05 * 100)));
    // p = 20000: A = 1/19995 falls below the default epsilon
    CHECK_THROWS_AS(init_proposal_params(20000, 5.0 / 20000, cfg), InitOutOfRange);
    cfg.epsilon = 1e-6;
    CHECK_NOTHROW(init_proposal_params(20000, 5.0 / 20000, cfg));
    cfg.nu = 10.0;
    cfg.epsilon = 0.001;
    CHECK_THROWS_AS(init_proposal_params(10, 0.5, cfg), InitOutOfRange);
}

TEST_CASE("configuration validation") {
    AdaptConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    for (auto mutate : {+[](AdaptConfig &c) { c.tau = 1.0; }, +[](AdaptConfig &c) { c.epsilon = 0.5; },
                        +[](AdaptConfig &c) { c.lambda = 0.5; }, +[](AdaptConfig &c) { c.lambda = 1.2; },
                        +[](AdaptConfig &c) { c.phi0 = -1.0; }, +[](AdaptConfig &c) { c.nu = 0.0; },
                        +[](AdaptConfig &c) { c.w = 1.5; }}) {
        AdaptConfig c;
        mutate(c);
        CHECK_THROWS_AS(c.validate(), ConfigError);
    }
}
