#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "borel_adapt/bayes_id.hpp"

using namespace borel_adapt;

namespace {

FiniteKernel two_state_kernel(double p, double q) {
    FiniteKernel k(2, 1);
    k.row(0, 0) = {p, 1.0 - p};
    k.row(1, 0) = {q, 1.0 - q};
    return k;
}

const std::vector<std::vector<double>> kUnitMetric{{0.0, 1.0}, {1.0, 0.0}};

}  // namespace

TEST_CASE("epsilon-net construction") {
    SUBCASE("radius two or more always gives a single bin") {
        CandidateFamily fam;
        fam.members = {two_state_kernel(0.9, 0.1), two_state_kernel(0.1, 0.9),
                       two_state_kernel(0.5, 0.5)};
        const EpsilonNet net = build_epsilon_net(fam, 2.0, kUnitMetric);
        CHECK(net.n_bins() == 1);
        CHECK(net.representatives[0] == 0);
    }
    SUBCASE("identical members collapse to one bin for any radius") {
        CandidateFamily fam;
        fam.members = {two_state_kernel(0.3, 0.6), two_state_kernel(0.3, 0.6),
                       two_state_kernel(0.3, 0.6)};
        const EpsilonNet net = build_epsilon_net(fam, 0.01, kUnitMetric);
        CHECK(net.n_bins() == 1);
        for (auto b : net.assignment) CHECK(b == 0);
    }
    SUBCASE("well-separated members occupy separate bins") {
        CandidateFamily fam;
        fam.members = {two_state_kernel(1.0, 1.0), two_state_kernel(0.5, 0.5)};
        const double d = uniform_bl_distance(fam.members[0], fam.members[1], kUnitMetric).value;
        // rows differ by half a point-mass pair: 0.5 * 2d/(2+d) at d = 1
        CHECK(d == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
        const EpsilonNet net = build_epsilon_net(fam, 0.2, kUnitMetric);
        CHECK(net.n_bins() == 2);
        CHECK(net.assignment[0] != net.assignment[1]);
    }
    SUBCASE("invalid radius is rejected") {
        CandidateFamily fam;
        fam.members = {two_state_kernel(0.5, 0.5)};
        CHECK_THROWS_AS(build_epsilon_net(fam, 0.0, kUnitMetric), std::invalid_argument);
    }
}

TEST_CASE("posterior initialization") {
    CandidateFamily fam;
    fam.members = {two_state_kernel(1.0, 1.0), two_state_kernel(0.5, 0.5),
                   two_state_kernel(0.0, 0.0)};
    const EpsilonNet net = build_epsilon_net(fam, 0.2, kUnitMetric);
    REQUIRE(net.n_bins() == 3);
    SUBCASE("uniform prior is accepted") {
        const PosteriorState p = init_posterior({1.0 / 3, 1.0 / 3, 1.0 / 3}, net);
        CHECK(p.max_bin_mass() == doctest::Approx(1.0 / 3).epsilon(1e-12));
        CHECK(p.map_index() == 0);  // ties go to the lowest bin
    }
    SUBCASE("zero member weight is fine while its bin stays charged") {
        CandidateFamily close;
        close.members = {two_state_kernel(0.5, 0.5), two_state_kernel(0.5, 0.5)};
        const EpsilonNet one_bin = build_epsilon_net(close, 0.2, kUnitMetric);
        REQUIRE(one_bin.n_bins() == 1);
        CHECK_NOTHROW(init_posterior({0.0, 1.0}, one_bin));
    }
    SUBCASE("a bin with zero prior mass is rejected by index") {
        try {
            init_posterior({0.5, 0.5, 0.0}, net);
            FAIL("expected a rejection");
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find("bin 2") != std::string::npos);
        }
    }
    SUBCASE("non-stochastic priors are rejected") {
        CHECK_THROWS_AS(init_posterior({0.5, 0.2, 0.1}, net), std::invalid_argument);
    }
}

TEST_CASE("posterior updates") {
    SUBCASE("identical candidates leave the weights unchanged") {
        CandidateFamily fam;
        fam.members = {two_state_kernel(0.3, 0.6), two_state_kernel(0.3, 0.6)};
        const EpsilonNet net = build_epsilon_net(fam, 2.0, kUnitMetric);
        PosteriorState p = init_posterior({0.4, 0.6}, net);
        p.update(fam, 0, 0, 1);
        CHECK(p.weights()[0] == doctest::Approx(0.4).epsilon(1e-12));
        CHECK(p.weights()[1] == doctest::Approx(0.6).epsilon(1e-12));
    }
    SUBCASE("Bayes rule on a 0.8 / 0.2 likelihood split") {
        CandidateFamily fam;
        fam.members = {two_state_kernel(0.8, 0.5), two_state_kernel(0.2, 0.5)};
        const EpsilonNet net = build_epsilon_net(fam, 0.1, kUnitMetric);
        PosteriorState p = init_posterior({0.5, 0.5}, net);
        p.update(fam, 0, 0, 0);  // likelihoods 0.8 and 0.2
        CHECK(p.weights()[0] == doctest::Approx(0.8).epsilon(1e-12));
        CHECK(p.weights()[1] == doctest::Approx(0.2).epsilon(1e-12));
    }
    SUBCASE("zero likelihood eliminates a candidate exactly") {
        CandidateFamily fam;
        fam.members = {two_state_kernel(1.0, 0.5), two_state_kernel(0.5, 0.5)};
        const EpsilonNet net = build_epsilon_net(fam, 0.1, kUnitMetric);
        PosteriorState p = init_posterior({0.5, 0.5}, net);
        p.update(fam, 0, 0, 1);  // member 0 assigns zero mass to this jump
        CHECK(p.weights()[0] == 0.0);
        CHECK(p.weights()[1] == 1.0);
    }
    SUBCASE("total collapse is an error") {
        CandidateFamily fam;
        fam.members = {two_state_kernel(1.0, 0.5), two_state_kernel(1.0, 0.5)};
        const EpsilonNet net = build_epsilon_net(fam, 2.0, kUnitMetric);
        PosteriorState p = init_posterior({0.5, 0.5}, net);
        CHECK_THROWS_AS(p.update(fam, 0, 0, 1), std::runtime_error);
    }
}

TEST_CASE("MAP estimate") {
    CandidateFamily fam;
    fam.members = {two_state_kernel(1.0, 1.0), two_state_kernel(0.5, 0.5),
                   two_state_kernel(0.0, 0.0)};
    const EpsilonNet net = build_epsilon_net(fam, 0.2, kUnitMetric);
    SUBCASE("uniform weights break ties to the lowest index") {
        const PosteriorState p = init_posterior({1.0 / 3, 1.0 / 3, 1.0 / 3}, net);
        CHECK(map_estimate(p) == 0);
    }
    SUBCASE("the heaviest bin wins") {
        const PosteriorState p = init_posterior({0.1, 0.7, 0.2}, net);
        CHECK(map_estimate(p) == 1);
    }
    SUBCASE("map changes are counted only after observations") {
        CandidateFamily pair;
        pair.members = {two_state_kernel(0.8, 0.5), two_state_kernel(0.2, 0.5)};
        const EpsilonNet n2 = build_epsilon_net(pair, 0.1, kUnitMetric);
        PosteriorState p = init_posterior({0.4, 0.6}, n2);
        CHECK(p.map_change_count() == 0);
        p.update(pair, 0, 0, 0);  // flips the MAP from member 1 to member 0
        CHECK(map_estimate(p) == 0);
        CHECK(p.map_change_count() == 1);
    }
}

TEST_CASE("support restriction") {
    CandidateFamily fam;
    fam.members = {two_state_kernel(1.0, 1.0), two_state_kernel(0.5, 0.5),
                   two_state_kernel(0.0, 0.0)};
    const EpsilonNet net = build_epsilon_net(fam, 0.2, kUnitMetric);
    PosteriorState p = init_posterior({0.2, 0.3, 0.5}, net);
    p.restrict_support({true, true, false});
    CHECK(p.weights()[2] == 0.0);
    CHECK(p.weights()[0] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(p.weights()[1] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK_THROWS_AS(p.restrict_support({false, false, false}), std::runtime_error);
}
