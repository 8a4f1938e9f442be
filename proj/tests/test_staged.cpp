#include "eqlearn/staged.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace eqlearn;

namespace {

Rational geometric_half(std::size_t i) { return pow2(-static_cast<int>(i)); }

// concepts of the first n intervals over atoms I1..In, rest
oracle::Bits interval_bits(std::size_t n)
{
    oracle::Bits out;
    for (std::size_t j = 0; j < n; ++j) {
        std::string s(n + 1, '0');
        s[j] = '1';
        out.push_back(s);
    }
    return out;
}

std::vector<Rational> interval_masses(std::size_t n)
{
    std::vector<Rational> mu;
    Rational rest = 1;
    for (std::size_t j = 1; j <= n; ++j) {
        Rational len(1, static_cast<unsigned long>(j * (j + 1)));
        mu.push_back(len);
        rest -= len;
    }
    mu.push_back(rest);
    return mu;
}

} // namespace

TEST_CASE("stage epsilons")
{
    CHECK(stage_epsilon(1) == Rational(1, 4));
    CHECK(stage_epsilon(3) == Rational(1, 16));
}

TEST_CASE("prefix sizes")
{
    CHECK(prefix_size(geometric_half, std::nullopt, Rational(1, 4)) == 2);
    auto point_mass = [](std::size_t i) { return Rational(i == 1 ? 1 : 0); };
    for (int k = 1; k <= 10; ++k)
        CHECK(prefix_size(point_mass, std::nullopt, pow2(-k)) == 1);
    for (int k = 1; k <= 30; ++k)
        CHECK(prefix_size(geometric_half, std::nullopt, stage_epsilon(k)) == static_cast<std::size_t>(k + 1));
    CHECK_THROWS_AS(prefix_size([](std::size_t) { return Rational(1, 10); }, 3, Rational(1, 4)), std::out_of_range);

    IntervalFamily family(Rational(1, 2));
    CHECK(prefix_size(family, Rational(1, 4)) == 2);
    IntervalFamily skewed(Rational(3, 4));
    // 1 - (3/4)^N >= 1 - 1/4 first holds at N = 5
    CHECK(prefix_size(skewed, Rational(1, 4)) == 5);
}

TEST_CASE("binomial tails and step budgets")
{
    for (std::size_t n = 0; n <= 30; ++n)
        for (int d = 0; d <= 6; ++d)
            CHECK(binomial_tail(n, d) == oracle::binomial_tail(n, d));
    CHECK(step_budget(1, Rational(1, 2)) == 2);
    CHECK(step_budget(1, Rational(1, 4)) == 3);
    for (int d = 1; d <= 6; ++d)
        for (int e = 2; e <= 10; ++e) {
            Rational eps = pow2(-e);
            std::size_t n = step_budget(d, eps);
            CHECK(oracle::binomial_tail(n, d) < eps);
            CHECK(oracle::binomial_tail(n - 1, d) >= eps);
        }
    CHECK_THROWS(step_budget(0, Rational(1, 2)));
}

TEST_CASE("interval family geometry")
{
    IntervalFamily family(Rational(1, 2));
    CHECK(IntervalFamily::length(1) == Rational(1, 2));
    CHECK(IntervalFamily::delta_mass(1, 2) == Rational(2, 3));
    CHECK(family.prior(1) == Rational(1, 2));
    CHECK(family.prior(3) == Rational(1, 8));
    CHECK(family.eval(2, Rational(2, 5)));
    CHECK_FALSE(family.eval(2, Rational(1, 2)));

    std::vector<std::size_t> first3{1, 2, 3};
    auto atoms = family.atomize(first3);
    CHECK(atoms.cls.domain().weights() == std::vector<Rational>{Rational(1, 2), Rational(1, 6), Rational(1, 12), Rational(1, 4)});
    CHECK(atoms.cls.size() == 3);
    CHECK(atoms.locate(Rational(3, 4)) == 0);
    CHECK(atoms.locate(Rational(1, 10)) == 3);
    CHECK(ldim(atoms.cls) == 1);
}

TEST_CASE("interval teacher conditional frequencies")
{
    IntervalFamily family(Rational(1, 2));
    Rng rng(2024);
    const int n = 10000;
    int upper_half = 0;
    for (int i = 0; i < n; ++i) {
        auto ce = std::get<FamilyCounterexample>(family.teacher(2, 1, rng));
        bool in_hyp = family.eval(1, ce.point);
        CHECK(in_hyp != family.eval(2, ce.point));
        CHECK(ce.label == family.eval(2, ce.point));
        upper_half += in_hyp;
    }
    CHECK(std::abs(upper_half / double(n) - 0.75) < 0.02);
    CHECK(std::holds_alternative<Equivalent>(family.teacher(4, 4, rng)));
}

TEST_CASE("finite families")
{
    auto file = parse_class_file(R"({"domain":["x1","x2"],"mu":["1/2","1/2"],"concepts":{"A":"10","B":"01","C":"11"},"tau":["1/2","1/4","1/4"]})");
    FiniteFamily family(file);
    CHECK(family.size() == 3);
    CHECK(family.ldim_bound() == 1);
    CHECK(family.prior(2) == Rational(1, 4));
    CHECK(family.eval(3, Rational(1)));
    CHECK_THROWS_AS(family.eval(1, Rational(1, 2)), DomainMismatchError);
    CHECK_THROWS_AS(FiniteFamily(parse_class_file(R"({"domain":["x1"],"mu":["1"],"concepts":{"A":"1"}})")), ValidationError);

    for (std::size_t t = 1; t <= 3; ++t)
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto tr = run_staged_learner(family, t, seed);
            CHECK(tr.outcome == StagedOutcome::identified);
            CHECK(tr.target_retained);
            CHECK(tr.queries.back().hypothesis == t);
        }

    auto one = parse_class_file(R"({"domain":["x1"],"mu":["1"],"concepts":{"A":"1"},"tau":["1"]})");
    auto tr = run_staged_learner(FiniteFamily(one), 1, 9);
    CHECK(tr.query_count() == 1);
    CHECK(tr.stages == 1);
}

TEST_CASE("staged learner on intervals")
{
    IntervalFamily family(Rational(1, 2));
    auto s = stage_schedule(family, 1);
    CHECK(s.prefix_size == 2);
    CHECK(s.step_budget == 3);

    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto tr = run_staged_learner(family, 1, seed);
        CHECK(tr.outcome == StagedOutcome::identified);
        CHECK(tr.stages == 1);
    }
    // a target far outside the early prefixes is still reached
    auto far = run_staged_learner(family, 12, 5);
    CHECK(far.outcome == StagedOutcome::identified);
    CHECK(far.stages >= 11);
    auto capped = run_staged_learner(family, 12, 5, 3);
    CHECK(capped.outcome == StagedOutcome::stage_cap_reached);
    CHECK(capped.stages == 3);
}

TEST_CASE("staged trials are deterministic and thread-independent")
{
    IntervalFamily family(Rational(1, 2));
    auto par = staged_trials(family, 300, 8);
    auto ser = staged_trials_serial(family, 300, 8);
    CHECK(par == ser);
    CHECK(par.identified_count() == 300);
    CHECK(par.mean() >= 1.0);
    std::size_t total = 0;
    for (auto [q, n] : par.histogram())
        total += n;
    CHECK(total == 300);
}

TEST_CASE("prior draws")
{
    IntervalFamily family(Rational(1, 2));
    Rng rng(6);
    const int n = 20000;
    int ones = 0, twos = 0;
    for (int i = 0; i < n; ++i) {
        auto t = draw_target(family, rng);
        ones += t == 1;
        twos += t == 2;
    }
    CHECK(std::abs(ones / double(n) - 0.5) < 0.02);
    CHECK(std::abs(twos / double(n) - 0.25) < 0.02);
}

TEST_CASE("plain learner first counterexample")
{
    for (std::size_t prefix = 1; prefix <= 7; ++prefix)
        CHECK(first_hypothesis(prefix) == 1 + oracle::maxmin(interval_bits(prefix), interval_masses(prefix)));

    for (std::size_t prefix : {1, 2, 5, 19}) {
        std::size_t h = first_hypothesis(prefix);
        for (std::size_t t = 1; t <= 200; ++t) {
            Rational lh(1, static_cast<unsigned long>(h * (h + 1)));
            Rational lt(1, static_cast<unsigned long>(t * (t + 1)));
            Rational expected = t == h ? Rational(0) : Rational(lh / (lh + lt));
            CHECK(first_counterexample_negative_probability(prefix, t) == expected);
        }
        auto w = nonuniformity_witness(prefix, Rational(99, 100), 200);
        REQUIRE(w.has_value());
        CHECK(first_counterexample_negative_probability(prefix, *w) > Rational(99, 100));
    }
}
