#include "eqlearn/verify.hpp"

#include <doctest.h>

using namespace eqlearn;

TEST_CASE("random corpora are reproducible and bounded")
{
    auto a = random_corpus(7, 50, 5, 8);
    auto b = random_corpus(7, 50, 5, 8);
    REQUIRE(a.size() == 50);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i] == b[i]);
        CHECK(a[i].domain().size() <= 5);
        CHECK(a[i].size() <= 8);
        CHECK_FALSE(a[i].empty());
    }
    // class i depends only on (seed, i)
    CHECK(random_corpus(7, 3, 5, 8)[2] == a[2]);
    CHECK_FALSE(random_corpus(8, 1, 5, 8)[0] == a[0]);
    CHECK_THROWS(random_corpus(1, 1, 2, 8, 5));
}

TEST_CASE("exhaustive enumeration")
{
    CHECK(all_classes(Domain::uniform(1)).size() == 3);
    CHECK(all_classes(Domain::uniform(3)).size() == 255);
    CHECK_THROWS(all_classes(Domain::uniform(5)));
}

TEST_CASE("serial and parallel checks agree")
{
    auto corpus = random_corpus(3, 120, 5, 8);
    VerifyOptions serial{.max_cycle_length = 4, .max_sample_size = 3, .exec = Execution::serial};
    VerifyOptions parallel = serial;
    parallel.exec = Execution::parallel;
    auto s = verify_all(corpus, serial);
    auto p = verify_all(corpus, parallel);
    CHECK(s == p);
    for (const auto& r : s) {
        CHECK(r.passed());
        CHECK(r.classes == corpus.size());
        CHECK(r.checks > 0);
    }
}

TEST_CASE("swapping the drop convention is caught by the learner bound")
{
    auto corpus = random_corpus(7, 1000, 5, 8);
    CHECK(check_edge_pair_sum(corpus, Execution::parallel, DropConvention::query).passed());
    auto mutant = check_learner_bound(corpus, Execution::parallel, DropConvention::query);
    CHECK_FALSE(mutant.passed());
    CHECK(check_learner_bound(corpus).passed());
}

TEST_CASE("total-query reading of the learner bound fails on three disjoint singletons")
{
    auto cls = ConceptClass::from_bitstrings(Domain::uniform(3), {"100", "010", "001"});
    auto single = std::vector<ConceptClass>{cls};
    auto r = check_total_query_bound(single, Execution::serial);
    CHECK_FALSE(r.passed());
    CHECK(check_learner_bound(single, Execution::serial).passed());
    CHECK(exact_expected_queries(cls, cls.concept_at(2)) == Rational(5, 2));
}
