#include "eqlearn/thicket.hpp"
#include "eqlearn/verify.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace eqlearn;

namespace {

ConceptClass c3() { return ConceptClass::from_bitstrings(Domain::uniform(2), {"10", "01", "11"}); }

oracle::Bits bits_of(const ConceptClass& cls)
{
    oracle::Bits out;
    for (const auto& c : cls.concepts())
        out.push_back(c.to_bitstring());
    return out;
}

} // namespace

TEST_CASE("edge weights of the three-concept class")
{
    auto c = c3();
    auto a = c.concept_at(0), b = c.concept_at(1), cc = c.concept_at(2);
    CHECK(edge_weight(c, a, b) == Rational(1, 2));
    CHECK(edge_weight(c, b, a) == Rational(1, 2));
    CHECK_THROWS_AS(edge_weight(c, a, a), std::invalid_argument);

    // ranks derived by brute force: A and B reach C with weight 0, C reaches both with weight 1
    auto mu = oracle::uniform(2);
    auto bits = bits_of(c);
    CHECK(*oracle::rank(bits, mu, "10") == 0);
    CHECK(*oracle::rank(bits, mu, "01") == 0);
    CHECK(*oracle::rank(bits, mu, "11") == 1);
    CHECK(query_rank(c, a) == QueryRank(Rational(0)));
    CHECK(query_rank(c, b) == QueryRank(Rational(0)));
    CHECK(query_rank(c, cc) == QueryRank(Rational(1)));
    CHECK(max_min_query(c) == cc);
    CHECK_FALSE(find_deficient_cycle(c, 3).has_value());
}

TEST_CASE("singletons and pairs")
{
    auto single = ConceptClass::from_bitstrings(Domain::uniform(2), {"01"});
    CHECK(query_rank(single, single.concept_at(0)).is_infinite());
    CHECK(to_string(query_rank(single, single.concept_at(0))) == "inf");
    CHECK(max_min_query(single) == single.concept_at(0));
    CHECK_FALSE(find_deficient_cycle(single, 5).has_value());

    // two concepts: each edge is 1 since the revealed label isolates the target
    Domain skew({"x1", "x2"}, {Rational(1, 5), Rational(4, 5)});
    auto pair = ConceptClass::from_bitstrings(skew, {"10", "01"});
    CHECK(edge_weight(pair, pair.concept_at(0), pair.concept_at(1)) == 1);
    CHECK(max_min_query(pair) == pair.concept_at(0));
}

TEST_CASE("query rank ordering")
{
    CHECK(QueryRank(Rational(1, 3)) < QueryRank(Rational(1, 2)));
    CHECK(QueryRank(Rational(5)) < QueryRank::infinite());
    CHECK_FALSE(QueryRank::infinite() < QueryRank::infinite());
    CHECK_THROWS_AS(QueryRank::infinite().value(), std::logic_error);
}

TEST_CASE("thicket graph matches the brute-force oracle on random classes")
{
    auto corpus = random_corpus(23, 150, 4, 7, 2);
    for (const auto& cls : corpus) {
        auto bits = bits_of(cls);
        std::vector<Rational> mu(cls.domain().weights().begin(), cls.domain().weights().end());
        LdimTable table(cls);
        ThicketGraph g(table, cls.all());
        for (std::size_t a = 0; a < cls.size(); ++a) {
            for (std::size_t b = 0; b < cls.size(); ++b)
                if (a != b)
                    CHECK(g.edge_weight(a, b) == oracle::edge(bits, mu, bits[a], bits[b]));
            CHECK(g.query_rank(a).value() == *oracle::rank(bits, mu, bits[a]));
        }
        CHECK(g.max_min_query() == oracle::maxmin(bits, mu));
    }
}

TEST_CASE("subgraph on a version space uses the subclass dimension")
{
    auto cls = ConceptClass::from_bitstrings(Domain::uniform(3), {"000", "100", "110", "111", "011"});
    LdimTable table(cls);
    ConceptSet members = cls.restrict(cls.all(), 0, true); // 100, 110, 111
    ThicketGraph g(table, members);
    auto sub = restrict(cls, {{0, true}});
    auto bits = bits_of(sub);
    auto mu = oracle::uniform(3);
    CHECK(g.edge_weight(1, 2) == oracle::edge(bits, mu, "100", "110"));
    CHECK(g.edge_weight(3, 1) == oracle::edge(bits, mu, "111", "100"));
    CHECK_THROWS_AS(g.edge_weight(0, 1), std::invalid_argument);
}

TEST_CASE("property checkers are quiet on an exhaustive corpus")
{
    auto corpus = all_classes(Domain::uniform(3));
    CHECK(check_drop_sum(corpus).passed());
    CHECK(check_edge_pair_sum(corpus).passed());
    CHECK(check_max_query_rank(corpus).passed());
    CHECK(check_deficient_cycles(corpus, 5).passed());
}

TEST_CASE("deficient cycle search matches brute-force enumeration")
{
    // cycles of length 2 and 3, under both drop conventions
    auto corpus = random_corpus(7, 300, 4, 8, 3);
    std::size_t found = 0;
    for (const auto& cls : corpus)
        for (auto conv : {DropConvention::target, DropConvention::query}) {
            LdimTable table(cls);
            ThicketGraph g(table, cls.all(), conv);
            const Rational half(1, 2);
            auto deficient = [&](const std::vector<std::size_t>& cyc) {
                bool strict = false;
                for (std::size_t k = 0; k < cyc.size(); ++k) {
                    const auto& w = g.edge_weight(cyc[k], cyc[(k + 1) % cyc.size()]);
                    if (w > half)
                        return false;
                    strict = strict || w < half;
                }
                return strict;
            };
            bool brute = false;
            const std::size_t n = cls.size();
            for (std::size_t a = 0; a < n && !brute; ++a)
                for (std::size_t b = 0; b < n && !brute; ++b) {
                    if (a == b)
                        continue;
                    brute = deficient({a, b});
                    for (std::size_t c = 0; c < n && !brute; ++c)
                        if (c != a && c != b)
                            brute = deficient({a, b, c});
                }
            auto cycle = g.find_deficient_cycle(3);
            CHECK(cycle.has_value() == brute);
            if (cycle) {
                ++found;
                CHECK(deficient(*cycle));
            }
        }
    MESSAGE("classes with a deficient cycle of length <= 3: " << found);
}

TEST_CASE("cycle search on synthetic weights")
{
    auto table = [](std::vector<std::vector<Rational>> w) {
        return [w](std::size_t i, std::size_t j) { return w[i][j]; };
    };
    const Rational h(1, 2), lo(1, 3), hi(2, 3), z(0);
    // 0 -> 1 -> 2 -> 0 all light, one strictly below 1/2
    auto tri = table({{z, h, hi}, {hi, z, h}, {lo, hi, z}});
    auto c = find_deficient_cycle(3, tri, 3);
    REQUIRE(c.has_value());
    CHECK(*c == std::vector<std::size_t>{0, 1, 2});
    CHECK_FALSE(find_deficient_cycle(3, tri, 2).has_value());

    // all edges exactly 1/2: never strict
    auto flat = table({{z, h, h}, {h, z, h}, {h, h, z}});
    CHECK_FALSE(find_deficient_cycle(3, flat, 3).has_value());

    // a 2-cycle between 1 and 2
    auto pair = table({{z, hi, hi}, {hi, z, lo}, {hi, h, z}});
    CHECK(find_deficient_cycle(3, pair, 5) == std::vector<std::size_t>{1, 2});

    CHECK_THROWS_AS(find_deficient_cycle(3, flat, 1), std::invalid_argument);
}
