#include "eqlearn/class_io.hpp"
#include "eqlearn/concept_class.hpp"
#include "eqlearn/rng.hpp"

#include <doctest.h>

using namespace eqlearn;

namespace {

ConceptClass c3() { return ConceptClass::from_bitstrings(Domain::uniform(2), {"10", "01", "11"}); }

std::vector<std::string> bitstrings(const ConceptClass& c)
{
    std::vector<std::string> out;
    for (const auto& x : c.concepts())
        out.push_back(x.to_bitstring());
    return out;
}

} // namespace

TEST_CASE("restrict")
{
    auto full = ConceptClass::from_bitstrings(Domain::uniform(2), {"00", "01", "10", "11"});
    CHECK(restrict(full, {}) == full);
    CHECK(bitstrings(restrict(full, {{0, true}})) == std::vector<std::string>{"10", "11"});
    CHECK(bitstrings(restrict(c3(), {{0, true}, {1, false}})) == std::vector<std::string>{"10"});

    auto byname = PartialAssignment::from_names(full.domain(), {{"x1", true}});
    CHECK(byname == PartialAssignment{{0, true}});
    CHECK_THROWS_AS(PartialAssignment::from_names(full.domain(), {{"x9", true}}), DomainMismatchError);
    CHECK_THROWS_AS(restrict(full, {{5, true}}), DomainMismatchError);

    auto r = restrict(full, {{1, false}});
    CHECK(r.domain() == full.domain());
    CHECK(r.labels() == std::vector<std::string>{"A", "C"});
}

TEST_CASE("symmetric difference and mass")
{
    auto a = Concept::from_bitstring("110");
    CHECK(symmetric_difference(a, a).empty());
    CHECK(symmetric_difference(Concept::from_bitstring("10"), Concept::from_bitstring("01")) == std::vector<PointId>{0, 1});
    CHECK(symmetric_difference(a, Concept::from_bitstring("100")) == std::vector<PointId>{1});
    CHECK_THROWS_AS(symmetric_difference(a, Concept::from_bitstring("10")), DomainMismatchError);

    auto u4 = Domain::uniform(4);
    CHECK(mass(u4, std::vector<PointId>{}) == 0);
    CHECK(mass(u4, std::vector<PointId>{0, 1}) == Rational(1, 2));
    Domain skew({"x1", "x2", "x3"}, {Rational(1, 6), Rational(1, 3), Rational(1, 2)});
    CHECK(mass(skew, std::vector<PointId>{0, 2}) == Rational(2, 3));
}

TEST_CASE("domain validation")
{
    CHECK_THROWS_AS(Domain({"a", "b"}, {Rational(1, 2), Rational(1, 3)}), ValidationError);
    try {
        Domain({"a", "b"}, {Rational(1), Rational(0)});
        FAIL("expected rejection");
    } catch (const ValidationError& e) {
        CHECK(e.kind() == ValidationErrorKind::nonpositive_weight);
    }
    try {
        Domain({"a", "a"}, {Rational(1, 2), Rational(1, 2)});
        FAIL("expected rejection");
    } catch (const ValidationError& e) {
        CHECK(e.kind() == ValidationErrorKind::duplicate_point);
    }
    CHECK_THROWS_AS(ConceptClass::from_bitstrings(Domain::uniform(2), {"10", "10"}), ValidationError);
    CHECK_THROWS_AS(ConceptClass::from_bitstrings(Domain::uniform(2), {"101"}), ValidationError);
}

TEST_CASE("empty class is a value")
{
    ConceptClass empty(Domain::uniform(2), {});
    CHECK(empty.empty());
    CHECK(restrict(c3(), {{0, false}, {1, false}}).empty());
}

TEST_CASE("restriction properties on random classes")
{
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 1 + rng.below(5);
        std::vector<std::string> bits;
        for (std::uint64_t p = 0; p < (1u << n); ++p)
            if (rng.below(2)) {
                std::string s;
                for (std::size_t x = 0; x < n; ++x)
                    s.push_back((p >> x & 1) ? '1' : '0');
                bits.push_back(s);
            }
        auto cls = ConceptClass::from_bitstrings(Domain::uniform(n), bits);
        for (PointId x = 0; x < n; ++x) {
            // the two restrictions at x partition the class
            CHECK(restrict(cls, {{x, false}}).size() + restrict(cls, {{x, true}}).size() == cls.size());
            for (PointId y = 0; y < n; ++y) {
                if (x == y)
                    continue;
                bool vx = rng.below(2), vy = rng.below(2);
                CHECK(restrict(restrict(cls, {{x, vx}}), {{y, vy}}) == restrict(cls, {{x, vx}, {y, vy}}));
            }
        }
        for (std::size_t i = 0; i < cls.size(); ++i)
            for (std::size_t j = 0; j < cls.size(); ++j)
                CHECK(symmetric_difference(cls.concept_at(i), cls.concept_at(j)).empty() == (i == j));
        std::vector<PointId> all(n), left, right;
        for (PointId x = 0; x < n; ++x) {
            all[x] = x;
            (rng.below(2) ? left : right).push_back(x);
        }
        CHECK(mass(cls.domain(), all) == 1);
        CHECK(mass(cls.domain(), left) + mass(cls.domain(), right) == 1);
    }
}

TEST_CASE("class file parsing")
{
    auto single = parse_class_file(R"({"domain":["x1"],"mu":["1"],"concepts":{"A":"0"}})");
    CHECK(single.cls.size() == 1);
    CHECK_FALSE(single.tau.has_value());

    auto kind_of = [](const char* text) {
        try {
            parse_class_file(text);
        } catch (const ValidationError& e) {
            return e.kind();
        }
        FAIL("expected a validation error");
        return ValidationErrorKind::malformed_json;
    };
    CHECK(kind_of(R"({"domain":["x1","x2"],"mu":["1/2","1/3"],"concepts":{"A":"01"}})")
        == ValidationErrorKind::weights_not_normalized);
    CHECK(kind_of(R"({"domain":["x1","x2"],"mu":["1/2","1/2"],"concepts":{"A":"01","B":"01"}})")
        == ValidationErrorKind::duplicate_concept);
    CHECK(kind_of(R"({"domain":["x1","x2"],"mu":["1/2","1/2"],"concepts":{"A":"011"}})") == ValidationErrorKind::length_mismatch);
    CHECK(kind_of(R"({"domain":["x1","x2"],"mu":["1/2","half"],"concepts":{"A":"01"}})") == ValidationErrorKind::malformed_weight);
    CHECK(kind_of(R"({"domain":["x1","x2"],"mu":["1/0","1"],"concepts":{"A":"01"}})") == ValidationErrorKind::malformed_weight);
    CHECK(kind_of(R"({"domain":["x1","x2"],"mu":["0","1"],"concepts":{"A":"01"}})") == ValidationErrorKind::nonpositive_weight);
    CHECK(kind_of(R"({"domain":["x1"],"mu":["1"],"concepts":{"A":"2"}})") == ValidationErrorKind::malformed_bitstring);
    CHECK(kind_of(R"({"domain":["x1"],"concepts":{"A":"1"}})") == ValidationErrorKind::missing_field);
    CHECK(kind_of(R"({"domain":["x1"],"mu":["1"],"concepts":{"A":"1"},"tau":["1/2"]})") == ValidationErrorKind::malformed_prior);

    try {
        parse_class_file("{\"domain\": [\"x1\",, ]}");
        FAIL("expected a parse error");
    } catch (const ValidationError& e) {
        CHECK(e.kind() == ValidationErrorKind::malformed_json);
        REQUIRE(e.position().has_value());
        CHECK(*e.position() > 0);
    }
}

TEST_CASE("class files keep concept order and round-trip")
{
    auto f = parse_class_file(
        R"({"domain":["p","q","r"],"mu":["1/6","1/3","1/2"],"concepts":{"Z":"010","A":"110"},"tau":["1/4","3/4"]})");
    CHECK(f.cls.labels() == std::vector<std::string>{"Z", "A"});
    CHECK(*f.tau == std::vector<Rational>{Rational(1, 4), Rational(3, 4)});
    auto again = parse_class_file(save_class(f.cls, f.tau));
    CHECK(again.cls == f.cls);
    CHECK(again.tau == f.tau);

    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        std::size_t n = 1 + rng.below(4);
        std::vector<Rational> w;
        std::vector<std::string> names;
        Rational left = 1;
        for (std::size_t x = 0; x + 1 < n; ++x) {
            Rational piece = left * Rational(1 + static_cast<long>(rng.below(5)), 7);
            w.push_back(piece);
            left -= piece;
            names.push_back("p" + std::to_string(x));
        }
        w.push_back(left);
        names.push_back("last");
        std::vector<std::string> bits;
        for (std::uint64_t p = 0; p < (1u << n); ++p)
            if (rng.below(2)) {
                std::string s;
                for (std::size_t x = 0; x < n; ++x)
                    s.push_back((p >> x & 1) ? '1' : '0');
                bits.push_back(s);
            }
        auto cls = ConceptClass::from_bitstrings(Domain(names, w), bits);
        CHECK(load_class(save_class(cls)) == cls);
    }
}

TEST_CASE("rational parsing")
{
    CHECK(parse_rational("2/4") == Rational(1, 2));
    CHECK(parse_rational("3") == 3);
    CHECK(parse_decimal("0.25") == Rational(1, 4));
    CHECK(parse_decimal("1/3") == Rational(1, 3));
    CHECK_THROWS_AS(parse_rational(" 1/2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/"), std::invalid_argument);
    CHECK(to_string(Rational(6, 4)) == "3/2");
    CHECK(to_string(Rational(4, 2)) == "2");
}
