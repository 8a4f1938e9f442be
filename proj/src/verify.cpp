#include "eqlearn/verify.hpp"

#include "eqlearn/class_io.hpp"

#include <omp.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace eqlearn {

// ---------------------------------------------------------------- corpora

ConceptClass random_class(Rng& rng, std::size_t points, std::size_t concepts)
{
    if (points == 0 || points > 20)
        throw std::invalid_argument("random_class: points must be in [1, 20]");
    const std::uint64_t patterns = std::uint64_t{1} << points;
    if (concepts == 0 || concepts > patterns)
        throw std::invalid_argument("random_class: concept count must be in [1, 2^points]");

    std::vector<std::uint64_t> weights_raw(points);
    std::uint64_t total = 0;
    for (auto& w : weights_raw) {
        w = 1 + rng.below(16);
        total += w;
    }
    std::vector<std::string> names;
    std::vector<Rational> weights;
    for (std::size_t i = 0; i < points; ++i) {
        names.push_back("x" + std::to_string(i + 1));
        Rational w{mpz_class(static_cast<unsigned long>(weights_raw[i])), mpz_class(static_cast<unsigned long>(total))};
        w.canonicalize();
        weights.push_back(w);
    }

    // partial Fisher-Yates over the bit patterns
    std::vector<std::uint64_t> pool(patterns);
    std::iota(pool.begin(), pool.end(), std::uint64_t{0});
    std::vector<Concept> cs;
    for (std::size_t k = 0; k < concepts; ++k) {
        std::size_t j = k + static_cast<std::size_t>(rng.below(patterns - k));
        std::swap(pool[k], pool[j]);
        std::vector<std::uint8_t> bits(points);
        for (std::size_t x = 0; x < points; ++x)
            bits[x] = (pool[k] >> x) & 1;
        cs.emplace_back(std::move(bits));
    }
    return ConceptClass(Domain(std::move(names), std::move(weights)), std::move(cs));
}

ConceptClass random_class_bounded(Rng& rng, std::size_t max_points, std::size_t max_concepts, std::size_t min_concepts)
{
    if (max_points == 0)
        throw std::invalid_argument("random_class_bounded: max_points must be positive");
    // redraw the point count until it can hold min_concepts patterns
    for (;;) {
        std::size_t points = 1 + static_cast<std::size_t>(rng.below(max_points));
        std::size_t cap = std::min<std::size_t>(max_concepts, std::size_t{1} << points);
        if (cap < min_concepts)
            continue;
        std::size_t concepts = min_concepts + static_cast<std::size_t>(rng.below(cap - min_concepts + 1));
        return random_class(rng, points, concepts);
    }
}

std::vector<ConceptClass> random_corpus(std::uint64_t seed, std::size_t count, std::size_t max_points, std::size_t max_concepts,
    std::size_t min_concepts)
{
    if (min_concepts > std::min<std::size_t>(max_concepts, std::size_t{1} << std::min<std::size_t>(max_points, 20)))
        throw std::invalid_argument("random_corpus: min_concepts is unattainable");
    std::vector<ConceptClass> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng(derive_seed(seed, i));
        out.push_back(random_class_bounded(rng, max_points, max_concepts, min_concepts));
    }
    return out;
}

std::vector<ConceptClass> all_classes(const Domain& domain)
{
    const std::size_t n = domain.size();
    if (n > 4)
        throw std::invalid_argument("all_classes: more than 4 points is impractical");
    auto shared = std::make_shared<const Domain>(domain);
    const std::size_t patterns = std::size_t{1} << n;
    std::vector<ConceptClass> out;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << patterns); ++mask) {
        std::vector<Concept> cs;
        for (std::size_t p = 0; p < patterns; ++p) {
            if (!(mask >> p & 1))
                continue;
            std::vector<std::uint8_t> bits(n);
            for (std::size_t x = 0; x < n; ++x)
                bits[x] = (p >> (n - 1 - x)) & 1; // first point is the leading bit
            cs.emplace_back(std::move(bits));
        }
        out.emplace_back(shared, std::move(cs));
    }
    return out;
}

// -------------------------------------------------------------- properties

namespace {

struct ClassOutcome {
    std::size_t checks = 0;
    std::vector<std::string> violations;
};

using ClassCheck = std::function<ClassOutcome(const ConceptClass&)>;

PropertyResult run_check(std::string name, std::span<const ConceptClass> corpus, Execution exec, const ClassCheck& check)
{
    std::vector<ClassOutcome> outcomes(corpus.size());
    const auto n = static_cast<std::int64_t>(corpus.size());
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (std::int64_t i = 0; i < n; ++i)
            outcomes[static_cast<std::size_t>(i)] = check(corpus[static_cast<std::size_t>(i)]);
    } else {
        for (std::int64_t i = 0; i < n; ++i)
            outcomes[static_cast<std::size_t>(i)] = check(corpus[static_cast<std::size_t>(i)]);
    }
    PropertyResult r;
    r.name = std::move(name);
    r.classes = corpus.size();
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        r.checks += outcomes[i].checks;
        for (auto& v : outcomes[i].violations)
            r.violations.push_back(PropertyWitness{i, v});
    }
    return r;
}

std::string pair_detail(const ConceptClass& cls, std::size_t a, std::size_t b)
{
    return cls.label(a) + "=" + cls.concept_at(a).to_bitstring() + ", " + cls.label(b) + "=" + cls.concept_at(b).to_bitstring();
}

} // namespace

PropertyResult check_drop_sum(std::span<const ConceptClass> corpus, Execution exec)
{
    return run_check("drop_sum", corpus, exec, [](const ConceptClass& cls) {
        ClassOutcome o;
        LdimTable table(cls);
        const ConceptSet all = cls.all();
        for (std::size_t a = 0; a < cls.size(); ++a)
            for (std::size_t b = a + 1; b < cls.size(); ++b)
                for (PointId x : symmetric_difference(cls.concept_at(a), cls.concept_at(b))) {
                    ++o.checks;
                    int sum = table.drop(all, a, x) + table.drop(all, b, x);
                    if (sum < 1)
                        o.violations.push_back(pair_detail(cls, a, b) + ", x=" + cls.domain().point(x) + ": sum "
                            + std::to_string(sum));
                }
        return o;
    });
}

PropertyResult check_edge_pair_sum(std::span<const ConceptClass> corpus, Execution exec, DropConvention convention)
{
    return run_check("edge_pair_sum", corpus, exec, [convention](const ConceptClass& cls) {
        ClassOutcome o;
        LdimTable table(cls);
        ThicketGraph g(table, cls.all(), convention);
        for (std::size_t a = 0; a < cls.size(); ++a)
            for (std::size_t b = a + 1; b < cls.size(); ++b) {
                ++o.checks;
                Rational sum = g.edge_weight(a, b) + g.edge_weight(b, a);
                if (sum < 1)
                    o.violations.push_back(pair_detail(cls, a, b) + ": sum " + to_string(sum));
            }
        return o;
    });
}

PropertyResult check_max_query_rank(std::span<const ConceptClass> corpus, Execution exec)
{
    return run_check("max_query_rank", corpus, exec, [](const ConceptClass& cls) {
        ClassOutcome o;
        if (cls.size() < 2)
            return o;
        ++o.checks;
        LdimTable table(cls);
        ThicketGraph g(table, cls.all());
        QueryRank best = g.query_rank(g.max_min_query());
        if (best.value() < Rational(1, 2))
            o.violations.push_back("largest query rank " + to_string(best));
        return o;
    });
}

PropertyResult check_deficient_cycles(std::span<const ConceptClass> corpus, std::size_t max_len, Execution exec)
{
    return run_check("deficient_cycles", corpus, exec, [max_len](const ConceptClass& cls) {
        ClassOutcome o;
        ++o.checks;
        LdimTable table(cls);
        ThicketGraph g(table, cls.all());
        if (auto cycle = g.find_deficient_cycle(max_len)) {
            std::string d = "cycle";
            for (auto v : *cycle)
                d += " " + cls.label(v);
            o.violations.push_back(d);
        }
        return o;
    });
}

PropertyResult check_learner_bound(std::span<const ConceptClass> corpus, Execution exec, DropConvention convention)
{
    return run_check("learner_bound", corpus, exec, [convention](const ConceptClass& cls) {
        ClassOutcome o;
        LdimTable table(cls);
        const int bound = 2 * table.ldim();
        for (std::size_t t = 0; t < cls.size(); ++t) {
            ++o.checks;
            Rational wrong = exact_expected_queries(table, t, convention) - 1;
            if (wrong > bound)
                o.violations.push_back("target " + cls.label(t) + ": expected counterexamples " + to_string(wrong) + " > "
                    + std::to_string(bound));
        }
        return o;
    });
}

PropertyResult check_total_query_bound(std::span<const ConceptClass> corpus, Execution exec)
{
    return run_check("total_query_bound", corpus, exec, [](const ConceptClass& cls) {
        ClassOutcome o;
        if (cls.size() < 2)
            return o;
        LdimTable table(cls);
        const int bound = 2 * table.ldim();
        for (std::size_t t = 0; t < cls.size(); ++t) {
            ++o.checks;
            Rational total = exact_expected_queries(table, t);
            if (total > bound)
                o.violations.push_back("target " + cls.label(t) + ": expected queries " + to_string(total) + " > "
                    + std::to_string(bound));
        }
        return o;
    });
}

PropertyResult check_compression(std::span<const ConceptClass> corpus, std::optional<std::size_t> max_sample_size, Execution exec)
{
    return run_check("compression_roundtrip", corpus, exec, [max_sample_size](const ConceptClass& cls) {
        ClassOutcome o;
        CertificationReport r = certify_scheme_serial(cls, max_sample_size);
        o.checks = r.samples_tested;
        if (r.rho_count != static_cast<std::size_t>(r.d) + 1)
            o.violations.push_back("reconstructor count " + std::to_string(r.rho_count));
        for (const auto& f : r.failures) {
            std::ostringstream os;
            os << "sample " << f.sample.describe(cls.domain()) << " -> (";
            for (std::size_t i = 0; i < f.tuple.points.size(); ++i)
                os << (i ? "," : "") << cls.domain().point(f.tuple.points[i]);
            os << "): " << f.reason;
            o.violations.push_back(os.str());
        }
        return o;
    });
}

std::vector<PropertyResult> verify_all(std::span<const ConceptClass> corpus, const VerifyOptions& options)
{
    return {
        check_drop_sum(corpus, options.exec),
        check_edge_pair_sum(corpus, options.exec),
        check_max_query_rank(corpus, options.exec),
        check_deficient_cycles(corpus, options.max_cycle_length, options.exec),
        check_learner_bound(corpus, options.exec),
        check_compression(corpus, options.max_sample_size, options.exec),
    };
}

} // namespace eqlearn
