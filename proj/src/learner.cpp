#include "eqlearn/learner.hpp"

#include <omp.h>

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace eqlearn {

PointId sample_weighted(const Domain& domain, std::span<const PointId> support, Rng& rng)
{
    if (support.empty())
        throw std::invalid_argument("sample_weighted: empty support");
    Rational total = mass(domain, support);
    // u = r / 2^64; pick the first x with u * total < cumulative weight.
    Rational scaled = rng.unit() * total;
    Rational cumulative = 0;
    for (PointId x : support) {
        cumulative += domain.weight(x);
        if (scaled < cumulative)
            return x;
    }
    return support.back();
}

TeacherResponse teacher_respond(const Concept& target, const Concept& hypothesis, const Domain& mu, Rng& rng)
{
    auto delta = symmetric_difference(target, hypothesis);
    if (delta.empty())
        return Equivalent{};
    PointId x = sample_weighted(mu, delta, rng);
    return Counterexample{x, target[x]};
}

Transcript run_max_min(LdimTable& table, ConceptSet members, const std::function<TeacherResponse(std::size_t)>& teacher,
    std::size_t max_queries)
{
    const ConceptClass& root = table.root();
    Transcript t;
    while (!members.none() && t.queries.size() < max_queries) {
        ThicketGraph graph(table, members);
        std::size_t hypothesis = graph.max_min_query();
        Query q{hypothesis, teacher(hypothesis), table.ldim(members), 0};
        if (std::holds_alternative<Equivalent>(q.response)) {
            q.ldim_after = q.ldim_before;
            t.queries.push_back(q);
            t.identified = true;
            return t;
        }
        const auto& ce = std::get<Counterexample>(q.response);
        if (root.concept_at(hypothesis)[ce.point] == ce.label)
            throw std::logic_error("teacher returned a point outside the symmetric difference");
        members = root.restrict(members, ce.point, ce.label);
        q.ldim_after = table.ldim(members);
        t.queries.push_back(q);
    }
    return t;
}

Transcript run_thicket_learner(const ConceptClass& cls, const Concept& target, std::uint64_t seed)
{
    if (!cls.find(target))
        throw DomainMismatchError("target " + target.to_bitstring() + " is not a member of the class");
    LdimTable table(cls);
    Rng rng(seed);
    auto teacher = [&](std::size_t h) { return teacher_respond(target, cls.concept_at(h), cls.domain(), rng); };
    Transcript t = run_max_min(table, cls.all(), teacher);
    t.seed = seed;
    return t;
}

Rational exact_expected_queries(LdimTable& table, std::size_t target, DropConvention convention)
{
    const ConceptClass& root = table.root();
    const Concept& tc = root.concept_at(target);
    std::unordered_map<ConceptSet, Rational, ConceptSetHash> memo;
    std::function<Rational(const ConceptSet&)> expect = [&](const ConceptSet& s) -> Rational {
        if (auto it = memo.find(s); it != memo.end())
            return it->second;
        ThicketGraph graph(table, s, convention);
        std::size_t q = graph.max_min_query();
        Rational value = 1;
        if (q != target) {
            auto delta = symmetric_difference(root.concept_at(q), tc);
            Rational total = mass(root.domain(), delta);
            Rational acc = 0;
            for (PointId x : delta)
                acc += root.domain().weight(x) * expect(root.restrict(s, x, tc[x]));
            value += acc / total;
        }
        memo.emplace(s, value);
        return value;
    };
    return expect(root.all());
}

Rational exact_expected_queries(const ConceptClass& cls, const Concept& target)
{
    auto idx = cls.find(target);
    if (!idx)
        throw DomainMismatchError("target " + target.to_bitstring() + " is not a member of the class");
    LdimTable table(cls);
    return exact_expected_queries(table, *idx);
}

// ----------------------------------------------------------- TrialSummary

void TrialSummary::add(const Transcript& t)
{
    std::size_t n = t.query_count();
    ++trials;
    total_queries += n;
    total_squares += static_cast<std::uint64_t>(n) * n;
    max_queries = std::max(max_queries, n);
    ++histogram[n];
    for (const auto& q : t.queries) {
        if (!std::holds_alternative<Counterexample>(q.response))
            continue;
        ++counterexamples;
        int d = q.ldim_before - q.ldim_after;
        if (d > 0) {
            ++positive_drops;
            total_drop += static_cast<std::uint64_t>(d);
        }
    }
}

void TrialSummary::merge(const TrialSummary& other)
{
    trials += other.trials;
    total_queries += other.total_queries;
    total_squares += other.total_squares;
    max_queries = std::max(max_queries, other.max_queries);
    for (auto& [k, v] : other.histogram)
        histogram[k] += v;
    counterexamples += other.counterexamples;
    positive_drops += other.positive_drops;
    total_drop += other.total_drop;
}

double TrialSummary::mean() const
{
    return trials == 0 ? 0.0 : to_double(Rational(to_mpz(total_queries), to_mpz(trials)));
}

double TrialSummary::variance() const
{
    if (trials < 2)
        return 0.0;
    mpz_class n = to_mpz(trials);
    mpz_class s = to_mpz(total_queries);
    mpz_class ss = to_mpz(total_squares);
    Rational v(n * ss - s * s, n * (n - 1));
    v.canonicalize();
    return to_double(v);
}

double TrialSummary::standard_error() const
{
    return trials == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(trials));
}

double TrialSummary::mean_drop() const
{
    return counterexamples == 0 ? 0.0 : to_double(Rational(to_mpz(total_drop), to_mpz(counterexamples)));
}

// ------------------------------------------------------------ Monte Carlo

TrialSummary monte_carlo_trials_serial(const ConceptClass& cls, const Concept& target, std::size_t trials, std::uint64_t seed)
{
    if (trials == 0)
        throw std::invalid_argument("monte_carlo_trials: trials must be positive");
    TrialSummary summary;
    for (std::size_t i = 0; i < trials; ++i)
        summary.add(run_thicket_learner(cls, target, derive_seed(seed, i)));
    summary.seed = seed;
    return summary;
}

TrialSummary monte_carlo_trials(const ConceptClass& cls, const Concept& target, std::size_t trials, std::uint64_t seed)
{
    if (trials == 0)
        throw std::invalid_argument("monte_carlo_trials: trials must be positive");
    auto idx = cls.find(target);
    if (!idx)
        throw DomainMismatchError("target " + target.to_bitstring() + " is not a member of the class");
    TrialSummary summary;
    const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel
    {
        // one memo table per thread; the class itself is shared read-only
        LdimTable table(cls);
        TrialSummary local;
#pragma omp for schedule(dynamic, 64)
        for (std::int64_t i = 0; i < n; ++i) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
            auto teacher = [&](std::size_t h) { return teacher_respond(target, cls.concept_at(h), cls.domain(), rng); };
            local.add(run_max_min(table, cls.all(), teacher));
        }
#pragma omp critical
        summary.merge(local);
    }
    summary.seed = seed;
    return summary;
}

} // namespace eqlearn
