#pragma once

#include "eqlearn/rng.hpp"
#include "eqlearn/thicket.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <variant>
#include <vector>

namespace eqlearn {

struct Equivalent {
    friend bool operator==(const Equivalent&, const Equivalent&) = default;
};

struct Counterexample {
    PointId point;
    bool label; // target's value at `point`
    friend bool operator==(const Counterexample&, const Counterexample&) = default;
};

using TeacherResponse = std::variant<Equivalent, Counterexample>;

/// One equivalence query. The dimension fields record the version space
/// before and after the response (equal when the answer is Equivalent).
struct Query {
    std::size_t hypothesis;
    TeacherResponse response;
    int ldim_before = 0;
    int ldim_after = 0;
};

struct Transcript {
    std::vector<Query> queries;
    std::uint64_t seed = 0;
    bool identified = false;

    std::size_t query_count() const { return queries.size(); }
};

/// Draws x from mu restricted to the symmetric difference of target and
/// hypothesis, using a uniform variate on the 2^-64 grid against exact
/// cumulative weights.
TeacherResponse teacher_respond(const Concept& target, const Concept& hypothesis, const Domain& mu, Rng& rng);

/// Point of `support` drawn with probability proportional to its weight.
PointId sample_weighted(const Domain& domain, std::span<const PointId> support, Rng& rng);

/// Runs max-min queries on `members` until the teacher answers Equivalent, the
/// version space empties, or `max_queries` is reached. The teacher maps a root
/// concept index to a response.
Transcript run_max_min(LdimTable& table, ConceptSet members, const std::function<TeacherResponse(std::size_t)>& teacher,
    std::size_t max_queries = SIZE_MAX);

/// The thicket max-min learner against a simulated random-counterexample
/// teacher. Throws DomainMismatchError if the target is not in the class.
Transcript run_thicket_learner(const ConceptClass& cls, const Concept& target, std::uint64_t seed);

/// Exact expected number of equivalence queries, the final (successful) one
/// included. Memoized on the version space.
Rational exact_expected_queries(const ConceptClass& cls, const Concept& target);

/// Same recursion using a caller-owned table; `target` is a root index.
Rational exact_expected_queries(LdimTable& table, std::size_t target,
    DropConvention convention = DropConvention::target);

/// Aggregate over Monte Carlo trials. Sums are kept as exact integers so the
/// result does not depend on reduction order.
struct TrialSummary {
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t total_queries = 0;
    std::uint64_t total_squares = 0;
    std::size_t max_queries = 0;
    std::map<std::size_t, std::size_t> histogram; // query count -> trials
    std::uint64_t counterexamples = 0;            // queries answered with a counterexample
    std::uint64_t positive_drops = 0;             // of those, how many lowered the dimension
    std::uint64_t total_drop = 0;                 // summed dimension decrease

    void add(const Transcript& t);
    void merge(const TrialSummary& other);

    double mean() const;
    /// Unbiased sample variance; 0 for a single trial.
    double variance() const;
    double standard_error() const;
    /// Mean dimension decrease per counterexample; 0 if there were none.
    double mean_drop() const;

    friend bool operator==(const TrialSummary&, const TrialSummary&) = default;
};

/// Parallel over trials (OpenMP). Trial i uses seed derive_seed(seed, i).
TrialSummary monte_carlo_trials(const ConceptClass& cls, const Concept& target, std::size_t trials, std::uint64_t seed);

/// Single-threaded reference for monte_carlo_trials; identical results.
TrialSummary monte_carlo_trials_serial(const ConceptClass& cls, const Concept& target, std::size_t trials, std::uint64_t seed);

} // namespace eqlearn
