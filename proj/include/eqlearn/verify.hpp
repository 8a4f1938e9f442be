#pragma once

#include "eqlearn/compression.hpp"
#include "eqlearn/learner.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace eqlearn {

// ---------------------------------------------------------------- corpora

/// Class with exactly `points` points and `concepts` distinct random concepts
/// (concepts <= 2^points). Weights are random integers in [1, 16],
/// normalized.
ConceptClass random_class(Rng& rng, std::size_t points, std::size_t concepts);

/// Point count uniform in [1, max_points], concept count uniform in
/// [min_concepts, min(max_concepts, 2^points)].
ConceptClass random_class_bounded(Rng& rng, std::size_t max_points, std::size_t max_concepts, std::size_t min_concepts = 1);

/// Class i is drawn from Rng(derive_seed(seed, i)).
std::vector<ConceptClass> random_corpus(std::uint64_t seed, std::size_t count, std::size_t max_points, std::size_t max_concepts,
    std::size_t min_concepts = 1);

/// Every nonempty class over `domain`, ordered by the bitmask of included
/// bit patterns. Practical up to 4 points.
std::vector<ConceptClass> all_classes(const Domain& domain);

// -------------------------------------------------------------- properties

enum class Execution { serial, parallel };

struct PropertyWitness {
    std::size_t class_index;
    std::string detail;
    friend bool operator==(const PropertyWitness&, const PropertyWitness&) = default;
};

struct PropertyResult {
    std::string name;
    std::size_t classes = 0;
    std::size_t checks = 0;
    std::vector<PropertyWitness> violations; // ordered by class index

    bool passed() const { return violations.empty(); }
    friend bool operator==(const PropertyResult&, const PropertyResult&) = default;
};

/// drop(A, x) + drop(B, x) >= 1 whenever A(x) != B(x).
PropertyResult check_drop_sum(std::span<const ConceptClass> corpus, Execution exec = Execution::parallel);

/// d(A, B) + d(B, A) >= 1 for every pair of distinct members.
PropertyResult check_edge_pair_sum(std::span<const ConceptClass> corpus, Execution exec = Execution::parallel,
    DropConvention convention = DropConvention::target);

/// Some member has query rank >= 1/2 (classes with at least two members).
PropertyResult check_max_query_rank(std::span<const ConceptClass> corpus, Execution exec = Execution::parallel);

/// No deficient cycle of length 2..max_len in the thicket graph.
PropertyResult check_deficient_cycles(std::span<const ConceptClass> corpus, std::size_t max_len,
    Execution exec = Execution::parallel);

/// Expected number of counterexamples before identification (total queries
/// minus the final one) is at most 2 ldim, for every target.
PropertyResult check_learner_bound(std::span<const ConceptClass> corpus, Execution exec = Execution::parallel,
    DropConvention convention = DropConvention::target);

/// Expected total queries, the final one included, is at most 2 ldim for
/// every target (classes with at least two members).
PropertyResult check_total_query_bound(std::span<const ConceptClass> corpus, Execution exec = Execution::parallel);

/// Compression round trip over all realizable samples.
PropertyResult check_compression(std::span<const ConceptClass> corpus, std::optional<std::size_t> max_sample_size = std::nullopt,
    Execution exec = Execution::parallel);

struct VerifyOptions {
    std::size_t max_cycle_length = 5;
    std::optional<std::size_t> max_sample_size;
    Execution exec = Execution::parallel;
};

/// Every check above except check_total_query_bound, in a fixed order.
std::vector<PropertyResult> verify_all(std::span<const ConceptClass> corpus, const VerifyOptions& options = {});

} // namespace eqlearn
