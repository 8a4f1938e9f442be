#pragma once

#include "eqlearn/littlestone.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace eqlearn {

/// Raised when a sample is not the restriction of any class member.
class NotRealizableError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Exactly d points of the compressed sample, duplicates allowed.
struct CompressedTuple {
    std::vector<PointId> points;
    friend bool operator==(const CompressedTuple&, const CompressedTuple&) = default;
};

/// What the greedy loop chose, before padding.
struct CompressionTrace {
    std::vector<PointId> ones;  // points labeled 1, in choice order
    std::vector<PointId> zeros; // points labeled 0, in choice order
    bool halted_early = false;  // the sample became exceptional before d steps
    CompressedTuple tuple;
};

/// Compression to d = ldim(class) sample points with d + 1 reconstruction
/// functions rho_0..rho_d.
///
/// The compressor repeatedly picks, in domain order, a sample point whose
/// labeled restriction lowers the dimension of the current version space,
/// stopping once the sample is exceptional (every labeled restriction keeps
/// the dimension) or after d picks. A full run lists the 1-labeled picks and
/// then the 0-labeled picks; these are d distinct points and rho_i decodes
/// them as "first i points are 1, the rest 0". Early stops are padded with a
/// repeated point:
///
///   ones nonempty, first one a:  (ones, a, zeros, a, ..., a)   decoded by rho_1
///   ones empty, first zero z:    (zeros, z, ..., z)            decoded by rho_0
///   nothing picked:              (c, ..., c), c = first sample point
///
/// and the decoder returns the canonical partial function of the recovered
/// version space, extended by 0. The all-equal tuple (c, ..., c) is claimed by
/// rho_l, where l is the label at c that keeps the root dimension; a
/// one-point run at c always has the other label, so rho_(1-l) still serves it.
///
/// Holds a memo table: not thread-safe, and the class must outlive the scheme.
class CompressionScheme {
public:
    explicit CompressionScheme(const ConceptClass& cls);

    const ConceptClass& concept_class() const { return *cls_; }
    int dimension() const { return d_; }
    std::size_t reconstructor_count() const { return static_cast<std::size_t>(d_) + 1; }

    /// Throws NotRealizableError for unrealizable samples and
    /// std::invalid_argument for an empty sample when d >= 1.
    CompressedTuple compress(const PartialAssignment& f);
    CompressionTrace compress_traced(const PartialAssignment& f);

    /// rho_i applied to a tuple of length d.
    Concept reconstruct(std::size_t i, const CompressedTuple& tuple);

    /// rho_i's rule for tuples of distinct points, before the all-equal
    /// override: lowest-index member that is 1 on the first i points and 0 on
    /// the rest, or the all-zero concept if none exists.
    Concept reconstruct_distinct(std::size_t i, const CompressedTuple& tuple) const;

    /// Inverse of the rho_1 padding: (ones, zeros).
    static std::pair<std::vector<PointId>, std::vector<PointId>> decode_with_ones(const CompressedTuple& tuple);
    /// Inverse of the rho_0 padding: zeros.
    static std::vector<PointId> decode_zeros_only(const CompressedTuple& tuple);

    /// Label at x that keeps the root dimension, if one does.
    std::optional<bool> keeping_label(PointId x) const { return keep_[x]; }

private:
    Concept canonical_extension(const std::vector<PointId>& ones, const std::vector<PointId>& zeros);

    const ConceptClass* cls_;
    LdimTable table_;
    int d_;
    std::vector<std::optional<bool>> keep_;
};

/// A reconstruction function as a standalone callable.
using Reconstructor = std::function<Concept(const CompressedTuple&)>;

CompressedTuple compress(const ConceptClass& cls, const PartialAssignment& f);

/// The d + 1 reconstruction functions; they share one scheme.
std::vector<Reconstructor> build_reconstructors(const ConceptClass& cls);

struct CertificationFailure {
    PartialAssignment sample;
    CompressedTuple tuple;
    std::string reason;
};

struct CertificationReport {
    int d = 0;
    std::size_t rho_count = 0;
    std::size_t samples_tested = 0;
    std::size_t successes = 0;
    bool tuple_length_ok = true; // every tuple has length d
    bool subset_ok = true;       // every tuple lies inside its sample's domain
    std::vector<CertificationFailure> failures;

    bool passed() const { return failures.empty() && successes == samples_tested && tuple_length_ok && subset_ok; }
};

/// Every realizable sample over a nonempty point set of size at most
/// `max_sample_size` (all sizes when nullopt), in canonical order: point
/// subsets by increasing bitmask, then the distinct restrictions in class
/// order. The domain must have at most 30 points.
std::vector<PartialAssignment> realizable_samples(const ConceptClass& cls, std::optional<std::size_t> max_sample_size);

/// Compresses every realizable sample and checks that some reconstruction
/// recovers it. Parallel over samples (OpenMP); failures are reported in
/// sample order.
CertificationReport certify_scheme(const ConceptClass& cls, std::optional<std::size_t> max_sample_size = std::nullopt);

/// Single-threaded reference; identical report.
CertificationReport certify_scheme_serial(const ConceptClass& cls, std::optional<std::size_t> max_sample_size = std::nullopt);

} // namespace eqlearn
