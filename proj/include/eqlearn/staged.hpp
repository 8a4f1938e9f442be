#pragma once

#include "eqlearn/class_io.hpp"
#include "eqlearn/learner.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace eqlearn {

/// Counterexample located at a point of the family's own (possibly infinite)
/// domain. Points are exact rationals; finite families use the point index.
struct FamilyCounterexample {
    Rational point;
    bool label;
};

using FamilyResponse = std::variant<Equivalent, FamilyCounterexample>;

/// Finite quotient of the domain on which a set of family members is
/// constant. Concept j of `cls` is the j-th member passed to atomize.
struct Atomization {
    ConceptClass cls;
    std::function<PointId(const Rational&)> locate;
};

/// Enumerable concept class with a prior over its members. Member indices
/// start at 1. Implementations are immutable and safe to share across threads.
class CountableFamily {
public:
    virtual ~CountableFamily() = default;

    virtual std::string name() const = 0;
    /// Number of members, or nullopt for an infinite enumeration.
    virtual std::optional<std::size_t> size() const = 0;
    virtual Rational prior(std::size_t index) const = 0;
    /// Upper bound on the dimension of every finite prefix.
    virtual int ldim_bound() const = 0;
    virtual bool eval(std::size_t index, const Rational& point) const = 0;
    virtual Atomization atomize(std::span<const std::size_t> indices) const = 0;
    /// Random counterexample from the target's symmetric difference with the
    /// hypothesis, drawn from the family's own measure.
    virtual FamilyResponse teacher(std::size_t target, std::size_t hypothesis, Rng& rng) const = 0;
};

/// The open intervals (1/(n+1), 1/n), n >= 1, under Lebesgue measure on
/// (0, 1), with geometric prior tau(n) = (1 - r) r^(n-1).
class IntervalFamily final : public CountableFamily {
public:
    explicit IntervalFamily(Rational ratio);

    const Rational& ratio() const { return ratio_; }

    static Rational lower(std::size_t n);
    static Rational upper(std::size_t n);
    static Rational length(std::size_t n);
    /// Mass of the symmetric difference of two members.
    static Rational delta_mass(std::size_t a, std::size_t b);

    std::string name() const override;
    std::optional<std::size_t> size() const override { return std::nullopt; }
    Rational prior(std::size_t index) const override;
    int ldim_bound() const override { return 1; }
    bool eval(std::size_t index, const Rational& point) const override;
    /// One atom per interval in the given order, then the complement.
    Atomization atomize(std::span<const std::size_t> indices) const override;
    FamilyResponse teacher(std::size_t target, std::size_t hypothesis, Rng& rng) const override;

private:
    Rational ratio_;
};

/// A finite class with an explicit prior (the "tau" array of a class file).
class FiniteFamily final : public CountableFamily {
public:
    FiniteFamily(ConceptClass cls, std::vector<Rational> tau, std::string name = "file");
    /// Throws ValidationError when the file carries no prior.
    explicit FiniteFamily(const ClassFile& file, std::string name = "file");

    const ConceptClass& concepts() const { return cls_; }

    std::string name() const override { return name_; }
    std::optional<std::size_t> size() const override { return cls_.size(); }
    Rational prior(std::size_t index) const override;
    int ldim_bound() const override { return ldim_; }
    bool eval(std::size_t index, const Rational& point) const override;
    Atomization atomize(std::span<const std::size_t> indices) const override;
    FamilyResponse teacher(std::size_t target, std::size_t hypothesis, Rng& rng) const override;

private:
    PointId point_of(const Rational& point) const;

    ConceptClass cls_;
    std::vector<Rational> tau_;
    std::string name_;
    int ldim_;
};

// ------------------------------------------------------------------ schedule

/// 1 / 2^(k+1).
Rational stage_epsilon(int stage);

/// Smallest N with tau(1) + ... + tau(N) >= 1 - eps. `count` bounds a finite
/// enumeration; throws std::out_of_range if it is exhausted first.
std::size_t prefix_size(const std::function<Rational(std::size_t)>& tau, std::optional<std::size_t> count, const Rational& eps);
std::size_t prefix_size(const CountableFamily& family, const Rational& eps);

/// P[Binomial(n, 1/2) <= d - 1] = sum_{j<d} C(n, j) / 2^n, exactly.
Rational binomial_tail(std::size_t n, int d);

/// Smallest n with binomial_tail(n, d) < eps. Requires d >= 1, 0 < eps < 1.
std::size_t step_budget(int d, const Rational& eps);

struct StageSchedule {
    int stage;
    Rational eps;
    std::size_t prefix_size;
    std::size_t step_budget;
};

StageSchedule stage_schedule(const CountableFamily& family, int stage);

// ------------------------------------------------------------------ learner

enum class StagedOutcome { identified, stage_cap_reached };

struct StagedQuery {
    int stage;
    std::size_t hypothesis; // family index
    FamilyResponse response;
};

struct StagedTranscript {
    std::vector<StagedQuery> queries;
    std::size_t target = 0;
    int stages = 0; // last stage entered
    StagedOutcome outcome = StagedOutcome::stage_cap_reached;
    /// Whether the target sat in the consistent prefix and survived every
    /// restriction of every stage it took part in.
    bool target_retained = true;

    std::size_t query_count() const { return queries.size(); }
};

constexpr int default_stage_cap = 30;

/// Stage k = 1, 2, ...: take the first N_k members, drop those inconsistent
/// with every counterexample seen so far, atomize, and run at most n_k
/// max-min queries against the family's teacher.
StagedTranscript run_staged_learner(const CountableFamily& family, std::size_t target, Rng& rng, int stage_cap = default_stage_cap);
StagedTranscript run_staged_learner(const CountableFamily& family, std::size_t target, std::uint64_t seed, int stage_cap = default_stage_cap);

/// Index drawn from the prior with a 2^-64-grid variate.
std::size_t draw_target(const CountableFamily& family, Rng& rng);

struct StagedSummary {
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    int stage_cap = default_stage_cap;
    std::vector<std::uint32_t> queries;   // per trial, in trial order
    std::vector<std::uint32_t> stages;    // per trial
    std::vector<std::uint8_t> identified; // per trial

    std::size_t identified_count() const;
    std::size_t max_queries() const;
    std::map<std::size_t, std::size_t> histogram() const;
    /// Mean over trials [begin, end).
    double mean(std::size_t begin, std::size_t end) const;
    double mean() const { return mean(0, trials); }
    double variance() const;
    double mean_stages() const;

    friend bool operator==(const StagedSummary&, const StagedSummary&) = default;
};

/// Trial i seeds Rng(derive_seed(seed, i)), draws its target from the prior,
/// then runs the staged learner. Parallel (OpenMP).
StagedSummary staged_trials(const CountableFamily& family, std::size_t trials, std::uint64_t seed, int stage_cap = default_stage_cap);
StagedSummary staged_trials_serial(const CountableFamily& family, std::size_t trials, std::uint64_t seed, int stage_cap = default_stage_cap);

// --------------------------------------------------- non-uniformity witness

/// First hypothesis of the plain max-min learner on intervals 1..prefix.
std::size_t first_hypothesis(std::size_t prefix);

/// Exact probability that the plain learner confined to intervals 1..prefix
/// receives a negative first counterexample when the target is interval
/// `target` (which may lie outside the prefix). 0 when the first hypothesis
/// is the target.
Rational first_counterexample_negative_probability(std::size_t prefix, std::size_t target);

/// Smallest target index <= max_index whose negative-first-counterexample
/// probability exceeds p.
std::optional<std::size_t> nonuniformity_witness(std::size_t prefix, const Rational& p, std::size_t max_index);

} // namespace eqlearn
