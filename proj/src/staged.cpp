#include "eqlearn/staged.hpp"

#include <omp.h>

#include <algorithm>
#include <map>
#include <stdexcept>

namespace eqlearn {

namespace {

Rational ratio_of(std::size_t num, std::size_t den)
{
    Rational r{mpz_class(static_cast<unsigned long>(num)), mpz_class(static_cast<unsigned long>(den))};
    r.canonicalize();
    return r;
}

} // namespace

// ---------------------------------------------------------- IntervalFamily

IntervalFamily::IntervalFamily(Rational ratio) : ratio_(std::move(ratio))
{
    if (ratio_ <= 0 || ratio_ >= 1)
        throw std::invalid_argument("geometric prior ratio must lie in (0, 1)");
}

Rational IntervalFamily::lower(std::size_t n) { return ratio_of(1, n + 1); }
Rational IntervalFamily::upper(std::size_t n) { return ratio_of(1, n); }
Rational IntervalFamily::length(std::size_t n) { return ratio_of(1, n * (n + 1)); }

Rational IntervalFamily::delta_mass(std::size_t a, std::size_t b)
{
    return a == b ? Rational(0) : Rational(length(a) + length(b));
}

std::string IntervalFamily::name() const { return "intervals(p=" + to_string(ratio_) + ")"; }

Rational IntervalFamily::prior(std::size_t index) const
{
    if (index == 0)
        throw std::out_of_range("family indices start at 1");
    Rational p = 1 - ratio_;
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), ratio_.get_num_mpz_t(), index - 1);
    mpz_pow_ui(den.get_mpz_t(), ratio_.get_den_mpz_t(), index - 1);
    Rational power(num, den);
    power.canonicalize();
    return p * power;
}

bool IntervalFamily::eval(std::size_t index, const Rational& point) const
{
    return lower(index) < point && point < upper(index);
}

Atomization IntervalFamily::atomize(std::span<const std::size_t> indices) const
{
    std::vector<std::size_t> members(indices.begin(), indices.end());
    std::vector<std::string> names;
    std::vector<Rational> masses;
    Rational rest = 1;
    for (auto n : members) {
        names.push_back("I" + std::to_string(n));
        masses.push_back(length(n));
        rest -= length(n);
    }
    names.push_back("rest");
    masses.push_back(rest);
    const std::size_t atoms = names.size();
    std::vector<Concept> concepts;
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < members.size(); ++j) {
        Concept c = Concept::zeros(atoms);
        c.set(j, true);
        concepts.push_back(std::move(c));
        labels.push_back(std::to_string(members[j]));
    }
    ConceptClass cls(Domain(std::move(names), std::move(masses)), std::move(concepts), std::move(labels));
    auto locate = [members, rest_atom = atoms - 1](const Rational& x) -> PointId {
        for (std::size_t j = 0; j < members.size(); ++j)
            if (lower(members[j]) < x && x < upper(members[j]))
                return j;
        return rest_atom;
    };
    return Atomization{std::move(cls), std::move(locate)};
}

FamilyResponse IntervalFamily::teacher(std::size_t target, std::size_t hypothesis, Rng& rng) const
{
    if (target == hypothesis)
        return Equivalent{};
    const Rational hyp_len = length(hypothesis);
    const Rational total = hyp_len + length(target);
    for (;;) {
        Rational s = rng.open_unit() * total;
        if (s < hyp_len)
            return FamilyCounterexample{lower(hypothesis) + s, false};
        Rational x = lower(target) + (s - hyp_len);
        // s == hyp_len would land on the open interval's endpoint
        if (eval(target, x))
            return FamilyCounterexample{x, true};
    }
}

// ------------------------------------------------------------ FiniteFamily

FiniteFamily::FiniteFamily(ConceptClass cls, std::vector<Rational> tau, std::string name)
    : cls_(std::move(cls)), tau_(std::move(tau)), name_(std::move(name)), ldim_(eqlearn::ldim(cls_))
{
    if (tau_.size() != cls_.size())
        throw ValidationError(ValidationErrorKind::malformed_prior, "prior must have one weight per concept");
}

FiniteFamily::FiniteFamily(const ClassFile& file, std::string name)
    : FiniteFamily(file.cls,
          file.tau ? *file.tau : throw ValidationError(ValidationErrorKind::malformed_prior, "class file has no 'tau' prior"),
          std::move(name))
{
}

Rational FiniteFamily::prior(std::size_t index) const
{
    if (index == 0 || index > tau_.size())
        throw std::out_of_range("family index out of range");
    return tau_[index - 1];
}

PointId FiniteFamily::point_of(const Rational& point) const
{
    if (point.get_den() != 1 || point < 0 || point >= static_cast<unsigned long>(cls_.domain().size()))
        throw DomainMismatchError("not a point of the finite family's domain");
    return static_cast<PointId>(point.get_num().get_ui());
}

bool FiniteFamily::eval(std::size_t index, const Rational& point) const
{
    return cls_.concept_at(index - 1)[point_of(point)];
}

Atomization FiniteFamily::atomize(std::span<const std::size_t> indices) const
{
    const Domain& dom = cls_.domain();
    std::map<std::vector<std::uint8_t>, PointId> atom_of_signature;
    std::vector<PointId> atom_of_point(dom.size());
    std::vector<std::string> names;
    std::vector<Rational> masses;
    std::vector<std::vector<std::uint8_t>> signatures;
    for (PointId x = 0; x < dom.size(); ++x) {
        std::vector<std::uint8_t> sig;
        for (auto i : indices)
            sig.push_back(cls_.concept_at(i - 1)[x]);
        auto [it, fresh] = atom_of_signature.emplace(sig, names.size());
        if (fresh) {
            names.push_back(dom.point(x));
            masses.push_back(0);
            signatures.push_back(sig);
        } else {
            names[it->second] += "+" + dom.point(x);
        }
        masses[it->second] += dom.weight(x);
        atom_of_point[x] = it->second;
    }
    std::vector<Concept> concepts;
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < indices.size(); ++j) {
        std::vector<std::uint8_t> bits;
        for (auto& sig : signatures)
            bits.push_back(sig[j]);
        concepts.emplace_back(std::move(bits));
        labels.push_back(cls_.label(indices[j] - 1));
    }
    ConceptClass atoms(Domain(std::move(names), std::move(masses)), std::move(concepts), std::move(labels));
    auto locate = [this, atom_of_point](const Rational& p) { return atom_of_point[point_of(p)]; };
    return Atomization{std::move(atoms), std::move(locate)};
}

FamilyResponse FiniteFamily::teacher(std::size_t target, std::size_t hypothesis, Rng& rng) const
{
    const Concept& t = cls_.concept_at(target - 1);
    auto response = teacher_respond(t, cls_.concept_at(hypothesis - 1), cls_.domain(), rng);
    if (std::holds_alternative<Equivalent>(response))
        return Equivalent{};
    const auto& ce = std::get<Counterexample>(response);
    return FamilyCounterexample{Rational(static_cast<unsigned long>(ce.point)), ce.label};
}

// ---------------------------------------------------------------- schedule

Rational stage_epsilon(int stage)
{
    if (stage < 1)
        throw std::invalid_argument("stages are numbered from 1");
    return pow2(-(stage + 1));
}

std::size_t prefix_size(const std::function<Rational(std::size_t)>& tau, std::optional<std::size_t> count, const Rational& eps)
{
    if (eps <= 0 || eps >= 1)
        throw std::invalid_argument("prefix_size: eps must lie in (0, 1)");
    const Rational goal = 1 - eps;
    Rational cumulative = 0;
    for (std::size_t n = 1;; ++n) {
        if (count && n > *count)
            throw std::out_of_range("prior enumeration exhausted before reaching mass 1 - eps");
        cumulative += tau(n);
        if (cumulative >= goal)
            return n;
    }
}

std::size_t prefix_size(const CountableFamily& family, const Rational& eps)
{
    return prefix_size([&](std::size_t i) { return family.prior(i); }, family.size(), eps);
}

Rational binomial_tail(std::size_t n, int d)
{
    mpz_class sum = 0;
    mpz_class term = 1; // C(n, 0)
    for (int j = 0; j < d && static_cast<std::size_t>(j) <= n; ++j) {
        sum += term;
        term = term * static_cast<unsigned long>(n - static_cast<std::size_t>(j)) / static_cast<unsigned long>(j + 1);
    }
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, n);
    Rational r(sum, den);
    r.canonicalize();
    return r;
}

std::size_t step_budget(int d, const Rational& eps)
{
    if (d < 1)
        throw std::invalid_argument("step_budget: d must be at least 1");
    if (eps <= 0 || eps >= 1)
        throw std::invalid_argument("step_budget: eps must lie in (0, 1)");
    std::size_t n = 0;
    while (binomial_tail(n, d) >= eps)
        ++n;
    return n;
}

StageSchedule stage_schedule(const CountableFamily& family, int stage)
{
    Rational eps = stage_epsilon(stage);
    return StageSchedule{stage, eps, prefix_size(family, eps), step_budget(std::max(1, family.ldim_bound()), eps)};
}

// ----------------------------------------------------------------- learner

StagedTranscript run_staged_learner(const CountableFamily& family, std::size_t target, Rng& rng, int stage_cap)
{
    StagedTranscript out;
    out.target = target;
    std::vector<std::pair<Rational, bool>> history;
    for (int k = 1; k <= stage_cap; ++k) {
        out.stages = k;
        StageSchedule sched = stage_schedule(family, k);
        std::vector<std::size_t> members;
        for (std::size_t i = 1; i <= sched.prefix_size; ++i) {
            bool consistent = std::all_of(history.begin(), history.end(),
                [&](const auto& h) { return family.eval(i, h.first) == h.second; });
            if (consistent)
                members.push_back(i);
            else if (i == target)
                out.target_retained = false;
        }
        if (members.empty())
            continue;

        Atomization atoms = family.atomize(members);
        LdimTable table(atoms.cls);
        auto teacher = [&](std::size_t h) -> TeacherResponse {
            FamilyResponse r = family.teacher(target, members[h], rng);
            out.queries.push_back(StagedQuery{k, members[h], r});
            if (std::holds_alternative<Equivalent>(r))
                return Equivalent{};
            const auto& ce = std::get<FamilyCounterexample>(r);
            history.emplace_back(ce.point, ce.label);
            return Counterexample{atoms.locate(ce.point), ce.label};
        };
        Transcript run = run_max_min(table, atoms.cls.all(), teacher, sched.step_budget);
        if (run.identified) {
            out.outcome = StagedOutcome::identified;
            return out;
        }
    }
    out.outcome = StagedOutcome::stage_cap_reached;
    return out;
}

StagedTranscript run_staged_learner(const CountableFamily& family, std::size_t target, std::uint64_t seed, int stage_cap)
{
    Rng rng(seed);
    return run_staged_learner(family, target, rng, stage_cap);
}

std::size_t draw_target(const CountableFamily& family, Rng& rng)
{
    Rational u = rng.unit();
    Rational cumulative = 0;
    std::size_t last_positive = 1;
    for (std::size_t i = 1;; ++i) {
        if (family.size() && i > *family.size())
            return last_positive;
        Rational p = family.prior(i);
        if (p > 0)
            last_positive = i;
        cumulative += p;
        if (u < cumulative)
            return i;
    }
}

std::size_t StagedSummary::identified_count() const
{
    return static_cast<std::size_t>(std::count(identified.begin(), identified.end(), 1));
}

std::size_t StagedSummary::max_queries() const
{
    return queries.empty() ? 0 : *std::max_element(queries.begin(), queries.end());
}

std::map<std::size_t, std::size_t> StagedSummary::histogram() const
{
    std::map<std::size_t, std::size_t> h;
    for (auto q : queries)
        ++h[q];
    return h;
}

double StagedSummary::mean(std::size_t begin, std::size_t end) const
{
    if (end <= begin)
        return 0.0;
    std::uint64_t total = 0;
    for (std::size_t i = begin; i < end; ++i)
        total += queries[i];
    return to_double(Rational(to_mpz(total), to_mpz(end - begin)));
}

double StagedSummary::variance() const
{
    if (trials < 2)
        return 0.0;
    std::uint64_t s = 0, ss = 0;
    for (auto q : queries) {
        s += q;
        ss += static_cast<std::uint64_t>(q) * q;
    }
    mpz_class n = to_mpz(trials);
    Rational v(n * to_mpz(ss) - to_mpz(s) * to_mpz(s), n * (n - 1));
    v.canonicalize();
    return to_double(v);
}

double StagedSummary::mean_stages() const
{
    if (trials == 0)
        return 0.0;
    std::uint64_t total = 0;
    for (auto s : stages)
        total += s;
    return to_double(Rational(to_mpz(total), to_mpz(trials)));
}

namespace {

void run_trial(const CountableFamily& family, std::uint64_t seed, std::size_t i, int cap, StagedSummary& out)
{
    Rng rng(derive_seed(seed, i));
    std::size_t target = draw_target(family, rng);
    StagedTranscript t = run_staged_learner(family, target, rng, cap);
    out.queries[i] = static_cast<std::uint32_t>(t.query_count());
    out.stages[i] = static_cast<std::uint32_t>(t.stages);
    out.identified[i] = t.outcome == StagedOutcome::identified ? 1 : 0;
}

StagedSummary empty_summary(std::size_t trials, std::uint64_t seed, int cap)
{
    if (trials == 0)
        throw std::invalid_argument("staged_trials: trials must be positive");
    StagedSummary s;
    s.trials = trials;
    s.seed = seed;
    s.stage_cap = cap;
    s.queries.assign(trials, 0);
    s.stages.assign(trials, 0);
    s.identified.assign(trials, 0);
    return s;
}

} // namespace

StagedSummary staged_trials(const CountableFamily& family, std::size_t trials, std::uint64_t seed, int stage_cap)
{
    StagedSummary s = empty_summary(trials, seed, stage_cap);
    const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i)
        run_trial(family, seed, static_cast<std::size_t>(i), stage_cap, s);
    return s;
}

StagedSummary staged_trials_serial(const CountableFamily& family, std::size_t trials, std::uint64_t seed, int stage_cap)
{
    StagedSummary s = empty_summary(trials, seed, stage_cap);
    for (std::size_t i = 0; i < trials; ++i)
        run_trial(family, seed, i, stage_cap, s);
    return s;
}

// --------------------------------------------------- non-uniformity witness

std::size_t first_hypothesis(std::size_t prefix)
{
    if (prefix == 0)
        throw std::invalid_argument("first_hypothesis: empty prefix");
    IntervalFamily family(Rational(1, 2));
    std::vector<std::size_t> members;
    for (std::size_t i = 1; i <= prefix; ++i)
        members.push_back(i);
    Atomization atoms = family.atomize(members);
    LdimTable table(atoms.cls);
    ThicketGraph graph(table, atoms.cls.all());
    return members[graph.max_min_query()];
}

namespace {

Rational negative_probability(std::size_t h, std::size_t target)
{
    if (h == target)
        return 0;
    // The teacher samples uniformly from the union of the two disjoint
    // intervals; the label is 0 exactly when the point lies in the hypothesis.
    return IntervalFamily::length(h) / IntervalFamily::delta_mass(h, target);
}

} // namespace

Rational first_counterexample_negative_probability(std::size_t prefix, std::size_t target)
{
    return negative_probability(first_hypothesis(prefix), target);
}

std::optional<std::size_t> nonuniformity_witness(std::size_t prefix, const Rational& p, std::size_t max_index)
{
    const std::size_t h = first_hypothesis(prefix);
    for (std::size_t t = 1; t <= max_index; ++t)
        if (negative_probability(h, t) > p)
            return t;
    return std::nullopt;
}

} // namespace eqlearn
