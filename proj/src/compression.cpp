#include "eqlearn/compression.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <memory>
#include <set>
#include <stdexcept>

namespace eqlearn {

CompressionScheme::CompressionScheme(const ConceptClass& cls) : cls_(&cls), table_(cls), d_(0)
{
    if (cls.empty())
        throw std::invalid_argument("compression scheme of an empty class");
    d_ = table_.ldim();
    const ConceptSet all = cls.all();
    keep_.resize(cls.domain().size());
    for (PointId x = 0; x < cls.domain().size(); ++x) {
        if (table_.ldim(cls.restrict(all, x, false)) == d_)
            keep_[x] = false;
        else if (table_.ldim(cls.restrict(all, x, true)) == d_)
            keep_[x] = true;
    }
}

CompressionTrace CompressionScheme::compress_traced(const PartialAssignment& f)
{
    if (cls_->agreeing(f).none())
        throw NotRealizableError("sample " + f.describe(cls_->domain()) + " is not realized by any class member");
    CompressionTrace trace;
    if (d_ == 0)
        return trace;
    if (f.empty())
        throw std::invalid_argument("cannot compress the empty sample into a tuple of sample points");

    ConceptSet version = cls_->all();
    for (int step = 0; step < d_; ++step) {
        if (table_.is_exceptional(version, f)) {
            trace.halted_early = true;
            break;
        }
        const int current = table_.ldim(version);
        bool picked = false;
        for (auto& [x, v] : f) {
            ConceptSet next = cls_->restrict(version, x, v);
            if (table_.ldim(next) < current) {
                (v ? trace.ones : trace.zeros).push_back(x);
                version = std::move(next);
                picked = true;
                break;
            }
        }
        if (!picked)
            throw std::logic_error("non-exceptional sample without a dimension-lowering point");
    }

    auto& out = trace.tuple.points;
    const auto d = static_cast<std::size_t>(d_);
    if (!trace.halted_early) {
        out = trace.ones;
        out.insert(out.end(), trace.zeros.begin(), trace.zeros.end());
    } else if (!trace.ones.empty()) {
        const PointId lead = trace.ones.front();
        out = trace.ones;
        out.push_back(lead);
        out.insert(out.end(), trace.zeros.begin(), trace.zeros.end());
        out.resize(d, lead);
    } else if (!trace.zeros.empty()) {
        out = trace.zeros;
        out.resize(d, trace.zeros.front());
    } else {
        out.assign(d, f.begin()->first);
    }
    return trace;
}

CompressedTuple CompressionScheme::compress(const PartialAssignment& f) { return compress_traced(f).tuple; }

std::pair<std::vector<PointId>, std::vector<PointId>> CompressionScheme::decode_with_ones(const CompressedTuple& tuple)
{
    const auto& t = tuple.points;
    if (t.empty())
        return {};
    const PointId lead = t.front();
    auto second = std::find(t.begin() + 1, t.end(), lead);
    std::vector<PointId> ones(t.begin(), second);
    std::vector<PointId> zeros;
    if (second != t.end())
        for (auto it = second + 1; it != t.end() && *it != lead; ++it)
            zeros.push_back(*it);
    return {std::move(ones), std::move(zeros)};
}

std::vector<PointId> CompressionScheme::decode_zeros_only(const CompressedTuple& tuple)
{
    const auto& t = tuple.points;
    if (t.empty())
        return {};
    return std::vector<PointId>(t.begin(), std::find(t.begin() + 1, t.end(), t.front()));
}

Concept CompressionScheme::canonical_extension(const std::vector<PointId>& ones, const std::vector<PointId>& zeros)
{
    ConceptSet version = cls_->all();
    for (auto x : ones)
        version = cls_->restrict(version, x, true);
    for (auto x : zeros)
        version = cls_->restrict(version, x, false);
    if (version.none())
        return Concept::zeros(cls_->domain().size());
    return extend_with_zeros(table_.canonical_partial(version), cls_->domain().size());
}

Concept CompressionScheme::reconstruct_distinct(std::size_t i, const CompressedTuple& tuple) const
{
    ConceptSet version = cls_->all();
    for (std::size_t j = 0; j < tuple.points.size(); ++j)
        version = cls_->restrict(version, tuple.points[j], j < i);
    if (auto first = version.first())
        return cls_->concept_at(*first);
    return Concept::zeros(cls_->domain().size());
}

Concept CompressionScheme::reconstruct(std::size_t i, const CompressedTuple& tuple)
{
    if (i > static_cast<std::size_t>(d_))
        throw std::out_of_range("reconstruction index exceeds the dimension");
    const auto& t = tuple.points;
    if (t.size() != static_cast<std::size_t>(d_))
        throw std::invalid_argument("tuple length differs from the dimension");
    for (auto x : t)
        if (x >= cls_->domain().size())
            throw DomainMismatchError("tuple point outside the domain");
    if (d_ == 0)
        return cls_->concept_at(0);

    const bool all_equal = std::all_of(t.begin(), t.end(), [&](PointId x) { return x == t.front(); });
    if (all_equal) {
        auto l = keep_[t.front()];
        if (l && i == static_cast<std::size_t>(*l))
            return canonical_extension({}, {});
    }
    std::set<PointId> distinct(t.begin(), t.end());
    if (distinct.size() == t.size())
        return reconstruct_distinct(i, tuple);
    if (i == 1) {
        auto [ones, zeros] = decode_with_ones(tuple);
        return canonical_extension(ones, zeros);
    }
    if (i == 0)
        return canonical_extension({}, decode_zeros_only(tuple));
    return Concept::zeros(cls_->domain().size());
}

CompressedTuple compress(const ConceptClass& cls, const PartialAssignment& f)
{
    CompressionScheme scheme(cls);
    return scheme.compress(f);
}

std::vector<Reconstructor> build_reconstructors(const ConceptClass& cls)
{
    auto scheme = std::make_shared<CompressionScheme>(cls);
    std::vector<Reconstructor> rhos;
    for (std::size_t i = 0; i < scheme->reconstructor_count(); ++i)
        rhos.emplace_back([scheme, i](const CompressedTuple& t) { return scheme->reconstruct(i, t); });
    return rhos;
}

std::vector<PartialAssignment> realizable_samples(const ConceptClass& cls, std::optional<std::size_t> max_sample_size)
{
    const std::size_t n = cls.domain().size();
    if (n > 30)
        throw std::invalid_argument("sample enumeration supports at most 30 points");
    std::vector<PartialAssignment> out;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        if (max_sample_size && static_cast<std::size_t>(std::popcount(mask)) > *max_sample_size)
            continue;
        std::vector<PointId> points;
        for (PointId x = 0; x < n; ++x)
            if (mask >> x & 1)
                points.push_back(x);
        std::set<std::vector<std::uint8_t>> seen;
        for (const auto& c : cls.concepts()) {
            std::vector<std::uint8_t> key;
            for (auto x : points)
                key.push_back(c[x]);
            if (seen.insert(key).second)
                out.push_back(PartialAssignment::restriction_of(c, points));
        }
    }
    return out;
}

namespace {

struct SampleOutcome {
    bool success = false;
    bool length_ok = true;
    bool subset_ok = true;
    CompressedTuple tuple;
    std::string reason;
};

SampleOutcome check_sample(CompressionScheme& scheme, const PartialAssignment& f)
{
    SampleOutcome o;
    try {
        o.tuple = scheme.compress(f);
    } catch (const std::exception& e) {
        o.reason = std::string("compress threw: ") + e.what();
        return o;
    }
    o.length_ok = o.tuple.points.size() == static_cast<std::size_t>(scheme.dimension());
    o.subset_ok = std::all_of(o.tuple.points.begin(), o.tuple.points.end(), [&](PointId x) { return f.contains(x); });
    if (!o.length_ok) {
        o.reason = "tuple length differs from the dimension";
        return o;
    }
    if (!o.subset_ok) {
        o.reason = "tuple contains a point outside the sample";
        return o;
    }
    for (std::size_t i = 0; i < scheme.reconstructor_count(); ++i) {
        if (f.agrees_with(scheme.reconstruct(i, o.tuple))) {
            o.success = true;
            return o;
        }
    }
    o.reason = "no reconstruction function recovers the sample";
    return o;
}

CertificationReport assemble(const ConceptClass& cls, const std::vector<PartialAssignment>& samples,
    const std::vector<SampleOutcome>& outcomes)
{
    CertificationReport r;
    CompressionScheme scheme(cls);
    r.d = scheme.dimension();
    r.rho_count = scheme.reconstructor_count();
    r.samples_tested = samples.size();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& o = outcomes[i];
        r.tuple_length_ok = r.tuple_length_ok && o.length_ok;
        r.subset_ok = r.subset_ok && o.subset_ok;
        if (o.success)
            ++r.successes;
        else
            r.failures.push_back(CertificationFailure{samples[i], o.tuple, o.reason});
    }
    return r;
}

} // namespace

CertificationReport certify_scheme_serial(const ConceptClass& cls, std::optional<std::size_t> max_sample_size)
{
    auto samples = realizable_samples(cls, max_sample_size);
    std::vector<SampleOutcome> outcomes(samples.size());
    CompressionScheme scheme(cls);
    for (std::size_t i = 0; i < samples.size(); ++i)
        outcomes[i] = check_sample(scheme, samples[i]);
    return assemble(cls, samples, outcomes);
}

CertificationReport certify_scheme(const ConceptClass& cls, std::optional<std::size_t> max_sample_size)
{
    auto samples = realizable_samples(cls, max_sample_size);
    std::vector<SampleOutcome> outcomes(samples.size());
    const auto n = static_cast<std::int64_t>(samples.size());
#pragma omp parallel
    {
        CompressionScheme scheme(cls);
#pragma omp for schedule(dynamic, 32)
        for (std::int64_t i = 0; i < n; ++i)
            outcomes[static_cast<std::size_t>(i)] = check_sample(scheme, samples[static_cast<std::size_t>(i)]);
    }
    return assemble(cls, samples, outcomes);
}

} // namespace eqlearn
