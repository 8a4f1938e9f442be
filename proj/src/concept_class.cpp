#include "eqlearn/concept_class.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

namespace eqlearn {

std::string_view to_string(ValidationErrorKind kind)
{
    switch (kind) {
    case ValidationErrorKind::malformed_json: return "malformed_json";
    case ValidationErrorKind::missing_field: return "missing_field";
    case ValidationErrorKind::malformed_weight: return "malformed_weight";
    case ValidationErrorKind::nonpositive_weight: return "nonpositive_weight";
    case ValidationErrorKind::weights_not_normalized: return "weights_not_normalized";
    case ValidationErrorKind::duplicate_point: return "duplicate_point";
    case ValidationErrorKind::duplicate_concept: return "duplicate_concept";
    case ValidationErrorKind::length_mismatch: return "length_mismatch";
    case ValidationErrorKind::malformed_bitstring: return "malformed_bitstring";
    case ValidationErrorKind::malformed_prior: return "malformed_prior";
    }
    return "unknown";
}

// ---------------------------------------------------------------- Domain

Domain::Domain(std::vector<std::string> points, std::vector<Rational> weights)
    : points_(std::move(points)), weights_(std::move(weights))
{
    if (points_.size() != weights_.size())
        throw ValidationError(ValidationErrorKind::length_mismatch,
            "domain has " + std::to_string(points_.size()) + " points but " + std::to_string(weights_.size()) + " weights");
    Rational total = 0;
    for (PointId i = 0; i < points_.size(); ++i) {
        weights_[i].canonicalize();
        if (!index_.emplace(points_[i], i).second)
            throw ValidationError(ValidationErrorKind::duplicate_point, "duplicate point '" + points_[i] + "'");
        if (weights_[i] <= 0)
            throw ValidationError(ValidationErrorKind::nonpositive_weight,
                "point '" + points_[i] + "' has non-positive weight " + eqlearn::to_string(weights_[i]));
        total += weights_[i];
    }
    if (total != 1)
        throw ValidationError(ValidationErrorKind::weights_not_normalized, "weights sum to " + eqlearn::to_string(total) + ", not 1");
}

Domain Domain::uniform(std::size_t n)
{
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= n; ++i)
        names.push_back("x" + std::to_string(i));
    return Domain(std::move(names), std::vector<Rational>(n, Rational(1, static_cast<unsigned long>(n))));
}

std::optional<PointId> Domain::find(std::string_view name) const
{
    auto it = index_.find(std::string(name));
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

PointId Domain::index_of(std::string_view name) const
{
    if (auto id = find(name))
        return *id;
    throw DomainMismatchError("unknown point '" + std::string(name) + "'");
}

// ---------------------------------------------------------------- Concept

Concept::Concept(std::vector<std::uint8_t> bits) : bits_(std::move(bits))
{
    for (auto& b : bits_)
        b = b ? 1 : 0;
}

Concept Concept::from_bitstring(std::string_view bits)
{
    std::vector<std::uint8_t> out;
    out.reserve(bits.size());
    for (char ch : bits) {
        if (ch != '0' && ch != '1')
            throw ValidationError(ValidationErrorKind::malformed_bitstring, "bitstring '" + std::string(bits) + "' contains '" + ch + "'");
        out.push_back(ch == '1');
    }
    return Concept(std::move(out));
}

std::string Concept::to_bitstring() const
{
    std::string s;
    s.reserve(bits_.size());
    for (auto b : bits_)
        s.push_back(b ? '1' : '0');
    return s;
}

// ------------------------------------------------------ PartialAssignment

PartialAssignment PartialAssignment::from_names(const Domain& domain, std::initializer_list<std::pair<std::string_view, bool>> entries)
{
    PartialAssignment a;
    for (auto& [name, value] : entries)
        a.set(domain.index_of(name), value);
    return a;
}

PartialAssignment PartialAssignment::restriction_of(const Concept& c, std::span<const PointId> points)
{
    PartialAssignment a;
    for (PointId x : points)
        a.set(x, c.at(x));
    return a;
}

std::optional<bool> PartialAssignment::get(PointId x) const
{
    auto it = entries_.find(x);
    if (it == entries_.end())
        return std::nullopt;
    return it->second;
}

bool PartialAssignment::extends(const PartialAssignment& other) const
{
    for (auto& [x, v] : other.entries_) {
        auto mine = get(x);
        if (!mine || *mine != v)
            return false;
    }
    return true;
}

bool PartialAssignment::agrees_with(const Concept& c) const
{
    for (auto& [x, v] : entries_)
        if (x >= c.size() || c[x] != v)
            return false;
    return true;
}

std::string PartialAssignment::describe(const Domain& domain) const
{
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (auto& [x, v] : entries_) {
        if (!first)
            os << ", ";
        first = false;
        os << (x < domain.size() ? domain.point(x) : "#" + std::to_string(x)) << "->" << (v ? 1 : 0);
    }
    os << '}';
    return os.str();
}

// ------------------------------------------------------------- ConceptSet

ConceptSet ConceptSet::full(std::size_t universe)
{
    ConceptSet s(universe);
    for (auto& w : s.words_)
        w = ~std::uint64_t{0};
    if (universe % 64 != 0 && !s.words_.empty())
        s.words_.back() = (std::uint64_t{1} << (universe % 64)) - 1;
    return s;
}

std::size_t ConceptSet::count() const
{
    std::size_t n = 0;
    for (auto w : words_)
        n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

bool ConceptSet::none() const
{
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::optional<std::size_t> ConceptSet::first() const
{
    for (std::size_t w = 0; w < words_.size(); ++w)
        if (words_[w])
            return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
    return std::nullopt;
}

std::vector<std::size_t> ConceptSet::indices() const
{
    std::vector<std::size_t> out;
    out.reserve(count());
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
}

ConceptSet& ConceptSet::operator&=(const ConceptSet& other)
{
    for (std::size_t w = 0; w < words_.size(); ++w)
        words_[w] &= other.words_[w];
    return *this;
}

ConceptSet ConceptSet::minus(const ConceptSet& other) const
{
    ConceptSet out = *this;
    for (std::size_t w = 0; w < words_.size(); ++w)
        out.words_[w] &= ~other.words_[w];
    return out;
}

std::size_t ConceptSet::hash() const
{
    std::uint64_t h = 0xcbf29ce484222325ULL ^ universe_;
    for (auto w : words_) {
        h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
}

// ----------------------------------------------------------- ConceptClass

namespace {

std::string default_label(std::size_t i)
{
    if (i < 26)
        return std::string(1, static_cast<char>('A' + i));
    return "C" + std::to_string(i);
}

} // namespace

ConceptClass::ConceptClass(std::shared_ptr<const Domain> domain, std::vector<Concept> concepts, std::vector<std::string> labels)
    : domain_(std::move(domain)), concepts_(std::move(concepts)), labels_(std::move(labels))
{
    if (!domain_)
        throw std::invalid_argument("ConceptClass: null domain");
    if (labels_.empty())
        for (std::size_t i = 0; i < concepts_.size(); ++i)
            labels_.push_back(default_label(i));
    if (labels_.size() != concepts_.size())
        throw ValidationError(ValidationErrorKind::length_mismatch, "label count differs from concept count");
    std::set<std::string> seen_labels;
    std::set<Concept> seen;
    for (std::size_t i = 0; i < concepts_.size(); ++i) {
        if (concepts_[i].size() != domain_->size())
            throw ValidationError(ValidationErrorKind::length_mismatch,
                "concept '" + labels_[i] + "' has " + std::to_string(concepts_[i].size()) + " values for a domain of "
                    + std::to_string(domain_->size()) + " points");
        if (!seen.insert(concepts_[i]).second)
            throw ValidationError(ValidationErrorKind::duplicate_concept,
                "concept '" + labels_[i] + "' duplicates bitstring " + concepts_[i].to_bitstring());
        if (!seen_labels.insert(labels_[i]).second)
            throw ValidationError(ValidationErrorKind::duplicate_concept, "duplicate concept label '" + labels_[i] + "'");
    }
    index_columns();
}

ConceptClass::ConceptClass(Domain domain, std::vector<Concept> concepts, std::vector<std::string> labels)
    : ConceptClass(std::make_shared<const Domain>(std::move(domain)), std::move(concepts), std::move(labels))
{
}

ConceptClass ConceptClass::from_bitstrings(Domain domain, std::initializer_list<std::string_view> bits)
{
    std::vector<Concept> cs;
    for (auto b : bits)
        cs.push_back(Concept::from_bitstring(b));
    return ConceptClass(std::move(domain), std::move(cs));
}

ConceptClass ConceptClass::from_bitstrings(Domain domain, const std::vector<std::string>& bits)
{
    std::vector<Concept> cs;
    for (auto& b : bits)
        cs.push_back(Concept::from_bitstring(b));
    return ConceptClass(std::move(domain), std::move(cs));
}

void ConceptClass::index_columns()
{
    ones_.assign(domain_->size(), ConceptSet(concepts_.size()));
    for (std::size_t i = 0; i < concepts_.size(); ++i)
        for (PointId x = 0; x < domain_->size(); ++x)
            if (concepts_[i][x])
                ones_[x].set(i);
}

std::optional<std::size_t> ConceptClass::find(const Concept& c) const
{
    auto it = std::find(concepts_.begin(), concepts_.end(), c);
    if (it == concepts_.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - concepts_.begin());
}

std::optional<std::size_t> ConceptClass::find_label(std::string_view label) const
{
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
}

ConceptSet ConceptClass::agreeing(const PartialAssignment& a, const ConceptSet& within) const
{
    ConceptSet s = within;
    for (auto& [x, v] : a) {
        if (x >= domain_->size())
            throw DomainMismatchError("assignment key " + std::to_string(x) + " is outside a domain of "
                + std::to_string(domain_->size()) + " points");
        s = restrict(s, x, v);
    }
    return s;
}

ConceptClass ConceptClass::subclass(const ConceptSet& members) const
{
    std::vector<Concept> cs;
    std::vector<std::string> ls;
    members.for_each([&](std::size_t i) {
        cs.push_back(concepts_[i]);
        ls.push_back(labels_[i]);
    });
    return ConceptClass(domain_, std::move(cs), std::move(ls));
}

ConceptClass restrict(const ConceptClass& cls, const PartialAssignment& a)
{
    return cls.subclass(cls.agreeing(a));
}

std::vector<PointId> symmetric_difference(const Concept& a, const Concept& b)
{
    if (a.size() != b.size())
        throw DomainMismatchError("symmetric_difference: concepts over domains of different sizes");
    std::vector<PointId> out;
    for (PointId x = 0; x < a.size(); ++x)
        if (a[x] != b[x])
            out.push_back(x);
    return out;
}

Rational mass(const Domain& domain, std::span<const PointId> points)
{
    Rational total = 0;
    for (PointId x : points)
        total += domain.weight(x);
    return total;
}

} // namespace eqlearn
