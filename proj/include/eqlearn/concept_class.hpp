#pragma once

#include "eqlearn/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace eqlearn {

/// Index of a point in its Domain.
using PointId = std::size_t;

/// Raised when a point, concept, or assignment refers to something that is
/// not part of the domain or class it is used with.
class DomainMismatchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class ValidationErrorKind {
    malformed_json,
    missing_field,
    malformed_weight,
    nonpositive_weight,
    weights_not_normalized,
    duplicate_point,
    duplicate_concept,
    length_mismatch,
    malformed_bitstring,
    malformed_prior,
};

std::string_view to_string(ValidationErrorKind kind);

/// Construction-time invariant violation of a Domain or ConceptClass, or a
/// malformed class file. `position()` is a byte offset when known.
class ValidationError : public std::runtime_error {
public:
    ValidationError(ValidationErrorKind kind, const std::string& what, std::optional<std::size_t> position = {})
        : std::runtime_error(what), kind_(kind), position_(position)
    {
    }

    ValidationErrorKind kind() const { return kind_; }
    std::optional<std::size_t> position() const { return position_; }

private:
    ValidationErrorKind kind_;
    std::optional<std::size_t> position_;
};

/// Finite domain with a strictly positive probability weight per point.
class Domain {
public:
    Domain(std::vector<std::string> points, std::vector<Rational> weights);

    /// Points "x1".."xn", each with weight 1/n.
    static Domain uniform(std::size_t n);

    std::size_t size() const { return points_.size(); }
    const std::string& point(PointId id) const { return points_.at(id); }
    const Rational& weight(PointId id) const { return weights_.at(id); }
    const std::vector<std::string>& points() const { return points_; }
    const std::vector<Rational>& weights() const { return weights_; }

    std::optional<PointId> find(std::string_view name) const;
    /// Throws DomainMismatchError for an unknown name.
    PointId index_of(std::string_view name) const;

    friend bool operator==(const Domain& a, const Domain& b)
    {
        return a.points_ == b.points_ && a.weights_ == b.weights_;
    }

private:
    std::vector<std::string> points_;
    std::vector<Rational> weights_;
    std::unordered_map<std::string, PointId> index_;
};

/// Total {0,1}-valued map on a domain, stored in domain order.
class Concept {
public:
    Concept() = default;
    explicit Concept(std::vector<std::uint8_t> bits);

    /// "0110" -> point i takes the i-th character. Throws ValidationError.
    static Concept from_bitstring(std::string_view bits);
    static Concept zeros(std::size_t n) { return Concept(std::vector<std::uint8_t>(n, 0)); }

    std::size_t size() const { return bits_.size(); }
    bool operator[](PointId x) const { return bits_[x] != 0; }
    bool at(PointId x) const { return bits_.at(x) != 0; }
    void set(PointId x, bool value) { bits_.at(x) = value ? 1 : 0; }
    std::string to_bitstring() const;

    friend bool operator==(const Concept&, const Concept&) = default;
    friend auto operator<=>(const Concept&, const Concept&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// Finite map from points to {0,1}. Keys are ordered by point index.
class PartialAssignment {
public:
    PartialAssignment() = default;
    PartialAssignment(std::initializer_list<std::pair<const PointId, bool>> entries) : entries_(entries) {}

    /// Builds from point names; throws DomainMismatchError on unknown names.
    static PartialAssignment from_names(const Domain& domain, std::initializer_list<std::pair<std::string_view, bool>> entries);
    /// Restriction of `c` to `points`.
    static PartialAssignment restriction_of(const Concept& c, std::span<const PointId> points);

    void set(PointId x, bool value) { entries_[x] = value; }
    std::optional<bool> get(PointId x) const;
    bool contains(PointId x) const { return entries_.count(x) != 0; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const std::map<PointId, bool>& entries() const { return entries_; }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    /// True when every key of `other` is a key here with the same value.
    bool extends(const PartialAssignment& other) const;
    /// True when `c` agrees with every entry.
    bool agrees_with(const Concept& c) const;

    /// "{x1->1, x3->0}" using the domain's point names.
    std::string describe(const Domain& domain) const;

    friend bool operator==(const PartialAssignment&, const PartialAssignment&) = default;

private:
    std::map<PointId, bool> entries_;
};

/// Dynamic bitset over concept indices of a root ConceptClass. This is the
/// working representation of subclasses; restriction is a word-wise AND.
class ConceptSet {
public:
    ConceptSet() = default;
    explicit ConceptSet(std::size_t universe) : words_((universe + 63) / 64, 0), universe_(universe) {}

    static ConceptSet full(std::size_t universe);

    std::size_t universe() const { return universe_; }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    std::size_t count() const;
    bool none() const;
    std::optional<std::size_t> first() const;
    std::vector<std::size_t> indices() const;

    template <typename F>
    void for_each(F&& f) const
    {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                f(w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits)));
                bits &= bits - 1;
            }
        }
    }

    ConceptSet& operator&=(const ConceptSet& other);
    /// Members of *this that are not in `other`.
    ConceptSet minus(const ConceptSet& other) const;
    friend ConceptSet operator&(ConceptSet a, const ConceptSet& b) { return a &= b; }

    std::size_t hash() const;
    friend bool operator==(const ConceptSet&, const ConceptSet&) = default;

private:
    std::vector<std::uint64_t> words_;
    std::size_t universe_ = 0;
};

struct ConceptSetHash {
    std::size_t operator()(const ConceptSet& s) const { return s.hash(); }
};

/// Ordered set of distinct concepts over a shared domain. Order is the file
/// order and decides every lowest-index tie-break in the library.
class ConceptClass {
public:
    ConceptClass(std::shared_ptr<const Domain> domain, std::vector<Concept> concepts, std::vector<std::string> labels = {});
    ConceptClass(Domain domain, std::vector<Concept> concepts, std::vector<std::string> labels = {});

    /// Convenience for tests and generators: concepts as bitstrings.
    static ConceptClass from_bitstrings(Domain domain, std::initializer_list<std::string_view> bits);
    static ConceptClass from_bitstrings(Domain domain, const std::vector<std::string>& bits);

    const Domain& domain() const { return *domain_; }
    const std::shared_ptr<const Domain>& shared_domain() const { return domain_; }
    std::size_t size() const { return concepts_.size(); }
    bool empty() const { return concepts_.empty(); }
    const Concept& concept_at(std::size_t i) const { return concepts_.at(i); }
    const std::vector<Concept>& concepts() const { return concepts_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const { return labels_; }

    std::optional<std::size_t> find(const Concept& c) const;
    std::optional<std::size_t> find_label(std::string_view label) const;

    /// Concepts taking value 1 at `x`.
    const ConceptSet& ones(PointId x) const { return ones_.at(x); }
    ConceptSet all() const { return ConceptSet::full(size()); }

    /// Members of `within` that agree with `a` on every key. Throws
    /// DomainMismatchError for keys outside the domain.
    ConceptSet agreeing(const PartialAssignment& a, const ConceptSet& within) const;
    ConceptSet agreeing(const PartialAssignment& a) const { return agreeing(a, all()); }

    /// Members of `s` taking `value` at `x`.
    ConceptSet restrict(const ConceptSet& s, PointId x, bool value) const
    {
        return value ? (s & ones_[x]) : s.minus(ones_[x]);
    }

    /// Materializes a subclass; concept order and labels are preserved.
    ConceptClass subclass(const ConceptSet& members) const;

    friend bool operator==(const ConceptClass& a, const ConceptClass& b)
    {
        return *a.domain_ == *b.domain_ && a.concepts_ == b.concepts_ && a.labels_ == b.labels_;
    }

private:
    void index_columns();

    std::shared_ptr<const Domain> domain_;
    std::vector<Concept> concepts_;
    std::vector<std::string> labels_;
    std::vector<ConceptSet> ones_;
};

/// Subclass of concepts agreeing with `a`; domain unchanged, order kept.
ConceptClass restrict(const ConceptClass& cls, const PartialAssignment& a);

/// Points where A and B disagree, in domain order.
std::vector<PointId> symmetric_difference(const Concept& a, const Concept& b);

/// Total weight of `points`; 0 for the empty set.
Rational mass(const Domain& domain, std::span<const PointId> points);

} // namespace eqlearn

template <>
struct std::hash<eqlearn::ConceptSet> {
    std::size_t operator()(const eqlearn::ConceptSet& s) const { return s.hash(); }
};
