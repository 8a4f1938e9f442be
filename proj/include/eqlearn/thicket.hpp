#pragma once

#include "eqlearn/littlestone.hpp"

#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace eqlearn {

/// Which concept's dimension drop an edge averages. `target` is the learner's
/// view (query A, target B, the teacher reveals B's value). `query` swaps the
/// roles; it exists only so the checkers can be mutation-tested.
enum class DropConvention { target, query };

/// Minimum outgoing edge weight of a concept; infinite when the concept has no
/// other class member to compare against.
class QueryRank {
public:
    static QueryRank infinite() { return QueryRank(); }
    explicit QueryRank(Rational value) : value_(std::move(value)) {}

    bool is_infinite() const { return !value_.has_value(); }
    /// Throws std::logic_error when infinite.
    const Rational& value() const;

    friend bool operator<(const QueryRank& a, const QueryRank& b)
    {
        if (a.is_infinite())
            return false;
        return b.is_infinite() || *a.value_ < *b.value_;
    }
    friend bool operator==(const QueryRank& a, const QueryRank& b) { return a.value_ == b.value_; }

private:
    QueryRank() = default;
    std::optional<Rational> value_;
};

std::string to_string(const QueryRank& rank);

/// Thicket query graph of the subclass `members` of the table's root class.
///
/// Vertices are root concept indices; the weight of edge (A, B) is the
/// expected dimension drop of the subclass when the teacher draws x from
/// mu restricted to the symmetric difference of A and B and reveals B(x).
/// Weights are computed on demand and cached. Not thread-safe.
class ThicketGraph {
public:
    ThicketGraph(LdimTable& table, ConceptSet members, DropConvention convention = DropConvention::target);

    const ConceptSet& members() const { return members_; }

    /// Throws std::invalid_argument if a == b or either is not a member.
    const Rational& edge_weight(std::size_t a, std::size_t b);

    QueryRank query_rank(std::size_t a);

    /// Lowest-index member with the largest query rank. Throws on an empty
    /// member set.
    std::size_t max_min_query();

    /// Query ranks of every member, in index order.
    std::vector<std::pair<std::size_t, QueryRank>> query_ranks();

    /// Exhaustive search over simple cycles of length 2..max_len whose edges
    /// all weigh at most 1/2, at least one strictly less. Returns the vertex
    /// sequence of the first one found.
    std::optional<std::vector<std::size_t>> find_deficient_cycle(std::size_t max_len);

private:
    void require_member(std::size_t a) const;

    LdimTable* table_;
    ConceptSet members_;
    DropConvention convention_;
    int class_ldim_;
    std::map<std::pair<std::size_t, std::size_t>, Rational> weights_;
};

/// Cycle search over an arbitrary complete digraph on vertices 0..n-1: the
/// first simple cycle of length 2..max_len whose edges all weigh at most 1/2,
/// at least one strictly less, with its smallest vertex first.
std::optional<std::vector<std::size_t>> find_deficient_cycle(std::size_t n,
    const std::function<Rational(std::size_t, std::size_t)>& weight, std::size_t max_len);

/// d(A, B) over the whole class.
Rational edge_weight(const ConceptClass& cls, const Concept& a, const Concept& b);
QueryRank query_rank(const ConceptClass& cls, const Concept& a);
Concept max_min_query(const ConceptClass& cls);
std::optional<std::vector<std::size_t>> find_deficient_cycle(const ConceptClass& cls, std::size_t max_len);

} // namespace eqlearn
