#include "eqlearn/thicket.hpp"

#include <functional>
#include <stdexcept>

namespace eqlearn {

const Rational& QueryRank::value() const
{
    if (!value_)
        throw std::logic_error("QueryRank::value on an infinite rank");
    return *value_;
}

std::string to_string(const QueryRank& rank) { return rank.is_infinite() ? "inf" : to_string(rank.value()); }

ThicketGraph::ThicketGraph(LdimTable& table, ConceptSet members, DropConvention convention)
    : table_(&table), members_(std::move(members)), convention_(convention), class_ldim_(table.ldim(members_))
{
}

void ThicketGraph::require_member(std::size_t a) const
{
    if (a >= members_.universe() || !members_.test(a))
        throw std::invalid_argument("concept " + std::to_string(a) + " is not in the thicket graph");
}

const Rational& ThicketGraph::edge_weight(std::size_t a, std::size_t b)
{
    if (a == b)
        throw std::invalid_argument("edge weight from a concept to itself is undefined");
    require_member(a);
    require_member(b);
    auto key = std::make_pair(a, b);
    if (auto it = weights_.find(key); it != weights_.end())
        return it->second;

    const ConceptClass& root = table_->root();
    const Concept& ca = root.concept_at(a);
    const Concept& cb = root.concept_at(b);
    const Concept& revealed = convention_ == DropConvention::target ? cb : ca;
    Rational numerator = 0;
    Rational delta_mass = 0;
    for (PointId x = 0; x < root.domain().size(); ++x) {
        if (ca[x] == cb[x])
            continue;
        const Rational& w = root.domain().weight(x);
        delta_mass += w;
        int after = table_->ldim(root.restrict(members_, x, revealed[x]));
        if (int drop = class_ldim_ - after; drop != 0)
            numerator += w * drop;
    }
    return weights_.emplace(key, Rational(numerator / delta_mass)).first->second;
}

QueryRank ThicketGraph::query_rank(std::size_t a)
{
    require_member(a);
    std::optional<Rational> best;
    members_.for_each([&](std::size_t b) {
        if (b == a)
            return;
        const Rational& w = edge_weight(a, b);
        if (!best || w < *best)
            best = w;
    });
    return best ? QueryRank(*best) : QueryRank::infinite();
}

std::vector<std::pair<std::size_t, QueryRank>> ThicketGraph::query_ranks()
{
    std::vector<std::pair<std::size_t, QueryRank>> out;
    members_.for_each([&](std::size_t a) { out.emplace_back(a, query_rank(a)); });
    return out;
}

std::size_t ThicketGraph::max_min_query()
{
    auto first = members_.first();
    if (!first)
        throw std::invalid_argument("max_min_query on an empty class");
    std::size_t best = *first;
    std::optional<Rational> best_rank; // nullopt: nothing scored yet
    bool single = members_.count() == 1;
    if (single)
        return best;
    members_.for_each([&](std::size_t a) {
        // Only a strictly larger rank displaces the incumbent, so scanning a's
        // row can stop once its running minimum falls to the incumbent's rank.
        std::optional<Rational> row_min;
        bool beaten = false;
        members_.for_each([&](std::size_t b) {
            if (beaten || b == a)
                return;
            const Rational& w = edge_weight(a, b);
            if (!row_min || w < *row_min)
                row_min = w;
            if (best_rank && *row_min <= *best_rank)
                beaten = true;
        });
        if (!beaten && (!best_rank || *row_min > *best_rank)) {
            best = a;
            best_rank = row_min;
        }
    });
    return best;
}

std::optional<std::vector<std::size_t>> find_deficient_cycle(std::size_t n,
    const std::function<Rational(std::size_t, std::size_t)>& weight, std::size_t max_len)
{
    if (max_len < 2)
        throw std::invalid_argument("find_deficient_cycle: max_len must be at least 2");
    const Rational half(1, 2);
    // light[i][j]: 0 = edge too heavy, 1 = weight exactly 1/2, 2 = below 1/2
    std::vector<std::vector<int>> light(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            const Rational w = weight(i, j);
            light[i][j] = w < half ? 2 : (w == half ? 1 : 0);
        }

    std::vector<std::size_t> path;
    std::vector<bool> on_path(n, false);
    std::optional<std::vector<std::size_t>> found;
    // Cycles are enumerated once per rotation by requiring the start vertex to
    // be the smallest on the cycle.
    std::function<void(std::size_t, std::size_t, bool)> extend = [&](std::size_t start, std::size_t v, bool strict) {
        if (found)
            return;
        for (std::size_t w = start; w < n; ++w) {
            if (!light[v][w])
                continue;
            bool s = strict || light[v][w] == 2;
            if (w == start) {
                if (path.size() >= 2 && s) {
                    found = path;
                    return;
                }
                continue;
            }
            if (on_path[w] || path.size() >= max_len)
                continue;
            on_path[w] = true;
            path.push_back(w);
            extend(start, w, s);
            path.pop_back();
            on_path[w] = false;
            if (found)
                return;
        }
    };
    for (std::size_t start = 0; start < n && !found; ++start) {
        path = {start};
        on_path.assign(n, false);
        on_path[start] = true;
        extend(start, start, false);
    }
    return found;
}

std::optional<std::vector<std::size_t>> ThicketGraph::find_deficient_cycle(std::size_t max_len)
{
    const auto vertices = members_.indices();
    auto cycle = eqlearn::find_deficient_cycle(
        vertices.size(), [&](std::size_t i, std::size_t j) { return edge_weight(vertices[i], vertices[j]); }, max_len);
    if (cycle)
        for (auto& v : *cycle)
            v = vertices[v];
    return cycle;
}

namespace {

std::size_t member_index(const ConceptClass& cls, const Concept& c)
{
    auto idx = cls.find(c);
    if (!idx)
        throw DomainMismatchError("concept " + c.to_bitstring() + " is not a member of the class");
    return *idx;
}

} // namespace

Rational edge_weight(const ConceptClass& cls, const Concept& a, const Concept& b)
{
    LdimTable table(cls);
    ThicketGraph g(table, cls.all());
    return g.edge_weight(member_index(cls, a), member_index(cls, b));
}

QueryRank query_rank(const ConceptClass& cls, const Concept& a)
{
    LdimTable table(cls);
    ThicketGraph g(table, cls.all());
    return g.query_rank(member_index(cls, a));
}

Concept max_min_query(const ConceptClass& cls)
{
    LdimTable table(cls);
    ThicketGraph g(table, cls.all());
    return cls.concept_at(g.max_min_query());
}

std::optional<std::vector<std::size_t>> find_deficient_cycle(const ConceptClass& cls, std::size_t max_len)
{
    LdimTable table(cls);
    ThicketGraph g(table, cls.all());
    return g.find_deficient_cycle(max_len);
}

} // namespace eqlearn
