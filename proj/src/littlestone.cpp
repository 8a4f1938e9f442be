#include "eqlearn/littlestone.hpp"

#include <algorithm>
#include <bit>

namespace eqlearn {

namespace {

int floor_log2(std::size_t n) { return static_cast<int>(std::bit_width(n)) - 1; }

} // namespace

int LdimTable::ldim(const ConceptSet& s)
{
    std::size_t n = s.count();
    if (n == 0)
        return -1;
    if (n == 1)
        return 0;
    if (auto it = memo_.find(s); it != memo_.end())
        return it->second;
    int value = compute(s);
    memo_.emplace(s, value);
    return value;
}

int LdimTable::compute(const ConceptSet& s)
{
    // Two distinct concepts split at some point, so the answer is >= 1; it is
    // also at most floor(log2 |s|) because a depth-k mistake tree needs 2^k
    // concepts.
    const int ceiling = floor_log2(s.count());
    int best = 1;
    if (best == ceiling)
        return best;
    for (PointId x = 0; x < root_->domain().size(); ++x) {
        ConceptSet one = root_->restrict(s, x, true);
        std::size_t n1 = one.count();
        if (n1 == 0 || n1 == s.count())
            continue;
        ConceptSet zero = s.minus(root_->ones(x));
        // Neither side can exceed floor(log2 size); skip splits that cannot win.
        if (1 + floor_log2(std::min(n1, zero.count())) <= best)
            continue;
        int v = 1 + std::min(ldim(zero), ldim(one));
        if (v > best) {
            best = v;
            if (best == ceiling)
                break;
        }
    }
    return best;
}

int LdimTable::drop(const ConceptSet& s, std::size_t c, PointId x)
{
    return ldim(s) - ldim(root_->restrict(s, x, root_->concept_at(c)[x]));
}

bool LdimTable::is_exceptional(const ConceptSet& s, const PartialAssignment& f)
{
    int full = ldim(s);
    for (auto& [x, v] : f) {
        if (x >= root_->domain().size())
            throw DomainMismatchError("partial function key outside the domain");
        if (ldim(root_->restrict(s, x, v)) != full)
            return false;
    }
    return true;
}

PartialAssignment LdimTable::canonical_partial(const ConceptSet& s)
{
    int full = ldim(s);
    PartialAssignment f;
    for (PointId x = 0; x < root_->domain().size(); ++x) {
        if (ldim(root_->restrict(s, x, false)) == full)
            f.set(x, false);
        else if (ldim(root_->restrict(s, x, true)) == full)
            f.set(x, true);
    }
    return f;
}

int ldim(const ConceptClass& cls)
{
    LdimTable table(cls);
    return table.ldim();
}

int ldim_reference(const ConceptClass& cls)
{
    if (cls.empty())
        return -1;
    if (cls.size() == 1)
        return 0;
    int best = 0;
    for (PointId x = 0; x < cls.domain().size(); ++x) {
        auto zero = restrict(cls, {{x, false}});
        auto one = restrict(cls, {{x, true}});
        if (zero.empty() || one.empty())
            continue;
        best = std::max(best, 1 + std::min(ldim_reference(zero), ldim_reference(one)));
    }
    return best;
}

int drop(const ConceptClass& cls, const Concept& a, PointId x)
{
    auto idx = cls.find(a);
    if (!idx)
        throw DomainMismatchError("drop: concept is not a member of the class");
    if (x >= cls.domain().size())
        throw DomainMismatchError("drop: point outside the domain");
    LdimTable table(cls);
    return table.drop(cls.all(), *idx, x);
}

bool is_exceptional(const ConceptClass& cls, const PartialAssignment& f)
{
    LdimTable table(cls);
    return table.is_exceptional(cls.all(), f);
}

PartialAssignment canonical_partial(const ConceptClass& cls)
{
    LdimTable table(cls);
    return table.canonical_partial(cls.all());
}

Concept extend_with_zeros(const PartialAssignment& f, std::size_t domain_size)
{
    Concept c = Concept::zeros(domain_size);
    for (auto& [x, v] : f)
        c.set(x, v);
    return c;
}

} // namespace eqlearn
