#pragma once

#include "eqlearn/concept_class.hpp"

#include <unordered_map>

namespace eqlearn {

/// Memoized Littlestone dimension over subclasses of one root class.
///
/// Subclasses are identified by their ConceptSet in the root, so different
/// assignment paths that reach the same subclass share an entry. The table is
/// not synchronized: confine each instance to one thread. The root class must
/// outlive the table.
class LdimTable {
public:
    explicit LdimTable(const ConceptClass& root) : root_(&root) {}

    const ConceptClass& root() const { return *root_; }
    ConceptSet all() const { return root_->all(); }

    /// -1 for the empty set, 0 for a singleton.
    int ldim(const ConceptSet& s);
    int ldim() { return ldim(all()); }

    /// ldim(s) - ldim(s restricted to x = value of concept `c` at x).
    int drop(const ConceptSet& s, std::size_t c, PointId x);

    /// Every key of f keeps the full dimension of s.
    bool is_exceptional(const ConceptSet& s, const PartialAssignment& f);

    /// Points where one label keeps the full dimension of s, with that label.
    PartialAssignment canonical_partial(const ConceptSet& s);

    std::size_t cache_size() const { return memo_.size(); }

private:
    int compute(const ConceptSet& s);

    const ConceptClass* root_;
    std::unordered_map<ConceptSet, int, ConceptSetHash> memo_;
};

int ldim(const ConceptClass& cls);

/// Direct recursion over materialized restrictions, with no memo and no
/// pruning. Exponential; kept as the reference the memoized kernel is tested
/// against.
int ldim_reference(const ConceptClass& cls);

/// u(A, x) for the concept A of `cls`. Throws DomainMismatchError if A is not
/// a member.
int drop(const ConceptClass& cls, const Concept& a, PointId x);

bool is_exceptional(const ConceptClass& cls, const PartialAssignment& f);

PartialAssignment canonical_partial(const ConceptClass& cls);

/// Total concept agreeing with `f` and taking 0 everywhere else.
Concept extend_with_zeros(const PartialAssignment& f, std::size_t domain_size);

} // namespace eqlearn
