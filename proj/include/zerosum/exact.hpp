#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "zerosum/group.hpp"

namespace zerosum {

enum class Invariant {
    davenport,  // D: no non-empty zero-sum subsequence
    eta,        // eta: none of length in [1, exp(G)]
    egz,        // s: none of length exactly exp(G)
    disjoint,   // D_m: fewer than m pairwise-disjoint non-empty zero-sums
};

std::string invariant_name(Invariant kind);                       // "D", "eta", "s", "Dm"
std::optional<Invariant> invariant_from_name(std::string_view);   // accepts the same spellings

struct Budget {
    std::uint64_t max_nodes = 100'000'000;
    std::chrono::milliseconds max_time{60'000};
};

// An exact invariant value together with an extremal certificate: a sequence
// of length value-1 that avoids the defining property, proving the value
// cannot be smaller. The upper direction is proved by the exhausted search.
struct InvariantResult {
    GroupDescriptor group;
    Invariant kind = Invariant::davenport;
    int m = 1;  // meaningful for Invariant::disjoint
    std::int64_t value = 0;
    ZSequence certificate;
    std::uint64_t nodes_explored = 0;
    std::chrono::milliseconds elapsed{0};
};

// Raised when a search runs out of nodes or time. `partial.value` is the best
// lower bound proved so far (its certificate realizes value-1).
class BudgetExhausted : public std::runtime_error {
public:
    BudgetExhausted(const std::string& what, InvariantResult partial_result)
        : std::runtime_error(what), partial(std::move(partial_result)) {}
    InvariantResult partial;
};

// Exact values by branch-and-bound over non-decreasing element sequences in
// mixed-radix rank order. The certificate returned is the lexicographically
// least extremal sequence under that order.
InvariantResult exact_davenport(const GroupDescriptor& g, const Budget& budget = {});
InvariantResult exact_eta(const GroupDescriptor& g, const Budget& budget = {});
InvariantResult exact_s(const GroupDescriptor& g, const Budget& budget = {});
// m-th Davenport constant; decided by a memoized disjoint-decomposition
// recursion, so only tiny groups are feasible for m >= 2.
InvariantResult exact_dm(const GroupDescriptor& g, int m, const Budget& budget = {});

InvariantResult exact_invariant(const GroupDescriptor& g, Invariant kind, int m = 1,
                                const Budget& budget = {});

// Defining-property checkers (window lengths are clamped to |S|).
bool is_zero_sum_free(const ZSequence& s, const GroupDescriptor& g);
bool is_eta_free(const ZSequence& s, const GroupDescriptor& g);  // no short zero-sum
bool is_egz_free(const ZSequence& s, const GroupDescriptor& g);  // none of length exp(G)

// True iff S contains at least m pairwise-disjoint non-empty zero-sum
// subsequences; find_* also returns one such decomposition (m index sets).
bool has_m_disjoint_zero_sums(const ZSequence& s, const GroupDescriptor& g, int m);
std::optional<std::vector<std::vector<int>>> find_m_disjoint_zero_sums(const ZSequence& s,
                                                                       const GroupDescriptor& g,
                                                                       int m);

// Re-checks that result.certificate has length value-1 and avoids the
// defining property of result.kind.
bool certificate_is_extremal(const InvariantResult& result);

}  // namespace zerosum
