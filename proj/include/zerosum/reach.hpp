#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "zerosum/group.hpp"

namespace zerosum {

// Dynamic-programming state of achievable subsequence sums over a group,
// stratified by subsequence length. Layer L holds every group element that
// is the sum of some subsequence of exactly L pushed elements (layer 0 is
// the identity alone). The unstratified variant collapses all non-empty
// lengths into a single layer, which is what a plain Davenport-style search
// needs.
//
// Sums are stored as dense bitsets indexed by mixed-radix element rank.
// Pushing never removes a reachable (length, sum) pair. When witness
// recording is on, the first time a pair is reached we remember the pushed
// element's index and the predecessor pair, so a subsequence realizing any
// reached sum can be reconstructed.
class ReachState {
public:
    // Stratified over lengths 0..max_len.
    ReachState(const GroupDescriptor& g, int max_len, bool record_witnesses = true);
    // Collapsed: one layer for all non-empty subsequence sums.
    static ReachState unstratified(const GroupDescriptor& g, bool record_witnesses = true);

    void push(const GroupElement& e);
    int pushed() const { return static_cast<int>(pushed_.size()); }
    bool stratified() const { return stratified_; }
    int max_len() const { return max_len_; }

    // Layer membership. For the unstratified state any len >= 1 queries the
    // collapsed layer.
    bool contains(int len, const GroupElement& sum) const;
    bool contains_rank(int len, std::int64_t sum_rank) const;
    // True iff the identity is reachable at some length in [lo, hi]
    // (collapsed layer for the unstratified state).
    bool identity_reachable(int lo, int hi) const;

    // Indices (into the push order) of a subsequence of length len summing to
    // sum; nullopt if that pair was never reached. Requires witness recording.
    std::optional<std::vector<int>> witness(int len, const GroupElement& sum) const;
    // Smallest len in [lo, hi] whose layer contains the identity, with its
    // witness. nullopt if none.
    std::optional<std::vector<int>> identity_witness(int lo, int hi) const;

private:
    struct Trace {
        std::int32_t elem = -1;       // index of the element that first reached the pair
        std::int32_t prev_rank = -1;  // predecessor pair
        std::int16_t prev_layer = -1;
    };

    ReachState(const GroupDescriptor& g, int max_len, bool record, bool stratified);

    bool test(int layer, std::int64_t rank) const;
    void set(int layer, std::int64_t rank, int elem_idx, int prev_layer, std::int64_t prev_rank);
    int layer_index(int len) const;  // clamps lengths for the unstratified state

    const GroupDescriptor* group_;
    std::int64_t order_ = 1;
    int words_ = 1;
    int max_len_ = 0;
    bool stratified_ = true;
    bool record_ = true;
    std::vector<std::uint64_t> bits_;       // (layers) x (words_)
    std::vector<Trace> traces_;             // (layers) x (order_), when recording
    std::vector<std::int64_t> pushed_;      // ranks of pushed elements, in order
    std::vector<std::uint64_t> scratch_;    // snapshot buffer for collapsed pushes
};

// Exact search for a non-empty zero-sum subsequence of S whose length lies in
// [lo, hi]. Returns the (sorted) index set of one such subsequence, choosing
// a shortest one, or nullopt when none exists; the no-witness answer is exact
// because the reach state enumerates every achievable (length, sum) pair.
// Requires 1 <= lo <= hi <= |S|.
std::optional<std::vector<int>> find_zero_sum(const ZSequence& s, const GroupDescriptor& g,
                                              int lo, int hi);

}  // namespace zerosum
