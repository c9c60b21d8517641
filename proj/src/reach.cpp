#include "zerosum/reach.hpp"

#include <algorithm>
#include <stdexcept>

namespace zerosum {

namespace {
constexpr std::int64_t kMaxStateCells = std::int64_t{1} << 23;  // layers * order cap
}

ReachState::ReachState(const GroupDescriptor& g, int max_len, bool record, bool stratified)
    : group_(&g), max_len_(max_len), stratified_(stratified), record_(record) {
    if (max_len < 0)
        throw std::invalid_argument("max_len must be >= 0");
    order_ = g.order();
    words_ = static_cast<int>((order_ + 63) / 64);
    const int layers = stratified_ ? max_len_ + 1 : 2;
    if (static_cast<std::int64_t>(layers) * order_ > kMaxStateCells)
        throw std::invalid_argument("reach state too large for this group/window");
    bits_.assign(static_cast<std::size_t>(layers) * words_, 0);
    if (record_)
        traces_.assign(static_cast<std::size_t>(layers) * order_, Trace{});
    bits_[0] |= 1;  // layer 0 holds exactly the identity
    scratch_.resize(words_);
}

ReachState::ReachState(const GroupDescriptor& g, int max_len, bool record_witnesses)
    : ReachState(g, max_len, record_witnesses, true) {}

ReachState ReachState::unstratified(const GroupDescriptor& g, bool record_witnesses) {
    return ReachState(g, 1, record_witnesses, false);
}

int ReachState::layer_index(int len) const {
    if (len <= 0)
        return 0;
    return stratified_ ? len : 1;
}

bool ReachState::test(int layer, std::int64_t rank) const {
    const std::uint64_t word = bits_[static_cast<std::size_t>(layer) * words_ + (rank >> 6)];
    return (word >> (rank & 63)) & 1;
}

void ReachState::set(int layer, std::int64_t rank, int elem_idx, int prev_layer,
                     std::int64_t prev_rank) {
    bits_[static_cast<std::size_t>(layer) * words_ + (rank >> 6)] |= std::uint64_t{1} << (rank & 63);
    if (record_) {
        Trace& t = traces_[static_cast<std::size_t>(layer) * order_ + rank];
        if (t.elem < 0) {
            t.elem = static_cast<std::int32_t>(elem_idx);
            t.prev_layer = static_cast<std::int16_t>(prev_layer);
            t.prev_rank = static_cast<std::int32_t>(prev_rank);
        }
    }
}

void ReachState::push(const GroupElement& e) {
    const std::int64_t g_rank = group_->rank_of(e);
    const int idx = static_cast<int>(pushed_.size());
    const auto& factors = group_->invariant_factors();
    const auto& g_coords = e.coords;

    std::vector<std::int64_t> strides(factors.size(), 1);
    for (std::size_t i = factors.size(); i-- > 1;)
        strides[i - 1] = strides[i] * factors[i];
    // Mixed-radix rank addition: digit-wise modular add.
    auto translate = [&](std::int64_t x) {
        std::int64_t out = 0;
        for (std::size_t i = factors.size(); i-- > 0;) {
            const std::int64_t digit = x % factors[i];
            x /= factors[i];
            std::int64_t d = digit + g_coords[i];
            if (d >= factors[i])
                d -= factors[i];
            out += d * strides[i];
        }
        return out;
    };
    auto union_from = [&](const std::uint64_t* src_words, int dst_layer, int src_layer) {
        for (int w = 0; w < words_; ++w) {
            std::uint64_t m = src_words[w];
            while (m) {
                const int b = __builtin_ctzll(m);
                m &= m - 1;
                const std::int64_t x = (static_cast<std::int64_t>(w) << 6) | b;
                const std::int64_t y = translate(x);
                if (!test(dst_layer, y))
                    set(dst_layer, y, idx, src_layer, x);
            }
        }
    };

    if (stratified_) {
        // Knapsack order: reads of layer L-1 happen before it is written.
        const int top = std::min<int>(max_len_, idx + 1);
        for (int layer = top; layer >= 1; --layer)
            union_from(&bits_[static_cast<std::size_t>(layer - 1) * words_], layer, layer - 1);
    } else {
        // Collapsed layer absorbs its own translate; snapshot first.
        std::copy(bits_.begin() + words_, bits_.begin() + 2 * words_, scratch_.begin());
        union_from(scratch_.data(), 1, 1);
        if (!test(1, g_rank))
            set(1, g_rank, idx, 0, 0);
    }
    pushed_.push_back(g_rank);
}

bool ReachState::contains_rank(int len, std::int64_t sum_rank) const {
    if (len < 0 || (stratified_ && len > max_len_))
        return false;
    if (sum_rank < 0 || sum_rank >= order_)
        throw std::invalid_argument("element rank out of range");
    return test(layer_index(len), sum_rank);
}

bool ReachState::contains(int len, const GroupElement& sum) const {
    return contains_rank(len, group_->rank_of(sum));
}

bool ReachState::identity_reachable(int lo, int hi) const {
    if (lo < 1)
        lo = 1;
    if (!stratified_)
        return hi >= 1 && test(1, 0);
    hi = std::min(hi, max_len_);
    for (int len = lo; len <= hi; ++len)
        if (test(len, 0))
            return true;
    return false;
}

std::optional<std::vector<int>> ReachState::witness(int len, const GroupElement& sum) const {
    if (!record_)
        throw std::logic_error("witness recording is disabled for this state");
    const std::int64_t rank = group_->rank_of(sum);
    if (len < 0 || (stratified_ && len > max_len_) || !test(layer_index(len), rank))
        return std::nullopt;
    std::vector<int> indices;
    int layer = layer_index(len);
    std::int64_t at = rank;
    while (layer != 0 || at != 0) {
        const Trace& t = traces_[static_cast<std::size_t>(layer) * order_ + at];
        indices.push_back(t.elem);
        layer = t.prev_layer;
        at = t.prev_rank;
    }
    std::sort(indices.begin(), indices.end());
    return indices;
}

std::optional<std::vector<int>> ReachState::identity_witness(int lo, int hi) const {
    if (lo < 1)
        lo = 1;
    if (!stratified_) {
        if (hi >= 1 && test(1, 0))
            return witness(1, group_->identity());
        return std::nullopt;
    }
    hi = std::min(hi, max_len_);
    for (int len = lo; len <= hi; ++len)
        if (test(len, 0))
            return witness(len, group_->identity());
    return std::nullopt;
}

std::optional<std::vector<int>> find_zero_sum(const ZSequence& s, const GroupDescriptor& g,
                                              int lo, int hi) {
    const int n = static_cast<int>(s.size());
    if (lo < 1 || lo > hi)
        throw std::invalid_argument("zero-sum window is empty");
    if (hi > n)
        throw std::invalid_argument("zero-sum window exceeds the sequence length");
    ReachState rs(g, hi, /*record_witnesses=*/true);
    for (const GroupElement& e : s.elements) {
        rs.push(e);
        // Early exit: once the identity shows up in the window it stays.
        if (rs.identity_reachable(lo, hi))
            break;
    }
    return rs.identity_witness(lo, hi);
}

}  // namespace zerosum
