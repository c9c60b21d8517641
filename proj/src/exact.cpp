#include "zerosum/exact.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <unordered_map>

#include "zerosum/reach.hpp"

namespace zerosum {

namespace {

// Exhaustive search is only meaningful at desk scale; the bounds module
// serves everything larger.
constexpr std::int64_t kMaxExactOrder = 256;

using Clock = std::chrono::steady_clock;

enum class Mode { D, Eta, S };

std::chrono::milliseconds since(Clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0);
}

// Largest admissible size of a property-free sequence, from closed-form
// upper bounds on the invariant itself:
//   D(G)  <= min(|G|, exp(G)(1 + ln(|G|/exp(G))))   (zero-sum free)
//   eta(G) <= |G|                                    (short-zero-sum free)
//   s(G)  <= |G| + exp(G) - 1                        (exp-length free)
// Reaching the cap ends the search: nothing larger can exist.
std::int64_t free_size_cap(Mode mode, std::int64_t order, std::int64_t exponent) {
    switch (mode) {
        case Mode::D: {
            if (order == 1)
                return 0;
            const double b = static_cast<double>(exponent) *
                             (1.0 + std::log(static_cast<double>(order) / exponent));
            const auto cap = static_cast<std::int64_t>(
                std::floor(std::nextafter(b, std::numeric_limits<double>::infinity())));
            return std::min(order, cap) - 1;
        }
        case Mode::Eta:
            return order - 1;
        case Mode::S:
            return order + exponent - 2;
    }
    return 0;
}

struct Searcher {
    const GroupDescriptor& g;
    Mode mode;
    Budget budget;

    std::int64_t n = 0;  // order
    int exponent = 1;
    int layers = 1;  // tracked layers above layer 0 (1 for D, exp for eta/s)
    int words = 1;
    int block_words = 1;  // words per state block
    int mult_cap = 0;     // any element repeats at most exp-1 times
    std::int64_t hard_cap = 0;

    std::vector<std::int32_t> add;  // add[h*n + x] = x + h in rank space
    std::vector<std::int32_t> neg;

    std::vector<std::vector<std::uint64_t>> rows;       // per-depth child states
    std::vector<std::vector<std::int32_t>> caps_rows;   // per-depth cap scratch
    std::vector<std::vector<std::uint64_t>> union_rows; // per-depth eta prefix unions
    std::vector<std::uint64_t> root_state;

    std::vector<std::int32_t> counts;
    std::vector<std::int32_t> best_counts;
    std::int64_t best = -1;
    bool done = false;

    std::uint64_t nodes = 0;
    Clock::time_point start = Clock::now();

    explicit Searcher(const GroupDescriptor& group, Mode md, const Budget& b)
        : g(group), mode(md), budget(b) {
        n = g.order();
        exponent = static_cast<int>(g.exponent());
        layers = (mode == Mode::D) ? 1 : exponent;
        words = static_cast<int>((n + 63) / 64);
        block_words = layers * words;
        hard_cap = free_size_cap(mode, n, exponent);
        mult_cap = std::min<std::int64_t>(exponent - 1, hard_cap);

        add.resize(static_cast<std::size_t>(n) * n);
        neg.resize(n);
        std::vector<std::vector<std::int64_t>> coords(n);
        for (std::int64_t r = 0; r < n; ++r)
            coords[r] = g.element_at(r).coords;
        const auto& factors = g.invariant_factors();
        for (std::int64_t h = 0; h < n; ++h) {
            for (std::int64_t x = 0; x < n; ++x) {
                std::int64_t rank = 0;
                for (std::size_t i = 0; i < factors.size(); ++i) {
                    std::int64_t d = coords[h][i] + coords[x][i];
                    if (d >= factors[i])
                        d -= factors[i];
                    rank = rank * factors[i] + d;
                }
                add[static_cast<std::size_t>(h) * n + x] = static_cast<std::int32_t>(rank);
            }
            std::int64_t rank = 0;
            for (std::size_t i = 0; i < factors.size(); ++i)
                rank = rank * factors[i] + (coords[h][i] ? factors[i] - coords[h][i] : 0);
            neg[h] = static_cast<std::int32_t>(rank);
        }

        rows.resize(n + 1);
        caps_rows.resize(n + 1);
        if (mode == Mode::Eta)
            union_rows.resize(n + 1);
        root_state.assign(block_words, 0);
        counts.assign(n, 0);
        best_counts.assign(n, 0);
    }

    static bool test_bit(const std::uint64_t* w, std::int64_t r) {
        return (w[r >> 6] >> (r & 63)) & 1;
    }
    static void set_bit(std::uint64_t* w, std::int64_t r) {
        w[r >> 6] |= std::uint64_t{1} << (r & 63);
    }

    // dst = src with one copy of element h pushed.
    void push_into(std::uint64_t* dst, const std::uint64_t* src, std::int64_t h) const {
        const std::int32_t* addh = &add[static_cast<std::size_t>(h) * n];
        std::memcpy(dst, src, static_cast<std::size_t>(block_words) * 8);
        if (mode == Mode::D) {
            for (int w = 0; w < words; ++w) {
                std::uint64_t m = src[w];
                while (m) {
                    const int b = __builtin_ctzll(m);
                    m &= m - 1;
                    set_bit(dst, addh[(static_cast<std::int64_t>(w) << 6) | b]);
                }
            }
            set_bit(dst, h);
            return;
        }
        for (int layer = layers; layer >= 2; --layer) {
            const std::uint64_t* s = src + static_cast<std::size_t>(layer - 2) * words;
            std::uint64_t* d = dst + static_cast<std::size_t>(layer - 1) * words;
            for (int w = 0; w < words; ++w) {
                std::uint64_t m = s[w];
                while (m) {
                    const int b = __builtin_ctzll(m);
                    m &= m - 1;
                    set_bit(d, addh[(static_cast<std::int64_t>(w) << 6) | b]);
                }
            }
        }
        set_bit(dst, h);  // layer 1 gains {h}
    }

    // Largest q such that pushing q copies of h onto `state` keeps the
    // defining property alive, assuming nothing else is added. Exact, and
    // monotone under state growth, so it doubles as an optimistic per-element
    // bound for the whole subtree.
    int element_cap(const std::uint64_t* state, std::int64_t h, int room,
                    const std::uint64_t* unions) const {
        std::int64_t x = h;  // i * h
        for (int i = 1; i <= room; ++i) {
            const std::int64_t y = neg[x];
            bool hit = false;
            switch (mode) {
                case Mode::D:
                    hit = (x == 0) || test_bit(state, y);
                    break;
                case Mode::S: {
                    const int k = exponent - i;
                    if (k < 0)
                        break;
                    hit = (k == 0) ? (y == 0)
                                   : test_bit(state + static_cast<std::size_t>(k - 1) * words, y);
                    break;
                }
                case Mode::Eta: {
                    const int k = exponent - i;
                    if (k < 0)
                        break;
                    hit = (k == 0) ? (y == 0)
                                   : test_bit(unions + static_cast<std::size_t>(k) * words, y);
                    break;
                }
            }
            if (hit)
                return i - 1;
            x = add[static_cast<std::size_t>(h) * n + x];
        }
        return room;
    }

    void tick() {
        ++nodes;
        if (nodes > budget.max_nodes)
            throw_budget("node budget exhausted");
        if ((nodes & 2047) == 0 && since(start) > budget.max_time)
            throw_budget("time budget exhausted");
    }

    [[noreturn]] void throw_budget(const std::string& why) {
        throw BudgetExhausted(why, make_result(true));
    }

    InvariantResult make_result(bool partial) const {
        InvariantResult res;
        res.group = g;
        res.kind = mode == Mode::D ? Invariant::davenport
                                   : (mode == Mode::Eta ? Invariant::eta : Invariant::egz);
        res.m = 1;
        res.value = std::max<std::int64_t>(best, 0) + 1;
        res.nodes_explored = nodes;
        res.elapsed = since(start);
        const auto& src = partial && best < 0 ? counts : best_counts;
        for (std::int64_t r = 0; r < n; ++r)
            for (std::int32_t c = 0; c < src[r]; ++c)
                res.certificate.push_back(g.element_at(r));
        return res;
    }

    void run() {
        recurse(0, root_state.data(), 0, 0);
        (void)since(start);
    }

    void recurse(std::int64_t pos, const std::uint64_t* state, std::int64_t size, int depth) {
        tick();
        if (size > best) {
            best = size;
            best_counts = counts;
            if (best == hard_cap)
                done = true;
        }
        if (done || pos >= n)
            return;

        const std::uint64_t* unions = nullptr;
        if (mode == Mode::Eta) {
            // Prefix unions U[k] = layers 0..k, used by the eta cap test.
            auto& u = union_rows[depth];
            u.assign(static_cast<std::size_t>(layers) * words, 0);
            std::uint64_t* base = u.data();
            if (layers >= 2) {
                std::uint64_t* u1 = base + words;
                std::copy(state, state + words, u1);
                u1[0] |= 1;  // layer 0: the identity
                for (int k = 2; k < layers; ++k) {
                    std::uint64_t* uk = base + static_cast<std::size_t>(k) * words;
                    const std::uint64_t* prev = base + static_cast<std::size_t>(k - 1) * words;
                    const std::uint64_t* lay = state + static_cast<std::size_t>(k - 1) * words;
                    for (int w = 0; w < words; ++w)
                        uk[w] = prev[w] | lay[w];
                }
            }
            unions = base;
        }

        auto& caps = caps_rows[depth];
        caps.assign(n, 0);
        std::int64_t total = 0;
        std::int64_t first = -1;
        const int base_room = static_cast<int>(std::min<std::int64_t>(mult_cap, hard_cap - size));
        for (std::int64_t h = pos; h < n; ++h) {
            int room = base_room;
            // Translating an exp-length-free multiset by any element preserves
            // the property, so the search may assume the identity carries a
            // maximal multiplicity. Only applies once counts[0] is committed.
            if (mode == Mode::S && h > 0 && pos > 0)
                room = std::min(room, static_cast<int>(counts[0]));
            const int c = room > 0 ? element_cap(state, h, room, unions) : 0;
            caps[h] = c;
            total += c;
            if (c > 0 && first < 0)
                first = h;
        }
        if (first < 0 || size + total <= best)
            return;

        const int c = caps[first];
        auto& row = rows[depth];
        row.resize(static_cast<std::size_t>(mult_cap) * block_words);
        const std::uint64_t* prev = state;
        for (int q = 1; q <= c; ++q) {
            std::uint64_t* blk = row.data() + static_cast<std::size_t>(q - 1) * block_words;
            push_into(blk, prev, first);
            prev = blk;
        }
        const std::int64_t rest = total - c;
        for (int q = c; q >= 0; --q) {
            if (size + q + rest <= best)
                break;
            counts[first] = q;
            const std::uint64_t* child =
                q == 0 ? state : row.data() + static_cast<std::size_t>(q - 1) * block_words;
            recurse(first + 1, child, size + q, depth + 1);
            counts[first] = 0;
            if (done)
                return;
        }
    }
};

InvariantResult run_search(const GroupDescriptor& g, Mode mode, const Budget& budget) {
    if (g.order() > kMaxExactOrder)
        throw std::invalid_argument("group too large for exhaustive search (order > 256)");
    Searcher s(g, mode, budget);
    s.run();
    return s.make_result(false);
}

// ---------------------------------------------------------------------------
// Disjoint zero-sum decompositions and the m-th Davenport constant.

struct SupportEntry {
    std::int64_t rank;
    int count;
};

struct DisjointCtx {
    const GroupDescriptor& g;
    std::vector<GroupElement> elems;           // one per support entry
    std::unordered_map<std::string, bool> failed;  // memo of refuted (counts, m) states

    explicit DisjointCtx(const GroupDescriptor& group) : g(group) {}

    std::string key(const std::vector<int>& counts, int m) const {
        std::string k;
        k.reserve(2 * counts.size() + 2);
        for (int c : counts) {
            k.push_back(static_cast<char>(c & 0xff));
            k.push_back(static_cast<char>((c >> 8) & 0xff));
        }
        k.push_back(static_cast<char>(m & 0xff));
        k.push_back(static_cast<char>((m >> 8) & 0xff));
        return k;
    }

    // Does `counts` contain m disjoint non-empty zero-sum sub-multisets?
    // On success appends the m chosen sub-multisets to `picks`.
    bool search(std::vector<int>& counts, int m, std::vector<std::vector<int>>* picks) {
        if (m == 0)
            return true;
        const std::string k = key(counts, m);
        if (failed.contains(k))
            return false;
        std::vector<int> chosen(counts.size(), 0);
        if (pick_zero_sum(counts, chosen, 0, g.identity(), true, m, picks))
            return true;
        failed.emplace(std::move(k), true);
        return false;
    }

    // Enumerates non-empty zero-sum sub-multisets `chosen` of `counts`,
    // recursing on the remainder once one is complete.
    bool pick_zero_sum(std::vector<int>& counts, std::vector<int>& chosen, std::size_t at,
                       GroupElement sum, bool empty, int m, std::vector<std::vector<int>>* picks) {
        if (at == counts.size()) {
            if (empty || !sum.is_identity())
                return false;
            for (std::size_t i = 0; i < counts.size(); ++i)
                counts[i] -= chosen[i];
            const bool ok = search(counts, m - 1, picks);
            for (std::size_t i = 0; i < counts.size(); ++i)
                counts[i] += chosen[i];
            if (ok && picks)
                picks->push_back(chosen);
            return ok;
        }
        GroupElement acc = sum;
        for (int t = 0; t <= counts[at]; ++t) {
            chosen[at] = t;
            if (pick_zero_sum(counts, chosen, at + 1, acc, empty && t == 0, m, picks))
                return true;
            acc = g.add(acc, elems[at]);
        }
        chosen[at] = 0;
        return false;
    }
};

struct SupportSeq {
    std::vector<SupportEntry> entries;
    std::vector<std::vector<int>> indices;  // original positions per entry
};

SupportSeq build_support(const ZSequence& s, const GroupDescriptor& g) {
    SupportSeq out;
    std::unordered_map<std::int64_t, std::size_t> where;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const std::int64_t r = g.rank_of(s[i]);
        auto it = where.find(r);
        if (it == where.end()) {
            where.emplace(r, out.entries.size());
            out.entries.push_back({r, 1});
            out.indices.push_back({static_cast<int>(i)});
        } else {
            out.entries[it->second].count++;
            out.indices[it->second].push_back(static_cast<int>(i));
        }
    }
    return out;
}

std::optional<std::vector<std::vector<int>>> disjoint_decomposition(const ZSequence& s,
                                                                    const GroupDescriptor& g,
                                                                    int m) {
    if (m < 1)
        throw std::invalid_argument("m must be >= 1");
    SupportSeq sup = build_support(s, g);
    DisjointCtx ctx(g);
    std::vector<int> counts;
    for (const auto& e : sup.entries) {
        ctx.elems.push_back(g.element_at(e.rank));
        counts.push_back(e.count);
    }
    std::vector<std::vector<int>> picks;
    if (!ctx.search(counts, m, &picks))
        return std::nullopt;
    // picks are appended innermost-first; order does not matter.
    std::vector<std::vector<int>> parts;
    std::vector<std::size_t> used(sup.entries.size(), 0);
    for (const auto& pick : picks) {
        std::vector<int> part;
        for (std::size_t e = 0; e < pick.size(); ++e)
            for (int t = 0; t < pick[e]; ++t)
                part.push_back(sup.indices[e][used[e]++]);
        std::sort(part.begin(), part.end());
        parts.push_back(std::move(part));
    }
    return parts;
}

struct DmSearcher {
    const GroupDescriptor& g;
    int m;
    Budget budget;
    std::int64_t n;
    std::int64_t hard_cap;
    int mult_cap;

    DisjointCtx ctx;
    std::vector<int> counts;
    std::vector<int> best_counts;
    std::int64_t best = -1;
    bool done = false;
    std::uint64_t nodes = 0;
    Clock::time_point start = Clock::now();

    DmSearcher(const GroupDescriptor& group, int mm, const Budget& b)
        : g(group), m(mm), budget(b), ctx(group) {
        n = g.order();
        // D_m(G) <= exp(G)(m-1) + eta(G) and eta(G) <= |G|.
        hard_cap = g.exponent() * (m - 1) + n - 1;
        mult_cap = static_cast<int>(std::min<std::int64_t>(hard_cap, g.exponent() * m - 1));
        for (std::int64_t r = 0; r < n; ++r)
            ctx.elems.push_back(g.element_at(r));
        counts.assign(n, 0);
        best_counts.assign(n, 0);
    }

    bool blocked(std::vector<int>& c) { return ctx.search(c, m, nullptr); }

    void tick() {
        ++nodes;
        if (nodes > budget.max_nodes)
            throw_budget("node budget exhausted");
        if ((nodes & 255) == 0 && since(start) > budget.max_time)
            throw_budget("time budget exhausted");
    }

    [[noreturn]] void throw_budget(const std::string& why) {
        throw BudgetExhausted(why, make_result());
    }

    InvariantResult make_result() const {
        InvariantResult res;
        res.group = g;
        res.kind = Invariant::disjoint;
        res.m = m;
        res.value = std::max<std::int64_t>(best, 0) + 1;
        res.nodes_explored = nodes;
        res.elapsed = since(start);
        for (std::int64_t r = 0; r < n; ++r)
            for (int c = 0; c < best_counts[r]; ++c)
                res.certificate.push_back(g.element_at(r));
        return res;
    }

    int element_cap(std::int64_t h, int room) {
        int q = 0;
        while (q < room) {
            counts[h]++;
            const bool dead = blocked(counts);
            counts[h]--;
            if (dead)
                break;
            ++q;
            counts[h]++;  // keep pushed for the next probe
        }
        // restore
        counts[h] -= q;
        return q;
    }

    void run() { recurse(0, 0); }

    void recurse(std::int64_t pos, std::int64_t size) {
        tick();
        if (size > best) {
            best = size;
            best_counts = counts;
            if (best == hard_cap)
                done = true;
        }
        if (done || pos >= n)
            return;
        std::vector<int> caps(n - pos, 0);
        std::int64_t total = 0;
        std::int64_t first = -1;
        const int base_room = static_cast<int>(std::min<std::int64_t>(mult_cap, hard_cap - size));
        for (std::int64_t h = pos; h < n; ++h) {
            const int c = base_room > 0 ? element_cap(h, base_room) : 0;
            caps[h - pos] = c;
            total += c;
            if (c > 0 && first < 0)
                first = h;
        }
        if (first < 0 || size + total <= best)
            return;
        const int c = caps[first - pos];
        const std::int64_t rest = total - c;
        for (int q = c; q >= 0; --q) {
            if (size + q + rest <= best)
                break;
            counts[first] = q;
            recurse(first + 1, size + q);
            if (done) {
                counts[first] = 0;
                return;
            }
        }
        counts[first] = 0;
    }
};

}  // namespace

std::string invariant_name(Invariant kind) {
    switch (kind) {
        case Invariant::davenport: return "D";
        case Invariant::eta: return "eta";
        case Invariant::egz: return "s";
        case Invariant::disjoint: return "Dm";
    }
    return "?";
}

std::optional<Invariant> invariant_from_name(std::string_view name) {
    if (name == "D" || name == "d") return Invariant::davenport;
    if (name == "eta") return Invariant::eta;
    if (name == "s" || name == "S") return Invariant::egz;
    if (name == "Dm" || name == "dm" || name == "DM") return Invariant::disjoint;
    return std::nullopt;
}

InvariantResult exact_davenport(const GroupDescriptor& g, const Budget& budget) {
    return run_search(g, Mode::D, budget);
}

InvariantResult exact_eta(const GroupDescriptor& g, const Budget& budget) {
    return run_search(g, Mode::Eta, budget);
}

InvariantResult exact_s(const GroupDescriptor& g, const Budget& budget) {
    return run_search(g, Mode::S, budget);
}

InvariantResult exact_dm(const GroupDescriptor& g, int m, const Budget& budget) {
    if (m < 1)
        throw std::invalid_argument("m must be >= 1");
    if (g.order() > kMaxExactOrder)
        throw std::invalid_argument("group too large for exhaustive search (order > 256)");
    DmSearcher s(g, m, budget);
    s.run();
    return s.make_result();
}

InvariantResult exact_invariant(const GroupDescriptor& g, Invariant kind, int m,
                                const Budget& budget) {
    switch (kind) {
        case Invariant::davenport: return exact_davenport(g, budget);
        case Invariant::eta: return exact_eta(g, budget);
        case Invariant::egz: return exact_s(g, budget);
        case Invariant::disjoint: return exact_dm(g, m, budget);
    }
    throw std::invalid_argument("unknown invariant");
}

bool is_zero_sum_free(const ZSequence& s, const GroupDescriptor& g) {
    ReachState rs = ReachState::unstratified(g, /*record_witnesses=*/false);
    for (const GroupElement& e : s.elements) {
        rs.push(e);
        if (rs.identity_reachable(1, 1))
            return false;
    }
    return true;
}

bool is_eta_free(const ZSequence& s, const GroupDescriptor& g) {
    const int hi = static_cast<int>(std::min<std::int64_t>(g.exponent(), s.size()));
    if (hi < 1)
        return true;
    ReachState rs(g, hi, /*record_witnesses=*/false);
    for (const GroupElement& e : s.elements) {
        rs.push(e);
        if (rs.identity_reachable(1, hi))
            return false;
    }
    return true;
}

bool is_egz_free(const ZSequence& s, const GroupDescriptor& g) {
    const std::int64_t target = g.exponent();
    if (static_cast<std::int64_t>(s.size()) < target)
        return true;
    ReachState rs(g, static_cast<int>(target), /*record_witnesses=*/false);
    for (const GroupElement& e : s.elements)
        rs.push(e);
    return !rs.identity_reachable(static_cast<int>(target), static_cast<int>(target));
}

bool has_m_disjoint_zero_sums(const ZSequence& s, const GroupDescriptor& g, int m) {
    if (m < 1)
        throw std::invalid_argument("m must be >= 1");
    SupportSeq sup = build_support(s, g);
    DisjointCtx ctx(g);
    std::vector<int> counts;
    for (const auto& e : sup.entries) {
        ctx.elems.push_back(g.element_at(e.rank));
        counts.push_back(e.count);
    }
    return ctx.search(counts, m, nullptr);
}

std::optional<std::vector<std::vector<int>>> find_m_disjoint_zero_sums(const ZSequence& s,
                                                                       const GroupDescriptor& g,
                                                                       int m) {
    return disjoint_decomposition(s, g, m);
}

bool certificate_is_extremal(const InvariantResult& result) {
    if (static_cast<std::int64_t>(result.certificate.size()) != result.value - 1)
        return false;
    switch (result.kind) {
        case Invariant::davenport: return is_zero_sum_free(result.certificate, result.group);
        case Invariant::eta: return is_eta_free(result.certificate, result.group);
        case Invariant::egz: return is_egz_free(result.certificate, result.group);
        case Invariant::disjoint:
            return !has_m_disjoint_zero_sums(result.certificate, result.group, result.m);
    }
    return false;
}

}  // namespace zerosum
