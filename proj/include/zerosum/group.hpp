#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace zerosum {

struct GroupElement;
struct ZSequence;

// A finite abelian group in invariant-factor form C_{n1} + C_{n2} + ... + C_{nr}
// with 1 < n1 | n2 | ... | nr. The empty factor list denotes the trivial group.
//
// Elements are addressed either as coordinate vectors (GroupElement) or by
// their mixed-radix rank in [0, order()), where the first coordinate is the
// most significant digit. Rank order therefore coincides with lexicographic
// order on coordinates; it is the fixed total order used by every search.
class GroupDescriptor {
public:
    GroupDescriptor() = default;  // trivial group
    explicit GroupDescriptor(std::vector<std::int64_t> invariant_factors);

    // Parses "n1,n2,...,nr" and canonicalizes. "1" yields the trivial group.
    static GroupDescriptor parse(std::string_view literal);

    int rank() const { return static_cast<int>(factors_.size()); }
    bool is_trivial() const { return factors_.empty(); }
    std::int64_t order() const;     // product of factors; throws on int64 overflow
    std::int64_t exponent() const { return factors_.empty() ? 1 : factors_.back(); }
    const std::vector<std::int64_t>& invariant_factors() const { return factors_; }

    std::string literal() const;    // canonical "n1,n2,...,nr"; "1" for trivial

    GroupElement identity() const;
    // Builds an element from arbitrary integer coordinates, reducing each
    // modulo its factor (negative inputs allowed).
    GroupElement element(std::vector<std::int64_t> coords) const;
    GroupElement element_at(std::int64_t rank) const;
    std::int64_t rank_of(const GroupElement& e) const;

    GroupElement add(const GroupElement& a, const GroupElement& b) const;
    GroupElement negate(const GroupElement& a) const;
    GroupElement scale(const GroupElement& a, std::int64_t k) const;
    std::int64_t element_order(const GroupElement& a) const;

    bool operator==(const GroupDescriptor& other) const = default;

private:
    std::vector<std::int64_t> factors_;
    void check_arity(const GroupElement& e) const;
};

// Returns the invariant-factor form of C_{m1} + ... + C_{mk} for arbitrary
// moduli >= 1. Factors equal to 1 are dropped; the group order is preserved
// exactly. Throws std::invalid_argument for moduli <= 0 and
// std::overflow_error if an invariant factor would exceed int64.
GroupDescriptor canonicalize(std::vector<std::int64_t> moduli);

// A residue vector; always stored reduced.
struct GroupElement {
    std::vector<std::int64_t> coords;

    bool is_identity() const;
    bool operator==(const GroupElement&) const = default;
    auto operator<=>(const GroupElement&) const = default;  // == rank order
    std::string str() const;  // "(c1,c2,...)" or "0" for the trivial group
};

// A finite sequence over G in the multiset sense; the element order is
// presentation only. |S| may be zero.
struct ZSequence {
    std::vector<GroupElement> elements;

    ZSequence() = default;
    explicit ZSequence(std::vector<GroupElement> elems) : elements(std::move(elems)) {}

    std::size_t size() const { return elements.size(); }
    bool empty() const { return elements.empty(); }
    void push_back(GroupElement e) { elements.push_back(std::move(e)); }
    const GroupElement& operator[](std::size_t i) const { return elements[i]; }

    bool operator==(const ZSequence&) const = default;
    std::string str() const;
};

// Coordinatewise modular sum of S; the empty sequence sums to the identity.
GroupElement sigma(const ZSequence& s, const GroupDescriptor& g);

// Sequence file I/O: one element per line, coordinates comma-separated,
// '#' starts a comment, blank lines are skipped.
ZSequence parse_sequence(std::istream& in, const GroupDescriptor& g);
ZSequence parse_sequence(std::string_view text, const GroupDescriptor& g);
std::string format_sequence(const ZSequence& s);

}  // namespace zerosum
