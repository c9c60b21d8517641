#include "zerosum/group.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace zerosum {

namespace {

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
    const __int128 l = static_cast<__int128>(a) / std::gcd(a, b) * b;
    if (l > INT64_MAX)
        throw std::overflow_error("invariant factor exceeds int64");
    return static_cast<std::int64_t>(l);
}

std::int64_t mod_reduce(std::int64_t v, std::int64_t n) {
    v %= n;
    return v < 0 ? v + n : v;
}

}  // namespace

GroupDescriptor::GroupDescriptor(std::vector<std::int64_t> invariant_factors)
    : factors_(std::move(invariant_factors)) {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (factors_[i] < 2)
            throw std::invalid_argument("invariant factors must be >= 2");
        if (i > 0 && factors_[i] % factors_[i - 1] != 0)
            throw std::invalid_argument("invariant factors must form a divisibility chain");
    }
}

GroupDescriptor canonicalize(std::vector<std::int64_t> moduli) {
    for (std::int64_t m : moduli) {
        if (m <= 0)
            throw std::invalid_argument("moduli must be positive");
    }
    std::erase(moduli, 1);
    // Repeated pairwise (a, b) -> (gcd, lcm) replacement; the product is
    // invariant under each step, so the group order is preserved exactly.
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < moduli.size(); ++i) {
            for (std::size_t j = i + 1; j < moduli.size(); ++j) {
                if (moduli[j] % moduli[i] == 0 || moduli[i] == 1)
                    continue;
                const std::int64_t g = std::gcd(moduli[i], moduli[j]);
                moduli[j] = checked_lcm(moduli[i], moduli[j]);
                moduli[i] = g;
                changed = true;
            }
        }
    }
    std::erase(moduli, 1);
    std::sort(moduli.begin(), moduli.end());
    return GroupDescriptor(std::move(moduli));
}

GroupDescriptor GroupDescriptor::parse(std::string_view literal) {
    std::vector<std::int64_t> moduli;
    std::size_t pos = 0;
    while (pos <= literal.size()) {
        std::size_t comma = literal.find(',', pos);
        if (comma == std::string_view::npos)
            comma = literal.size();
        std::string_view tok = literal.substr(pos, comma - pos);
        while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
        while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || p != tok.data() + tok.size())
            throw std::invalid_argument("bad group literal: '" + std::string(literal) + "'");
        moduli.push_back(v);
        pos = comma + 1;
        if (comma == literal.size())
            break;
    }
    return canonicalize(std::move(moduli));
}

std::int64_t GroupDescriptor::order() const {
    __int128 n = 1;
    for (std::int64_t f : factors_) {
        n *= f;
        if (n > INT64_MAX)
            throw std::overflow_error("group order exceeds int64");
    }
    return static_cast<std::int64_t>(n);
}

std::string GroupDescriptor::literal() const {
    if (factors_.empty())
        return "1";
    std::string out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(factors_[i]);
    }
    return out;
}

GroupElement GroupDescriptor::identity() const {
    return GroupElement{std::vector<std::int64_t>(factors_.size(), 0)};
}

GroupElement GroupDescriptor::element(std::vector<std::int64_t> coords) const {
    if (coords.size() != factors_.size())
        throw std::invalid_argument("element arity does not match group rank");
    for (std::size_t i = 0; i < coords.size(); ++i)
        coords[i] = mod_reduce(coords[i], factors_[i]);
    return GroupElement{std::move(coords)};
}

void GroupDescriptor::check_arity(const GroupElement& e) const {
    if (e.coords.size() != factors_.size())
        throw std::invalid_argument("element arity does not match group rank");
}

GroupElement GroupDescriptor::element_at(std::int64_t rank) const {
    if (rank < 0 || rank >= order())
        throw std::invalid_argument("element rank out of range");
    std::vector<std::int64_t> coords(factors_.size());
    for (std::size_t i = factors_.size(); i-- > 0;) {
        coords[i] = rank % factors_[i];
        rank /= factors_[i];
    }
    return GroupElement{std::move(coords)};
}

std::int64_t GroupDescriptor::rank_of(const GroupElement& e) const {
    check_arity(e);
    std::int64_t r = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i)
        r = r * factors_[i] + mod_reduce(e.coords[i], factors_[i]);
    return r;
}

GroupElement GroupDescriptor::add(const GroupElement& a, const GroupElement& b) const {
    check_arity(a);
    check_arity(b);
    std::vector<std::int64_t> coords(factors_.size());
    for (std::size_t i = 0; i < factors_.size(); ++i)
        coords[i] = mod_reduce(a.coords[i] + b.coords[i], factors_[i]);
    return GroupElement{std::move(coords)};
}

GroupElement GroupDescriptor::negate(const GroupElement& a) const {
    check_arity(a);
    std::vector<std::int64_t> coords(factors_.size());
    for (std::size_t i = 0; i < factors_.size(); ++i)
        coords[i] = mod_reduce(-a.coords[i], factors_[i]);
    return GroupElement{std::move(coords)};
}

GroupElement GroupDescriptor::scale(const GroupElement& a, std::int64_t k) const {
    check_arity(a);
    std::vector<std::int64_t> coords(factors_.size());
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        const __int128 v = static_cast<__int128>(mod_reduce(k, factors_[i])) * a.coords[i];
        coords[i] = static_cast<std::int64_t>(v % factors_[i]);
    }
    return GroupElement{std::move(coords)};
}

std::int64_t GroupDescriptor::element_order(const GroupElement& a) const {
    check_arity(a);
    std::int64_t ord = 1;
    for (std::size_t i = 0; i < factors_.size(); ++i)
        ord = checked_lcm(ord, factors_[i] / std::gcd(a.coords[i], factors_[i]));
    return ord;
}

bool GroupElement::is_identity() const {
    return std::all_of(coords.begin(), coords.end(), [](std::int64_t c) { return c == 0; });
}

std::string GroupElement::str() const {
    if (coords.empty())
        return "0";
    if (coords.size() == 1)
        return std::to_string(coords[0]);
    std::string out = "(";
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(coords[i]);
    }
    out += ')';
    return out;
}

std::string ZSequence::str() const {
    std::string out = "[";
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (i) out += ' ';
        out += elements[i].str();
    }
    out += ']';
    return out;
}

GroupElement sigma(const ZSequence& s, const GroupDescriptor& g) {
    GroupElement acc = g.identity();
    for (const GroupElement& e : s.elements)
        acc = g.add(acc, e);
    return acc;
}

ZSequence parse_sequence(std::istream& in, const GroupDescriptor& g) {
    ZSequence seq;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        std::size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos)
            continue;
        std::size_t end = line.find_last_not_of(" \t\r");
        std::string_view body(line.data() + begin, end - begin + 1);
        if (g.is_trivial()) {
            if (body != "0")
                throw std::invalid_argument("bad sequence line: '" + line + "'");
            seq.push_back(g.identity());
            continue;
        }
        std::vector<std::int64_t> coords;
        std::size_t pos = 0;
        while (pos <= body.size()) {
            std::size_t comma = body.find(',', pos);
            if (comma == std::string_view::npos)
                comma = body.size();
            std::string_view tok = body.substr(pos, comma - pos);
            while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
            while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t')) tok.remove_suffix(1);
            std::int64_t v = 0;
            auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc() || p != tok.data() + tok.size())
                throw std::invalid_argument("bad sequence line: '" + line + "'");
            coords.push_back(v);
            pos = comma + 1;
            if (comma == body.size())
                break;
        }
        seq.push_back(g.element(std::move(coords)));
    }
    return seq;
}

ZSequence parse_sequence(std::string_view text, const GroupDescriptor& g) {
    std::istringstream in{std::string(text)};
    return parse_sequence(in, g);
}

std::string format_sequence(const ZSequence& s) {
    std::string out;
    for (const GroupElement& e : s.elements) {
        if (e.coords.empty()) {
            out += "0\n";  // trivial group: a single zero coordinate line
            continue;
        }
        for (std::size_t i = 0; i < e.coords.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(e.coords[i]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace zerosum
