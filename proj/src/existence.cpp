#include "hroot/existence.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>

#include "hroot/errors.hpp"

namespace hroot {

namespace {

std::string join(const std::vector<int>& v) {
    std::ostringstream s;
    s << '(';
    for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
    s << ')';
    return s.str();
}

std::string describe(const std::map<int, int>& counts) {
    std::ostringstream s;
    s << '{';
    bool first = true;
    for (const auto& [size, count] : counts) {
        s << (first ? "" : ", ") << size << ":" << count;
        first = false;
    }
    s << '}';
    return s.str();
}

std::vector<int> tuple_of(int top, int r, int m) {
    std::vector<int> t(static_cast<std::size_t>(m), top - 1);
    std::fill(t.begin(), t.begin() + r, top);
    return t;
}

void expand(std::vector<int>& cnt, int m, std::vector<std::vector<int>>& acc, std::vector<SegreGrouping>& out) {
    int top = static_cast<int>(cnt.size()) - 1;
    while (top > 0 && cnt[top] == 0) --top;
    if (top == 0) {
        SegreGrouping g{acc};
        std::sort(g.tuples.begin(), g.tuples.end(), std::greater<>());
        out.push_back(std::move(g));
        return;
    }
    const int available_below = top >= 2 ? cnt[top - 1] : INT_MAX;
    const int c = cnt[top];
    std::vector<int> parts;
    // Partitions of the blocks of size `top` into tuples with r of them each;
    // a tuple with r entries equal to top takes m - r blocks of size top - 1.
    std::function<void(int, int, int)> partition = [&](int remaining, int max_part, int used_below) {
        if (remaining == 0) {
            cnt[top] = 0;
            if (top >= 2) cnt[top - 1] -= used_below;
            for (int r : parts) acc.push_back(tuple_of(top, r, m));
            expand(cnt, m, acc, out);
            acc.resize(acc.size() - parts.size());
            if (top >= 2) cnt[top - 1] += used_below;
            cnt[top] = c;
            return;
        }
        for (int r = std::min(max_part, remaining); r >= 1; --r) {
            const int need = m - r;
            if (top >= 2 && used_below + need > available_below) continue;
            parts.push_back(r);
            partition(remaining - r, r, used_below + need);
            parts.pop_back();
        }
    };
    partition(c, m, 0);
}

std::map<int, int> tuple_multiplicities(const std::vector<int>& tuple) {
    std::map<int, int> b;
    for (int v : tuple)
        if (v > 0) ++b[v];
    return b;
}

int positive_share(int count, int eta) { return count % 2 == 0 ? count / 2 : (count + eta) / 2; }

// Lexicographically largest sign vector whose tally equals `target`, if any.
std::optional<std::vector<int>> find_etas(const SegreGrouping& g, const std::map<int, int>& target) {
    std::vector<int> sizes;
    for (const auto& t : g.tuples)
        for (int v : t)
            if (v > 0) sizes.push_back(v);
    for (const auto& [size, count] : target)
        if (count != 0) sizes.push_back(size);
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    auto slot = [&](int size) {
        return static_cast<std::size_t>(std::lower_bound(sizes.begin(), sizes.end(), size) - sizes.begin());
    };

    const int p = g.p();
    // contrib[k][0] for eta = +1, contrib[k][1] for eta = -1.
    std::vector<std::array<std::vector<int>, 2>> contrib(static_cast<std::size_t>(p));
    for (int k = 0; k < p; ++k) {
        for (int e = 0; e < 2; ++e) {
            auto& c = contrib[k][e];
            c.assign(sizes.size(), 0);
            for (const auto& [size, count] : tuple_multiplicities(g.tuples[k]))
                c[slot(size)] = positive_share(count, e == 0 ? 1 : -1);
        }
    }
    std::vector<int> remaining(sizes.size(), 0);
    for (const auto& [size, count] : target)
        if (count != 0) remaining[slot(size)] = count;

    std::map<std::pair<int, std::vector<int>>, bool> memo;
    std::function<bool(int, const std::vector<int>&)> feasible = [&](int k, const std::vector<int>& rem) {
        if (std::any_of(rem.begin(), rem.end(), [](int x) { return x < 0; })) return false;
        if (k == p) return std::all_of(rem.begin(), rem.end(), [](int x) { return x == 0; });
        auto key = std::make_pair(k, rem);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        bool ok = false;
        for (int e = 0; e < 2 && !ok; ++e) {
            std::vector<int> next = rem;
            for (std::size_t i = 0; i < next.size(); ++i) next[i] -= contrib[k][e][i];
            ok = feasible(k + 1, next);
        }
        memo.emplace(std::move(key), ok);
        return ok;
    };

    if (!feasible(0, remaining)) return std::nullopt;
    std::vector<int> etas;
    for (int k = 0; k < p; ++k) {
        for (int e = 0; e < 2; ++e) {
            std::vector<int> next = remaining;
            for (std::size_t i = 0; i < next.size(); ++i) next[i] -= contrib[k][e][i];
            if (feasible(k + 1, next)) {
                etas.push_back(e == 0 ? 1 : -1);
                remaining = std::move(next);
                break;
            }
        }
    }
    return etas;
}

}  // namespace

std::vector<int> root_sizes(const SegreGrouping& g) {
    std::vector<int> out;
    for (const auto& t : g.tuples) out.push_back(std::accumulate(t.begin(), t.end(), 0));
    return out;
}

std::string property_id(Property p) {
    switch (p) {
        case Property::Reordering: return "P1-reordering";
        case Property::Signs: return "P2-signs";
        case Property::NegativePairing: return "P3-negative-pairing";
    }
    return "unknown";
}

std::vector<SegreGrouping> enumerate_groupings(const SegreCharacteristic& s, int m) {
    if (m < 1) throw InvalidInput("m must be >= 1");
    std::vector<SegreGrouping> out;
    if (s.sizes.empty()) return out;
    const int largest = *std::max_element(s.sizes.begin(), s.sizes.end());
    std::vector<int> cnt(static_cast<std::size_t>(largest) + 1, 0);
    for (int v : s.sizes) {
        if (v < 1) throw InvalidInput("Segre sizes must be positive");
        ++cnt[v];
    }
    std::vector<std::vector<int>> acc;
    expand(cnt, m, acc, out);
    std::sort(out.begin(), out.end(),
              [](const SegreGrouping& a, const SegreGrouping& b) { return a.tuples < b.tuples; });
    return out;
}

SignTally required_positive_counts(const SegreGrouping& g, const std::vector<int>& etas) {
    if (static_cast<int>(etas.size()) != g.p()) throw InvalidInput("one sign is needed per tuple");
    SignTally out;
    out.etas = etas;
    for (int k = 0; k < g.p(); ++k)
        for (const auto& [size, count] : tuple_multiplicities(g.tuples[k]))
            out.required_positive[size] += positive_share(count, etas[k]);
    return out;
}

std::variant<ZeroWitness, Refusal> decide_zero(const SegreCharacteristic& s, const std::map<int, int>& positive,
                                               int m) {
    if (s.sizes.empty()) return ZeroWitness{};
    const auto groupings = enumerate_groupings(s, m);
    if (groupings.empty())
        return Refusal{Property::Reordering,
                       "Segre characteristic " + join(s.sizes) + " at 0 has no reordering into " +
                           std::to_string(m) + "-tuples"};
    for (const auto& g : groupings)
        if (auto etas = find_etas(g, positive)) return ZeroWitness{g, *etas};
    return Refusal{Property::Signs, "none of the " + std::to_string(groupings.size()) + " reorderings of " +
                                        join(s.sizes) + " yields positive block counts " + describe(positive)};
}

std::optional<Refusal> quick_refusal_corollary(const SegreCharacteristic& s, int m) {
    if (s.sizes.empty() || m < 1) return std::nullopt;
    const bool has_one = std::find(s.sizes.begin(), s.sizes.end(), 1) != s.sizes.end();
    if (s.sizes.size() % static_cast<std::size_t>(m) != 0 && !has_one)
        return Refusal{Property::Reordering, std::to_string(s.sizes.size()) + " blocks at 0, not a multiple of " +
                                                 std::to_string(m) + ", and none of size 1"};
    return std::nullopt;
}

NegativeOutcome decide_negative(const std::vector<NegativeBlock>& blocks, int m, double tol) {
    NegativeOutcome out;
    if (m % 2 == 1) return out;
    std::vector<bool> used(blocks.size(), false);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (used[i]) continue;
        std::vector<std::size_t> plus;
        std::vector<std::size_t> minus;
        for (std::size_t j = i; j < blocks.size(); ++j) {
            if (used[j] || blocks[j].size != blocks[i].size ||
                std::abs(blocks[j].eigenvalue - blocks[i].eigenvalue) > tol)
                continue;
            used[j] = true;
            (blocks[j].sign > 0 ? plus : minus).push_back(j);
        }
        if (plus.size() != minus.size()) {
            std::ostringstream w;
            w << "eigenvalue " << blocks[i].eigenvalue << ", size " << blocks[i].size << ": " << plus.size()
              << " block(s) with sign +1 but " << minus.size() << " with sign -1";
            return {false, {}, Refusal{Property::NegativePairing, w.str()}};
        }
        for (std::size_t k = 0; k < plus.size(); ++k)
            out.pairing.emplace_back(blocks[plus[k]].index, blocks[minus[k]].index);
    }
    std::sort(out.pairing.begin(), out.pairing.end());
    return out;
}

Complex root_branch(Complex lambda, int m, double tol) {
    if (m < 1) throw InvalidInput("m must be >= 1");
    const double inv = 1.0 / m;
    switch (classify(lambda, tol)) {
        case EigenClass::Zero: return {0.0, 0.0};
        case EigenClass::Positive: return {std::pow(lambda.real(), inv), 0.0};
        case EigenClass::Negative:
            if (m % 2 == 1) return {-std::pow(-lambda.real(), inv), 0.0};
            return std::polar(std::pow(-lambda.real(), inv), std::numbers::pi * inv);
        case EigenClass::Nonreal: break;
    }
    return std::polar(std::pow(std::abs(lambda), inv), std::arg(lambda) * inv);
}

DecisionReport decide(const Descriptor& d, int m, double tol) {
    require_valid(d);
    if (m < 1) throw InvalidInput("m must be >= 1");

    SegreCharacteristic zero;
    std::vector<std::pair<int, int>> zero_blocks;
    std::map<int, int> positive;
    std::vector<NegativeBlock> negative;
    Certificate cert;
    for (std::size_t i = 0; i < d.blocks.size(); ++i) {
        const Block& b = d.blocks[i];
        if (const auto* r = std::get_if<RealBlock>(&b)) {
            const auto cls = classify(r->eigenvalue, tol);
            if (cls == EigenClass::Zero) {
                zero.sizes.push_back(r->size);
                zero_blocks.emplace_back(r->size, r->sign);
                if (r->sign > 0) ++positive[r->size];
                continue;
            }
            if (cls == EigenClass::Negative) negative.push_back({i, r->eigenvalue, r->size, r->sign});
        }
        cert.root_eigenvalues.push_back({i, root_branch(block_eigenvalue(b), m, tol)});
    }
    std::sort(zero.sizes.begin(), zero.sizes.end(), std::greater<>());

    DecisionReport report;
    if (m == 1) {
        std::sort(zero_blocks.begin(), zero_blocks.end(), std::greater<>());
        for (const auto& [size, sign] : zero_blocks) {
            cert.zero_grouping.tuples.push_back({size});
            cert.etas.push_back(sign);
        }
        cert.zero_root_sizes = root_sizes(cert.zero_grouping);
        report.exists = true;
        report.certificate = std::move(cert);
        return report;
    }

    if (!zero.sizes.empty()) {
        if (auto refusal = quick_refusal_corollary(zero, m)) {
            report.refusal = std::move(refusal);
            return report;
        }
        auto outcome = decide_zero(zero, positive, m);
        if (auto* refusal = std::get_if<Refusal>(&outcome)) {
            report.refusal = std::move(*refusal);
            return report;
        }
        auto& witness = std::get<ZeroWitness>(outcome);
        cert.zero_grouping = std::move(witness.grouping);
        cert.etas = std::move(witness.etas);
        cert.zero_root_sizes = root_sizes(cert.zero_grouping);
    }

    auto neg = decide_negative(negative, m, tol);
    if (!neg.ok) {
        report.refusal = std::move(neg.refusal);
        return report;
    }
    cert.negative_pairing = std::move(neg.pairing);
    report.exists = true;
    report.certificate = std::move(cert);
    return report;
}

}  // namespace hroot
