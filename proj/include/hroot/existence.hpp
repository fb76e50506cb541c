#pragma once

// Existence of H-selfadjoint m-th roots, decided from the canonical form:
// reorderings of the Segre characteristic at zero into m-tuples, sign
// bookkeeping for the nilpotent part, and pairing of negative-eigenvalue
// blocks when m is even.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hroot/descriptor.hpp"
#include "hroot/linalg.hpp"

namespace hroot {

/// m-tuples of block sizes (trailing zeros included). Each tuple is
/// non-increasing with first minus last at most one; tuples are stored in
/// descending lexicographic order.
struct SegreGrouping {
    std::vector<std::vector<int>> tuples;

    int p() const { return static_cast<int>(tuples.size()); }
    bool operator==(const SegreGrouping&) const = default;
};

/// Sum of the entries of each tuple: the sizes of the nilpotent root blocks.
std::vector<int> root_sizes(const SegreGrouping& g);

struct SignTally {
    /// Block size -> required number of +1 signs.
    std::map<int, int> required_positive;
    std::vector<int> etas;
};

enum class Property { Reordering, Signs, NegativePairing };

/// "P1-reordering", "P2-signs", "P3-negative-pairing".
std::string property_id(Property p);

struct Refusal {
    Property property = Property::Reordering;
    std::string witness;
};

/// Root eigenvalue chosen for a block with nonzero eigenvalue.
struct RootChoice {
    std::size_t block = 0;
    Complex mu{0.0, 0.0};
};

struct Certificate {
    SegreGrouping zero_grouping;
    std::vector<int> etas;
    std::vector<int> zero_root_sizes;
    /// Descriptor indices (plus-signed block, minus-signed block).
    std::vector<std::pair<std::size_t, std::size_t>> negative_pairing;
    std::vector<RootChoice> root_eigenvalues;
};

struct DecisionReport {
    bool exists = false;
    std::optional<Certificate> certificate;
    std::optional<Refusal> refusal;
};

/// All groupings of the given sizes into m-tuples, each exactly once, sorted
/// lexicographically (smallest first). Requires m >= 1.
std::vector<SegreGrouping> enumerate_groupings(const SegreCharacteristic& s, int m);

/// Requires etas.size() == g.p().
SignTally required_positive_counts(const SegreGrouping& g, const std::vector<int>& etas);

struct ZeroWitness {
    SegreGrouping grouping;
    std::vector<int> etas;
};

/// First grouping (in enumeration order) admitting a sign vector whose tally
/// equals `positive`; the lexicographically largest such sign vector is used.
std::variant<ZeroWitness, Refusal> decide_zero(const SegreCharacteristic& s,
                                               const std::map<int, int>& positive, int m);

/// Refusal when the block count is not divisible by m and no block has size 1.
std::optional<Refusal> quick_refusal_corollary(const SegreCharacteristic& s, int m);

struct NegativeBlock {
    std::size_t index = 0;
    double eigenvalue = -1.0;
    int size = 1;
    int sign = 1;
};

struct NegativeOutcome {
    bool ok = true;
    std::vector<std::pair<std::size_t, std::size_t>> pairing;
    std::optional<Refusal> refusal;
};

/// Odd m is always feasible with an empty pairing. Even m requires equal
/// +1 and -1 counts for every (eigenvalue, size); blocks are paired in order.
NegativeOutcome decide_negative(const std::vector<NegativeBlock>& blocks, int m, double tol = kDefaultTol);

/// Throws InvalidInput for an invalid descriptor or m < 1.
DecisionReport decide(const Descriptor& d, int m, double tol = kDefaultTol);

/// m-th root branch: positive real for lambda > 0, real for lambda < 0 and
/// odd m, principal otherwise.
Complex root_branch(Complex lambda, int m, double tol = kDefaultTol);

}  // namespace hroot
