#pragma once

// Symbolic model of a canonical pair (J, H_B): Jordan blocks with their
// eigenvalues, sizes and signs, plus materialization into dense matrices.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hroot/linalg.hpp"

namespace hroot {

/// J_size(eigenvalue) paired with sign * Q_size.
struct RealBlock {
    double eigenvalue = 0.0;
    int size = 1;
    int sign = 1;

    bool operator==(const RealBlock&) const = default;
};

/// J_size(eigenvalue) + J_size(conj eigenvalue) paired with Q_{2 size}.
/// The eigenvalue must have a strictly positive imaginary part.
struct PairBlock {
    Complex eigenvalue{0.0, 1.0};
    int size = 1;

    bool operator==(const PairBlock&) const = default;
};

using Block = std::variant<RealBlock, PairBlock>;

struct Descriptor {
    std::vector<Block> blocks;

    /// Sum of block orders; a pair block of size k contributes 2k.
    int order() const;
    bool operator==(const Descriptor&) const = default;
};

int block_order(const Block& b);
Complex block_eigenvalue(const Block& b);

struct Violation {
    std::optional<std::size_t> block;
    std::string rule;
};

/// Empty result means the descriptor is valid.
std::vector<Violation> validate(const Descriptor& d);

/// Throws InvalidInput naming the first violation.
void require_valid(const Descriptor& d);

/// Dense H-selfadjoint pair (B, H).
struct MatrixPair {
    Matrix B;
    Matrix H;
};

/// Returns (J, H_B) in descriptor order.
MatrixPair realize(const Descriptor& d);

/// Non-increasing Jordan block sizes at one eigenvalue.
struct SegreCharacteristic {
    Complex eigenvalue{0.0, 0.0};
    std::vector<int> sizes;
};

/// Sizes of all blocks whose eigenvalue lies within tol of lambda0. A pair
/// block contributes its size at both lambda and conj(lambda).
SegreCharacteristic segre_at(const Descriptor& d, Complex lambda0, double tol = kDefaultTol);

struct ScrambledPair {
    MatrixPair pair;
    Matrix S;
};

/// (S^{-1} J S, S^* H_B S) with S = U * D, U a seeded random unitary and D
/// diagonal with entries in [1, conditioning]. conditioning == 1 gives S = I.
ScrambledPair scramble(const Descriptor& d, std::uint64_t seed, double conditioning);

enum class EigenClass { Zero, Negative, Positive, Nonreal };

/// Zero if |lambda| <= tol; real if |im| <= tol * (1 + |re|).
EigenClass classify(Complex lambda, double tol = kDefaultTol);

/// Checks the MatrixPair invariants (finite, square, Hermitian and invertible
/// H, HB = B^*H) and throws InvalidInput naming the violated one.
void require_selfadjoint_pair(const MatrixPair& p, double tol = kDefaultTol);

}  // namespace hroot
