#pragma once

// Reduction of a raw H-selfadjoint pair (B, H) to canonical form: Jordan
// structure, sign characteristic, and the transition matrix S with
// S^{-1} B S = J and S^* H S = H_B.

#include <vector>

#include "hroot/descriptor.hpp"
#include "hroot/linalg.hpp"

namespace hroot {

struct Inertia {
    int plus = 0;
    int minus = 0;
    int zero = 0;

    bool operator==(const Inertia&) const = default;
};

/// Eigenvalues > tol*||M|| count as positive, < -tol*||M|| as negative.
/// Throws InvalidInput when M is not Hermitian within tol.
Inertia inertia_of(const Matrix& m, double tol = kDefaultTol);

struct Eigenstructure {
    /// Sorted by (re, im); nonreal eigenvalues appear with their conjugates.
    std::vector<SegreCharacteristic> entries;
    double tol = kDefaultTol;
};

/// Clusters the spectrum of b and recovers the Segre characteristic of each
/// cluster from the rank staircase of (b - lambda I)^k.
/// Throws IllConditioned when the clustering or a rank decision is unstable.
Eigenstructure eigenstructure_of(const Matrix& b, double tol = kDefaultTol);

struct CanonicalizationResult {
    Descriptor descriptor;
    Matrix S;
    double r_J = 0.0;
    double r_H = 0.0;
};

/// Canonical form of (p.B, p.H). Descriptor blocks are ordered by eigenvalue
/// (re, im), then size descending, then sign +1 before -1.
/// Throws InvalidInput for a malformed pair and IllConditioned when the
/// reduction cannot reach the residual bound 1e3 * tol * n.
CanonicalizationResult canonicalize(const MatrixPair& p, double tol = kDefaultTol);

/// Copy of d in the deterministic block order used by canonicalize.
Descriptor normalized(const Descriptor& d);

/// Same multiset of blocks, eigenvalues compared within eig_tol.
bool same_canonical_form(const Descriptor& a, const Descriptor& b, double eig_tol);

}  // namespace hroot
