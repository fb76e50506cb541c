#pragma once

// Explicit H-selfadjoint m-th roots of canonical pairs, block by block, and
// their assembly and transport back to raw coordinates.

#include <optional>
#include <vector>

#include "hroot/canonical.hpp"
#include "hroot/descriptor.hpp"
#include "hroot/existence.hpp"
#include "hroot/linalg.hpp"

namespace hroot {

enum class PhiMode {
    /// Real eigenvalue and real root: phi_j(y) = y^* Q N^{n-j} y with y real.
    Sesquilinear,
    /// Nonreal eigenvalue: phi_j(y) = y^T Q N^{n-j} y.
    Bilinear,
};

/// Equations fixing the generator y of the Jordan basis
/// P = [N^{n-1} y, ..., N y, y] of N = J_n(mu)^m - mu^m I so that
/// P^T Q_n P (or P^* Q_n P) equals Q_n: phi_1 = 1 and phi_j = 0 for j >= 2.
class PhiSystem {
public:
    PhiSystem(int n, Complex mu, int m, PhiMode mode);

    int size() const { return n_; }
    PhiMode mode() const { return mode_; }
    const Matrix& shift() const { return shift_; }

    /// (phi_1, ..., phi_n).
    Vector evaluate(const Vector& y) const;

    /// Back-substitution: y_n from phi_1, then y_{n-j+1} from phi_j.
    Vector solve() const;

    /// [N^{n-1} y, ..., N y, y].
    Matrix chain_basis(const Vector& y) const;

private:
    int n_;
    PhiMode mode_;
    Complex coefficient_;
    Matrix shift_;
};

/// Requires lambda != 0 and mu^m = lambda. In sesquilinear mode mu must be real.
Vector solve_phi(Complex lambda, int n, Complex mu, int m, PhiMode mode);

/// One root block: P^{-1} root_jordan^m P equals the target Jordan block(s),
/// P^* H_root P equals the target H block, and A = P^{-1} root_jordan P.
struct BlockConstruction {
    Matrix root_jordan;
    Matrix root_H;
    Matrix P;
    Matrix A;
};

/// lambda > 0, or lambda < 0 with m odd. Target (J_n(lambda), sign Q_n).
BlockConstruction root_block_real(double lambda, int n, int sign, int m, double tol = kDefaultTol);

/// im(lambda) > 0. Target (J_n(lambda) + J_n(conj lambda), Q_{2n}).
BlockConstruction root_block_conjugate_pair(Complex lambda, int n, int m, double tol = kDefaultTol);

/// lambda < 0, m even. Target (J_n(lambda) + J_n(lambda), Q_n + (-Q_n)).
BlockConstruction root_block_negative_even(double lambda, int n, int m, double tol = kDefaultTol);

/// Chains of J_n(0)^m, indexed 0..m-1: chain j holds e_j, e_{j+m}, ...
/// partner[j] is the chain coupled with j by Q_n (j itself when self-paired,
/// -1 for empty chains).
struct ChainPairing {
    int a = 0;
    int r = 0;
    std::vector<int> length;
    std::vector<int> partner;
};

/// n = a m + r with 0 < r <= m.
ChainPairing chain_pairing(int n, int m);

struct NilpotentRoot {
    Matrix root_jordan;
    Matrix root_H;
    Matrix P;
    /// Induced canonical blocks of root_jordan^m, in column order.
    std::vector<RealBlock> blocks;
};

/// Root blocks J_{t_k}(0) with signs etas[k]. Without a target, chains keep
/// their original index order within each root block; with a target, column
/// groups are permuted to reproduce its (size, sign) sequence exactly.
/// Throws InvalidInput when the target does not match.
NilpotentRoot root_nilpotent(const std::vector<int>& t, const std::vector<int>& etas, int m,
                             const std::optional<std::vector<RealBlock>>& target = std::nullopt);

struct RootResult {
    int m = 1;
    Matrix A;
    Matrix P;
    Matrix root_jordan;
    Matrix root_H;
    double r_pow = 0.0;
    double r_sa = 0.0;
    /// Present for roots transported to raw coordinates.
    std::optional<Matrix> S;
};

/// Canonical form of (A, H_B) for the root described by `cert`: nilpotent
/// blocks (t_k, eta_k), one block per nonzero block of d with its chosen
/// root eigenvalue, and one conjugate pair per paired negative couple.
/// Returned in normalized order.
Descriptor root_descriptor(const Descriptor& d, const Certificate& cert);

/// ||A^m - B|| / ||B|| and ||HA - A^*H|| / (||H|| ||A||).
void compute_residuals(RootResult& r, const Matrix& b, const Matrix& h);

/// Root of realize(d). Requires report.exists and a report produced for d.
RootResult assemble_root(const Descriptor& d, int m, const DecisionReport& report, double tol = kDefaultTol);

/// A_raw = S A S^{-1}, residuals recomputed against the raw pair.
RootResult transport(const MatrixPair& raw, const CanonicalizationResult& canon, const RootResult& root);

}  // namespace hroot
