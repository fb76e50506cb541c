#pragma once

// Residual checks for candidate roots and brute-force oracles for the
// existence conditions.

#include <map>
#include <vector>

#include "hroot/descriptor.hpp"
#include "hroot/existence.hpp"
#include "hroot/linalg.hpp"

namespace hroot {

struct ResidualReport {
    double r_pow = 0.0;
    double r_sa = 0.0;
    /// Transition residuals; zero unless a transition was checked.
    double r_simJ = 0.0;
    double r_simH = 0.0;
    bool pass = false;
};

/// r_pow = ||A^m - B|| / max(||B||, 1), r_sa = ||HA - A^*H|| / (||H|| ||A||).
/// Passes iff both are <= tol. Throws InvalidInput on dimension mismatch.
ResidualReport verify_root(const Matrix& a, const Matrix& b, const Matrix& h, int m, double tol);

/// Fills r_simJ = ||S^{-1} B S - J|| / ||B|| and r_simH = ||S^* H S - H_B|| / ||H||.
void check_transition(ResidualReport& report, const MatrixPair& raw, const MatrixPair& canonical, const Matrix& s);

/// Jordan sizes of J_n(0)^m by the division formula (non-increasing).
std::vector<int> power_structure_formula(int n, int m);

/// Jordan sizes of J_n(0)^m from ranks of its explicit powers.
std::vector<int> power_structure_ranks(int n, int m);

/// Both paths; throws Error if they disagree.
std::vector<int> power_structure(int n, int m);

/// Largest total order accepted by oracle_decide_nilpotent.
inline constexpr int kOracleMaxOrder = 16;

/// Exhaustive search over all partitions of the total order and all sign
/// vectors. `positive` maps block size to the number of +1 signs.
bool oracle_decide_nilpotent(const std::vector<int>& sizes, const std::map<int, int>& positive, int m);

/// For even m: every (eigenvalue, size) has as many +1 as -1 blocks.
/// Odd m is always feasible.
bool oracle_negative_even(const std::vector<NegativeBlock>& blocks, int m, double tol = kDefaultTol);

}  // namespace hroot
