#include "hroot/verify.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <tuple>

#include "hroot/errors.hpp"

namespace hroot {

ResidualReport verify_root(const Matrix& a, const Matrix& b, const Matrix& h, int m, double tol) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || h.rows() != h.cols() || a.rows() != b.rows() ||
        a.rows() != h.rows())
        throw InvalidInput("verify_root: A, B and H must be square of equal order");
    if (m < 1) throw InvalidInput("verify_root: m must be >= 1");
    if (!is_finite(a) || !is_finite(b) || !is_finite(h)) throw InvalidInput("verify_root: entries must be finite");
    ResidualReport out;
    out.r_pow = frobenius(matrix_power(a, m) - b) / std::max(frobenius(b), 1.0);
    const double den = frobenius(h) * frobenius(a);
    const double num = frobenius(h * a - a.adjoint() * h);
    out.r_sa = den > 0.0 ? num / den : num;
    out.pass = out.r_pow <= tol && out.r_sa <= tol;
    return out;
}

void check_transition(ResidualReport& report, const MatrixPair& raw, const MatrixPair& canonical, const Matrix& s) {
    Eigen::PartialPivLU<Matrix> lu(s);
    report.r_simJ = relative(frobenius(lu.solve(raw.B * s) - canonical.B), frobenius(raw.B));
    report.r_simH = relative(frobenius(s.adjoint() * raw.H * s - canonical.H), frobenius(raw.H));
}

std::vector<int> power_structure_formula(int n, int m) {
    if (n < 1 || m < 1) throw InvalidInput("power_structure: n and m must be >= 1");
    const int a = (n - 1) / m;
    const int r = n - a * m;
    std::vector<int> out(static_cast<std::size_t>(r), a + 1);
    if (a > 0) out.insert(out.end(), static_cast<std::size_t>(m - r), a);
    return out;
}

std::vector<int> power_structure_ranks(int n, int m) {
    if (n < 1 || m < 1) throw InvalidInput("power_structure: n and m must be >= 1");
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) j(i, i + 1) = 1.0;
    Eigen::MatrixXd x = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < m; ++i) x = x * j;
    auto rank = [](const Eigen::MatrixXd& a) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        lu.setThreshold(1e-9);
        return static_cast<int>(lu.rank());
    };
    // at_least[k-1] = rank(X^{k-1}) - rank(X^k)
    std::vector<int> at_least;
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
    int prev = n;
    while (prev > 0) {
        power = power * x;
        const int cur = rank(power);
        if (cur == prev) break;
        at_least.push_back(prev - cur);
        prev = cur;
    }
    std::vector<int> out;
    for (std::size_t k = 0; k < at_least.size(); ++k) {
        const int exact = at_least[k] - (k + 1 < at_least.size() ? at_least[k + 1] : 0);
        out.insert(out.end(), static_cast<std::size_t>(exact), static_cast<int>(k) + 1);
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

std::vector<int> power_structure(int n, int m) {
    auto formula = power_structure_formula(n, m);
    if (formula != power_structure_ranks(n, m))
        throw Error("power_structure: formula and rank staircase disagree");
    return formula;
}

namespace {

// Signs carried by the chains of J_t(0)^m under eta Q_t: chain j holds
// indices j, j+m, ... (1-based); it couples with the chain whose top index
// adds to t+1 with its bottom index.
std::vector<std::pair<int, int>> chain_signs(int t, int m, int eta) {
    std::vector<std::pair<int, int>> out;
    std::vector<int> len(static_cast<std::size_t>(m) + 1, 0);
    for (int i = 1; i <= t; ++i) ++len[(i - 1) % m + 1];
    auto top = [&](int j) { return j + (len[j] - 1) * m; };
    for (int j = 1; j <= m; ++j) {
        if (len[j] == 0) continue;
        int partner = 0;
        for (int k = 1; k <= m; ++k)
            if (len[k] > 0 && j + top(k) == t + 1) partner = k;
        if (partner == j)
            out.emplace_back(len[j], eta);
        else
            out.emplace_back(len[j], j < partner ? eta : -eta);
    }
    return out;
}

void partitions(int remaining, int max_part, std::vector<int>& cur, const std::function<void(const std::vector<int>&)>& f) {
    if (remaining == 0) {
        f(cur);
        return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
        cur.push_back(part);
        partitions(remaining - part, part, cur, f);
        cur.pop_back();
    }
}

}  // namespace

bool oracle_decide_nilpotent(const std::vector<int>& sizes, const std::map<int, int>& positive, int m) {
    if (m < 1) throw InvalidInput("oracle: m must be >= 1");
    const int total = std::accumulate(sizes.begin(), sizes.end(), 0);
    if (total > kOracleMaxOrder) throw InvalidInput("oracle: total order exceeds the exhaustive limit");
    std::vector<int> want = sizes;
    std::sort(want.begin(), want.end());
    std::map<int, int> want_positive;
    for (const auto& [size, count] : positive)
        if (count != 0) want_positive[size] = count;
    if (total == 0) return want_positive.empty();

    bool found = false;
    std::vector<int> cur;
    partitions(total, total, cur, [&](const std::vector<int>& t) {
        if (found) return;
        std::vector<int> got;
        for (int part : t) {
            auto s = power_structure_formula(part, m);
            got.insert(got.end(), s.begin(), s.end());
        }
        std::sort(got.begin(), got.end());
        if (got != want) return;
        const std::size_t p = t.size();
        for (std::size_t mask = 0; mask < (std::size_t{1} << p) && !found; ++mask) {
            std::map<int, int> plus;
            for (std::size_t k = 0; k < p; ++k) {
                const int eta = (mask >> k) & 1 ? -1 : 1;
                for (const auto& [len, sign] : chain_signs(t[k], m, eta))
                    if (sign > 0) ++plus[len];
            }
            found = plus == want_positive;
        }
    });
    return found;
}

bool oracle_negative_even(const std::vector<NegativeBlock>& blocks, int m, double tol) {
    if (m % 2 == 1) return true;
    std::vector<std::pair<double, int>> plus;
    std::vector<std::pair<double, int>> minus;
    for (const auto& b : blocks) (b.sign > 0 ? plus : minus).emplace_back(b.eigenvalue, b.size);
    if (plus.size() != minus.size()) return false;
    std::sort(plus.begin(), plus.end());
    std::sort(minus.begin(), minus.end());
    for (std::size_t i = 0; i < plus.size(); ++i)
        if (plus[i].second != minus[i].second || std::abs(plus[i].first - minus[i].first) > tol) return false;
    return true;
}

}  // namespace hroot
