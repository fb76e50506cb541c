#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "hroot/canonical.hpp"
#include "hroot/construction.hpp"
#include "hroot/errors.hpp"
#include "hroot/existence.hpp"
#include "support.hpp"

using namespace hroot;

namespace {

double max_abs(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }

void check_block(const BlockConstruction& b, const Matrix& j_target, const Matrix& h_target, int m, double tol) {
    const Matrix p_inv = b.P.inverse();
    CHECK(max_abs(p_inv * matrix_power(b.root_jordan, m) * b.P - j_target) <= tol);
    CHECK(max_abs(b.P.adjoint() * b.root_H * b.P - h_target) <= tol);
    CHECK(max_abs(matrix_power(b.A, m) - j_target) <= tol);
    CHECK(max_abs(h_target * b.A - b.A.adjoint() * h_target) <= tol);
}

std::string signs(const std::vector<RealBlock>& blocks) {
    std::string s;
    for (const auto& b : blocks) s += b.sign > 0 ? '+' : '-';
    return s;
}

}  // namespace

TEST_CASE("phi solution for a positive eigenvalue, n = 3") {
    for (double lambda : {16.0, 81.0, 2.0})
        for (int m = 2; m <= 5; ++m) {
            const double mu = std::pow(lambda, 1.0 / m);
            const Vector y = solve_phi(lambda, 3, mu, m, PhiMode::Sesquilinear);
            CHECK(std::abs(y(2) - 1.0 / (m * std::pow(mu, m - 1))) <= 1e-12);
            CHECK(std::abs(y(1) + (m - 1) / (4.0 * m * std::pow(mu, m))) <= 1e-12);
            CHECK(std::abs(y(0) + (m - 1.0) * (m - 1.0) / (32.0 * m * std::pow(mu, m + 1))) <= 1e-12);
        }
}

TEST_CASE("phi solution for the fifth root of J_3(-1)") {
    const Vector y = solve_phi(-1.0, 3, -1.0, 5, PhiMode::Sesquilinear);
    CHECK(std::abs(y(2) - 0.2) <= 1e-15);
    CHECK(std::abs(y(1) - 0.2) <= 1e-15);
    CHECK(std::abs(y(0) + 0.1) <= 1e-15);
    CHECK(solve_phi(7.0, 1, std::pow(7.0, 0.5), 2, PhiMode::Sesquilinear)(0) == Complex(1.0));
    CHECK_THROWS_AS(solve_phi(7.0, 2, 3.0, 2, PhiMode::Sesquilinear), InvalidInput);
}

TEST_CASE("phi targets are met in both modes") {
    for (int n = 1; n <= 8; ++n)
        for (int m = 1; m <= 5; ++m) {
            const PhiSystem real(n, std::pow(5.0, 1.0 / m), m, PhiMode::Sesquilinear);
            const PhiSystem pair(n, root_branch(Complex(1.0, 2.0), m), m, PhiMode::Bilinear);
            for (const auto* sys : {&real, &pair}) {
                const Vector phi = sys->evaluate(sys->solve());
                CHECK(std::abs(phi(0) - 1.0) <= 1e-12);
                for (int j = 1; j < n; ++j) CHECK(std::abs(phi(j)) <= 1e-12);
            }
        }
}

TEST_CASE("phi_j depends only on the last j entries of y") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    const int n = 6;
    const PhiSystem sys(n, 1.3, 3, PhiMode::Sesquilinear);
    Vector y(n);
    for (int i = 0; i < n; ++i) y(i) = g(rng);
    const Vector base = sys.evaluate(y);
    for (int j = 1; j <= n; ++j) {
        Vector z = y;
        z(n - j) += 0.7;
        const Vector moved = sys.evaluate(z);
        for (int i = 1; i < j; ++i) CHECK(std::abs(moved(i - 1) - base(i - 1)) <= 1e-12);
        CHECK(std::abs(moved(j - 1) - base(j - 1)) > 1e-6);
    }
}

TEST_CASE("real root blocks") {
    const auto five = root_block_real(-1.0, 3, 1, 5);
    Matrix want(3, 3);
    want << -1.0, 0.2, 0.08, 0.0, -1.0, 0.2, 0.0, 0.0, -1.0;
    CHECK(max_abs(five.A - want) <= 1e-12);
    check_block(five, jordan_block(3, -1.0), sip(3), 5, 1e-12);

    const auto one = root_block_real(1.0, 1, -1, 4);
    CHECK(max_abs(one.A - Matrix::Identity(1, 1)) == 0.0);

    const auto sixteen = root_block_real(16.0, 3, 1, 4);
    check_block(sixteen, jordan_block(3, 16.0), sip(3), 4, 1e-10 * 16.0);

    CHECK_THROWS_AS(root_block_real(-1.0, 2, 1, 2), InvalidInput);
    CHECK_THROWS_AS(root_block_real(0.0, 2, 1, 3), InvalidInput);
}

TEST_CASE("Gram matrix of a real root basis is anti-triangular Hankel") {
    for (int n = 2; n <= 7; ++n) {
        const int m = 3;
        const Complex mu = std::pow(4.0, 1.0 / m);
        const PhiSystem sys(n, mu, m, PhiMode::Sesquilinear);
        const Vector y = Vector::Random(n).real().cast<Complex>();
        const Matrix p = sys.chain_basis(y);
        const Matrix g = p.adjoint() * sip(n) * p;
        const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                if (a + b < n - 1) CHECK(std::abs(g(a, b)) <= 1e-12 * scale);
                if (a + 1 < n && b > 0) CHECK(std::abs(g(a, b) - g(a + 1, b - 1)) <= 1e-12 * scale);
            }
        // The last row fixes everything: solving phi makes it (0, ..., 0, 1) reversed.
        const Matrix q = sys.chain_basis(sys.solve());
        CHECK(max_abs(q.adjoint() * sip(n) * q - sip(n)) <= 1e-12);
    }
}

TEST_CASE("conjugate pair root blocks") {
    const auto d = root_block_conjugate_pair(Complex(0.0, 1.0), 1, 2);
    const Complex mu = std::polar(1.0, std::numbers::pi / 4);
    CHECK(std::abs(d.A(0, 0) - mu) <= 1e-15);
    CHECK(std::abs(d.A(1, 1) - std::conj(mu)) <= 1e-15);

    const Complex lambda(1.0, 1.0);
    const auto b = root_block_conjugate_pair(lambda, 2, 3);
    check_block(b, direct_sum(jordan_block(2, lambda), jordan_block(2, std::conj(lambda))), sip(4), 3, 1e-10);
    CHECK(b.root_jordan(0, 0) == std::conj(b.root_jordan(2, 2)));
    CHECK(b.root_jordan(0, 0).imag() > 0.0);

    CHECK_THROWS_AS(root_block_conjugate_pair(Complex(1.0, -1.0), 1, 2), InvalidInput);
}

TEST_CASE("negative eigenvalue with even m") {
    const auto a = root_block_negative_even(-1.0, 1, 2);
    CHECK(std::abs(a.root_jordan(0, 0) - Complex(0.0, 1.0)) <= 1e-15);
    check_block(a, -Matrix::Identity(2, 2), direct_sum(sip(1), Matrix(-sip(1))), 2, 1e-12);

    const auto b = root_block_negative_even(-1.0, 2, 2);
    const Matrix j = direct_sum(jordan_block(2, -1.0), jordan_block(2, -1.0));
    const Matrix h = direct_sum(sip(2), Matrix(-sip(2)));
    check_block(b, j, h, 2, 1e-8);
    CHECK(inertia_of(b.P.adjoint() * sip(4) * b.P, 1e-8) == Inertia{2, 2, 0});

    check_block(root_block_negative_even(-3.0, 3, 4), direct_sum(jordan_block(3, -3.0), jordan_block(3, -3.0)),
                direct_sum(sip(3), Matrix(-sip(3))), 4, 1e-8);
    CHECK_THROWS_AS(root_block_negative_even(-1.0, 1, 3), InvalidInput);
}

TEST_CASE("chain pairing") {
    auto p = chain_pairing(15, 4);
    CHECK(p.a == 3);
    CHECK(p.r == 3);
    CHECK(p.length == std::vector<int>{4, 4, 4, 3});
    CHECK(p.partner == std::vector<int>{2, 1, 0, 3});

    p = chain_pairing(12, 4);
    CHECK(p.length == std::vector<int>{3, 3, 3, 3});
    CHECK(p.partner == std::vector<int>{3, 2, 1, 0});

    p = chain_pairing(10, 4);
    CHECK(p.length == std::vector<int>{3, 3, 2, 2});
    CHECK(p.partner == std::vector<int>{1, 0, 3, 2});

    p = chain_pairing(3, 5);
    CHECK(p.length == std::vector<int>{1, 1, 1, 0, 0});
    CHECK(p.partner == std::vector<int>{2, 1, 0, -1, -1});

    for (int n = 1; n <= 20; ++n)
        for (int m = 1; m <= 6; ++m) {
            p = chain_pairing(n, m);
            for (int j = 0; j < m; ++j) {
                if (p.partner[j] < 0) continue;
                CHECK(p.partner[p.partner[j]] == j);
                CHECK(p.length[p.partner[j]] == p.length[j]);
            }
        }
}

TEST_CASE("nilpotent root signs for the fourth-root example") {
    CHECK(signs(root_nilpotent({15, 12, 10}, {1, 1, 1}, 4).blocks) == "++-+++--+-+-");
    CHECK(signs(root_nilpotent({15, 12, 10}, {-1, -1, -1}, 4).blocks) == "--+---++-+-+");

    const auto two = root_nilpotent({2}, {1}, 2);
    CHECK(signs(two.blocks) == "+-");
    CHECK(two.blocks[0].size == 1);
    CHECK(max_abs(two.P.adjoint() * two.root_H * two.P - direct_sum(sip(1), Matrix(-sip(1)))) <= 1e-15);
}

TEST_CASE("nilpotent recombination keeps Jordan chains and exact sip Gram blocks") {
    for (int t1 = 1; t1 <= 9; ++t1)
        for (int m = 1; m <= 4; ++m)
            for (int eta : {1, -1}) {
                const auto r = root_nilpotent({t1, 3}, {eta, -eta}, m);
                std::vector<Matrix> js;
                std::vector<Matrix> hs;
                for (const auto& b : r.blocks) {
                    js.push_back(jordan_block(b.size, 0.0));
                    hs.push_back(static_cast<double>(b.sign) * sip(b.size));
                }
                const Matrix x = matrix_power(r.root_jordan, m);
                CHECK(max_abs(x * r.P - r.P * direct_sum(js)) <= 1e-15);
                CHECK(max_abs(r.P.adjoint() * r.root_H * r.P - direct_sum(hs)) <= 1e-15);
            }
}

TEST_CASE("nilpotent target ordering") {
    std::vector<RealBlock> target{{0.0, 2, -1}, {0.0, 3, 1}, {0.0, 3, -1}, {0.0, 2, 1}};
    const auto r = root_nilpotent({10}, {1}, 4, target);
    CHECK(signs(r.blocks) == "-+-+");
    CHECK(r.blocks[0].size == 2);
    CHECK(r.blocks[1].size == 3);
    target[0].sign = 1;
    CHECK_THROWS_AS(root_nilpotent({10}, {1}, 4, target), InvalidInput);
}

TEST_CASE("assembled roots") {
    const Descriptor five{{RealBlock{-1.0, 3, 1}}};
    auto r = assemble_root(five, 5, decide(five, 5));
    Matrix want(3, 3);
    want << -1.0, 0.2, 0.08, 0.0, -1.0, 0.2, 0.0, 0.0, -1.0;
    CHECK(max_abs(r.A - want) <= 1e-12);
    CHECK(r.r_pow <= 1e-14);

    const Descriptor neg{{RealBlock{-1.0, 2, 1}, RealBlock{-1.0, 2, -1}}};
    r = assemble_root(neg, 2, decide(neg, 2));
    CHECK(r.r_pow <= 1e-8);
    CHECK(r.r_sa <= 1e-8);

    const Descriptor pairs{{PairBlock{{1.0, 2.0}, 2}, PairBlock{{-2.0, 1.0}, 1}}};
    r = assemble_root(pairs, 3, decide(pairs, 3));
    Eigen::ComplexEigenSolver<Matrix> es(r.A);
    auto ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        double best = 1e300;
        for (Eigen::Index k = 0; k < ev.size(); ++k) best = std::min(best, std::abs(ev(k) - std::conj(ev(i))));
        CHECK(best <= 1e-6);
    }

    const Descriptor no{{RealBlock{-1.0, 2, 1}}};
    CHECK_THROWS_AS(assemble_root(no, 2, decide(no, 2)), InvalidInput);
}

TEST_CASE("assembled roots on random descriptors") {
    std::mt19937_64 rng(77);
    int built = 0;
    for (int i = 0; i < 300; ++i) {
        const auto d = testing::random_mixed_descriptor(rng, {});
        const int m = std::uniform_int_distribution<int>(1, 5)(rng);
        const auto rep = decide(d, m);
        if (!rep.exists) continue;
        ++built;
        const auto r = assemble_root(d, m, rep);
        INFO(testing::to_string(d), " m=", m);
        CHECK(r.r_pow <= 1e-8);
        CHECK(r.r_sa <= 1e-8);
    }
    CHECK(built > 50);
}

TEST_CASE("canonical form of a nilpotent root matches the certificate") {
    Descriptor d;
    for (int i = 0; i < 3; ++i) d.blocks.push_back(RealBlock{0.0, 4, i < 2 ? 1 : -1});
    for (int i = 0; i < 7; ++i) d.blocks.push_back(RealBlock{0.0, 3, i < 4 ? 1 : -1});
    d.blocks.push_back(RealBlock{0.0, 2, 1});
    d.blocks.push_back(RealBlock{0.0, 2, -1});
    const auto rep = decide(d, 4);
    REQUIRE(rep.exists);
    const auto r = assemble_root(d, 4, rep);
    const auto c = canonicalize({r.A, realize(d).H});
    Descriptor want;
    for (std::size_t k = 0; k < rep.certificate->zero_root_sizes.size(); ++k)
        want.blocks.push_back(RealBlock{0.0, rep.certificate->zero_root_sizes[k], rep.certificate->etas[k]});
    CHECK(c.descriptor == normalized(want));
}

TEST_CASE("transport to raw coordinates") {
    const Descriptor d{{RealBlock{2.0, 3, 1}}};
    const auto rep = decide(d, 3);
    const auto root = assemble_root(d, 3, rep);

    const auto plain = realize(d);
    const auto same = transport(plain, canonicalize(plain), root);
    CHECK(max_abs(same.A - root.A) <= 1e-14);

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto s = scramble(d, seed, 10.0);
        const auto canon = canonicalize(s.pair);
        const auto raw = transport(s.pair, canon, assemble_root(canon.descriptor, 3, decide(canon.descriptor, 3)));
        CHECK(raw.r_pow <= 1e-7);
        CHECK(raw.r_sa <= 1e-7);
        REQUIRE(raw.S.has_value());
        CHECK(max_abs(*raw.S - canon.S) == 0.0);
    }
}
