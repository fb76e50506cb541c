#include "hroot/construction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hroot/errors.hpp"

namespace hroot {

namespace {

Matrix solve_right(const Matrix& p, const Matrix& x) { return Eigen::PartialPivLU<Matrix>(p).solve(x); }

// Ã^m with its diagonal removed: exactly nilpotent even when mu^m rounds.
Matrix nilpotent_part(int n, Complex mu, int m) {
    Matrix x = matrix_power(jordan_block(n, mu), m);
    x.diagonal().setZero();
    return x;
}

}  // namespace

PhiSystem::PhiSystem(int n, Complex mu, int m, PhiMode mode)
    : n_(n), mode_(mode), coefficient_(static_cast<double>(m) * std::pow(mu, m - 1)), shift_(nilpotent_part(n, mu, m)) {
    if (n < 1 || m < 1) throw InvalidInput("block size and m must be >= 1");
    if (std::abs(mu) == 0.0) throw InvalidInput("root eigenvalue must be nonzero");
    if (mode == PhiMode::Sesquilinear && mu.imag() != 0.0)
        throw InvalidInput("sesquilinear mode requires a real root eigenvalue");
}

Vector PhiSystem::evaluate(const Vector& y) const {
    const Matrix q = sip(n_);
    const Vector w = mode_ == PhiMode::Sesquilinear ? Vector(y.conjugate()) : y;
    // powers[k] = N^k y
    std::vector<Vector> powers(static_cast<std::size_t>(n_));
    powers[0] = y;
    for (int k = 1; k < n_; ++k) powers[k] = shift_ * powers[k - 1];
    Vector phi(n_);
    for (int j = 1; j <= n_; ++j) phi(j - 1) = (w.transpose() * (q * powers[n_ - j]))(0);
    return phi;
}

Vector PhiSystem::solve() const {
    Vector y = Vector::Zero(n_);
    const double exponent = -0.5 * (n_ - 1);
    if (mode_ == PhiMode::Sesquilinear) {
        if (!(coefficient_.real() > 0.0)) throw Error("phi system: leading coefficient must be positive");
        y(n_ - 1) = std::pow(coefficient_.real(), exponent);
    } else {
        y(n_ - 1) = std::pow(coefficient_, exponent);
    }
    // phi_j is affine in y_{n-j+1} once y_n, ..., y_{n-j+2} are fixed.
    for (int j = 2; j <= n_; ++j) {
        const int idx = n_ - j;
        y(idx) = 0.0;
        const Complex f0 = evaluate(y)(j - 1);
        y(idx) = 1.0;
        const Complex f1 = evaluate(y)(j - 1);
        const Complex slope = f1 - f0;
        if (std::abs(slope) == 0.0) throw Error("phi system: vanishing slope");
        Complex z = -f0 / slope;
        if (mode_ == PhiMode::Sesquilinear) z = z.real();
        y(idx) = z;
    }
    return y;
}

Matrix PhiSystem::chain_basis(const Vector& y) const {
    Matrix p(n_, n_);
    Vector v = y;
    for (int c = n_ - 1; c >= 0; --c) {
        p.col(c) = v;
        v = shift_ * v;
    }
    return p;
}

Vector solve_phi(Complex lambda, int n, Complex mu, int m, PhiMode mode) {
    if (std::abs(lambda) == 0.0) throw InvalidInput("solve_phi: eigenvalue must be nonzero");
    if (std::abs(std::pow(mu, m) - lambda) > 1e-10 * std::abs(lambda))
        throw InvalidInput("solve_phi: mu^m must equal lambda");
    return PhiSystem(n, mu, m, mode).solve();
}

BlockConstruction root_block_real(double lambda, int n, int sign, int m, double tol) {
    const auto cls = classify(lambda, tol);
    if (cls == EigenClass::Zero || (cls == EigenClass::Negative && m % 2 == 0))
        throw InvalidInput("root_block_real: requires lambda > 0, or lambda < 0 with m odd");
    if (sign != 1 && sign != -1) throw InvalidInput("root_block_real: sign must be +1 or -1");
    const Complex mu = root_branch(lambda, m, tol);
    PhiSystem phi(n, mu, m, PhiMode::Sesquilinear);
    BlockConstruction out;
    out.root_jordan = jordan_block(n, mu);
    out.root_H = static_cast<double>(sign) * sip(n);
    out.P = phi.chain_basis(phi.solve());
    out.A = solve_right(out.P, out.root_jordan * out.P);
    return out;
}

BlockConstruction root_block_conjugate_pair(Complex lambda, int n, int m, double tol) {
    if (!(lambda.imag() > 0.0) || classify(lambda, tol) != EigenClass::Nonreal)
        throw InvalidInput("root_block_conjugate_pair: imaginary part must be positive");
    const Complex mu = root_branch(lambda, m, tol);
    PhiSystem phi(n, mu, m, PhiMode::Bilinear);
    const Matrix p1 = phi.chain_basis(phi.solve());
    BlockConstruction out;
    out.root_jordan = direct_sum(jordan_block(n, mu), jordan_block(n, std::conj(mu)));
    out.root_H = sip(2 * n);
    out.P = direct_sum(p1, Matrix(p1.conjugate()));
    out.A = solve_right(out.P, out.root_jordan * out.P);
    return out;
}

BlockConstruction root_block_negative_even(double lambda, int n, int m, double tol) {
    if (classify(lambda, tol) != EigenClass::Negative || m % 2 != 0)
        throw InvalidInput("root_block_negative_even: requires lambda < 0 and m even");
    const Complex mu = root_branch(lambda, m, tol);
    BlockConstruction out;
    out.root_jordan = direct_sum(jordan_block(n, mu), jordan_block(n, std::conj(mu)));
    out.root_H = sip(2 * n);
    const auto canon = canonicalize({matrix_power(out.root_jordan, m), out.root_H}, tol);
    const auto& blocks = canon.descriptor.blocks;
    const auto* first = blocks.size() == 2 ? std::get_if<RealBlock>(&blocks[0]) : nullptr;
    const auto* second = blocks.size() == 2 ? std::get_if<RealBlock>(&blocks[1]) : nullptr;
    if (!first || !second || first->size != n || second->size != n || first->sign != 1 || second->sign != -1)
        throw IllConditioned("root_block_negative_even: unexpected canonical form of the root power");
    out.P = canon.S;
    out.A = solve_right(out.P, out.root_jordan * out.P);
    return out;
}

ChainPairing chain_pairing(int n, int m) {
    if (n < 1 || m < 1) throw InvalidInput("chain_pairing: n and m must be >= 1");
    ChainPairing out;
    out.a = (n - 1) / m;
    out.r = n - out.a * m;
    out.length.resize(static_cast<std::size_t>(m));
    out.partner.resize(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        if (j < out.r) {
            out.length[j] = out.a + 1;
            out.partner[j] = out.r - 1 - j;
        } else {
            out.length[j] = out.a;
            out.partner[j] = out.a > 0 ? m + out.r - 1 - j : -1;
        }
    }
    return out;
}

NilpotentRoot root_nilpotent(const std::vector<int>& t, const std::vector<int>& etas, int m,
                             const std::optional<std::vector<RealBlock>>& target) {
    if (t.size() != etas.size()) throw InvalidInput("root_nilpotent: one sign is needed per root block");
    if (m < 1) throw InvalidInput("root_nilpotent: m must be >= 1");
    const int total = std::accumulate(t.begin(), t.end(), 0);

    struct Group {
        Matrix columns;
        RealBlock block;
    };
    std::vector<Group> groups;
    std::vector<Matrix> jordans;
    std::vector<Matrix> hs;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    int offset = 0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const int n = t[k];
        const int eta = etas[k];
        if (n < 1 || (eta != 1 && eta != -1)) throw InvalidInput("root_nilpotent: invalid root block");
        jordans.push_back(jordan_block(n, 0.0));
        hs.push_back(static_cast<double>(eta) * sip(n));
        const auto pairing = chain_pairing(n, m);
        auto chain = [&](int j) {
            Matrix c = Matrix::Zero(total, pairing.length[j]);
            for (int i = 0; i < pairing.length[j]; ++i) c(offset + j + i * m, i) = 1.0;
            return c;
        };
        for (int j = 0; j < m; ++j) {
            const int len = pairing.length[j];
            const int partner = pairing.partner[j];
            if (len == 0) continue;
            if (partner == j) {
                groups.push_back({chain(j), RealBlock{0.0, len, eta}});
            } else if (j < partner) {
                groups.push_back({inv_sqrt2 * (chain(j) + chain(partner)), RealBlock{0.0, len, eta}});
            } else {
                groups.push_back({inv_sqrt2 * (chain(partner) - chain(j)), RealBlock{0.0, len, -eta}});
            }
        }
        offset += n;
    }

    if (target) {
        if (target->size() != groups.size())
            throw InvalidInput("root_nilpotent: certificate and descriptor have different block counts");
        std::vector<bool> used(groups.size(), false);
        std::vector<Group> ordered;
        for (const auto& want : *target) {
            std::size_t hit = groups.size();
            for (std::size_t g = 0; g < groups.size() && hit == groups.size(); ++g)
                if (!used[g] && groups[g].block.size == want.size && groups[g].block.sign == want.sign) hit = g;
            if (hit == groups.size())
                throw InvalidInput("root_nilpotent: certificate does not produce the descriptor's zero blocks");
            used[hit] = true;
            ordered.push_back(groups[hit]);
            ordered.back().block.eigenvalue = want.eigenvalue;
        }
        groups = std::move(ordered);
    }

    NilpotentRoot out;
    out.root_jordan = direct_sum(jordans);
    out.root_H = direct_sum(hs);
    out.P.resize(total, total);
    int col = 0;
    for (const auto& g : groups) {
        out.P.middleCols(col, g.columns.cols()) = g.columns;
        col += static_cast<int>(g.columns.cols());
        out.blocks.push_back(g.block);
    }
    return out;
}

Descriptor root_descriptor(const Descriptor& d, const Certificate& cert) {
    if (cert.zero_root_sizes.size() != cert.etas.size()) throw InvalidInput("root_descriptor: malformed certificate");
    Descriptor out;
    for (std::size_t k = 0; k < cert.etas.size(); ++k)
        out.blocks.push_back(RealBlock{0.0, cert.zero_root_sizes[k], cert.etas[k]});
    std::vector<std::optional<Complex>> mu(d.blocks.size());
    for (const auto& rc : cert.root_eigenvalues) {
        if (rc.block >= d.blocks.size()) throw InvalidInput("root_descriptor: block index out of range");
        mu[rc.block] = rc.mu;
    }
    std::vector<bool> absorbed(d.blocks.size(), false);
    for (const auto& pr : cert.negative_pairing) {
        if (pr.second >= d.blocks.size()) throw InvalidInput("root_descriptor: block index out of range");
        absorbed[pr.second] = true;
    }
    for (std::size_t i = 0; i < d.blocks.size(); ++i) {
        if (!mu[i] || absorbed[i]) continue;
        const Complex z = *mu[i];
        const Block& b = d.blocks[i];
        const auto* r = std::get_if<RealBlock>(&b);
        const int size = r ? r->size : std::get<PairBlock>(b).size;
        if (r && z.imag() == 0.0)
            out.blocks.push_back(RealBlock{z.real(), size, r->sign});
        else
            out.blocks.push_back(PairBlock{z.imag() > 0.0 ? z : std::conj(z), size});
    }
    return normalized(out);
}

void compute_residuals(RootResult& r, const Matrix& b, const Matrix& h) {
    r.r_pow = relative(frobenius(matrix_power(r.A, r.m) - b), frobenius(b));
    r.r_sa = relative(frobenius(h * r.A - r.A.adjoint() * h), frobenius(h) * frobenius(r.A));
}

RootResult assemble_root(const Descriptor& d, int m, const DecisionReport& report, double tol) {
    require_valid(d);
    if (!report.exists || !report.certificate) throw InvalidInput("assemble_root: no root exists");
    const Certificate& cert = *report.certificate;
    const auto nb = d.blocks.size();

    std::vector<int> offsets(nb + 1, 0);
    for (std::size_t i = 0; i < nb; ++i) offsets[i + 1] = offsets[i] + block_order(d.blocks[i]);
    const int n = offsets[nb];

    // Each piece covers descriptor blocks `indices`, its columns ordered as
    // those blocks are listed.
    struct Piece {
        std::vector<std::size_t> indices;
        Matrix root_jordan;
        Matrix root_H;
        Matrix P;
    };
    std::vector<Piece> pieces;
    std::vector<bool> covered(nb, false);

    std::vector<std::size_t> zero_idx;
    std::vector<RealBlock> zero_target;
    for (std::size_t i = 0; i < nb; ++i)
        if (const auto* r = std::get_if<RealBlock>(&d.blocks[i]); r && classify(r->eigenvalue, tol) == EigenClass::Zero) {
            zero_idx.push_back(i);
            zero_target.push_back(*r);
        }
    if (!zero_idx.empty()) {
        auto nil = root_nilpotent(cert.zero_root_sizes, cert.etas, m, zero_target);
        pieces.push_back({zero_idx, nil.root_jordan, nil.root_H, nil.P});
        for (auto i : zero_idx) covered[i] = true;
    } else if (!cert.zero_root_sizes.empty()) {
        throw InvalidInput("assemble_root: certificate has a nilpotent part but the descriptor does not");
    }

    for (const auto& [plus, minus] : cert.negative_pairing) {
        if (plus >= nb || minus >= nb || covered[plus] || covered[minus])
            throw InvalidInput("assemble_root: invalid negative pairing");
        const auto* bp = std::get_if<RealBlock>(&d.blocks[plus]);
        const auto* bm = std::get_if<RealBlock>(&d.blocks[minus]);
        if (!bp || !bm || bp->size != bm->size || bp->sign != 1 || bm->sign != -1 ||
            std::abs(bp->eigenvalue - bm->eigenvalue) > tol)
            throw InvalidInput("assemble_root: negative pairing does not match the descriptor");
        auto blk = root_block_negative_even(bp->eigenvalue, bp->size, m, tol);
        pieces.push_back({{plus, minus}, blk.root_jordan, blk.root_H, blk.P});
        covered[plus] = covered[minus] = true;
    }

    for (std::size_t i = 0; i < nb; ++i) {
        if (covered[i]) continue;
        BlockConstruction blk;
        if (const auto* r = std::get_if<RealBlock>(&d.blocks[i])) {
            if (classify(r->eigenvalue, tol) == EigenClass::Negative && m % 2 == 0)
                throw InvalidInput("assemble_root: unpaired negative block for even m");
            blk = root_block_real(r->eigenvalue, r->size, r->sign, m, tol);
        } else {
            const auto& p = std::get<PairBlock>(d.blocks[i]);
            blk = root_block_conjugate_pair(p.eigenvalue, p.size, m, tol);
        }
        pieces.push_back({{i}, blk.root_jordan, blk.root_H, blk.P});
        covered[i] = true;
    }

    RootResult out;
    out.m = m;
    out.root_jordan = Matrix::Zero(n, n);
    out.root_H = Matrix::Zero(n, n);
    out.P = Matrix::Zero(n, n);
    int o = 0;
    for (const auto& piece : pieces) {
        const auto size = piece.P.rows();
        out.root_jordan.block(o, o, size, size) = piece.root_jordan;
        out.root_H.block(o, o, size, size) = piece.root_H;
        int c = 0;
        for (auto i : piece.indices) {
            const int len = block_order(d.blocks[i]);
            out.P.block(o, offsets[i], size, len) = piece.P.middleCols(c, len);
            c += len;
        }
        o += static_cast<int>(size);
    }
    out.A = solve_right(out.P, out.root_jordan * out.P);
    const MatrixPair canon = realize(d);
    compute_residuals(out, canon.B, canon.H);
    return out;
}

RootResult transport(const MatrixPair& raw, const CanonicalizationResult& canon, const RootResult& root) {
    RootResult out = root;
    const Matrix& s = canon.S;
    out.A = s * root.A * Eigen::PartialPivLU<Matrix>(s).inverse();
    out.S = s;
    compute_residuals(out, raw.B, raw.H);
    return out;
}

}  // namespace hroot
