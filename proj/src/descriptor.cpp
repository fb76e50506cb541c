#include "hroot/descriptor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "hroot/errors.hpp"

namespace hroot {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace

int block_order(const Block& b) {
    return std::visit(Overloaded{[](const RealBlock& r) { return r.size; },
                                 [](const PairBlock& p) { return 2 * p.size; }},
                      b);
}

Complex block_eigenvalue(const Block& b) {
    return std::visit(Overloaded{[](const RealBlock& r) { return Complex(r.eigenvalue, 0.0); },
                                 [](const PairBlock& p) { return p.eigenvalue; }},
                      b);
}

int Descriptor::order() const {
    int n = 0;
    for (const auto& b : blocks) n += block_order(b);
    return n;
}

std::vector<Violation> validate(const Descriptor& d) {
    std::vector<Violation> out;
    if (d.blocks.empty()) out.push_back({std::nullopt, "order must be >= 1"});
    for (std::size_t i = 0; i < d.blocks.size(); ++i) {
        if (const auto* r = std::get_if<RealBlock>(&d.blocks[i])) {
            if (!std::isfinite(r->eigenvalue)) out.push_back({i, "eigenvalue must be finite"});
            if (r->size < 1) out.push_back({i, "size must be >= 1"});
            if (r->sign != 1 && r->sign != -1) out.push_back({i, "sign must be +1 or -1"});
        } else {
            const auto& p = std::get<PairBlock>(d.blocks[i]);
            if (!std::isfinite(p.eigenvalue.real()) || !std::isfinite(p.eigenvalue.imag()))
                out.push_back({i, "eigenvalue must be finite"});
            else if (!(p.eigenvalue.imag() > 0.0))
                out.push_back({i, "imaginary part must be positive"});
            if (p.size < 1) out.push_back({i, "size must be >= 1"});
        }
    }
    return out;
}

void require_valid(const Descriptor& d) {
    auto v = validate(d);
    if (v.empty()) return;
    std::ostringstream msg;
    msg << "invalid descriptor: ";
    if (v.front().block) msg << "block " << *v.front().block << ": ";
    msg << v.front().rule;
    throw InvalidInput(msg.str());
}

MatrixPair realize(const Descriptor& d) {
    require_valid(d);
    std::vector<Matrix> js;
    std::vector<Matrix> hs;
    for (const auto& b : d.blocks) {
        if (const auto* r = std::get_if<RealBlock>(&b)) {
            js.push_back(jordan_block(r->size, r->eigenvalue));
            hs.push_back(static_cast<double>(r->sign) * sip(r->size));
        } else {
            const auto& p = std::get<PairBlock>(b);
            js.push_back(direct_sum(jordan_block(p.size, p.eigenvalue),
                                    jordan_block(p.size, std::conj(p.eigenvalue))));
            hs.push_back(sip(2 * p.size));
        }
    }
    return {direct_sum(js), direct_sum(hs)};
}

SegreCharacteristic segre_at(const Descriptor& d, Complex lambda0, double tol) {
    require_valid(d);
    SegreCharacteristic s{lambda0, {}};
    for (const auto& b : d.blocks) {
        if (const auto* r = std::get_if<RealBlock>(&b)) {
            if (std::abs(Complex(r->eigenvalue, 0.0) - lambda0) <= tol) s.sizes.push_back(r->size);
        } else {
            const auto& p = std::get<PairBlock>(b);
            if (std::abs(p.eigenvalue - lambda0) <= tol) s.sizes.push_back(p.size);
            if (std::abs(std::conj(p.eigenvalue) - lambda0) <= tol) s.sizes.push_back(p.size);
        }
    }
    std::sort(s.sizes.begin(), s.sizes.end(), std::greater<>());
    return s;
}

ScrambledPair scramble(const Descriptor& d, std::uint64_t seed, double conditioning) {
    if (!(conditioning >= 1.0)) throw InvalidInput("conditioning must be >= 1");
    MatrixPair canon = realize(d);
    const int n = d.order();
    if (conditioning == 1.0) return {canon, Matrix::Identity(n, n)};

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> scale(1.0, conditioning);

    Matrix g(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) g(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix u = qr.householderQ() * Matrix::Identity(n, n);

    Eigen::VectorXd diag(n);
    for (int i = 0; i < n; ++i) diag(i) = scale(rng);
    // Pin the extremes so the condition number is exactly `conditioning`.
    diag(0) = 1.0;
    if (n > 1) diag(n - 1) = conditioning;

    Matrix s = u * diag.cast<Complex>().asDiagonal();
    Matrix s_inv = diag.cwiseInverse().cast<Complex>().asDiagonal() * u.adjoint();
    Matrix h = s.adjoint() * canon.H * s;
    h = (0.5 * (h + h.adjoint())).eval();
    return {{s_inv * canon.B * s, std::move(h)}, s};
}

EigenClass classify(Complex lambda, double tol) {
    if (std::abs(lambda) <= tol) return EigenClass::Zero;
    if (std::abs(lambda.imag()) <= tol * (1.0 + std::abs(lambda.real())))
        return lambda.real() < 0.0 ? EigenClass::Negative : EigenClass::Positive;
    return EigenClass::Nonreal;
}

void require_selfadjoint_pair(const MatrixPair& p, double tol) {
    if (p.B.rows() != p.B.cols() || p.H.rows() != p.H.cols() || p.B.rows() != p.H.rows())
        throw InvalidInput("B and H must be square matrices of equal order");
    if (p.B.rows() == 0) throw InvalidInput("order must be >= 1");
    if (!is_finite(p.B) || !is_finite(p.H)) throw InvalidInput("entries must be finite");
    const int n = static_cast<int>(p.B.rows());
    const double h_norm = frobenius(p.H);
    if (relative(frobenius(p.H - p.H.adjoint()), h_norm) > tol * n)
        throw InvalidInput("H must be Hermitian");
    Eigen::JacobiSVD<Matrix> svd(p.H);
    const auto& s = svd.singularValues();
    if (s(0) == 0.0 || s(s.size() - 1) <= tol * s(0))
        throw InvalidInput("H must be invertible");
    const double scale = std::max(frobenius(p.H) * frobenius(p.B), 1e-300);
    if (frobenius(p.H * p.B - p.B.adjoint() * p.H) / scale > 1e3 * tol * n)
        throw InvalidInput("B must be H-selfadjoint (HB = B^*H)");
}

}  // namespace hroot
