#include "hroot/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "hroot/errors.hpp"

namespace hroot {

namespace {

struct Cluster {
    Complex center;
    int multiplicity = 0;
};

double matrix_scale(const Matrix& b) {
    const double f = frobenius(b);
    return f > 0.0 ? f : 1.0;
}

// N_k = ker (M^k) for k = 1, 2, ... as orthonormal bases, computed without
// forming powers: N_k = ker((I - N_{k-1} N_{k-1}^*) M). Singular values are
// judged against scale, the norm of the unshifted matrix, so that a shift
// which cancels nearly all of M does not shrink the threshold with it.
struct Staircase {
    std::vector<Matrix> kernels;
    std::vector<int> dims;
};

Staircase nested_kernels(const Matrix& m, double scale, double tol, int limit) {
    const auto n = m.rows();
    const double threshold = tol * scale * static_cast<double>(n);
    Staircase st;
    Matrix prev(n, 0);
    while (true) {
        Matrix projected = m - prev * (prev.adjoint() * m);
        Matrix k = null_space(projected, threshold);
        if (k.cols() <= prev.cols()) break;
        st.dims.push_back(static_cast<int>(k.cols()));
        st.kernels.push_back(k);
        prev = std::move(k);
        if (prev.cols() > limit) break;
    }
    return st;
}

// Blocks of size >= k number dims[k-1] - dims[k-2].
std::vector<int> block_counts_at_least(const std::vector<int>& dims) {
    std::vector<int> out(dims.size());
    for (std::size_t k = 0; k < dims.size(); ++k) out[k] = dims[k] - (k ? dims[k - 1] : 0);
    return out;
}

bool staircase_consistent(const Staircase& st, int multiplicity) {
    if (st.dims.empty() || st.dims.back() != multiplicity) return false;
    auto b = block_counts_at_least(st.dims);
    for (std::size_t k = 1; k < b.size(); ++k)
        if (b[k] > b[k - 1]) return false;
    return true;
}

std::vector<int> sizes_from_staircase(const Staircase& st) {
    auto b = block_counts_at_least(st.dims);
    std::vector<int> sizes;
    for (std::size_t k = 0; k < b.size(); ++k) {
        const int exact = b[k] - (k + 1 < b.size() ? b[k + 1] : 0);
        for (int i = 0; i < exact; ++i) sizes.push_back(static_cast<int>(k) + 1);
    }
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    return sizes;
}

Complex snap(Complex c, double tol) {
    switch (classify(c, tol)) {
        case EigenClass::Zero: return {0.0, 0.0};
        case EigenClass::Negative:
        case EigenClass::Positive: return {c.real(), 0.0};
        case EigenClass::Nonreal: break;
    }
    return c;
}

std::vector<Complex> computed_eigenvalues(const Matrix& b) {
    std::vector<Complex> out(static_cast<std::size_t>(b.rows()));
    if (is_upper_triangular(b)) {
        for (Eigen::Index i = 0; i < b.rows(); ++i) out[static_cast<std::size_t>(i)] = b(i, i);
        return out;
    }
    Eigen::ComplexEigenSolver<Matrix> es(b, false);
    if (es.info() != Eigen::Success) throw IllConditioned("eigenvalue computation did not converge");
    for (Eigen::Index i = 0; i < b.rows(); ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    return out;
}

Matrix shifted(const Matrix& b, Complex lambda) {
    Matrix m = b;
    m.diagonal().array() -= lambda;
    return m;
}

struct Edge {
    double weight;
    int u;
    int v;
};

// Single-linkage clustering refined top-down: a component is accepted when
// its spread fits the multiplicity-dependent perturbation radius and the rank
// staircase at its centroid accounts for exactly its multiplicity; otherwise
// it is split at its longest spanning-tree edge.
std::vector<Cluster> cluster_spectrum(const Matrix& b, double tol) {
    const auto eig = computed_eigenvalues(b);
    const int n = static_cast<int>(eig.size());
    const double scale = matrix_scale(b);

    std::vector<Edge> tree;
    {
        std::vector<bool> in(static_cast<std::size_t>(n), false);
        std::vector<double> best(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
        std::vector<int> parent(static_cast<std::size_t>(n), -1);
        best[0] = 0.0;
        for (int it = 0; it < n; ++it) {
            int u = -1;
            for (int i = 0; i < n; ++i)
                if (!in[i] && (u < 0 || best[i] < best[u])) u = i;
            in[u] = true;
            if (parent[u] >= 0) tree.push_back({best[u], parent[u], u});
            for (int v = 0; v < n; ++v) {
                if (in[v]) continue;
                const double d = std::abs(eig[u] - eig[v]);
                if (d < best[v]) {
                    best[v] = d;
                    parent[v] = u;
                }
            }
        }
    }

    struct Component {
        std::vector<int> nodes;
        std::vector<Edge> edges;
    };
    std::vector<Component> work;
    {
        Component all;
        all.nodes.resize(static_cast<std::size_t>(n));
        std::iota(all.nodes.begin(), all.nodes.end(), 0);
        all.edges = tree;
        work.push_back(std::move(all));
    }

    std::vector<Cluster> out;
    while (!work.empty()) {
        Component comp = std::move(work.back());
        work.pop_back();
        const int a = static_cast<int>(comp.nodes.size());
        Complex center{0.0, 0.0};
        for (int i : comp.nodes) center += eig[i];
        center /= static_cast<double>(a);
        double spread = 0.0;
        for (int i : comp.nodes) spread = std::max(spread, std::abs(eig[i] - center));

        const double radius = 4.0 * scale * std::pow(tol * n, 1.0 / a);
        if (spread <= radius) {
            const Complex c = snap(center, tol);
            if (staircase_consistent(nested_kernels(shifted(b, c), scale, tol, a), a)) {
                out.push_back({c, a});
                continue;
            }
        }
        if (a == 1) {
            std::ostringstream msg;
            msg << "rank staircase at eigenvalue " << center << " is inconsistent at tol " << tol;
            throw IllConditioned(msg.str());
        }

        auto cut = std::max_element(comp.edges.begin(), comp.edges.end(),
                                    [](const Edge& x, const Edge& y) { return x.weight < y.weight; });
        comp.edges.erase(cut);
        // Union-find over the remaining edges splits the component in two.
        std::vector<int> root(static_cast<std::size_t>(n));
        std::iota(root.begin(), root.end(), 0);
        std::function<int(int)> find = [&](int x) { return root[x] == x ? x : root[x] = find(root[x]); };
        for (const auto& e : comp.edges) root[find(e.u)] = find(e.v);
        const int first = find(comp.nodes.front());
        Component left;
        Component right;
        for (int i : comp.nodes) (find(i) == first ? left : right).nodes.push_back(i);
        for (const auto& e : comp.edges) (find(e.u) == first ? left : right).edges.push_back(e);
        work.push_back(std::move(right));
        work.push_back(std::move(left));
    }

    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = i + 1; j < out.size(); ++j)
            if (std::abs(out[i].center - out[j].center) <= 2.0 * tol) {
                std::ostringstream msg;
                msg << "eigenvalue clusters " << out[i].center << " and " << out[j].center
                    << " are not separated at tol " << tol;
                throw IllConditioned(msg.str());
            }
    return out;
}

// Clusters with nonreal centers are matched with their conjugates and given
// exactly conjugate centers.
std::vector<Cluster> symmetrize(std::vector<Cluster> clusters, double tol) {
    std::vector<bool> used(clusters.size(), false);
    std::vector<Cluster> out;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        if (used[i]) continue;
        if (classify(clusters[i].center, tol) != EigenClass::Nonreal) {
            used[i] = true;
            out.push_back(clusters[i]);
            continue;
        }
        std::size_t best = clusters.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < clusters.size(); ++j) {
            if (j == i || used[j]) continue;
            const double d = std::abs(clusters[j].center - std::conj(clusters[i].center));
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        if (best == clusters.size() || clusters[best].multiplicity != clusters[i].multiplicity ||
            best_d > std::sqrt(tol) * (1.0 + std::abs(clusters[i].center))) {
            std::ostringstream msg;
            msg << "nonreal eigenvalue " << clusters[i].center << " has no matching conjugate";
            throw IllConditioned(msg.str());
        }
        used[i] = used[best] = true;
        const Complex upper = clusters[i].center.imag() > 0 ? clusters[i].center : clusters[best].center;
        const Complex lower = clusters[i].center.imag() > 0 ? clusters[best].center : clusters[i].center;
        const Complex c = 0.5 * (upper + std::conj(lower));
        out.push_back({c, clusters[i].multiplicity});
        out.push_back({std::conj(c), clusters[i].multiplicity});
    }
    return out;
}

bool eigen_less(Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

struct ChainTop {
    Vector top;
    int length = 0;
};

// Columns [M^{len-1} x, ..., M x, x].
Matrix chain_matrix(const Matrix& m, const Vector& x, int length) {
    Matrix out(m.rows(), length);
    Vector v = x;
    for (int c = length - 1; c >= 0; --c) {
        out.col(c) = v;
        if (c > 0) v = m * v;
    }
    return out;
}

Vector apply_power(const Matrix& m, Vector v, int k) {
    for (int i = 0; i < k; ++i) v = m * v;
    return v;
}

// Tops of a Jordan basis: for s descending, complete N_{s-1} plus the level-s
// images of longer chains to a basis of N_s.
std::vector<ChainTop> jordan_chains(const Matrix& m, const Staircase& st) {
    const auto n = m.rows();
    const auto at_least = block_counts_at_least(st.dims);
    const int levels = static_cast<int>(st.dims.size());
    std::vector<ChainTop> chains;
    for (int s = levels; s >= 1; --s) {
        const int exact = at_least[s - 1] - (s < levels ? at_least[s] : 0);
        if (exact == 0) continue;
        const Matrix& ns = st.kernels[s - 1];
        const Eigen::Index prev_cols = s > 1 ? st.kernels[s - 2].cols() : 0;
        Matrix w(n, prev_cols + static_cast<Eigen::Index>(chains.size()));
        if (prev_cols) w.leftCols(prev_cols) = st.kernels[s - 2];
        for (std::size_t i = 0; i < chains.size(); ++i)
            w.col(prev_cols + static_cast<Eigen::Index>(i)) =
                apply_power(m, chains[i].top, chains[i].length - s);
        Matrix complement = ns;
        if (w.cols() > 0) {
            Eigen::HouseholderQR<Matrix> qr(w);
            Matrix z = qr.householderQ() * Matrix::Identity(n, w.cols());
            complement = ns - z * (z.adjoint() * ns);
        }
        Eigen::JacobiSVD<Matrix> svd(complement, Eigen::ComputeThinU);
        const auto& sv = svd.singularValues();
        if (sv.size() < exact || sv(exact - 1) < 0.5 || (sv.size() > exact && sv(exact) > 0.5))
            throw IllConditioned("Jordan chain tops are not separable from shorter chains");
        for (int i = 0; i < exact; ++i) chains.push_back({svd.matrixU().col(i), s});
    }
    return chains;
}

struct CanonBlock {
    Block block;
    Matrix columns;
};

void normalize_real(const Matrix& m, const Matrix& h, double lambda, std::vector<ChainTop> pending,
                    double tol, std::vector<CanonBlock>& out) {
    const auto n = m.rows();
    const double h_norm = frobenius(h);
    while (!pending.empty()) {
        int s = 0;
        for (const auto& c : pending) s = std::max(s, c.length);
        std::vector<ChainTop> shorter;
        std::vector<Vector> tops;
        for (auto& c : pending) (c.length == s ? tops.push_back(c.top) : shorter.push_back(c));
        Matrix x(n, static_cast<Eigen::Index>(tops.size()));
        for (std::size_t i = 0; i < tops.size(); ++i) x.col(static_cast<Eigen::Index>(i)) = tops[i];
        Matrix y = x;
        for (int i = 0; i < s - 1; ++i) y = m * y;
        Matrix f = y.adjoint() * h * x;
        f = (0.5 * (f + f.adjoint())).eval();
        Eigen::SelfAdjointEigenSolver<Matrix> es(f);
        Eigen::Index pick = 0;
        es.eigenvalues().cwiseAbs().maxCoeff(&pick);
        const double fk = es.eigenvalues()(pick);
        if (std::abs(fk) <= tol * h_norm * frobenius(y) * frobenius(x))
            throw IllConditioned("degenerate Gram form on longest Jordan chains");
        const Matrix rotated = x * es.eigenvectors();
        const int sign = fk > 0.0 ? 1 : -1;
        const Vector top = rotated.col(pick) / std::sqrt(std::abs(fk));

        // Moments h_j = [M^j x, x] are real; choose x' = p(M) x with p real
        // and p^2 = q so that the moments of x' are (0, ..., 0, sign).
        std::vector<double> mom(static_cast<std::size_t>(s));
        {
            Vector v = top;
            for (int j = 0; j < s; ++j) {
                mom[j] = top.dot(h * v).real();
                v = m * v;
            }
        }
        std::vector<double> q(static_cast<std::size_t>(s), 0.0);
        q[0] = 1.0;
        for (int i = 1; i < s; ++i) {
            double acc = 0.0;
            for (int j = 0; j < i; ++j) acc += q[j] * mom[j + s - 1 - i];
            q[i] = -acc / mom[s - 1];
        }
        std::vector<double> p(static_cast<std::size_t>(s), 0.0);
        p[0] = 1.0;
        for (int i = 1; i < s; ++i) {
            double acc = q[i];
            for (int j = 1; j < i; ++j) acc -= p[j] * p[i - j];
            p[i] = 0.5 * acc;
        }
        Vector xp = Vector::Zero(n);
        {
            Vector v = top;
            for (int j = 0; j < s; ++j) {
                xp += p[j] * v;
                v = m * v;
            }
        }
        Matrix v = chain_matrix(m, xp, s);
        const Matrix coef = static_cast<double>(sign) * sip(s) * v.adjoint() * h;

        std::vector<ChainTop> next;
        for (Eigen::Index k = 0; k < rotated.cols(); ++k) {
            if (k == pick) continue;
            Vector t = rotated.col(k);
            next.push_back({t - v * (coef * t), s});
        }
        for (auto& c : shorter) next.push_back({c.top - v * (coef * c.top), c.length});
        out.push_back({RealBlock{lambda, s, sign}, std::move(v)});
        pending = std::move(next);
    }
}

// Upper chains live in coordinates of the generalized eigenspace at lambda
// (shift mu), lower chains in those at conj(lambda) (shift ml). Each space is
// H-neutral, so the form only enters through g, with [a, b] = b^* g a for an
// upper a and a lower b. Columns come back as (upper chain, lower chain).
struct PairColumns {
    Matrix upper;
    Matrix lower;
};

std::vector<PairColumns> normalize_pair(const Matrix& mu, const Matrix& ml, const Matrix& g,
                                        std::vector<ChainTop> upper, std::vector<ChainTop> lower, double tol) {
    const auto n = mu.rows();
    const double g_norm = frobenius(g);
    auto gather = [n](std::vector<ChainTop>& src, int s, std::vector<ChainTop>& rest) {
        std::vector<Vector> tops;
        for (auto& c : src) (c.length == s ? tops.push_back(c.top) : rest.push_back(c));
        Matrix x(n, static_cast<Eigen::Index>(tops.size()));
        for (std::size_t i = 0; i < tops.size(); ++i) x.col(static_cast<Eigen::Index>(i)) = tops[i];
        return x;
    };
    std::vector<PairColumns> out;
    while (!upper.empty()) {
        int s = 0;
        for (const auto& c : upper) s = std::max(s, c.length);
        std::vector<ChainTop> upper_rest;
        std::vector<ChainTop> lower_rest;
        Matrix x = gather(upper, s, upper_rest);
        Matrix y = gather(lower, s, lower_rest);
        if (x.cols() != y.cols())
            throw IllConditioned("Jordan structures at conjugate eigenvalues differ");
        Matrix mx = x;
        for (int i = 0; i < s - 1; ++i) mx = mu * mx;
        Matrix f = y.adjoint() * g * mx;
        Eigen::JacobiSVD<Matrix> svd(f, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const double sigma = svd.singularValues()(0);
        if (sigma <= tol * g_norm * frobenius(mx) * frobenius(y))
            throw IllConditioned("degenerate coupling between conjugate Jordan chains");
        const Matrix xr = x * svd.matrixV();
        const Matrix yr = y * svd.matrixU();
        const Vector xt = xr.col(0) / sigma;
        const Vector yt = yr.col(0);

        // Correct the upper chain only: x' = r(M) x with r(0) = 1 so that
        // [M^k x', y] = delta_{k, s-1}.
        std::vector<Complex> gm(static_cast<std::size_t>(s));
        {
            Vector v = xt;
            for (int j = 0; j < s; ++j) {
                gm[j] = yt.dot(g * v);
                v = mu * v;
            }
        }
        std::vector<Complex> r(static_cast<std::size_t>(s), Complex(0.0));
        r[0] = 1.0;
        for (int i = 1; i < s; ++i) {
            Complex acc = 0.0;
            for (int j = 0; j < i; ++j) acc += r[j] * gm[j + s - 1 - i];
            r[i] = -acc / gm[s - 1];
        }
        Vector xp = Vector::Zero(n);
        {
            Vector v = xt;
            for (int j = 0; j < s; ++j) {
                xp += r[j] * v;
                v = mu * v;
            }
        }
        PairColumns cols{chain_matrix(mu, xp, s), chain_matrix(ml, yt, s)};
        const Matrix q = sip(s);
        const Matrix coef_upper = cols.upper * q * cols.lower.adjoint() * g;
        const Matrix coef_lower = cols.lower * q * cols.upper.adjoint() * g.adjoint();

        std::vector<ChainTop> next_upper;
        std::vector<ChainTop> next_lower;
        for (Eigen::Index k = 1; k < xr.cols(); ++k) {
            next_upper.push_back({xr.col(k) - coef_upper * xr.col(k), s});
            next_lower.push_back({yr.col(k) - coef_lower * yr.col(k), s});
        }
        for (auto& c : upper_rest) next_upper.push_back({c.top - coef_upper * c.top, c.length});
        for (auto& c : lower_rest) next_lower.push_back({c.top - coef_lower * c.top, c.length});
        out.push_back(std::move(cols));
        upper = std::move(next_upper);
        lower = std::move(next_lower);
    }
    if (!lower.empty()) throw IllConditioned("Jordan structures at conjugate eigenvalues differ");
    return out;
}

struct BlockKey {
    Complex eigenvalue;
    int size;
    int sign;
};

BlockKey key_of(const Block& b) {
    if (const auto* r = std::get_if<RealBlock>(&b)) return {Complex(r->eigenvalue, 0.0), r->size, r->sign};
    const auto& p = std::get<PairBlock>(b);
    return {p.eigenvalue, p.size, 0};
}

bool block_less(const Block& a, const Block& b) {
    const auto ka = key_of(a);
    const auto kb = key_of(b);
    if (ka.eigenvalue != kb.eigenvalue) return eigen_less(ka.eigenvalue, kb.eigenvalue);
    if (ka.size != kb.size) return ka.size > kb.size;
    return ka.sign > kb.sign;
}

}  // namespace

Inertia inertia_of(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) throw InvalidInput("inertia_of: matrix must be square");
    const double norm = frobenius(m);
    if (frobenius(m - m.adjoint()) > tol * std::max(norm, 1.0))
        throw InvalidInput("inertia_of: matrix must be Hermitian");
    Inertia out;
    if (m.rows() == 0) return out;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) > tol * scale)
            ++out.plus;
        else if (ev(i) < -tol * scale)
            ++out.minus;
        else
            ++out.zero;
    }
    return out;
}

Eigenstructure eigenstructure_of(const Matrix& b, double tol) {
    if (b.rows() != b.cols() || b.rows() == 0) throw InvalidInput("eigenstructure_of: matrix must be square and nonempty");
    if (!is_finite(b)) throw InvalidInput("eigenstructure_of: entries must be finite");
    auto clusters = cluster_spectrum(b, tol);
    std::sort(clusters.begin(), clusters.end(),
              [](const Cluster& x, const Cluster& y) { return eigen_less(x.center, y.center); });
    Eigenstructure es;
    es.tol = tol;
    for (const auto& c : clusters) {
        auto st = nested_kernels(shifted(b, c.center), matrix_scale(b), tol, c.multiplicity);
        es.entries.push_back({c.center, sizes_from_staircase(st)});
    }
    return es;
}

CanonicalizationResult canonicalize(const MatrixPair& p, double tol) {
    require_selfadjoint_pair(p, tol);
    const Matrix& b = p.B;
    const Matrix& h = p.H;
    const auto n = b.rows();

    const double scale = matrix_scale(b);
    auto clusters = symmetrize(cluster_spectrum(b, tol), tol);
    std::vector<CanonBlock> blocks;
    for (const auto& c : clusters) {
        const EigenClass cls = classify(c.center, tol);
        if (cls == EigenClass::Nonreal && c.center.imag() < 0.0) continue;
        const Matrix m = shifted(b, c.center);
        const auto st = nested_kernels(m, scale, tol, c.multiplicity);
        if (!staircase_consistent(st, c.multiplicity))
            throw IllConditioned("rank staircase changed after conjugate symmetrization");

        // Chains are built inside generalized eigenspaces, where the
        // compressed shift is nearly nilpotent. Working in the full space lets
        // rounding outside them grow like powers of ||M|| during deflation.
        const Matrix& w = st.kernels.back();
        const Matrix mr = w.adjoint() * m * w;
        const auto str = nested_kernels(mr, scale, tol, c.multiplicity);
        if (str.dims != st.dims) throw IllConditioned("rank staircase changed on the generalized eigenspace");
        if (cls != EigenClass::Nonreal) {
            const std::size_t first = blocks.size();
            normalize_real(mr, w.adjoint() * h * w, c.center.real(), jordan_chains(mr, str), tol, blocks);
            for (std::size_t i = first; i < blocks.size(); ++i) blocks[i].columns = (w * blocks[i].columns).eval();
            continue;
        }
        const Matrix mc = shifted(b, std::conj(c.center));
        const auto stc = nested_kernels(mc, scale, tol, c.multiplicity);
        if (!staircase_consistent(stc, c.multiplicity))
            throw IllConditioned("rank staircase at conjugate eigenvalue is inconsistent");
        const Matrix& wc = stc.kernels.back();
        const Matrix mcr = wc.adjoint() * mc * wc;
        const auto strc = nested_kernels(mcr, scale, tol, c.multiplicity);
        if (strc.dims != stc.dims) throw IllConditioned("rank staircase changed on the generalized eigenspace");
        for (auto& pc : normalize_pair(mr, mcr, wc.adjoint() * h * w, jordan_chains(mr, str), jordan_chains(mcr, strc), tol)) {
            const auto s = pc.upper.cols();
            Matrix cols(n, 2 * s);
            cols << w * pc.upper, wc * pc.lower;
            blocks.push_back({PairBlock{c.center, static_cast<int>(s)}, std::move(cols)});
        }
    }
    std::stable_sort(blocks.begin(), blocks.end(),
                     [](const CanonBlock& x, const CanonBlock& y) { return block_less(x.block, y.block); });

    CanonicalizationResult out;
    out.S.resize(n, n);
    Eigen::Index col = 0;
    for (auto& blk : blocks) {
        out.descriptor.blocks.push_back(blk.block);
        out.S.middleCols(col, blk.columns.cols()) = blk.columns;
        col += blk.columns.cols();
    }
    if (col != n) throw IllConditioned("Jordan basis does not span the space");

    const MatrixPair canon = realize(out.descriptor);
    Eigen::PartialPivLU<Matrix> lu(out.S);
    out.r_J = relative(frobenius(lu.solve(b * out.S) - canon.B), frobenius(b));
    out.r_H = relative(frobenius(out.S.adjoint() * h * out.S - canon.H), frobenius(h));
    const double tol_out = 1e3 * tol * static_cast<double>(n);
    if (!(out.r_J <= tol_out) || !(out.r_H <= tol_out)) {
        std::ostringstream msg;
        msg << "canonical form residuals r_J=" << out.r_J << ", r_H=" << out.r_H << " exceed " << tol_out;
        throw IllConditioned(msg.str());
    }
    return out;
}

Descriptor normalized(const Descriptor& d) {
    Descriptor out = d;
    std::stable_sort(out.blocks.begin(), out.blocks.end(), block_less);
    return out;
}

bool same_canonical_form(const Descriptor& a, const Descriptor& b, double eig_tol) {
    if (a.blocks.size() != b.blocks.size()) return false;
    std::vector<bool> used(b.blocks.size(), false);
    for (const auto& x : a.blocks) {
        const auto kx = key_of(x);
        bool found = false;
        for (std::size_t j = 0; j < b.blocks.size() && !found; ++j) {
            if (used[j] || x.index() != b.blocks[j].index()) continue;
            const auto ky = key_of(b.blocks[j]);
            if (kx.size == ky.size && kx.sign == ky.sign && std::abs(kx.eigenvalue - ky.eigenvalue) <= eig_tol) {
                used[j] = true;
                found = true;
            }
        }
        if (!found) return false;
    }
    return true;
}

}  // namespace hroot
