#include "doctest.h"

#include <algorithm>

#include "hroot/canonical.hpp"
#include "hroot/errors.hpp"
#include "support.hpp"

using namespace hroot;

namespace {

int count_sign(const Descriptor& d, int size, int sign) {
    int n = 0;
    for (const auto& b : d.blocks)
        if (const auto* r = std::get_if<RealBlock>(&b); r && r->size == size && r->sign == sign) ++n;
    return n;
}

// Inertia of eps * Q_k is (ceil(k/2), floor(k/2)) for eps = +1, swapped for -1;
// Q_{2k} contributes (k, k).
Inertia expected_inertia(const Descriptor& d) {
    Inertia out;
    for (const auto& b : d.blocks) {
        if (const auto* r = std::get_if<RealBlock>(&b)) {
            const int hi = (r->size + 1) / 2;
            const int lo = r->size / 2;
            out.plus += r->sign > 0 ? hi : lo;
            out.minus += r->sign > 0 ? lo : hi;
        } else {
            const int k = std::get<PairBlock>(b).size;
            out.plus += k;
            out.minus += k;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("inertia of sip matrices and zero") {
    CHECK(inertia_of(sip(2)) == Inertia{1, 1, 0});
    CHECK(inertia_of(sip(3)) == Inertia{2, 1, 0});
    CHECK(inertia_of(Matrix::Zero(2, 2)) == Inertia{0, 0, 2});
    for (int k = 1; k <= 9; ++k) CHECK(inertia_of(sip(k)) == Inertia{(k + 1) / 2, k / 2, 0});
    Matrix a = Matrix::Zero(2, 2);
    a(0, 1) = 1.0;
    CHECK_THROWS_AS(inertia_of(a), InvalidInput);
}

TEST_CASE("eigenstructure recovers Segre characteristics") {
    auto es = eigenstructure_of(jordan_block(4, 0.0));
    REQUIRE(es.entries.size() == 1);
    CHECK(es.entries[0].eigenvalue == Complex(0.0));
    CHECK(es.entries[0].sizes == std::vector<int>{4});

    es = eigenstructure_of(direct_sum(jordan_block(3, 0.0), jordan_block(1, 0.0)));
    REQUIRE(es.entries.size() == 1);
    CHECK(es.entries[0].sizes == std::vector<int>{3, 1});

    es = eigenstructure_of(direct_sum(jordan_block(2, Complex(0, 1)), jordan_block(2, Complex(0, -1))));
    REQUIRE(es.entries.size() == 2);
    CHECK(es.entries[0].eigenvalue == Complex(0, -1));
    CHECK(es.entries[1].eigenvalue == Complex(0, 1));
    CHECK(es.entries[0].sizes == std::vector<int>{2});
    CHECK(es.entries[1].sizes == std::vector<int>{2});
}

TEST_CASE("eigenstructure sizes add up and pair up on scrambled input") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 40; ++i) {
        const auto d = testing::random_mixed_descriptor(rng, {});
        const auto es = eigenstructure_of(scramble(d, rng(), 10.0).pair.B);
        int total = 0;
        for (const auto& e : es.entries) {
            for (int s : e.sizes) total += s;
            if (e.eigenvalue.imag() != 0.0) {
                auto twin = std::find_if(es.entries.begin(), es.entries.end(), [&](const SegreCharacteristic& o) {
                    return std::abs(o.eigenvalue - std::conj(e.eigenvalue)) <= 1e-8;
                });
                REQUIRE(twin != es.entries.end());
                CHECK(twin->sizes == e.sizes);
            }
        }
        CHECK(total == d.order());
        for (std::size_t a = 0; a < es.entries.size(); ++a)
            for (std::size_t b = a + 1; b < es.entries.size(); ++b)
                CHECK(std::abs(es.entries[a].eigenvalue - es.entries[b].eigenvalue) > 2 * es.tol);
    }
}

TEST_CASE("canonical input comes back unchanged") {
    const Descriptor d{{RealBlock{-1.0, 3, 1}}};
    const auto c = canonicalize(realize(d));
    CHECK(c.descriptor == d);
    CHECK(c.r_J <= 1e-14);
    CHECK(c.r_H <= 1e-14);
}

TEST_CASE("canonicalize is idempotent up to ordering") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 100; ++i) {
        const auto d = testing::random_mixed_descriptor(rng, {});
        const auto c = canonicalize(realize(d));
        INFO(testing::to_string(d));
        CHECK(c.descriptor == normalized(d));
        CHECK(c.r_J <= 1e-12);
        CHECK(c.r_H <= 1e-12);
    }
}

TEST_CASE("power of a nilpotent block splits its sign") {
    const int n = 15;
    const int m = 4;
    const auto c = canonicalize({matrix_power(jordan_block(n, 0.0), m), sip(n)});
    CHECK(segre_at(c.descriptor, 0.0).sizes == std::vector<int>{4, 4, 4, 3});
    CHECK(count_sign(c.descriptor, 4, 1) == 2);
    CHECK(count_sign(c.descriptor, 3, 1) == 1);
}

TEST_CASE("scrambled pairs round-trip with residuals and inertia") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 60; ++i) {
        const auto d = testing::random_mixed_descriptor(rng, {});
        const auto s = scramble(d, rng(), 10.0);
        const auto c = canonicalize(s.pair);
        INFO(testing::to_string(d));
        CHECK(same_canonical_form(c.descriptor, d, 1e-8));
        CHECK(c.descriptor == normalized(c.descriptor));
        const double tol_out = 1e3 * kDefaultTol * d.order();
        CHECK(c.r_J <= tol_out);
        CHECK(c.r_H <= tol_out);
        CHECK(inertia_of(s.pair.H) == expected_inertia(c.descriptor));
        const auto canon = realize(c.descriptor);
        CHECK(frobenius(c.S.adjoint() * s.pair.H * c.S - canon.H) <= tol_out * frobenius(s.pair.H));
    }
}

TEST_CASE("normalized ordering and comparison") {
    const Descriptor d{{RealBlock{1.0, 1, -1}, PairBlock{{0.0, 1.0}, 1}, RealBlock{1.0, 1, 1}, RealBlock{1.0, 2, -1},
                        RealBlock{-2.0, 1, 1}}};
    const Descriptor want{{RealBlock{-2.0, 1, 1}, PairBlock{{0.0, 1.0}, 1}, RealBlock{1.0, 2, -1}, RealBlock{1.0, 1, 1},
                           RealBlock{1.0, 1, -1}}};
    CHECK(normalized(d) == want);
    CHECK(same_canonical_form(d, want, 0.0));
    auto off = want;
    std::get<RealBlock>(off.blocks[0]).eigenvalue = -2.0 + 1e-6;
    CHECK(same_canonical_form(d, off, 1e-5));
    CHECK(!same_canonical_form(d, off, 1e-8));
    std::get<RealBlock>(off.blocks[0]).sign = -1;
    CHECK(!same_canonical_form(d, off, 1e-5));
}

TEST_CASE("eigenvalues closer than the rank threshold merge into one") {
    Matrix b = Matrix::Zero(2, 2);
    b(0, 0) = 1.0;
    b(1, 1) = 1.0 + 1e-10;
    const auto es = eigenstructure_of(b);
    REQUIRE(es.entries.size() == 1);
    CHECK(es.entries[0].sizes == std::vector<int>{1, 1});
    const auto r = canonicalize({b, Matrix::Identity(2, 2)});
    CHECK(r.descriptor.blocks.size() == 2);
    CHECK(r.r_J <= 1e-9);
}

TEST_CASE("rank decisions below working precision are reported") {
    Matrix b(2, 2);
    b << 1.0, 3.0, 3.0, 2.0;
    CHECK_THROWS_AS(eigenstructure_of(b, 1e-20), IllConditioned);
    CHECK_THROWS_AS(canonicalize({b, Matrix::Identity(2, 2)}, 1e-20), IllConditioned);
}

TEST_CASE("malformed pairs are rejected") {
    Matrix h = sip(2);
    h(0, 0) = Complex(0.0, 1.0);
    CHECK_THROWS_AS(canonicalize({jordan_block(2, 1.0), h}), InvalidInput);
    CHECK_THROWS_AS(canonicalize({jordan_block(2, 1.0), Matrix::Identity(2, 2)}), InvalidInput);
}
