#include <doctest.h>

#include "mvlag/errors.hpp"
#include "mvlag/multivariate.hpp"
#include "mvlag/univariate.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace mvlag;
using mv::EvalPoint;
using mv::MultiIndex;

namespace {

ExactScalar q(long p, long d = 1) { return make_rational(p, d); }

ExactScalar random_rational(std::mt19937_64& rng, long lo_num, long hi_num, long max_den) {
    std::uniform_int_distribution<long> den(1, max_den);
    const long d = den(rng);
    std::uniform_int_distribution<long> num(lo_num * d, hi_num * d);
    return make_rational(num(rng), d);
}

}  // namespace

// ---------------------------------------------------------------- oracles

TEST_CASE("oracle: phi2k") {
    const std::vector<ExactScalar> b{-1, -1};
    CHECK(mv::phi2k(b, 2, EvalPoint{2, 2}) == q(-1, 3));
    const std::vector<ExactScalar> zeros{0, 0, 0};
    CHECK(mv::phi2k(zeros, q(7, 3), EvalPoint{5, 6, 7}) == 1);
    const std::vector<ExactScalar> halves{q(1, 2), q(1, 2)};
    const ExactScalar truncated = mv::phi2k(halves, 2, EvalPoint{q(1, 2), q(1, 2)}, 60);
    CHECK(to_double(truncated) <= 2 * (std::exp(0.5) - 1));
    CHECK_THROWS_AS(mv::phi2k(halves, 2, EvalPoint{q(1, 2), q(1, 2)}), MissingTruncationError);
    const std::vector<ExactScalar> poly{-3, -2};
    CHECK_THROWS_AS(mv::phi2k(poly, -2, EvalPoint{1, 1}), PoleError);
    CHECK_NOTHROW(mv::phi2k(std::vector<ExactScalar>{-1, -1}, -2, EvalPoint{1, 1}));
}

TEST_CASE("oracle: laguerre_mv") {
    CHECK(mv::laguerre_mv(MultiIndex{0, 0, 0}, q(3, 7), EvalPoint{1, 2, 3}) == 1);
    CHECK(mv::laguerre_mv(MultiIndex{1, 1}, 1, EvalPoint{2, 2}) == -2);
    for (unsigned n = 0; n <= 6; ++n)
        CHECK(mv::laguerre_mv(MultiIndex{n, 0, 0}, q(2, 3), EvalPoint{q(5, 2), 9, 11}) ==
              uv::laguerre_uv({n, q(2, 3), q(5, 2)}));
    const std::vector<double> xd{2.0, 2.0};
    CHECK(mv::laguerre_mv(MultiIndex{1, 1}, 1.0, xd) == doctest::Approx(-2.0));
}

TEST_CASE("oracle: gf_expansion_coeff") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 10; ++t) {
        const ExactScalar a = random_rational(rng, -1, 5, 17);
        const ExactScalar x1 = random_rational(rng, 0, 10, 13);
        const ExactScalar x2 = random_rational(rng, 0, 10, 13);
        const ExactScalar expected = (a + 1) * (a + 2) - (a + 2) * (x1 + x2) + x1 * x2;
        CHECK(mv::gf_expansion_coeff(MultiIndex{1, 1}, a, EvalPoint{x1, x2}) == expected);
    }
    CHECK(mv::gf_expansion_coeff(MultiIndex{0, 0}, 4, EvalPoint{1, 1}) == 1);
}

TEST_CASE("oracle: gf_truncated_series") {
    const auto s = mv::gf_truncated_series(0, EvalPoint{1, 1}, 4);
    CHECK(s.coefficient(MultiIndex{0, 0}) == 1);
    CHECK(s.coefficient(MultiIndex{1, 1}) == -1);
    CHECK_THROWS_AS(mv::gf_truncated_series(0, EvalPoint{1, 1}, 13), CapExceededError);
}

TEST_CASE("oracle: diagonal_sequence") {
    const auto d = mv::diagonal_sequence(0, EvalPoint{1, 1}, 1);
    REQUIRE(d.size() == 2);
    CHECK(d[0] == 1);
    CHECK(d[1] == -1);
    const auto at_zero = mv::diagonal_sequence(0, EvalPoint{0, 0}, 10);
    for (unsigned n = 0; n <= 10; ++n) {
        const ExactScalar fn = ExactScalar(factorial(n));
        CHECK(at_zero[n] == ExactScalar(factorial(2 * n)) / (fn * fn));
    }
    CHECK_THROWS_AS(mv::diagonal_sequence(0, EvalPoint{1, 1}, 121), CapExceededError);
}

TEST_CASE("oracle: panda_reduce_check") {
    const std::vector<ExactScalar> halves{q(1, 2), q(1, 2)};
    const auto one = [](unsigned) { return ExactScalar(1); };
    const auto r = mv::panda_reduce_check(halves, one, 1, 2);
    CHECK(r.equal);
    REQUIRE(r.lhs.size() == 3);
    CHECK(r.lhs[0] == 1);
    CHECK(r.rhs[0] == 1);
    CHECK(r.lhs[2] == 1);
    CHECK(r.rhs[2] == 1);

    std::mt19937_64 rng(17);
    const std::vector<ExactScalar> thirds(3, q(1, 3));
    for (int t = 0; t < 3; ++t) {
        const ExactScalar alpha = random_rational(rng, 0, 5, 11) + q(1, 100);
        const auto rule = [alpha](unsigned j) -> ExactScalar { return 1 / pochhammer(alpha + 1, j); };
        CHECK(mv::panda_reduce_check(thirds, rule, random_rational(rng, 0, 4, 9), 10).equal);
    }
}

TEST_CASE("oracle: chain_check") {
    const std::vector<double> zero{0.0, 0.0};
    const auto at_zero = mv::chain_check(2, 1.0, zero, mv::ChainVariant::theorem1);
    CHECK(at_zero.phi2 == 1.0);
    CHECK(at_zero.f11 == 1.0);
    CHECK(at_zero.exp == 1.0);
    CHECK(at_zero.ascending);

    const std::vector<double> ones{1.0, 1.0};
    const auto c = mv::chain_check(2, 1.0, ones, mv::ChainVariant::theorem1);
    CHECK(c.ascending);
    // equal coordinates with sum b = a collapse Phi2 to 1F1
    CHECK(c.phi2 == doctest::Approx(c.f11).epsilon(1e-13));
    CHECK(c.f11 == doctest::Approx(2 * (std::exp(0.5) - 1)).epsilon(1e-13));
    CHECK(c.exp == doctest::Approx(std::exp(0.5)).epsilon(1e-15));

    const std::vector<double> skew{2.0, 0.0};
    const auto d = mv::chain_check(2, 1.0, skew, mv::ChainVariant::theorem1);
    CHECK(d.ascending);
    CHECK(d.phi2 < d.f11);
    CHECK(d.f11 == doctest::Approx(std::exp(1.0) - 1).epsilon(1e-13));
    CHECK(d.f11 < d.exp);
    CHECK_THROWS_AS(mv::chain_check(2, 0.0, ones, mv::ChainVariant::theorem1), DomainError);
    CHECK_THROWS_AS(mv::chain_check(2, -0.5, ones, mv::ChainVariant::theorem2), DomainError);
}

// ---------------------------------------------------------------- properties

TEST_CASE("multi-index enumeration is lexicographic and complete") {
    const auto box = mv::indices_in_box(2, 2);
    REQUIRE(box.size() == 9);
    CHECK(std::is_sorted(box.begin(), box.end()));
    CHECK(box.front() == MultiIndex{0, 0});
    CHECK(box.back() == MultiIndex{2, 2});
    const auto simplex = mv::indices_up_to_total(3, 4);
    CHECK(simplex.size() == 35);  // C(4+3, 3)
    CHECK(std::is_sorted(simplex.begin(), simplex.end()));
    for (const auto& n : simplex)
        CHECK(n.total() <= 4);
    CHECK(MultiIndex::constant(3, 2) == MultiIndex{2, 2, 2});
    CHECK(MultiIndex{1, 4}.total() == 5);
    CHECK(EvalPoint{1, q(-7, 2), 3}.max_norm() == q(7, 2));
    CHECK_FALSE(EvalPoint{1, q(-7, 2)}.nonnegative());
}

TEST_CASE("triple oracle agreement, k <= 3, |n| <= 6") {
    std::mt19937_64 rng(29);
    for (std::size_t k = 1; k <= 3; ++k) {
        for (int t = 0; t < 4; ++t) {
            const ExactScalar alpha = random_rational(rng, -1, 5, 23) + q(1, 1000);
            std::vector<ExactScalar> coords;
            for (std::size_t j = 0; j < k; ++j)
                coords.push_back(random_rational(rng, 0, 10, 19));
            const EvalPoint x(coords);
            const auto series = mv::gf_truncated_series(alpha, x, 6);
            for (const auto& n : mv::indices_up_to_total(k, 6)) {
                const ExactScalar a = mv::laguerre_mv(n, alpha, x);
                CHECK(a == mv::gf_expansion_coeff(n, alpha, x));
                CHECK(a == series.coefficient(n));
            }
        }
    }
}

TEST_CASE("permutation symmetry") {
    const ExactScalar alpha = q(3, 4);
    const EvalPoint x{q(1, 2), 3, q(7, 3)};
    const MultiIndex n{2, 0, 3};
    std::vector<std::size_t> perm{0, 1, 2};
    const ExactScalar reference = mv::laguerre_mv(n, alpha, x);
    do {
        std::vector<unsigned> pn;
        std::vector<ExactScalar> px;
        for (std::size_t i : perm) {
            pn.push_back(n[i]);
            px.push_back(x[i]);
        }
        CHECK(mv::laguerre_mv(MultiIndex(pn), alpha, EvalPoint(px)) == reference);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("value at the origin is (alpha+1)_{|n|} / prod n_j!") {
    for (const auto& n : mv::indices_up_to_total(3, 7)) {
        ExactScalar denom = 1;
        for (unsigned nj : n.entries())
            denom *= ExactScalar(factorial(nj));
        CHECK(mv::laguerre_mv(n, q(2, 5), EvalPoint{0, 0, 0}) == pochhammer(q(7, 5), n.total()) / denom);
    }
}

TEST_CASE("diagonal entries match laguerre_mv") {
    const ExactScalar alpha = q(1, 3);
    const EvalPoint x{q(1, 2), 2, 5};
    const auto d = mv::diagonal_sequence(alpha, x, 5);
    for (unsigned n = 0; n <= 5; ++n)
        CHECK(d[n] == mv::laguerre_mv(MultiIndex::constant(3, n), alpha, x));
}

TEST_CASE("float paths agree with the exact path to 10 digits") {
    std::mt19937_64 rng(41);
    for (std::size_t k = 1; k <= 3; ++k) {
        for (int t = 0; t < 5; ++t) {
            const ExactScalar alpha = random_rational(rng, 0, 5, 8);
            std::vector<ExactScalar> coords;
            for (std::size_t j = 0; j < k; ++j)
                coords.push_back(random_rational(rng, 0, 6, 4));
            const EvalPoint x(coords);
            const std::vector<double> xd = x.to_double();
            for (const auto& n : mv::indices_up_to_total(k, 6)) {
                const double exact = to_double(mv::laguerre_mv(n, alpha, x));
                const double fp = mv::laguerre_mv(n, to_double(alpha), xd);
                const mv::FloatMvEvaluator eval(n, alpha);
                const auto r = eval(xd);
                // The evaluator's error bound must cover the true error.
                CHECK(std::fabs(r.value - exact) <= r.error_bound + 1e-300);
                const double scale = std::max({1.0, std::fabs(exact), r.error_bound * 1e6});
                CHECK(std::fabs(fp - exact) <= 1e-10 * scale);
            }
        }
    }
}

TEST_CASE("FloatMvEvaluator handles negative-integer alpha") {
    const mv::FloatMvEvaluator eval(MultiIndex{4}, -2);
    const std::vector<double> x{1.5};
    const double exact = to_double(uv::laguerre_uv_recurrence({4, -2, q(3, 2)}));
    const auto r = eval(x);
    CHECK(std::fabs(r.value - exact) <= r.error_bound);
}

TEST_CASE("majorization chain on a grid, both variants") {
    for (std::size_t k = 1; k <= 3; ++k) {
        for (double alpha : {0.1, 0.5, 1.0, 2.0, 5.0}) {
            for (double x1 : {0.0, 2.5, 10.0}) {
                for (double x2 : {0.0, 7.0}) {
                    std::vector<double> x(k, 1.0);
                    x[0] = x1;
                    if (k > 1)
                        x[1] = x2;
                    CHECK(mv::chain_check(k, alpha, x, mv::ChainVariant::theorem1).ascending);
                    CHECK(mv::chain_check(k, alpha - 0.45, x, mv::ChainVariant::theorem2).ascending);
                }
            }
        }
    }
}

TEST_CASE("TruncatedMvSeries algebra") {
    const std::vector<ExactScalar> c{1, 1};
    const auto s = mv::TruncatedMvSeries::linear(3, c);
    const auto sq = s * s;
    CHECK(sq.coefficient(MultiIndex{1, 1}) == 2);
    CHECK(sq.coefficient(MultiIndex{2, 0}) == 1);
    const auto cube = sq * s;
    CHECK(cube.coefficient(MultiIndex{2, 1}) == 3);
    CHECK((cube * s).terms().empty());  // degree 4 > cap
    const std::vector<ExactScalar> geometric{1, 1, 1, 1};
    const auto g = s.compose(geometric);  // 1/(1 - z1 - z2)
    CHECK(g.coefficient(MultiIndex{1, 2}) == 3);
    CHECK((g + mv::TruncatedMvSeries::constant(2, 3, -1)).coefficient(MultiIndex{0, 0}) == 0);
}
