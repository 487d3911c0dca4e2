#include "evoreg/det_solver.hpp"
#include "evoreg/holder.hpp"

#include <doctest.h>

#include <cmath>

using namespace evoreg;

namespace {

std::vector<double> positive_nodes(std::size_t K, double r) {
    auto n = GradedMesh(1.0, K, r).nodes();
    n.erase(n.begin());
    return n;
}

double brute_holder_term(double beta, double sigma, const std::function<double(double)>& g,
                         const std::vector<double>& t) {
    double best = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j)
        for (std::size_t i = 0; i < j; ++i)
            best = std::max(best, std::pow(t[i], 1 - beta + sigma) * std::abs(g(t[j]) - g(t[i])) /
                                      std::pow(t[j] - t[i], sigma));
    return best;
}

}  // namespace

TEST_CASE("constant function") {
    const SpectralVector c{3.0, 4.0};
    const auto traj = sample_function([&](double) { return c; }, positive_nodes(100, 2.0), 1.0);
    const auto h = weighted_holder_norm(traj, 1.0, 0.4);
    CHECK(h.sup_term == doctest::Approx(5.0));
    CHECK(h.holder_term == 0.0);
    CHECK(h.norm == doctest::Approx(5.0));
}

TEST_CASE("pure power matches a finer brute-force grid") {
    const double beta = 0.7, sigma = 0.3;
    const auto g = [&](double t) { return std::pow(t, beta - 1); };
    const auto traj = sample_function([&](double t) { return SpectralVector{2.0 * g(t)}; },
                                      positive_nodes(400, 2.0), 1.0);
    const auto h = weighted_holder_norm(traj, beta, sigma);
    CHECK(h.sup_term == doctest::Approx(2.0));
    const double oracle = 2.0 * brute_holder_term(beta, sigma, g, positive_nodes(4000, 2.0));
    CHECK(h.holder_term == doctest::Approx(oracle).epsilon(0.01));

    // The growth bound is attained at every node.
    const auto checks = pointwise_bounds_check(traj, h);
    CHECK(checks[0].name == "growth");
    CHECK(checks[0].worst_ratio == doctest::Approx(h.sup_term / h.norm));
}

TEST_CASE("linear function, beta = 1, sigma = 1/2") {
    std::vector<double> t;
    for (int k = 1; k <= 400; ++k) t.push_back(k / 400.0);
    const SpectralVector v{1.0, 2.0, 2.0};
    const auto traj = sample_function([&](double s) { return s * v; }, t, 1.0);
    const auto h = weighted_holder_norm(traj, 1.0, 0.5);
    CHECK(h.holder_term == doctest::Approx(0.5 * 3.0).epsilon(1e-6));
    CHECK(h.sup_term == doctest::Approx(3.0));
}

TEST_CASE("homogeneity and batched evaluation") {
    const auto m = make_member(0.8, 0.2, "sine", SpectralVector{1.0, 0.5}, 1.0);
    const auto nodes = positive_nodes(200, 2.0);
    const auto a = sample_function(m, nodes, 1.0);
    const auto b = sample_function([&](double t) { return -2.5 * m(t); }, nodes, 1.0);
    const auto ha = weighted_holder_norm(a, 0.8, 0.2);
    CHECK(weighted_holder_norm(b, 0.8, 0.2).norm == doctest::Approx(2.5 * ha.norm).epsilon(1e-14));
    const auto batch = weighted_holder_norms(a, {{0.8, 0.2}, {0.9, 0.1}});
    CHECK(batch[0].norm == ha.norm);
    CHECK(batch[1].norm == weighted_holder_norm(a, 0.9, 0.1).norm);
}

TEST_CASE("pointwise bounds") {
    const auto m = make_member(0.8, 0.2, "cusp", SpectralVector{1.0, -1.0}, 1.0);
    const auto traj = sample_function(m, positive_nodes(200, 2.0), 1.0);
    auto h = weighted_holder_norm(traj, 0.8, 0.2);
    for (const auto& c : pointwise_bounds_check(traj, h)) CHECK(c.passed);
    h.norm *= 0.5;
    bool any_fail = false;
    for (const auto& c : pointwise_bounds_check(traj, h)) any_fail = any_fail || !c.passed;
    CHECK(any_fail);
}

TEST_CASE("members of the weighted space") {
    const auto p = make_member(1.0, 0.3, "power", SpectralVector{1.0}, 1.0);
    CHECK_FALSE(p.degenerate_replaced());
    CHECK(p(0.5)[0] == doctest::Approx(std::pow(0.5, 0.3)));
    const auto coarse = weighted_holder_norm(sample_function(p, positive_nodes(400, 2.0), 1.0), 1.0, 0.3);
    const auto fine = weighted_holder_norm(sample_function(p, positive_nodes(800, 2.0), 1.0), 1.0, 0.3);
    CHECK(std::abs(fine.norm - coarse.norm) <= 0.02 * coarse.norm);

    const auto d = make_member(0.8, 0.2, "power", SpectralVector{1.0}, 1.0);
    CHECK(d.degenerate_replaced());
    CHECK(d.power_exponent() == doctest::Approx(0.4));

    for (const char* shape : {"power", "cusp", "sine"}) {
        const auto mf = make_member(0.8, 0.2, shape, SpectralVector{1.0, 0.25}, 1.0);
        const auto h = weighted_holder_norm(sample_function(mf, positive_nodes(400, 2.0), 1.0), 0.8, 0.2);
        CHECK(h.modulus_envelope[1] < 0.1 * h.modulus_envelope.back());
        CHECK(h.limit_exists);
        CHECK(h.limit_at_zero.norm() < 0.2);
    }
    CHECK_THROWS(make_member(0.8, 0.9, "power", SpectralVector{1.0}, 1.0));
    CHECK_THROWS(parse_member_shape("square"));
}

TEST_CASE("limit detection") {
    // t^(1-beta) f(t) = 1 + sin(1/t) oscillates and has no limit.
    const auto f = [](double t) { return SpectralVector{std::pow(t, -0.2) * (1 + std::sin(1 / t))}; };
    const auto h = weighted_holder_norm(sample_function(f, positive_nodes(400, 2.0), 1.0), 0.8, 0.2);
    CHECK_FALSE(h.limit_exists);
}

TEST_CASE("embedding factor") {
    CHECK(embedding_factor(0.6, 1.0, 0.3, 1.0) == doctest::Approx(1.0));
    CHECK(embedding_factor(0.5, 0.9, 0.3, 4.0) == doctest::Approx(1.7411).epsilon(1e-4));
    const auto m = make_member(1.0, 0.3, "sine", SpectralVector{1.0}, 1.0);
    const auto traj = sample_function(m, positive_nodes(300, 2.0), 1.0);
    CHECK(weighted_holder_norm(traj, 0.6, 0.3).norm <= weighted_holder_norm(traj, 1.0, 0.3).norm * (1 + 1e-12));
    const auto c = sample_function([](double) { return SpectralVector{2.0}; }, positive_nodes(50, 2.0), 1.0);
    CHECK(weighted_holder_norm(c, 0.6, 0.3).norm == doctest::Approx(weighted_holder_norm(c, 1.0, 0.3).norm));
}

TEST_CASE("trajectory validation") {
    Trajectory t;
    t.times = {0.2, 0.1};
    t.values = {SpectralVector{1.0}, SpectralVector{1.0}};
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    t.times = {0.1, 0.2};
    t.values[1][0] = NAN;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    CHECK_THROWS(weighted_holder_norm(sample_function([](double) { return SpectralVector{1.0}; }, {0.5, 1.0}, 1.0),
                                      0.5, 0.6));
}
