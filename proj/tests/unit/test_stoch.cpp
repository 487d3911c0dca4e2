#include "evoreg/rng.hpp"
#include "evoreg/stoch_solver.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace evoreg;

TEST_CASE("philox known answers") {
    const auto zero = Philox4x32::block({0, 0, 0, 0}, {0, 0});
    CHECK(zero == Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    const auto ones = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                        {0xffffffffu, 0xffffffffu});
    CHECK(ones == Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    const auto pi = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                      {0xa4093822u, 0x299f31d0u});
    CHECK(pi == Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("gaussian substreams") {
    const GaussianStream a(42, 0, 0), b(42, 0, 1), c(42, 1, 0);
    CHECK(a.draw_pair(7) == GaussianStream(42, 0, 0).draw_pair(7));
    CHECK(a.draw_pair(7) != b.draw_pair(7));
    CHECK(a.draw_pair(7) != c.draw_pair(7));
    double m = 0, v = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const auto [x, y] = a.draw_pair(i);
        m += x + y;
        v += x * x + y * y;
    }
    m /= 2 * n;
    v = v / (2 * n) - m * m;
    CHECK(std::abs(m) < 4.0 / std::sqrt(2.0 * n));
    CHECK(std::abs(v - 1.0) < 0.02);
    for (std::uint32_t w : {0u, 1u, 0xffffffffu}) {
        const double u = uniform_open_closed(w, w);
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
    }
}

TEST_CASE("noise gate") {
    const auto op = build_cable_operator(std::numbers::pi, 4);
    CHECK(smooth_decay_noise(op, 0.8, 0.2).gate().ok);
    CHECK_FALSE(smooth_decay_noise(op, 0.8, 0.35).gate().ok);
    CHECK_FALSE(walsh_white_noise(4).gate().ok);
}

TEST_CASE("sampler") {
    const auto op = build_cable_operator(std::numbers::pi, 3);
    const GradedMesh mesh(1.0, 8, 1.0);
    const auto zero = sample_stochastic_convolution(op, constant_noise(3, 0.0, 0.8, 0.2), mesh, 1, 0);
    for (const auto& v : zero.path.values) CHECK(v.norm() == 0.0);

    // Var X_0(1) = (1 - e^-2)/2 and independent increments over [0, 1/2] and [1/2, 1].
    const auto noise = constant_noise(3, 1.0, 0.8, 0.2);
    const GradedMesh two(1.0, 2, 1.0);
    const int R = 10000;
    double s2 = 0, s4 = 0, cxy = 0, cx2 = 0, cy2 = 0;
    for (int r = 0; r < R; ++r) {
        const auto s = sample_stochastic_convolution(op, noise, two, 9, std::uint32_t(r), {true});
        const double x = s.path.values[2][0];
        s2 += x * x;
        s4 += x * x * x * x;
        const double d1 = s.increments[0][0], d2 = s.increments[1][0];
        cxy += d1 * d2;
        cx2 += d1 * d1;
        cy2 += d2 * d2;
    }
    const double var = s2 / R;
    const double se = std::sqrt((s4 / R - var * var) / R);
    CHECK(std::abs(var - (1 - std::exp(-2.0)) / 2) <= 3 * se);
    const double cov = cxy / R;
    const double cov_se = std::sqrt(cx2 / R * cy2 / R / R);
    CHECK(std::abs(cov) <= 3 * cov_se);
    CHECK(cx2 / R == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("isometry oracle") {
    const auto op = build_cable_operator(std::numbers::pi, 3);
    CHECK(ito_isometry_oracle(op, constant_noise(3, 1.0, 0.8, 0.2), 1.0) == doctest::Approx(0.777748).epsilon(1e-6));
    CHECK(ito_isometry_oracle(op, constant_noise(3, 1.0, 0.8, 0.2), 1e-12) < 1e-11);
    const auto inv = inverse_eigen_noise(op, 0.8, 0.2);
    double lim = 0.0;
    for (double l : op.eigenvalues()) lim += 1.0 / (l * l) / (2 * l);
    CHECK(ito_isometry_oracle(op, inv, 50.0) == doctest::Approx(lim));
    // Power-in-time and generic quadrature paths agree.
    const auto sd = smooth_decay_noise(op, 0.8, 0.2);
    NoiseSpec generic = sd;
    generic.power_in_time.reset();
    CHECK(ito_isometry_oracle(op, generic, 1.0) == doctest::Approx(ito_isometry_oracle(op, sd, 1.0)).epsilon(1e-8));
}

TEST_CASE("monte carlo moments") {
    const auto op = build_cable_operator(std::numbers::pi, 3);
    const auto noise = constant_noise(3, 1.0, 0.8, 0.2);
    const GradedMesh mesh(1.0, 16, 1.0);
    MCOptions mc;
    mc.replicas = 10000;
    mc.seed = 17;
    const auto m = mc_expected_norms(op, &noise, nullptr, mesh, mc);
    const auto& e = m.norm_sq.back();
    CHECK(std::abs(e.mean - 0.777748) <= 3 * e.std_error);
    for (std::size_t k = 0; k < m.times.size(); ++k)
        CHECK(m.norm[k].mean <= std::sqrt(m.norm_sq[k].mean) + 1e-15);

    MCOptions one = mc, many = mc;
    one.replicas = many.replicas = 500;
    one.workers = 1;
    many.workers = 7;
    const auto a = mc_expected_norms(op, &noise, nullptr, mesh, one);
    const auto b = mc_expected_norms(op, &noise, nullptr, mesh, many);
    for (std::size_t k = 0; k < a.times.size(); ++k) {
        CHECK(a.norm_sq[k].mean == b.norm_sq[k].mean);
        CHECK(a.norm[k].std_error == b.norm[k].std_error);
    }

    Trajectory det;
    det.horizon = 1.0;
    det.times = mesh.nodes();
    for (double t : det.times) det.values.push_back(semigroup_apply(op, t, SpectralVector{1.0, 0.0, 0.5}));
    const auto d = mc_expected_norms(op, nullptr, &det, mesh, one);
    for (std::size_t k = 0; k < d.times.size(); ++k) {
        CHECK(d.norm[k].mean == doctest::Approx(det.values[k].norm()));
        CHECK(d.norm[k].std_error == 0.0);
    }
    MCOptions few = mc;
    few.replicas = 50;
    CHECK_THROWS(mc_expected_norms(op, &noise, nullptr, mesh, few));
    MCOptions gated = one;
    gated.check_alpha1 = true;
    gated.alpha1 = 0.4;
    const auto sd = smooth_decay_noise(op, 0.8, 0.2);
    CHECK_THROWS(mc_expected_norms(op, &sd, nullptr, mesh, gated));
}

TEST_CASE("holder exponent estimator") {
    std::vector<double> t;
    for (int k = 0; k <= 256; ++k) t.push_back(0.1 + 0.9 * k / 256.0);
    Trajectory lin;
    lin.times = t;
    lin.horizon = 1.0;
    for (double s : t) lin.values.push_back(SpectralVector{s, 2 * s});
    const auto est = estimate_holder_exponent(std::vector<Trajectory>(10, lin), 0.1, 1.0);
    CHECK(est.exponent >= 0.95);
    CHECK(est.band_lo <= est.exponent + 1e-12);
    CHECK(est.band_hi >= est.exponent - 1e-12);
    CHECK_THROWS(estimate_holder_exponent(std::vector<Trajectory>(9, lin), 0.1, 1.0));
    Trajectory graded = lin;
    for (std::size_t k = 0; k < graded.times.size(); ++k) graded.times[k] = 0.1 + 0.9 * std::pow(k / 256.0, 2);
    CHECK_THROWS(estimate_holder_exponent(std::vector<Trajectory>(10, graded), 0.1, 1.0));
}

TEST_CASE("weak residual") {
    const auto op = build_cable_operator(std::numbers::pi, 2);
    const auto noise = constant_noise(2, 1.0, 0.8, 0.2);
    const auto s = sample_stochastic_convolution(op, noise, GradedMesh(1.0, 1024, 1.0), 3, 0, {true});
    const auto r = weak_residual(op, s, SpectralVector(2), nullptr, 1);
    WeakResidualOptions wrong;
    wrong.lambda_override = 2.0 * op.eigenvalue(1);
    const auto w = weak_residual(op, s, SpectralVector(2), nullptr, 1, wrong);
    CHECK(*std::max_element(w.begin(), w.end()) > 20 * *std::max_element(r.begin(), r.end()));

    const auto c = coarsen(s, 4, noise);
    CHECK(c.path.size() == 257);
    CHECK(c.increments[0][1] == doctest::Approx(s.increments[0][1] + s.increments[1][1] + s.increments[2][1] +
                                                s.increments[3][1]));
    CHECK_THROWS(weak_residual(op, sample_stochastic_convolution(op, noise, GradedMesh(1.0, 8, 1.0), 3, 0),
                               SpectralVector(2), nullptr, 0));
}

TEST_CASE("moment bound reports") {
    const auto op = build_cable_operator(std::numbers::pi, 8);
    const auto noise = smooth_decay_noise(op, 0.8, 0.2);
    StochOptions so;
    so.replicas = 200;
    so.refine = false;
    so.path_count = 16;
    so.path_steps = 128;
    const auto rep = verify_theorem2(op, noise, SpectralVector(8), GradedMesh(1.0, 64, 2.0), so);
    CHECK(rep.find("empirical_constant"));
    CHECK(rep.find("jensen")->passed);

    const auto zero = verify_theorem2(op, constant_noise(8, 0.0, 0.8, 0.2), SpectralVector(8),
                                      GradedMesh(1.0, 32, 2.0), so);
    CHECK(zero.find("empirical_constant")->value == 0.0);

    CHECK_THROWS_AS(verify_theorem2(op, walsh_white_noise(8), SpectralVector(8), GradedMesh(1.0, 32, 2.0), so),
                    std::invalid_argument);

    ForcingSpec f = zero_forcing(8, 0.4, 1.0, 0.1);
    const auto inv = inverse_eigen_noise(op, 1.0, 0.1);
    StochOptions s3 = so;
    s3.alpha1 = 0.4;
    s3.gamma = 0.05;
    CHECK_NOTHROW(verify_theorem3(op, inv, f, SpectralVector(8), GradedMesh(1.0, 32, 2.0), s3));
    ForcingSpec bad = zero_forcing(8, 0.35, 1.0, 0.3);
    CHECK_THROWS_AS(verify_theorem3(op, inverse_eigen_noise(op, 1.0, 0.3), bad, SpectralVector(8),
                                    GradedMesh(1.0, 32, 2.0), s3),
                    GateViolation);
}
