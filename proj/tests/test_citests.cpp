#include "hsi/citests.hpp"

#include <doctest.h>

#include <random>

using namespace hsi;

namespace {

Eigen::VectorXd from(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd no_conds() { return Eigen::MatrixXd(0, 0); }

/// Independent residual-correlation oracle: normal equations via explicit
/// inverse, then textbook Pearson correlation with mean subtraction.
double parcorr_oracle(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                      const Eigen::MatrixXd& Z) {
    const Eigen::Index n = x.size();
    Eigen::MatrixXd D(n, Z.cols() + 1);
    D.col(0).setOnes();
    if (Z.cols() > 0) D.rightCols(Z.cols()) = Z;
    const Eigen::MatrixXd pinv = (D.transpose() * D).inverse() * D.transpose();
    const Eigen::VectorXd rx = x - D * (pinv * x);
    const Eigen::VectorXd ry = y - D * (pinv * y);
    const double mx = rx.mean(), my = ry.mean();
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST_CASE("parcorr on orthogonal alternating sequences") {
    std::vector<double> xv(100), yv(100);
    for (int i = 0; i < 100; ++i) {
        xv[i] = (i % 2 == 0) ? 1.0 : -1.0;            // +1 -1 +1 -1
        yv[i] = (i % 4 < 2) ? 1.0 : -1.0;             // +1 +1 -1 -1
    }
    const CITestResult r = parcorr_test(from(xv), from(yv), no_conds());
    CHECK(std::abs(r.statistic) <= 1e-12);
    CHECK(r.p_value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.sample_size == 100);
}

TEST_CASE("parcorr on identical series") {
    std::mt19937 gen(3);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXd x(200);
    for (int i = 0; i < 200; ++i) x[i] = g(gen);
    const CITestResult r = parcorr_test(x, x, no_conds());
    CHECK(r.statistic == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.p_value <= 1e-12);
}

TEST_CASE("parcorr removes a common driver via conditioning") {
    std::mt19937 gen(11);
    std::normal_distribution<double> g(0.0, 1.0);
    double abs_stat_sum = 0.0;
    int seeds = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed, ++seeds) {
        gen.seed(static_cast<unsigned>(100 + seed));
        const int n = 2000;
        Eigen::VectorXd z(n), x(n), y(n);
        for (int i = 0; i < n; ++i) {
            z[i] = g(gen);
            x[i] = z[i] + 0.8 * g(gen);
            y[i] = z[i] + 0.8 * g(gen);
        }
        Eigen::MatrixXd Z(n, 1);
        Z.col(0) = z;
        const CITestResult r = parcorr_test(x, y, Z);
        CHECK(std::abs(r.statistic - parcorr_oracle(x, y, Z)) <= 1e-10);
        abs_stat_sum += std::abs(r.statistic);

        // Without conditioning the confounder shows up strongly.
        const CITestResult raw = parcorr_test(x, y, no_conds());
        CHECK(std::abs(raw.statistic) > 0.4);
    }
    CHECK(abs_stat_sum / seeds < 0.08);
}

TEST_CASE("parcorr is symmetric in (x, y)") {
    std::mt19937 gen(17);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXd x(150), y(150);
    Eigen::MatrixXd Z(150, 2);
    for (int i = 0; i < 150; ++i) {
        x[i] = g(gen);
        y[i] = 0.3 * x[i] + g(gen);
        Z(i, 0) = g(gen);
        Z(i, 1) = g(gen);
    }
    const CITestResult a = parcorr_test(x, y, Z);
    const CITestResult b = parcorr_test(y, x, Z);
    CHECK(std::abs(a.statistic - b.statistic) <= 1e-12);
    CHECK(std::abs(a.p_value - b.p_value) <= 1e-12);
    CHECK(a.statistic >= -1.0);
    CHECK(a.statistic <= 1.0);
    CHECK(a.p_value >= 0.0);
    CHECK(a.p_value <= 1.0);
}

TEST_CASE("parcorr is invariant under positive affine rescaling") {
    std::mt19937 gen(19);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXd x(120), y(120);
    Eigen::MatrixXd Z(120, 1);
    for (int i = 0; i < 120; ++i) {
        x[i] = g(gen);
        Z(i, 0) = g(gen);
        y[i] = 0.5 * x[i] + 0.4 * Z(i, 0) + g(gen);
    }
    const CITestResult base = parcorr_test(x, y, Z);
    const CITestResult scaled = parcorr_test((2.5 * x.array() + 7.0).matrix(),
                                             (0.3 * y.array() - 2.0).matrix(),
                                             (4.0 * Z.array() + 1.0).matrix());
    CHECK(std::abs(base.statistic - scaled.statistic) <= 1e-10);
    CHECK(std::abs(base.p_value - scaled.p_value) <= 1e-10);
}

TEST_CASE("parcorr error paths") {
    Eigen::VectorXd x(10), y(10);
    x.setLinSpaced(10, 0.0, 1.0);
    y.setLinSpaced(10, 1.0, 0.0);

    // Collinear conditioning columns.
    Eigen::MatrixXd Z(10, 2);
    Z.col(0).setLinSpaced(10, 0.0, 2.0);
    Z.col(1) = 2.0 * Z.col(0);
    CHECK_THROWS_WITH_AS(parcorr_test(x, y, Z), doctest::Contains("degenerate"),
                         std::invalid_argument);

    // Insufficient samples: n <= |Z| + 3.
    Eigen::MatrixXd Zbig(10, 7);
    for (int c = 0; c < 7; ++c)
        for (int i = 0; i < 10; ++i) Zbig(i, c) = std::sin(0.7 * i + c * 1.3);
    CHECK_THROWS_WITH_AS(parcorr_test(x, y, Zbig), doctest::Contains("insufficient"),
                         std::invalid_argument);

    // Constant series.
    Eigen::VectorXd flat = Eigen::VectorXd::Constant(10, 3.0);
    CHECK_THROWS(parcorr_test(flat, y, no_conds()));
}

TEST_CASE("distance correlation on an affine relation is 1") {
    std::mt19937 gen(23);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    Eigen::VectorXd a(100);
    for (int i = 0; i < 100; ++i) a[i] = u(gen);
    const Eigen::VectorXd b = (2.0 * a.array() + 3.0).matrix();
    CHECK(std::abs(distance_correlation(a, b) - 1.0) <= 1e-9);
}

TEST_CASE("distance correlation on independent noise is small") {
    std::mt19937 gen(29);
    std::normal_distribution<double> g(0.0, 1.0);
    double sum = 0.0;
    const int seeds = 10;
    for (int s = 0; s < seeds; ++s) {
        Eigen::VectorXd a(1000), b(1000);
        for (int i = 0; i < 1000; ++i) {
            a[i] = g(gen);
            b[i] = g(gen);
        }
        sum += distance_correlation(a, b);
    }
    CHECK(sum / seeds < 0.1);
}

TEST_CASE("distance correlation n=4 hand case") {
    Eigen::VectorXd a(4), b(4);
    a << 0.0, 1.0, 2.0, 3.0;
    b << 0.0, 1.0, 0.0, 1.0;

    // Hand-computed double-centering oracle, scalar arithmetic only.
    double A[4][4], B[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            A[i][j] = std::abs(a[i] - a[j]);
            B[i][j] = std::abs(b[i] - b[j]);
        }
    auto center = [](double M[4][4]) {
        double row[4] = {0, 0, 0, 0}, grand = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) row[i] += M[i][j] / 4.0;
        for (int i = 0; i < 4; ++i) grand += row[i] / 4.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) M[i][j] = M[i][j] - row[i] - row[j] + grand;
    };
    center(A);
    center(B);
    double dcov2 = 0, dvx = 0, dvy = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            dcov2 += A[i][j] * B[i][j] / 16.0;
            dvx += A[i][j] * A[i][j] / 16.0;
            dvy += B[i][j] * B[i][j] / 16.0;
        }
    const double oracle = std::sqrt(std::max(0.0, dcov2) / std::sqrt(dvx * dvy));

    CHECK(std::abs(distance_correlation(a, b) - oracle) <= 1e-12);
    Eigen::VectorXd short3(3);
    short3 << 0, 1, 2;
    CHECK_THROWS(distance_correlation(short3, short3));
}

TEST_CASE("gpdc null: independent noise gives well-behaved p-values") {
    std::mt19937 gen(31);
    std::normal_distribution<double> g(0.0, 1.0);
    double p_sum = 0.0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        Eigen::VectorXd x(300), y(300);
        for (int i = 0; i < 300; ++i) {
            x[i] = g(gen);
            y[i] = g(gen);
        }
        const CITestResult r =
            gpdc_test(x, y, no_conds(), 199, static_cast<std::uint64_t>(s));
        p_sum += r.p_value;
        CHECK(r.p_value >= 0.0);
        CHECK(r.p_value <= 1.0);
    }
    CHECK(p_sum / seeds > 0.2);
}

TEST_CASE("gpdc detects the nonlinear relation y = x^2") {
    std::mt19937 gen(37);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXd x(300), y(300);
    for (int i = 0; i < 300; ++i) {
        x[i] = u(gen);
        y[i] = x[i] * x[i];
    }
    // Pearson correlation is weak for the symmetric square...
    const CITestResult lin = parcorr_test(x, y, no_conds());
    CHECK(std::abs(lin.statistic) < 0.3);
    // ...but the distance-correlation statistic sees it.
    const CITestResult r = gpdc_test(x, y, no_conds(), 499, 7);
    CHECK(r.statistic > 0.0);
    CHECK(r.p_value < 0.05);
}

TEST_CASE("gpdc conditions away a smooth nonlinear driver via GP residuals") {
    std::mt19937 gen(43);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const int n = 250;
    Eigen::VectorXd z(n), x(n), y(n);
    for (int i = 0; i < n; ++i) {
        z[i] = u(gen);
        x[i] = std::sin(z[i]) + 0.3 * g(gen);
        y[i] = z[i] * z[i] + 0.3 * g(gen);
    }
    Eigen::MatrixXd Z(n, 1);
    Z.col(0) = z;
    // Unconditionally dependent through z; conditionally independent.
    const CITestResult cond = gpdc_test(x, y, Z, 199, 11);
    CHECK(cond.p_value > 0.05);
}

TEST_CASE("gpdc is deterministic for a fixed seed and errors on constants") {
    std::mt19937 gen(47);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXd x(120), y(120);
    for (int i = 0; i < 120; ++i) {
        x[i] = g(gen);
        y[i] = 0.2 * x[i] + g(gen);
    }
    const CITestResult a = gpdc_test(x, y, no_conds(), 199, 99);
    const CITestResult b = gpdc_test(x, y, no_conds(), 199, 99);
    CHECK(a.statistic == b.statistic);
    CHECK(a.p_value == b.p_value);

    Eigen::VectorXd flat = Eigen::VectorXd::Constant(120, 1.0);
    CHECK_THROWS(gpdc_test(flat, y, no_conds(), 199, 1));
}
