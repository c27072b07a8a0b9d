#include "dhgl/linalg.hpp"
#include "dhgl/matrix_io.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

using namespace dhgl;

namespace {

Matrix random_symmetric(int p, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix a(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = i; j < p; ++j) {
      a(i, j) = u(rng);
      a(j, i) = a(i, j);
    }
  return a;
}

}  // namespace

TEST_CASE("soft_threshold formula cases") {
  CHECK(soft_threshold(3.0, 1.0) == doctest::Approx(2.0));
  CHECK(soft_threshold(-0.5, 1.0) == 0.0);
  CHECK(soft_threshold(-2.5, 1.0) == doctest::Approx(-1.5));
}

TEST_CASE("soft_threshold is odd in its first argument") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ua(-5.0, 5.0);
  std::uniform_real_distribution<double> ub(0.0, 3.0);
  for (int k = 0; k < 500; ++k) {
    const double a = ua(rng), b = ub(rng);
    CHECK(soft_threshold(-a, b) == -soft_threshold(a, b));
  }
}

TEST_CASE("soft_threshold applies elementwise to matrices") {
  Matrix m(2, 2);
  m << 3, -0.5, -2.5, 0.2;
  const Matrix t = soft_threshold(m, 1.0);
  CHECK(t(0, 0) == doctest::Approx(2.0));
  CHECK(t(0, 1) == 0.0);
  CHECK(t(1, 0) == doctest::Approx(-1.5));
  CHECK(t(1, 1) == 0.0);
}

TEST_CASE("sym_eigen on simple matrices") {
  const auto id = sym_eigen(SymmetricMatrix::identity(3));
  CHECK(id.values(0) == doctest::Approx(1.0));
  CHECK(id.values(2) == doctest::Approx(1.0));

  Matrix d(2, 2);
  d << 2, 0, 0, -1;
  const auto diag = sym_eigen(SymmetricMatrix::require_symmetric(d));
  CHECK(diag.values(0) == doctest::Approx(2.0));
  CHECK(diag.values(1) == doctest::Approx(-1.0));
  // axis-aligned eigenvectors up to sign
  CHECK(std::abs(diag.vectors(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(diag.vectors(1, 1)) == doctest::Approx(1.0));

  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const auto off = sym_eigen(SymmetricMatrix::require_symmetric(swap));
  CHECK(off.values(0) == doctest::Approx(1.0));
  CHECK(off.values(1) == doctest::Approx(-1.0));
}

TEST_CASE("sym_eigen reconstruction and orthogonality over random matrices") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dims(1, 20);
  for (int k = 0; k < 1000; ++k) {
    const int p = dims(rng);
    const Matrix a = random_symmetric(p, rng, 3.0);
    const auto eig = sym_eigen(SymmetricMatrix::require_symmetric(a));
    const Matrix rebuilt = eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose();
    CHECK((rebuilt - a).norm() <= 1e-8 * (1.0 + a.norm()));
    const Matrix gram = eig.vectors.transpose() * eig.vectors;
    CHECK((gram - Matrix::Identity(p, p)).norm() <= 1e-8 * p);
    for (int i = 0; i + 1 < p; ++i) CHECK(eig.values(i) >= eig.values(i + 1));
  }
}

TEST_CASE("sym_eigen rejects non-finite input") {
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = bad(1, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(sym_eigen(SymmetricMatrix::symmetrized(bad)), std::invalid_argument);
}

TEST_CASE("cholesky closed-form cases") {
  const Matrix l0 = cholesky(SymmetricMatrix::identity(2));
  CHECK((l0 - Matrix::Identity(2, 2)).norm() == doctest::Approx(0.0));

  Matrix d(2, 2);
  d << 4, 0, 0, 9;
  const Matrix l1 = cholesky(SymmetricMatrix::require_symmetric(d));
  CHECK(l1(0, 0) == doctest::Approx(2.0));
  CHECK(l1(1, 1) == doctest::Approx(3.0));

  Matrix a(2, 2);
  a << 4, 2, 2, 5;
  const Matrix l2 = cholesky(SymmetricMatrix::require_symmetric(a));
  CHECK(l2(0, 0) == doctest::Approx(2.0));
  CHECK(l2(1, 0) == doctest::Approx(1.0));
  CHECK(l2(1, 1) == doctest::Approx(2.0));
  CHECK(l2(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("cholesky round-trip and failure agree with the spectrum") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> dims(1, 12);
  int tested = 0;
  for (int k = 0; k < 400; ++k) {
    const int p = dims(rng);
    Matrix a = random_symmetric(p, rng, 1.0);
    a.diagonal().array() += 0.5;  // mix of PD and indefinite draws
    const SymmetricMatrix sym = SymmetricMatrix::require_symmetric(a);
    const double min_eig = sym_eigen(sym).values.minCoeff();
    if (std::abs(min_eig) <= 1e-10) continue;  // stay away from the boundary
    ++tested;
    if (min_eig > 0) {
      const Matrix l = cholesky(sym);
      CHECK((l * l.transpose() - a).norm() <= 1e-8 * (1.0 + a.norm()));
    } else {
      CHECK_THROWS_AS(cholesky(sym), NotPositiveDefinite);
    }
  }
  CHECK(tested > 300);
}

TEST_CASE("norm helpers") {
  CHECK(l1_offdiag(Matrix::Identity(3, 3)) == 0.0);

  Matrix m(2, 2);
  m << 0, 3, 4, 0;
  CHECK(frobenius_norm(m) == doctest::Approx(5.0));

  Matrix c = Matrix::Zero(3, 3);
  c(0, 1) = 1.0;
  c(1, 1) = 42.0;  // diagonal entry of column 1 is excluded
  c(2, 1) = -2.0;
  CHECK(column_l2_offdiag(c, 1) == doctest::Approx(std::sqrt(5.0)));
  CHECK(column_l1_offdiag(c, 1) == doctest::Approx(3.0));
}

TEST_CASE("empirical covariance hand cases") {
  Matrix x1(2, 1);
  x1 << 1, -1;
  CHECK(empirical_covariance(x1)(0, 0) == doctest::Approx(1.0));

  Matrix x2(3, 2);
  x2 << 1, 2, 1, 2, 1, 2;  // identical rows
  CHECK(empirical_covariance(x2).mat().norm() == doctest::Approx(0.0));

  Matrix x3(3, 2);
  x3 << 1, 2, 3, 4, 5, 6;
  const SymmetricMatrix s = empirical_covariance(x3);
  CHECK(s(0, 0) == doctest::Approx(8.0 / 3.0));
  CHECK(s(0, 1) == doctest::Approx(8.0 / 3.0));
  CHECK(s(1, 1) == doctest::Approx(8.0 / 3.0));

  Matrix tiny(1, 3);
  CHECK_THROWS_AS(empirical_covariance(tiny), DegenerateSample);
}

TEST_CASE("empirical covariance is positive semidefinite") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const int n = 3 + static_cast<int>(rng() % 20);
    const int p = 1 + static_cast<int>(rng() % 8);
    Matrix x(n, p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < p; ++j) x(i, j) = normal(rng);
    const SymmetricMatrix s = empirical_covariance(x);
    const double min_eig = sym_eigen(s).values.minCoeff();
    CHECK(min_eig >= -1e-10 * s.mat().trace());
  }
}

TEST_CASE("SymmetricMatrix constructors enforce the contract") {
  CHECK_THROWS_AS(SymmetricMatrix(0), std::invalid_argument);
  Matrix skew(2, 2);
  skew << 0, 1, -1, 0;
  CHECK_THROWS_AS(SymmetricMatrix::require_symmetric(skew), std::invalid_argument);
  Matrix near(2, 2);
  near << 1, 0.5, 0.5 + 1e-14, 2;
  const SymmetricMatrix ok = SymmetricMatrix::require_symmetric(near);
  CHECK(ok(0, 1) == ok(1, 0));
}

TEST_CASE("matrix CSV round trip and malformed input") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path("linalg_csv_tmp");
  fs::create_directories(dir);

  Matrix m(2, 3);
  m << 1.5, -2.25, 3e-9, 0, 1e12, -0.125;
  const std::string path = (dir / "m.csv").string();
  save_matrix_csv(m, path);
  const Matrix back = load_matrix_csv(path);
  REQUIRE(back.rows() == 2);
  REQUIRE(back.cols() == 3);
  CHECK((back - m).norm() == 0.0);

  {
    std::ofstream ragged(dir / "ragged.csv");
    ragged << "1,2,3\n4,5\n";
  }
  CHECK_THROWS_WITH_AS(load_matrix_csv((dir / "ragged.csv").string()),
                       doctest::Contains("ragged"), std::runtime_error);

  {
    std::ofstream bad(dir / "bad.csv");
    bad << "1,abc\n";
  }
  CHECK_THROWS_AS(load_matrix_csv((dir / "bad.csv").string()), std::runtime_error);
  CHECK_THROWS_AS(load_matrix_csv((dir / "missing.csv").string()), std::runtime_error);

  fs::remove_all(dir);
}
