#include "doctest.h"
#include "oracles.hpp"

#include "magictrap/stark.hpp"
#include "magictrap/units.hpp"

#include <cmath>

using namespace magictrap;

namespace {

// Second-order shift of |J M> in units of (d E)^2 / B.
double pt2(int j, int m) {
  if (j == 0) return -1.0 / 6.0;
  const double jj = j * (j + 1.0);
  return (jj - 3.0 * m * m) / (2.0 * jj * (2 * j - 1) * (2 * j + 3));
}

}  // namespace

TEST_CASE("field-free block is the rigid rotor") {
  const auto krb = resolve_molecule("KRb");
  const auto block = build_block(krb, 0.0, 0);
  for (int r = 0; r < block.size(); ++r) {
    for (int c = 0; c < block.size(); ++c) {
      CHECK(block.h(r, c) == (r == c ? krb.b_mhz * r * (r + 1) : 0.0));
    }
  }
  const auto sys = diagonalize(block);
  CHECK(sys.energy(0) == 0.0);
  CHECK(sys.energy(1) == doctest::Approx(2.0 * krb.b_mhz));
  CHECK(sys.energy(2) == doctest::Approx(6.0 * krb.b_mhz));
  CHECK((sys.u - Eigen::MatrixXd::Identity(sys.size(), sys.size())).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dipole coupling element") {
  const auto krb = resolve_molecule("KRb");
  const double field = 3.0;
  const auto block = build_block(krb, field, 0);
  const double dE = krb.d00_debye * field * units::kMHzPerDebyeKVPerCm;
  CHECK(block.h(0, 1) == doctest::Approx(-dE / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(block.h(0, 1) == doctest::Approx(-dE * oracle::c_element(1, 0, 0, 0, 1, 0)).epsilon(1e-12));
  CHECK(block.h(0, 2) == 0.0);
  const auto b1 = build_block(krb, field, 1);
  CHECK(b1.h(0, 1) == doctest::Approx(-dE * oracle::c_element(1, 0, 1, 1, 2, 1)).epsilon(1e-12));
}

TEST_CASE("jmax floor") {
  CHECK_THROWS_AS(build_block(1.0, 1.0, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_block(1.0, 1.0, 2, 4), std::invalid_argument);
  CHECK_NOTHROW(build_block(1.0, 1.0, 2, 5));
  CHECK_THROWS(validate(StateLabel{1, 2}));
  CHECK_THROWS(validate(StateLabel{1, 0, Branch::plus}));
}

TEST_CASE("second-order perturbation theory") {
  const double b = 1.0;
  for (int m = 0; m <= 2; ++m) {
    for (int j = m; j <= 3; ++j) {
      // residual ~ beta^4: halving beta shrinks it by 16
      double prev = 0.0;
      for (double beta : {0.04, 0.02, 0.01}) {
        const auto sys = diagonalize(build_block(b, beta, m, 12));
        const double exact = b * j * (j + 1);
        const double res = std::abs(sys.energy(j) - exact - pt2(j, m) * beta * beta);
        CHECK(res < 2.0 * std::pow(beta, 4));
        if (j <= 1 && prev > 0.0) CHECK(prev / res == doctest::Approx(16.0).epsilon(0.05));
        prev = res;
      }
    }
  }
}

TEST_CASE("convergence in jmax") {
  const auto krb = resolve_molecule("KRb");
  for (int m = 0; m <= 1; ++m) {
    for (int j = m; j <= 1; ++j) {
      const auto r = check_convergence(krb, 15.0, m, j);
      CHECK(r.converged);
      CHECK(r.relative_change < 1e-8);
    }
  }
  CHECK(check_convergence(krb, 0.0, 0, 1, 6).relative_change == 0.0);
  // beta = 20 is well outside the range where jmax = 10 is enough for high J~
  const auto hard = check_convergence(1.0, 20.0, 0, 6, 10);
  CHECK_FALSE(hard.converged);
}

TEST_CASE("alignment") {
  const DressedStates zero(1.0, 0.0, 1);
  CHECK(alignment(zero.block(0), 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(alignment(zero.block(0), 1) == doctest::Approx(3.0 / 5.0).epsilon(1e-15));
  CHECK(alignment(zero.block(1), 1) == doctest::Approx(1.0 / 5.0).epsilon(1e-15));

  // Independent: <cos^2> of |1 M> by quadrature over Y_1M.
  for (int m = 0; m <= 1; ++m) {
    auto f = [&](double x) { return x * x * std::pow(oracle::ylm0(1, m, std::acos(x)), 2); };
    const double ref = 2.0 * oracle::pi * boost::math::quadrature::gauss<double, 20>::integrate(f, -1.0, 1.0);
    CHECK(alignment(zero.block(m), 1) == doctest::Approx(ref).epsilon(1e-12));
  }

  double prev = 1.0 / 3.0;
  for (double beta : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 30.0}) {
    const auto sys = diagonalize(build_block(1.0, beta, 0, 30));
    const double a = alignment(sys, 0);
    CHECK(a > prev);
    CHECK(a < 1.0);
    prev = a;
  }
  CHECK(prev > 0.75);
}

TEST_CASE("adiabatic labels do not jump along a field sweep") {
  for (const char* name : {"KRb", "RbCs"}) {
    const auto mol = resolve_molecule(name);
    for (int m = 0; m <= 1; ++m) {
      auto prev = diagonalize(build_block(mol, 0.0, m));
      for (int i = 1; i <= 60; ++i) {
        const auto cur = diagonalize(build_block(mol, 0.25 * i, m));
        const auto ov = adiabatic_overlaps(prev, cur);
        for (int k = 0; k < 3; ++k) CHECK(ov[static_cast<std::size_t>(k)] > 0.9);
        for (int k = 0; k + 1 < cur.size(); ++k) CHECK(cur.energies(k) < cur.energies(k + 1));
        prev = cur;
      }
    }
  }
}

TEST_CASE("eigenvector sign convention") {
  const auto sys = diagonalize(build_block(1.0, 3.0, 0));
  for (int k = 0; k < sys.size(); ++k) {
    Eigen::Index c = 0;
    sys.u.row(k).cwiseAbs().maxCoeff(&c);
    CHECK(sys.u(k, c) > 0.0);
    CHECK(sys.u.row(k).norm() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("hamiltonian depends only on beta") {
  const auto a = diagonalize(build_block(1.0, 2.5, 1));
  const auto b = diagonalize(build_block(3.0, 7.5, 1));
  for (int k = 0; k < a.size(); ++k) CHECK(b.energies(k) == doctest::Approx(3.0 * a.energies(k)).epsilon(1e-12));
  CHECK((a.u - b.u).cwiseAbs().maxCoeff() < 1e-12);
}
