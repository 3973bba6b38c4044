#include "doctest.h"
#include "oracles.hpp"

#include "magictrap/angular.hpp"

#include <cmath>
#include <random>

using namespace magictrap;

TEST_CASE("three_j known values") {
  CHECK(three_j(0, 1, 1, 0, 0, 0) == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(three_j(1, 1, 1, 0, 0, 0) == 0.0);
  CHECK(three_j(1, 1, 2, 0, 0, 0) == doctest::Approx(std::sqrt(2.0 / 15.0)).epsilon(1e-15));
  CHECK(three_j(1, 1, 0, 1, -1, 0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  // selection rules
  CHECK(three_j(1, 1, 3, 0, 0, 0) == 0.0);
  CHECK(three_j(2, 1, 1, 1, 1, 0) == 0.0);
  CHECK(three_j(1, 1, 1, 2, -2, 0) == 0.0);
}

TEST_CASE("three_j symmetries") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> jd(0, 8);
  for (int n = 0; n < 300; ++n) {
    const int j1 = jd(rng), j2 = jd(rng);
    const int j3 = std::abs(j1 - j2) + std::uniform_int_distribution<int>(0, j1 + j2 - std::abs(j1 - j2))(rng);
    const int m1 = std::uniform_int_distribution<int>(-j1, j1)(rng);
    const int m2 = std::uniform_int_distribution<int>(-j2, j2)(rng);
    const int m3 = -m1 - m2;
    if (std::abs(m3) > j3) continue;
    const double v = three_j(j1, j2, j3, m1, m2, m3);
    const double parity = (j1 + j2 + j3) % 2 == 0 ? 1.0 : -1.0;
    CHECK(three_j(j2, j3, j1, m2, m3, m1) == doctest::Approx(v).epsilon(1e-14));
    CHECK(three_j(j2, j1, j3, m2, m1, m3) == doctest::Approx(parity * v).epsilon(1e-14));
    CHECK(three_j(j1, j2, j3, -m1, -m2, -m3) == doctest::Approx(parity * v).epsilon(1e-14));
  }
}

TEST_CASE("three_j orthogonality") {
  for (int j1 = 0; j1 <= 6; ++j1) {
    for (int j2 = 0; j2 <= 6; ++j2) {
      for (int j3 = std::abs(j1 - j2); j3 <= j1 + j2; ++j3) {
        for (int m3 = -j3; m3 <= j3; ++m3) {
          double s = 0.0;
          for (int m1 = -j1; m1 <= j1; ++m1) {
            const double v = three_j(j1, j2, j3, m1, -m1 - m3, m3);
            s += v * v;
          }
          CHECK(s * (2 * j3 + 1) == doctest::Approx(1.0).epsilon(1e-13));
        }
      }
    }
  }
}

TEST_CASE("c_tensor_element spot values") {
  CHECK(c_tensor_element(1, 0, 0, 0, 1, 0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(c_tensor_element(2, 0, 1, 0, 1, 0) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(c_tensor_element(1, 0, 1, 0, 1, 0) == 0.0);
}

TEST_CASE("c_tensor_element matches spherical quadrature") {
  for (int l = 1; l <= 2; ++l) {
    for (int j = 0; j <= 4; ++j) {
      for (int jp = 0; jp <= 4; ++jp) {
        for (int m = -j; m <= j; ++m) {
          for (int q = -l; q <= l; ++q) {
            const int mp = m - q;
            if (std::abs(mp) > jp) continue;
            CHECK(c_tensor_element(l, q, j, m, jp, mp) ==
                  doctest::Approx(oracle::c_element(l, q, j, m, jp, mp)).epsilon(1e-9).scale(1.0));
          }
        }
      }
    }
  }
}

TEST_CASE("symmetric_top_dipole matches Euler-angle quadrature") {
  for (int j = 0; j <= 2; ++j) {
    for (int je = std::max(0, j - 1); je <= j + 1; ++je) {
      for (int lambda = -1; lambda <= 1; ++lambda) {
        if (std::abs(lambda) > je) continue;
        for (int m = -j; m <= j; ++m) {
          for (int q = -1; q <= 1; ++q) {
            const int me = m - q;
            if (std::abs(me) > je) continue;
            const auto ref = oracle::dipole_element(j, m, je, me, lambda, q);
            CHECK(std::abs(ref.imag()) < 1e-12);
            CHECK(symmetric_top_dipole(j, m, je, me, lambda, q) == doctest::Approx(ref.real()).scale(1.0).epsilon(1e-9));
          }
        }
      }
    }
  }
}

TEST_CASE("f_factor examples") {
  CHECK(f_factor(1, 0, 0, 0, 0, Branch::none, Axis::z) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(f_factor(1, 0, 0, 0, 0, Branch::none, Axis::z) ==
        doctest::Approx(c_tensor_element(1, 0, 0, 0, 1, 0)).epsilon(1e-15));
  for (auto ax : {Axis::x, Axis::y, Axis::z}) {
    CHECK(f_factor(0, 0, 1, 0, 0, Branch::none, ax) == 0.0);
    CHECK(f_factor(0, 0, -1, 0, 0, Branch::none, ax) == 0.0);
  }
}

namespace {

// Cartesian element of the ± ground combination built from quadrature.
cplx oracle_f(int je, int me, int lambda, int j, int m, Branch branch, Axis sigma) {
  auto sph = [&](int mm) {
    std::array<cplx, 3> s{};
    for (int q = -1; q <= 1; ++q) {
      if (mm - q == me) s[q + 1] = oracle::dipole_element(j, mm, je, me, lambda, q);
    }
    return s;
  };
  std::array<cplx, 3> s = sph(m);
  if (branch != Branch::none) {
    const double sign = branch == Branch::plus ? 1.0 : -1.0;
    const auto other = sph(-m);
    for (int k = 0; k < 3; ++k) s[k] = (s[k] + sign * other[k]) / std::sqrt(2.0);
  }
  const double r = 1.0 / std::sqrt(2.0);
  switch (sigma) {
    case Axis::x: return r * (s[0] - s[2]);
    case Axis::y: return cplx(0.0, 1.0) * r * (s[0] + s[2]);
    case Axis::z: return s[1];
  }
  return 0.0;
}

}  // namespace

TEST_CASE("f_factor_complex matches quadrature for branch states") {
  CHECK(std::abs(f_factor_complex(2, 1, 1, 1, 1, Branch::plus, Axis::x) - oracle_f(2, 1, 1, 1, 1, Branch::plus, Axis::x)) <
        1e-9);
  for (auto br : {Branch::plus, Branch::minus}) {
    for (int je = 0; je <= 2; ++je) {
      for (int me = -je; me <= je; ++me) {
        for (int lambda = -1; lambda <= 1; ++lambda) {
          if (std::abs(lambda) > je) continue;
          for (auto ax : {Axis::x, Axis::y, Axis::z}) {
            const cplx ref = oracle_f(je, me, lambda, 1, 1, br, ax);
            CHECK(std::abs(f_factor_complex(je, me, lambda, 1, 1, br, ax) - ref) < 1e-9);
          }
        }
      }
    }
  }
}

TEST_CASE("f_factor: real part convention and selection rule") {
  for (int je = 0; je <= 3; ++je) {
    for (int me = -je; me <= je; ++me) {
      for (int lambda = -1; lambda <= 1; ++lambda) {
        if (std::abs(lambda) > je) continue;
        for (auto ax : {Axis::x, Axis::y, Axis::z}) {
          const cplx c = f_factor_complex(je, me, lambda, 2, 1, Branch::none, ax);
          const double f = f_factor(je, me, lambda, 2, 1, Branch::none, ax);
          if (ax == Axis::y) {
            CHECK(std::abs(c.real()) < 1e-15);
            CHECK(f == doctest::Approx(c.imag()).epsilon(1e-15));
          } else {
            CHECK(std::abs(c.imag()) < 1e-15);
            CHECK(f == doctest::Approx(c.real()).epsilon(1e-15));
          }
          if (std::abs(me - 1) > 1) CHECK(f == 0.0);
        }
      }
    }
  }
}

TEST_CASE("f_factor under lambda -> -lambda") {
  // Same branch: the element picks up (-1)^(J + Je + 1). The branch-flipped
  // element is not related by a fixed sign in general.
  for (auto br : {Branch::plus, Branch::minus}) {
    for (int je = 1; je <= 3; ++je) {
      for (int me = -je; me <= je; ++me) {
        for (auto ax : {Axis::x, Axis::y, Axis::z}) {
          const double sign = (2 + je + 1) % 2 == 0 ? 1.0 : -1.0;
          CHECK(f_factor(je, me, -1, 2, 1, br, ax) == doctest::Approx(sign * f_factor(je, me, 1, 2, 1, br, ax)).epsilon(1e-14));
        }
      }
    }
  }
  CHECK(f_factor(1, 0, 1, 2, 1, Branch::plus, Axis::y) != doctest::Approx(-f_factor(1, 0, -1, 2, 1, Branch::minus, Axis::y)));
}

TEST_CASE("spherical components") {
  const auto z = cart_to_spherical({0.0, 0.0, 1.0});
  CHECK(std::abs(z[spherical_index(0)] - 1.0) < 1e-16);
  CHECK(std::abs(z[spherical_index(1)]) < 1e-16);
  CHECK(std::abs(z[spherical_index(-1)]) < 1e-16);

  const auto x = cart_to_spherical({1.0, 0.0, 0.0});
  CHECK(std::abs(x[spherical_index(1)]) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(std::abs(x[spherical_index(-1)]) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(x[spherical_index(1)].real() < 0.0);  // v_{+1} = -(v_x + i v_y)/sqrt(2)

  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  for (int n = 0; n < 50; ++n) {
    const CVec3 v{cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), cplx(g(rng), g(rng))};
    const auto back = spherical_to_cart(cart_to_spherical(v));
    for (int k = 0; k < 3; ++k) CHECK(std::abs(back[k] - v[k]) < 1e-15 * 4);
  }
}
