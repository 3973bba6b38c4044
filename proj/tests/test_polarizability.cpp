#include "doctest.h"
#include "oracles.hpp"

#include "magictrap/polarizability.hpp"
#include "magictrap/units.hpp"

#include <cmath>
#include <random>

using namespace magictrap;

namespace {

const MolecularPolarizability kAlpha{800.0, 350.0};

double rel_diff(const Eigen::Matrix3cd& a, const Eigen::Matrix3cd& b) {
  return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

// <psi| n_s n_t |psi> on the sphere, psi = sum_J c_J Y_JM (and the ± combination).
Eigen::Matrix3cd nn_quadrature(const StarkEigensystem& sys, const StateLabel& label) {
  const int k = sys.row(label.j);
  const int am = std::abs(label.m);
  auto psi = [&](double th, double ph) {
    auto pure = [&](int m) {
      oracle::cplx v = 0.0;
      for (int c = 0; c < sys.size(); ++c) v += sys.u(k, c) * oracle::ylm0(sys.j_min() + c, m, th);
      return v * std::exp(oracle::cplx(0.0, m * ph));
    };
    if (label.branch == Branch::none) return pure(label.m);
    const double s = label.branch == Branch::plus ? 1.0 : -1.0;
    return (pure(am) + s * pure(-am)) / std::sqrt(2.0);
  };
  Eigen::Matrix3cd out = Eigen::Matrix3cd::Zero();
  const int nphi = 48;
  for (int ip = 0; ip < nphi; ++ip) {
    const double ph = 2.0 * oracle::pi * ip / nphi;
    for (int s = 0; s < 3; ++s) {
      for (int t = 0; t < 3; ++t) {
        auto f = [&](double x) {
          const double th = std::acos(x);
          const double n[3] = {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), x};
          return std::norm(psi(th, ph)) * n[s] * n[t];
        };
        out(s, t) += boost::math::quadrature::gauss<double, 40>::integrate(f, -1.0, 1.0) * 2.0 * oracle::pi / nphi;
      }
    }
  }
  return out;
}

std::vector<StateLabel> labels_up_to(int jmax_state) {
  std::vector<StateLabel> out;
  for (int j = 0; j <= jmax_state; ++j) {
    out.push_back({j, 0});
    if (j >= 1) {
      out.push_back({j, 1});
      out.push_back({j, -1});
      out.push_back({j, 1, Branch::plus});
      out.push_back({j, 1, Branch::minus});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("zero-field tensors") {
  const DressedStates s(1.0, 0.0, 1);
  const auto t0 = alpha_tensor_closed_form(s.block(0), {0, 0}, kAlpha);
  CHECK(rel_diff(t0.components, kAlpha.isotropic() * Eigen::Matrix3cd::Identity()) < 1e-15);
  const auto t1 = alpha_tensor_closed_form(s.block(0), {1, 0}, kAlpha);
  CHECK(t1.zz() == doctest::Approx(kAlpha.perpendicular + 0.6 * kAlpha.anisotropy()).epsilon(1e-15));
  CHECK(t1.xx() == doctest::Approx(kAlpha.perpendicular + 0.2 * kAlpha.anisotropy()).epsilon(1e-15));
  const auto t11 = alpha_tensor_closed_form(s.block(1), {1, 1}, kAlpha);
  CHECK(t11.zz() == doctest::Approx(kAlpha.perpendicular + 0.2 * kAlpha.anisotropy()).epsilon(1e-15));
}

TEST_CASE("closed form matches direct quadrature of n n") {
  for (double beta : {0.0, 1.3, 4.0}) {
    const DressedStates s(1.0, beta, 1, 8);
    for (const auto& label : labels_up_to(2)) {
      const auto& sys = s.block(label.m);
      const Eigen::Matrix3cd nn = nn_quadrature(sys, label);
      const Eigen::Matrix3cd ref = kAlpha.perpendicular * Eigen::Matrix3cd::Identity() + kAlpha.anisotropy() * nn;
      const auto t = alpha_tensor_closed_form(sys, label, kAlpha);
      CHECK(rel_diff(t.components, ref) < 1e-10);
    }
  }
}

TEST_CASE("sum over states agrees with the closed form") {
  for (double beta : {0.0, 1.0, 2.5, 6.0}) {
    const DressedStates s(1.0, beta, 1);
    for (const auto& label : labels_up_to(3)) {
      const auto& sys = s.block(label.m);
      const auto a = alpha_tensor_closed_form(sys, label, kAlpha);
      const auto b = alpha_tensor_sos(sys, label, kAlpha, sys.j_max + 1);
      CHECK(rel_diff(b.components, a.components) < 1e-10);
    }
  }
  const DressedStates s(1.0, 1.0, 1);
  CHECK_THROWS_AS(alpha_tensor_sos(s.block(0), {0, 0}, kAlpha, s.j_max()), std::invalid_argument);
}

TEST_CASE("single sigma channel at zero field") {
  const DressedStates s(1.0, 0.0, 0);
  const auto t = alpha_tensor_sos(s.block(0), {0, 0}, kAlpha, s.j_max() + 1, LambdaSet{true, false, false});
  CHECK(t.zz() == doctest::Approx(kAlpha.parallel / 3.0).epsilon(1e-14));
}

TEST_CASE("stark shift") {
  const PolarizabilityTensor iso{500.0 * Eigen::Matrix3cd::Identity(), {}, 0.0};
  for (const auto& pol : {PolarizationVector::z(), PolarizationVector::x(), PolarizationVector::linear(0.3),
                          PolarizationVector::circular(1), PolarizationVector::circular(-1)}) {
    const auto sh = stark_shift(iso, pol, 2.0);
    CHECK(sh.delta_e_mhz == doctest::Approx(-500.0 * units::kMHzPerWcm2PerAtomicPolarizability * 2.0).epsilon(1e-14));
  }
  PolarizabilityTensor diag;
  diag.components.diagonal() << 1.0, 2.0, 3.0;
  CHECK(project(diag.components, PolarizationVector::linear(0.0)) == 3.0);
  CHECK(project(diag.components, PolarizationVector::x()) == 1.0);

  const auto mol = resolve_molecule("KRb");
  const auto a = alpha_lambda_at(mol, 9174.0);
  const auto pol = PolarizationVector::from_components({std::sqrt(2.0 / 3.0), 0.0, std::sqrt(1.0 / 3.0)});
  for (double field : {0.0, 2.0, 7.0, 15.0}) {
    const DressedStates s(mol, field, 0);
    for (int j = 0; j <= 2; ++j) {
      const auto t = alpha_tensor_closed_form(s.block(0), {j, 0}, a);
      const auto sh = stark_shift(t, pol, 1.0);
      CHECK(sh.delta_e_mhz ==
            doctest::Approx(-a.isotropic() * units::kMHzPerWcm2PerAtomicPolarizability).epsilon(1e-12));
    }
  }
}

TEST_CASE("irreducible parts") {
  const auto id = irreducible_decompose(Eigen::Matrix3cd::Identity());
  CHECK(std::abs(id.scalar - 1.0) < 1e-16);
  for (auto v : id.vector) CHECK(std::abs(v) < 1e-16);
  for (auto v : id.tensor) CHECK(std::abs(v) < 1e-16);

  Eigen::Matrix3cd d = Eigen::Matrix3cd::Zero();
  d.diagonal() << 2.0, 2.0, 5.0;
  const auto p = irreducible_decompose(d);
  CHECK(std::abs(p.tensor[2] - std::sqrt(1.5) * 2.0) < 1e-14);  // S_zz = 2/3 (b - a)
  for (int k : {0, 1, 3, 4}) CHECK(std::abs(p.tensor[static_cast<std::size_t>(k)]) < 1e-16);

  std::mt19937 rng(11);
  std::normal_distribution<double> g;
  for (int n = 0; n < 30; ++n) {
    Eigen::Matrix3d r;
    for (int i = 0; i < 9; ++i) r.data()[i] = g(rng);
    const Eigen::Matrix3cd sym = (r + r.transpose()).cast<cplx>();
    for (auto v : irreducible_decompose(sym).vector) CHECK(std::abs(v) < 1e-15);

    Eigen::Matrix3cd c;
    for (int i = 0; i < 9; ++i) c.data()[i] = cplx(g(rng), g(rng));
    CHECK((recompose(irreducible_decompose(c)) - c).cwiseAbs().maxCoeff() < 1e-14);

    const auto pol = PolarizationVector::from_components({cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), cplx(g(rng), g(rng))});
    const cplx full = contract(irreducible_decompose(c), irreducible_decompose(polarization_tensor(pol)));
    cplx direct = 0.0;
    for (int s = 0; s < 3; ++s) {
      for (int t = 0; t < 3; ++t) direct += c(s, t) * polarization_tensor(pol)(s, t);
    }
    CHECK(std::abs(full - direct) < 1e-13);
    CHECK(project(c, pol) == doctest::Approx(direct.real()).epsilon(1e-13));
  }
}

TEST_CASE("branch degeneracy") {
  const DressedStates s(1.0, 3.0, 1);
  for (int j = 1; j <= 3; ++j) {
    const auto par = resolve_branches(s.block(1), j, kAlpha, PolarizationVector::z());
    CHECK(par.degenerate);
    CHECK(std::abs(par.eigenvalues[1] - par.eigenvalues[0]) <= 1e-12 * kAlpha.parallel);
    const auto perp = resolve_branches(s.block(1), j, kAlpha, PolarizationVector::x());
    CHECK_FALSE(perp.degenerate);
    CHECK(perp.plus_minus_eigenbasis);
    CHECK(std::abs(perp.alpha_plus - perp.alpha_minus) > 1.0);
    // The ± eigenvalues are the diagonal elements of the branch tensors.
    const auto tp = alpha_tensor_closed_form(s.block(1), {j, 1, Branch::plus}, kAlpha);
    const auto tm = alpha_tensor_closed_form(s.block(1), {j, 1, Branch::minus}, kAlpha);
    CHECK(perp.alpha_plus == doctest::Approx(tp.xx()).epsilon(1e-12));
    CHECK(perp.alpha_minus == doctest::Approx(tm.xx()).epsilon(1e-12));
  }
}

TEST_CASE("angle scan endpoints") {
  const DressedStates s(1.0, 2.0, 1);
  const std::vector<StateLabel> labels{{0, 0}, {1, 0}, {1, 1, Branch::minus}};
  const auto scan = alpha_angle_scan(s, labels, kAlpha, {0.0, oracle::pi / 2});
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto t = alpha_tensor_closed_form(s.block(labels[i].m), labels[i], kAlpha);
    CHECK(scan.alpha_eff[i][0] == doctest::Approx(t.zz()).epsilon(1e-13));
    CHECK(scan.alpha_eff[i][1] == doctest::Approx(t.xx()).epsilon(1e-13));
  }
}

TEST_CASE("polarization vectors") {
  const auto sp = PolarizationVector::circular(1).components();
  CHECK(std::abs(sp[0] + 1.0 / std::sqrt(2.0)) < 1e-16);
  CHECK(std::abs(sp[1] - cplx(0.0, -1.0 / std::sqrt(2.0))) < 1e-16);
  const auto sph = cart_to_spherical(sp);
  // e_{+1} = -(x + i y)/sqrt(2) carries its weight in the q = -1 slot since
  // v = sum_q (-1)^q v_q e_{-q}.
  CHECK(std::abs(sph[spherical_index(-1)] + 1.0) < 1e-15);
  CHECK(std::abs(sph[spherical_index(1)]) < 1e-15);
  CHECK(PolarizationVector::linear_degrees(90.0).in_xz_plane());
  CHECK_FALSE(PolarizationVector::circular(-1).is_real());
  CHECK_THROWS(PolarizationVector::from_components({0.0, 0.0, 0.0}));
}
