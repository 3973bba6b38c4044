#include "magictrap/angular.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace magictrap {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

constexpr int kMaxFactorial = 400;

const std::vector<cpp_int>& factorials() {
  static const std::vector<cpp_int> table = [] {
    std::vector<cpp_int> f(kMaxFactorial + 1);
    f[0] = 1;
    for (int n = 1; n <= kMaxFactorial; ++n) f[n] = f[n - 1] * n;
    return f;
  }();
  return table;
}

const cpp_int& fact(int n) {
  if (n < 0 || n > kMaxFactorial) throw std::out_of_range("three_j: angular momentum too large");
  return factorials()[static_cast<std::size_t>(n)];
}

bool triangle(int a, int b, int c) { return c >= std::abs(a - b) && c <= a + b; }

int parity_sign(int n) { return (n % 2 == 0) ? 1 : -1; }

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

}  // namespace

namespace {

double three_j_exact(int j1, int j2, int j3, int m1, int m2, int m3) {
  if (j1 < 0 || j2 < 0 || j3 < 0) return 0.0;
  if (m1 + m2 + m3 != 0) return 0.0;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0.0;
  if (!triangle(j1, j2, j3)) return 0.0;
  // (j1 j2 j3; 0 0 0) vanishes for odd J = j1+j2+j3.
  if (m1 == 0 && m2 == 0 && (j1 + j2 + j3) % 2 != 0) return 0.0;

  const int k_min = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
  const int k_max = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});

  cpp_rational sum = 0;
  for (int k = k_min; k <= k_max; ++k) {
    cpp_int den = fact(k) * fact(j3 - j2 + k + m1) * fact(j3 - j1 + k - m2) *
                  fact(j1 + j2 - j3 - k) * fact(j1 - k - m1) * fact(j2 - k + m2);
    cpp_rational term(cpp_int(1), den);
    if (k % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  if (sum == 0) return 0.0;

  const cpp_int pre_num = fact(j1 + j2 - j3) * fact(j1 - j2 + j3) * fact(-j1 + j2 + j3) *
                          fact(j1 + m1) * fact(j1 - m1) * fact(j2 + m2) * fact(j2 - m2) *
                          fact(j3 + m3) * fact(j3 - m3);
  const cpp_rational squared = cpp_rational(pre_num, fact(j1 + j2 + j3 + 1)) * sum * sum;

  const double magnitude = std::sqrt(squared.convert_to<double>());
  const int sign = parity_sign(j1 - j2 - m3) * (sum > 0 ? 1 : -1);
  return sign * magnitude;
}

}  // namespace

double three_j(int j1, int j2, int j3, int m1, int m2, int m3) {
  // Memoized per thread; the exact evaluation is costly and the engines ask
  // for the same few hundred symbols over and over.
  constexpr int kBits = 10;
  constexpr int kOffset = 1 << (kBits - 1);
  const bool small = j1 >= 0 && j2 >= 0 && j3 >= 0 && j1 < kOffset && j2 < kOffset && j3 < kOffset &&
                     std::abs(m1) < kOffset && std::abs(m2) < kOffset;
  if (!small) return three_j_exact(j1, j2, j3, m1, m2, m3);
  if (m1 + m2 + m3 != 0) return 0.0;
  const std::uint64_t key = (std::uint64_t(j1) << (4 * kBits)) | (std::uint64_t(j2) << (3 * kBits)) |
                            (std::uint64_t(j3) << (2 * kBits)) | (std::uint64_t(m1 + kOffset) << kBits) |
                            std::uint64_t(m2 + kOffset);
  thread_local std::unordered_map<std::uint64_t, double> cache;
  const auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const double v = three_j_exact(j1, j2, j3, m1, m2, m3);
  cache.emplace(key, v);
  return v;
}

double c_tensor_element(int l, int q, int j, int m, int jp, int mp) {
  if (m != mp + q) return 0.0;
  const double reduced = three_j(j, l, jp, 0, 0, 0);
  if (reduced == 0.0) return 0.0;
  return parity_sign(m) * std::sqrt(static_cast<double>((2 * j + 1) * (2 * jp + 1))) *
         three_j(j, l, jp, -m, q, mp) * reduced;
}

double symmetric_top_dipole(int j, int m, int je, int me, int lambda, int q) {
  if (std::abs(lambda) > je || std::abs(me) > je || std::abs(m) > j) return 0.0;
  if (m != me + q) return 0.0;
  // <J M K| D^{k*}_{qp} |J' M' K'> =
  //   (-1)^{q-p+M'-K'} sqrt((2J+1)(2J'+1)) (J k J'; M -q -M') (J k J'; K -p -K')
  // with K = 0, K' = Lambda and p = -Lambda.
  const double body = three_j(j, 1, je, 0, lambda, -lambda);
  if (body == 0.0) return 0.0;
  return parity_sign(q + me) * std::sqrt(static_cast<double>((2 * j + 1) * (2 * je + 1))) *
         three_j(j, 1, je, m, -q, -me) * body;
}

cplx f_factor_complex(int je, int me, int lambda, int j, int m, Branch branch, Axis sigma) {
  // Cartesian component as a combination of spherical ones: the sigma-th
  // entry of spherical_to_cart applied to each unit spherical vector.
  auto spherical_element = [&](int mm) {
    CVec3 s{};
    for (int q = -1; q <= 1; ++q) s[spherical_index(q)] = symmetric_top_dipole(j, mm, je, me, lambda, q);
    return spherical_to_cart(s)[static_cast<int>(sigma)];
  };
  if (branch == Branch::none || m == 0) return spherical_element(m);
  const int am = std::abs(m);
  const double s = branch == Branch::plus ? 1.0 : -1.0;
  // Bra is (<J M| ± <J -M|)/sqrt(2) with real coefficients.
  return kInvSqrt2 * (spherical_element(am) + s * spherical_element(-am));
}

double f_factor(int je, int me, int lambda, int j, int m, Branch branch, Axis sigma) {
  const cplx v = f_factor_complex(je, me, lambda, j, m, branch, sigma);
  return sigma == Axis::y ? v.imag() : v.real();
}

CVec3 cart_to_spherical(const CVec3& v) {
  const cplx i{0.0, 1.0};
  CVec3 s;
  s[spherical_index(-1)] = kInvSqrt2 * (v[0] - i * v[1]);
  s[spherical_index(0)] = v[2];
  s[spherical_index(1)] = -kInvSqrt2 * (v[0] + i * v[1]);
  return s;
}

CVec3 spherical_to_cart(const CVec3& s) {
  const cplx i{0.0, 1.0};
  const cplx sm = s[spherical_index(-1)];
  const cplx sp = s[spherical_index(1)];
  return {kInvSqrt2 * (sm - sp), i * kInvSqrt2 * (sm + sp), s[spherical_index(0)]};
}

}  // namespace magictrap
