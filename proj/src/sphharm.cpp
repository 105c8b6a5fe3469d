#include "fsae/sphharm.hpp"

#include <cmath>
#include <stdexcept>

namespace fsae::sphharm {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

// Fully-normalized associated Legendre recurrence: Ptilde_lm includes
// sqrt((2l+1)(l-m)! / (4 pi (l+m)!)) so that the real harmonics are
// Ptilde_l0 and sqrt(2) * Ptilde_lm * {cos,sin}(m phi).
void eval_point(int l_max, double theta, double phi, std::vector<double>& out) {
  if (l_max < 0) throw std::invalid_argument("sphharm: negative degree");
  const int n = basis_count(l_max);
  out.assign(size_t(n), 0.0);
  const double ct = std::cos(theta);
  const double st = std::sin(theta);

  std::vector<double> pmm(size_t(l_max + 1));            // Ptilde_mm
  std::vector<double> plm(size_t(l_max + 1));            // current column workspace
  pmm[0] = std::sqrt(1.0 / (4.0 * kPi));
  for (int m = 1; m <= l_max; ++m)
    pmm[size_t(m)] = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * st * pmm[size_t(m - 1)];

  std::vector<double> cosm(size_t(l_max + 1)), sinm(size_t(l_max + 1));
  for (int m = 0; m <= l_max; ++m) {
    cosm[size_t(m)] = std::cos(m * phi);
    sinm[size_t(m)] = std::sin(m * phi);
  }

  for (int m = 0; m <= l_max; ++m) {
    double p_prev2 = 0.0;
    double p_prev = pmm[size_t(m)];
    for (int l = m; l <= l_max; ++l) {
      double p;
      if (l == m) {
        p = p_prev;
      } else {
        const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
        double b = 0.0;
        if (l - 1 > m)
          b = std::sqrt(((l - 1.0) * (l - 1.0) - double(m) * m) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
        p = a * (ct * p_prev - b * p_prev2);
        p_prev2 = p_prev;
        p_prev = p;
      }
      if (m == 0) {
        out[size_t(pack(l, 0))] = p;
      } else {
        const double s2 = std::sqrt(2.0);
        out[size_t(pack(l, m))] = s2 * p * cosm[size_t(m)];
        out[size_t(pack(l, -m))] = s2 * p * sinm[size_t(m)];
      }
    }
  }
}

std::vector<double> basis_matrix(int z, int l_max) {
  const std::int64_t np = healpix::npix(z);
  const int n = basis_count(l_max);
  std::vector<double> mat(size_t(np) * size_t(n));
  std::vector<double> row;
  for (std::int64_t p = 0; p < np; ++p) {
    const auto pt = healpix::pix2ang(p, z);
    eval_point(l_max, pt.theta, pt.phi, row);
    std::copy(row.begin(), row.end(), mat.begin() + size_t(p) * size_t(n));
  }
  return mat;
}

}  // namespace fsae::sphharm
