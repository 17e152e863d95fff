#pragma once

// Rotating-frame interaction matrix H_R / (g_F mu_B) in the |F, m> basis and
// a cyclic Jacobi eigensolver for small Hermitian matrices.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "dressed_trap/dressed.hpp"

namespace dressed_trap {

/// Dense Hermitian matrix, rows and columns ordered m = F, F-1, ..., -F.
class InteractionMatrix {
 public:
  using value_type = std::complex<double>;

  explicit InteractionMatrix(int dim) : dim_(dim), data_(dim * dim) {}

  int dim() const { return dim_; }
  value_type operator()(int i, int j) const { return data_[i * dim_ + j]; }
  value_type& operator()(int i, int j) { return data_[i * dim_ + j]; }

 private:
  int dim_;
  std::vector<value_type> data_;
};

/// <m|F_+|m-1> / hbar.
inline double ladder_coefficient(double F, double m) {
  return std::sqrt(F * (F + 1.0) - m * (m - 1.0));
}

/// `detuning_G` is |B^S| - hbar omega / (g_F mu_B) expressed in Gauss.
/// Entries are in Gauss (the matrix is H_R divided by g_F mu_B).
inline InteractionMatrix interaction_matrix(const AtomSpecies& species, double detuning_G,
                                            const LocalRfHarmonics& h) {
  const int twice_F = species.twice_F();
  if (twice_F < 1 || twice_F > 4)
    fail(Errc::unsupported_parameter,
         "interaction matrix supports F in {1/2, 1, 3/2, 2}, got F = " +
             std::to_string(species.F()));

  using cplx = std::complex<double>;
  const double F = species.F();
  const int dim = twice_F + 1;
  // Coupling phasor multiplying F_+ / 4.
  const cplx up = h.A1 - cplx(0.0, 1.0) * h.A2 * std::polar(1.0, h.gamma);

  InteractionMatrix M(dim);
  for (int i = 0; i < dim; ++i) {
    const double m = F - i;
    M(i, i) = m * detuning_G;
    if (i + 1 < dim) {
      const double c = ladder_coefficient(F, m) / 4.0;
      M(i, i + 1) = c * up;
      M(i + 1, i) = c * std::conj(up);
    }
  }
  return M;
}

struct JacobiOptions {
  int max_sweeps = 100;
  double tolerance = 1e-14;  // off-diagonal Frobenius norm relative to the full norm
};

/// All eigenvalues of a Hermitian matrix, ascending. Works on a private copy.
inline std::vector<double> eigenvalues(const InteractionMatrix& input,
                                       const JacobiOptions& opt = {}) {
  using cplx = std::complex<double>;
  InteractionMatrix A = input;
  const int n = A.dim();

  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) total += std::norm(A(i, j));
  total = std::sqrt(total);

  auto off_norm = [&] {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) s += std::norm(A(i, j));
    return std::sqrt(s);
  };

  bool converged = total == 0.0 || off_norm() <= opt.tolerance * total;
  for (int sweep = 0; sweep < opt.max_sweeps && !converged; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cplx apq = A(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const cplx u = apq / mag;

        // Phase q so the (p, q) entry is real, then a real Givens rotation.
        const double app = A(p, p).real(), aqq = A(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const cplx jpp = c, jpq = s, jqp = -s * std::conj(u), jqq = c * std::conj(u);

        for (int k = 0; k < n; ++k) {  // A <- A J
          const cplx akp = A(k, p), akq = A(k, q);
          A(k, p) = akp * jpp + akq * jqp;
          A(k, q) = akp * jpq + akq * jqq;
        }
        for (int k = 0; k < n; ++k) {  // A <- J^H A
          const cplx apk = A(p, k), aqk = A(q, k);
          A(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          A(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        A(p, q) = 0.0;
        A(q, p) = 0.0;
        A(p, p) = A(p, p).real();
        A(q, q) = A(q, q).real();
      }
    }
    converged = off_norm() <= opt.tolerance * total;
  }
  if (!converged)
    fail(Errc::numerical_failure, "Jacobi eigensolver did not converge");

  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = A(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace dressed_trap
