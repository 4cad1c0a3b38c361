#pragma once

// Reference computations used only by the tests. Each one is written from the
// defining formula with plain loops and shares no code path with the library
// routine it checks.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// I (x) ... (x) op (x) ... (x) I, qubit 0 leftmost.
inline Mat embed(const Mat& op, std::size_t target, std::size_t n) {
  Mat out = Mat::Identity(1, 1);
  for (std::size_t q = 0; q < n; ++q) out = kron(out, q == target ? op : Mat(Mat::Identity(2, 2)));
  return out;
}

/// Dense controlled-U built entry by entry from the basis action.
inline Mat controlled(const Mat& u, std::size_t control, std::size_t target, std::size_t n) {
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t cmask = std::size_t{1} << (n - 1 - control);
  const std::size_t tmask = std::size_t{1} << (n - 1 - target);
  Mat out = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t col = 0; col < dim; ++col) {
    if (!(col & cmask)) {
      out(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(col)) = 1.0;
      continue;
    }
    const std::size_t in_bit = (col & tmask) ? 1 : 0;
    for (std::size_t out_bit = 0; out_bit < 2; ++out_bit) {
      const std::size_t row = (col & ~tmask) | (out_bit ? tmask : 0);
      out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
          u(static_cast<Eigen::Index>(out_bit), static_cast<Eigen::Index>(in_bit));
    }
  }
  return out;
}

/// exp(a) by scaling, a 40-term Taylor series, and repeated squaring.
inline Mat expm_taylor(const Mat& a) {
  double norm = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) row += std::abs(a(i, j));
    norm = std::max(norm, row);
  }
  int squarings = 0;
  while (norm > 0.25) {
    norm /= 2.0;
    ++squarings;
  }
  const Mat scaled = a / std::pow(2.0, squarings);
  Mat term = Mat::Identity(a.rows(), a.cols());
  Mat sum = term;
  for (int k = 1; k <= 40; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// Singular values of a 2x2 matrix, descending, from the eigenvalues of M^dagger M.
inline std::vector<double> singular_values_2x2(const Mat& m) {
  const double frob = std::norm(m(0, 0)) + std::norm(m(0, 1)) + std::norm(m(1, 0)) + std::norm(m(1, 1));
  const double det = std::abs(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
  const double disc = std::sqrt(std::max(0.0, frob * frob - 4.0 * det * det));
  return {std::sqrt((frob + disc) / 2.0), std::sqrt(std::max(0.0, (frob - disc) / 2.0))};
}

inline Mat spin_xz(double angle) {
  Mat s(2, 2);
  s << std::cos(angle), std::sin(angle), std::sin(angle), -std::cos(angle);
  return s;
}

/// <singlet| (n_a . sigma) (x) (n_b . sigma) |singlet> summed over all 16 entries.
inline double epr_expectation(double angle_a, double angle_b) {
  const double r = 1.0 / std::sqrt(2.0);
  const cplx psi[4] = {0.0, r, -r, 0.0};
  const Mat op = kron(spin_xz(angle_a), spin_xz(angle_b));
  cplx sum = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) sum += std::conj(psi[i]) * op(i, j) * psi[j];
  return sum.real();
}

struct Lattice {
  std::size_t n_slices;
  std::size_t n_sites;
  double dx, dt, mass, hbar;
  std::vector<double> v;  // may be empty
  std::vector<double> a;  // may be empty
  double charge = 1.0;
  double light_speed = 1.0;
  bool periodic = false;
};

inline double separation(const Lattice& l, std::size_t from, std::size_t to) {
  double d = static_cast<double>(to) - static_cast<double>(from);
  if (l.periodic) {
    const double n = static_cast<double>(l.n_sites);
    if (d > n / 2.0) d -= n;
    if (d < -n / 2.0) d += n;
  }
  return d * l.dx;
}

inline double path_action(const Lattice& l, const std::vector<std::size_t>& sites) {
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < sites.size(); ++k) {
    const double d = separation(l, sites[k], sites[k + 1]);
    const double vel = d / l.dt;
    const double pot = l.v.empty() ? 0.0 : l.v[sites[k]];
    const double vec = l.a.empty() ? 0.0 : l.a[sites[k]];
    s += (0.5 * l.mass * vel * vel - pot + l.charge / l.light_speed * vec * vel) * l.dt;
  }
  return s;
}

/// Sum over all n_sites^(n_slices-1) paths of N0^n_slices exp(i S / hbar) dx^(n_slices-1).
inline std::vector<cplx> enumerate_paths(const Lattice& l, std::size_t source) {
  const cplx n0 = std::sqrt(cplx(l.mass / (2.0 * std::numbers::pi * l.hbar * l.dt), 0.0) / cplx(0.0, 1.0));
  const std::size_t inner = l.n_slices - 1;
  std::size_t n_paths = 1;
  for (std::size_t k = 0; k < inner; ++k) n_paths *= l.n_sites;
  std::vector<cplx> out(l.n_sites, 0.0);
  const cplx weight = std::pow(n0, static_cast<int>(l.n_slices)) * std::pow(l.dx, static_cast<double>(inner));
  std::vector<std::size_t> sites(l.n_slices + 1);
  for (std::size_t end = 0; end < l.n_sites; ++end) {
    for (std::size_t code = 0; code < n_paths; ++code) {
      sites.front() = source;
      sites.back() = end;
      std::size_t c = code;
      for (std::size_t k = 1; k <= inner; ++k) {
        sites[k] = c % l.n_sites;
        c /= l.n_sites;
      }
      out[end] += weight * std::polar(1.0, path_action(l, sites) / l.hbar);
    }
  }
  return out;
}

/// sqrt(m / (2 pi i hbar T)) exp(i m x^2 / (2 hbar T))
inline cplx free_propagator(double mass, double hbar, double total_time, double x) {
  const cplx pref = std::sqrt(cplx(mass / (2.0 * std::numbers::pi * hbar * total_time), 0.0) / cplx(0.0, 1.0));
  return pref * std::polar(1.0, mass * x * x / (2.0 * hbar * total_time));
}

}  // namespace oracle
