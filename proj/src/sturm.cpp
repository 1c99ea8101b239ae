#include "kleinx/sturm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "kleinx/errors.hpp"
#include "kleinx/parallel.hpp"

namespace kleinx::sturm {
namespace {

constexpr double kPi = std::numbers::pi;

// Periodic spectral second-derivative matrix on an even n-point grid over a
// period of length L (Fourier collocation differentiation).
Eigen::MatrixXd second_derivative(int n, double L) {
  const double h = 2.0 * kPi / n;
  const double scale = std::pow(2.0 * kPi / L, 2);
  Eigen::MatrixXd d2(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        d2(i, j) = -kPi * kPi / (3.0 * h * h) - 1.0 / 6.0;
      } else {
        const double s = std::sin(0.5 * h * (i - j));
        const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
        d2(i, j) = -sign / (2.0 * s * s);
      }
    }
  }
  return scale * d2;
}

struct ChannelSolve {
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenfunctions;  // phi samples, max-norm 1
  std::vector<Parity> parities;
};

// Applies the grid reversal y -> -y (index j -> (n - j) mod n).
Eigen::VectorXd reversed(const Eigen::VectorXd& z) {
  const int n = static_cast<int>(z.size());
  Eigen::VectorXd r(n);
  for (int j = 0; j < n; ++j) r(j) = z((n - j) % n);
  return r;
}

ChannelSolve solve_channel(int k, const extremal::MetricProfile& weight,
                           int n, int count) {
  const double a = weight.period();
  Eigen::VectorXd f(n), inv_sqrt_f(n);
  for (int j = 0; j < n; ++j) {
    const double fj = weight(a * j / n);
    if (!(fj > 0.0)) {
      throw std::domain_error("weight must be positive on the grid");
    }
    f(j) = fj;
    inv_sqrt_f(j) = 1.0 / std::sqrt(fj);
  }

  Eigen::MatrixXd A = -second_derivative(n, a);
  A.diagonal().array() += static_cast<double>(k) * static_cast<double>(k);

  // Symmetric reduction of A phi = lambda diag(f) phi with z = sqrt(f) phi.
  Eigen::MatrixXd C =
      inv_sqrt_f.asDiagonal() * A * inv_sqrt_f.asDiagonal();
  C = 0.5 * (C + C.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigensolver failed to converge");
  }

  // Keep a margin past `count` so degenerate clusters are never split.
  const int kept = std::min(n, count + 4);
  Eigen::VectorXd lambda = es.eigenvalues().head(kept);
  Eigen::MatrixXd Z = es.eigenvectors().leftCols(kept);

  // Rotate each degenerate cluster into parity eigenvectors.  The reversal
  // commutes with the operator because the weight is even and periodic, so
  // it acts within eigenspaces.
  int lo = 0;
  while (lo < kept) {
    int hi = lo + 1;
    while (hi < kept &&
           std::abs(lambda(hi) - lambda(hi - 1)) <
               1e-8 * std::max(1.0, std::abs(lambda(hi)))) {
      ++hi;
    }
    const int m = hi - lo;
    if (m > 1) {
      Eigen::MatrixXd RZ(n, m);
      for (int c = 0; c < m; ++c) RZ.col(c) = reversed(Z.col(lo + c));
      Eigen::MatrixXd M = Z.middleCols(lo, m).transpose() * RZ;
      M = 0.5 * (M + M.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sub(M);
      Z.middleCols(lo, m) = (Z.middleCols(lo, m) * sub.eigenvectors()).eval();
    }
    lo = hi;
  }

  ChannelSolve out;
  for (int c = 0; c < count; ++c) {
    const Eigen::VectorXd z = Z.col(c);
    const double sym = z.dot(reversed(z));
    if (std::abs(sym) < 0.9) {
      throw NumericalError("parity classification failed for eigenvalue " +
                           std::to_string(lambda(c)));
    }

    Eigen::VectorXd phi = inv_sqrt_f.asDiagonal() * z;
    int arg_max = 0;
    phi.cwiseAbs().maxCoeff(&arg_max);
    phi /= phi(arg_max);  // max-norm 1 with a deterministic sign

    out.eigenvalues.push_back(lambda(c));
    out.eigenfunctions.emplace_back(phi.data(), phi.data() + n);
    out.parities.push_back(sym > 0.0 ? Parity::even : Parity::odd);
  }
  return out;
}

bool admissible(int k, Parity parity) {
  return (k % 2 == 0) ? parity == Parity::even : parity == Parity::odd;
}

}  // namespace

std::vector<SpectralLine> periodic_spectrum(
    int k, const extremal::MetricProfile& weight, int n, int count) {
  if (k < 0 || k > 2) {
    throw std::domain_error("angular index must be 0, 1, or 2");
  }
  if (n < 64 || n % 2 != 0) {
    throw std::domain_error("collocation grid must be even and >= 64");
  }
  if (count < 1 || count > n / 4) {
    throw std::domain_error("eigenvalue count out of range");
  }

  const ChannelSolve coarse = solve_channel(k, weight, n, count);
  const ChannelSolve fine = solve_channel(k, weight, 2 * n, count);
  for (int c = 0; c < count; ++c) {
    if (std::abs(coarse.eigenvalues[static_cast<std::size_t>(c)] -
                 fine.eigenvalues[static_cast<std::size_t>(c)]) > 1e-6) {
      throw NumericalError(
          "eigenvalue not converged at the requested grid size");
    }
    if (coarse.parities[static_cast<std::size_t>(c)] !=
        fine.parities[static_cast<std::size_t>(c)]) {
      throw NumericalError("parity unstable under grid refinement");
    }
  }

  std::vector<SpectralLine> lines;
  lines.reserve(static_cast<std::size_t>(count));
  for (int c = 0; c < count; ++c) {
    SpectralLine line;
    line.k_index = k;
    line.eigenvalue = coarse.eigenvalues[static_cast<std::size_t>(c)];
    line.eigenfunction = coarse.eigenfunctions[static_cast<std::size_t>(c)];
    line.parity = coarse.parities[static_cast<std::size_t>(c)];
    line.zero_count = count_eigenfunction_zeros(line);
    lines.push_back(std::move(line));
  }
  return lines;
}

int count_eigenfunction_zeros(const SpectralLine& line) {
  const auto& phi = line.eigenfunction;
  const int n = static_cast<int>(phi.size());
  if (n < 64) {
    throw std::domain_error("eigenfunction must carry at least 64 samples");
  }
  double amp = 0.0;
  for (double v : phi) amp = std::max(amp, std::abs(v));
  if (amp == 0.0) {
    throw NumericalError("zero eigenfunction has no sign pattern");
  }
  const double tiny = 1e-9 * amp;

  std::vector<int> solid;
  for (int j = 0; j < n; ++j) {
    if (std::abs(phi[static_cast<std::size_t>(j)]) > tiny) solid.push_back(j);
  }
  if (solid.empty()) {
    throw NumericalError("eigenfunction is unresolved at grid precision");
  }

  int changes = 0;
  const int m = static_cast<int>(solid.size());
  for (int s = 0; s < m; ++s) {
    const int i = solid[static_cast<std::size_t>(s)];
    const int j = solid[static_cast<std::size_t>((s + 1) % m)];
    const double vi = phi[static_cast<std::size_t>(i)];
    const double vj = phi[static_cast<std::size_t>(j)];
    const int gap = ((j - i) % n + n) % n - 1;
    if (gap >= 2) {
      // More than one consecutive candidate: sign changes inside the run
      // cannot be resolved by interpolating between the flanking samples.
      throw NumericalError("unresolved zero candidate run on the grid");
    }
    if (vi * vj < 0.0) ++changes;
  }
  return changes;
}

double rayleigh_quotient(int k, const extremal::MetricProfile& weight,
                         const std::vector<double>& phi) {
  const int n = static_cast<int>(phi.size());
  if (n < 64 || n % 2 != 0) {
    throw std::domain_error("sample grid must be even and >= 64");
  }
  if (k < 0 || k > 2) {
    throw std::domain_error("angular index must be 0, 1, or 2");
  }
  const double a = weight.period();
  Eigen::Map<const Eigen::VectorXd> v(phi.data(), n);

  Eigen::MatrixXd A = -second_derivative(n, a);
  A.diagonal().array() += static_cast<double>(k) * static_cast<double>(k);
  double num = v.dot(A * v);

  double den = 0.0;
  for (int j = 0; j < n; ++j) den += weight(a * j / n) * v(j) * v(j);
  if (den == 0.0) {
    throw NumericalError("degenerate Rayleigh quotient");
  }
  return num / den;
}

MultiplicityReport verify_multiplicity(int n) {
  const extremal::MetricProfile weight = extremal::metric_profile(
      std::max(64, n));
  constexpr int kCount = 5;

  std::vector<std::vector<SpectralLine>> channel(3);
  parallel::parallel_for(3, 3, [&](int k) {
    channel[static_cast<std::size_t>(k)] =
        periodic_spectrum(k, weight, n, kCount);
  });

  MultiplicityReport report;
  double lambda1 = 0.0;
  bool found = false;
  for (int k = 0; k < 3; ++k) {
    for (const auto& line : channel[static_cast<std::size_t>(k)]) {
      report.lines.push_back(line);
      if (!admissible(k, line.parity)) {
        if (line.eigenvalue > 1e-9 && line.eigenvalue < 1.0 - 1e-6) {
          report.excluded.push_back(line);
        }
        continue;
      }
      if (line.eigenvalue <= 1e-9) continue;  // the constant mode at zero
      if (!found || line.eigenvalue < lambda1) {
        lambda1 = line.eigenvalue;
        found = true;
      }
      if (line.eigenvalue < 1.0 - 1e-6) {
        report.violations.push_back(line.eigenvalue);
      }
    }
  }
  if (!found) {
    throw NumericalError("no admissible positive eigenvalue found");
  }
  report.lambda1 = lambda1;

  for (int k = 0; k < 3; ++k) {
    for (const auto& line : channel[static_cast<std::size_t>(k)]) {
      if (!admissible(k, line.parity) || line.eigenvalue <= 1e-9) continue;
      if (std::abs(line.eigenvalue - lambda1) < 1e-6) {
        const int mult = (k == 0) ? 1 : 2;
        report.contributions.push_back({k, line.eigenvalue, mult});
        report.multiplicity += mult;
      }
    }
  }

  report.ok = report.violations.empty() &&
              std::abs(report.lambda1 - 1.0) < 1e-6 &&
              report.multiplicity == 5;

  std::ostringstream os;
  os << "smallest positive admissible eigenvalue " << report.lambda1
     << " with multiplicity " << report.multiplicity << " ("
     << report.violations.size() << " admissibility violations)";
  report.summary = os.str();
  return report;
}

}  // namespace kleinx::sturm
