#pragma once

#include <string>
#include <vector>

#include "kleinx/extremal.hpp"

namespace kleinx::sturm {

enum class Parity { even, odd };

inline const char* to_string(Parity p) {
  return p == Parity::even ? "even" : "odd";
}

/// One line of the periodic spectrum of (-D^2 + k^2) phi = lambda F phi.
struct SpectralLine {
  int k_index = 0;
  double eigenvalue = 0.0;
  std::vector<double> eigenfunction;  // samples at y_j = a j / n, j = 0..n-1
  Parity parity = Parity::even;
  int zero_count = 0;
};

/// Lowest `count` eigenvalues of the periodic weighted problem in the k-th
/// angular channel, solved by Fourier collocation on an n-point grid.  The
/// result is validated against a grid of size 2n; a discrepancy above 1e-6
/// in any reported eigenvalue raises NumericalError.
std::vector<SpectralLine> periodic_spectrum(int k,
                                            const extremal::MetricProfile& weight,
                                            int n, int count);

/// Sign-change count of the sampled eigenfunction over one period.  Samples
/// below 1e-9 * max|phi| are treated as crossing candidates and resolved
/// from the flanking signs; an unresolvable candidate raises NumericalError.
int count_eigenfunction_zeros(const SpectralLine& line);

/// Generalized Rayleigh quotient <phi, (-D^2 + k^2) phi> / <phi, F phi>
/// evaluated on the grid carried by the sampled eigenfunction.
double rayleigh_quotient(int k, const extremal::MetricProfile& weight,
                         const std::vector<double>& phi);

struct ChannelContribution {
  int k_index = 0;
  double eigenvalue = 0.0;  // the admissible eigenvalue at the bottom
  int multiplicity = 0;     // 1 for k = 0, else 2
};

/// Outcome of assembling the three channels into the quotient spectrum.
struct MultiplicityReport {
  bool ok = false;
  double lambda1 = 0.0;  // smallest positive admissible eigenvalue
  int multiplicity = 0;  // total multiplicity carried by lambda1
  std::vector<ChannelContribution> contributions;
  std::vector<SpectralLine> lines;       // everything computed, all channels
  std::vector<SpectralLine> excluded;    // parity-inadmissible lines below 1
  std::vector<double> violations;        // admissible eigenvalues in (0, 1-1e-6)
  std::string summary;
};

/// Computes the three channel spectra on an n-point grid and checks that
/// lambda = 1 is the smallest positive admissible eigenvalue with total
/// multiplicity five.
MultiplicityReport verify_multiplicity(int n = 256);

}  // namespace kleinx::sturm
