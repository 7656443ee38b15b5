#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

#include "toepcov/estimators.hpp"

namespace toepcov {

Vector circulant_spectrum(const CMatrix& samples) {
  const auto d = samples.rows();
  const auto n = samples.cols();
  if (d == 0 || n == 0) throw std::invalid_argument("circulant_spectrum: empty sample matrix");
  Eigen::FFT<double> fft;
  Vector power = Vector::Zero(d);
  CVector in(d);
  CVector out(d);
  for (Eigen::Index l = 0; l < n; ++l) {
    // (F^* x)_j = conj(DFT(conj x))_j / sqrt(d) for the unitary F with entries e^{-2 pi i j r / d}.
    in = samples.col(l).conjugate();
    fft.fwd(out, in);
    power += out.cwiseAbs2();
  }
  return power / (static_cast<double>(d) * static_cast<double>(n));
}

EstimateReport estimate_circulant(const ObservationSet& obs) {
  const int d = obs.d();
  if (static_cast<int>(obs.pattern().size()) != d) {
    throw std::invalid_argument("estimate_circulant: requires every coordinate to be observed");
  }
  CMatrix samples = obs.observed().cast<std::complex<double>>();
  Vector spectrum = circulant_spectrum(samples);
  if (obs.scale() == ColumnScale::InvSqrtN) spectrum *= static_cast<double>(obs.n());

  // First column c_m = (1/d) sum_j lambda_j e^{-2 pi i j m / d}.
  Eigen::FFT<double> fft;
  CVector lambda = spectrum.cast<std::complex<double>>();
  CVector column(d);
  fft.fwd(column, lambda);
  Vector a = column.real() / static_cast<double>(d);

  EstimateReport report{ToeplitzVector(std::move(a)), "circulant", std::nullopt, counters_of(obs), true, {}};
  FrequencyModel model;
  model.d = d;
  for (int j = 0; j < d; ++j) {
    model.freqs.push_back(static_cast<double>(j) / d);
    model.weights.push_back(spectrum[j] / d);
  }
  report.model = std::move(model);
  return report;
}

}  // namespace toepcov
