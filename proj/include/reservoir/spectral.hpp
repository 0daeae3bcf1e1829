#pragma once

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace reservoir {

// Cycle comparison in the frequency domain: two series are judged to share a
// cycle structure when the same frequencies dominate, so the statistic is the
// rank correlation of their amplitude spectra over the positive frequencies.

struct CycleCorrelation {
  double rank = 0.0;          // Spearman correlation of amplitude ranks
  double pearson_raw = 0.0;   // Pearson correlation of the raw input levels
  int frequencies = 0;        // positive frequencies compared
};

namespace detail {

// FFTW plan creation is not thread safe; executing distinct plans is.
inline std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

inline std::vector<double> amplitude_spectrum(const std::vector<double>& x) {
  int n = static_cast<int>(x.size());
  std::vector<double> in(x);
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  std::vector<double> amp(n / 2);  // k = 1 .. n/2, the zero frequency is dropped
  for (int k = 1; k <= n / 2; ++k) amp[k - 1] = std::abs(out[k]);
  return amp;
}

inline std::vector<double> average_ranks(const std::vector<double>& v) {
  int n = static_cast<int>(v.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
  std::vector<double> rank(n);
  int i = 0;
  while (i < n) {
    int j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    double r = 0.5 * (i + j) + 1.0;  // ties share the average rank
    for (int m = i; m <= j; ++m) rank[idx[m]] = r;
    i = j + 1;
  }
  return rank;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  int n = static_cast<int>(a.size());
  double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double num = 0.0, va = 0.0, vb = 0.0;
  for (int i = 0; i < n; ++i) {
    num += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  if (!(va > 0.0) || !(vb > 0.0))
    throw std::runtime_error("pearson: a series has zero variance");
  return num / std::sqrt(va * vb);
}

}  // namespace detail

// Rank correlation of the amplitude spectra of two growth processes. With
// use_growth (the default) the inputs are positive level series and the
// spectra are taken over x[t]/x[t-1] - 1; otherwise the inputs are
// transformed as given. Frequencies where either spectrum is exactly zero
// are dropped. Identical spectra short-circuit to exactly 1.
inline CycleCorrelation cycle_rank_correlation(const std::vector<double>& a,
                                               const std::vector<double>& b,
                                               bool use_growth = true) {
  if (a.size() != b.size())
    throw std::invalid_argument("cycle_rank_correlation: series lengths differ");
  if (a.size() < 16)
    throw std::invalid_argument("cycle_rank_correlation: series too short, need 16 points");

  std::vector<double> xa(a), xb(b);
  if (use_growth) {
    auto growth = [](const std::vector<double>& x, const char* which) {
      std::vector<double> g(x.size() - 1);
      for (size_t t = 0; t + 1 < x.size(); ++t) {
        if (!(x[t] > 0.0))
          throw std::domain_error(std::string("cycle_rank_correlation: series ") + which +
                                  " has a non-positive level at index " + std::to_string(t));
        g[t] = x[t + 1] / x[t] - 1.0;
      }
      if (!(x.back() > 0.0))
        throw std::domain_error(std::string("cycle_rank_correlation: series ") + which +
                                " has a non-positive level at index " +
                                std::to_string(x.size() - 1));
      return g;
    };
    xa = growth(a, "a");
    xb = growth(b, "b");
  }

  std::vector<double> amp_a = detail::amplitude_spectrum(xa);
  std::vector<double> amp_b = detail::amplitude_spectrum(xb);
  std::vector<double> fa, fb;
  for (size_t k = 0; k < amp_a.size(); ++k)
    if (amp_a[k] > 0.0 && amp_b[k] > 0.0) {
      fa.push_back(amp_a[k]);
      fb.push_back(amp_b[k]);
    }
  if (fa.size() < 3)
    throw std::runtime_error("cycle_rank_correlation: too few active frequencies");

  CycleCorrelation out;
  out.frequencies = static_cast<int>(fa.size());
  out.pearson_raw = detail::pearson(a, b);
  std::vector<double> ra = detail::average_ranks(fa), rb = detail::average_ranks(fb);
  out.rank = ra == rb ? 1.0 : detail::pearson(ra, rb);
  return out;
}

}  // namespace reservoir
