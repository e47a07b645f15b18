#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "fskjcr/error.hpp"
#include "fskjcr/jcr_sim.hpp"

namespace fskjcr {

namespace {

using cd = std::complex<double>;

// sum_{k=0}^{n-1} e^{j theta k}
cd geometric(double theta, long n) {
  theta = std::remainder(theta, 2.0 * std::numbers::pi);
  const double half = 0.5 * theta;
  const double s = std::sin(half);
  const double nd = static_cast<double>(n);
  if (std::abs(s) < 1e-14) return {nd, 0.0};
  return std::polar(std::sin(nd * half) / s, half * (nd - 1.0));
}

// A(D, w) = sum_m s[m - D] conj(s[m]) e^{j w m / fs} for the sampled FSK
// envelope s, summed segment by segment where both tones are constant.
class SegmentCorrelator {
 public:
  SegmentCorrelator(const WaveformParams& p, const FrequencySequence& seq)
      : spp_(p.samples_per_subpulse), N_(static_cast<long>(seq.size()) * p.samples_per_subpulse),
        fs_(p.sample_rate()) {
    alpha_.reserve(seq.size());
    for (int m : seq.indices()) alpha_.push_back(2.0 * std::numbers::pi * p.tone_frequency(m) / fs_);
  }

  long samples() const { return N_; }

  cd operator()(long D, double w) const {
    const long lo = std::max(0L, D);
    const long hi = std::min(N_, N_ + D);
    const double wn = w / fs_;
    cd sum{};
    long m = lo;
    while (m < hi) {
      const long p = (m - D) / spp_;  // subpulse of the shifted copy
      const long q = m / spp_;        // subpulse of the reference
      const long end = std::min({hi, (p + 1) * spp_ + D, (q + 1) * spp_});
      const double a = alpha_[static_cast<std::size_t>(p)];
      const double b = alpha_[static_cast<std::size_t>(q)];
      const double phase0 = a * static_cast<double>(m - D - p * spp_) - b * static_cast<double>(m - q * spp_) +
                            wn * static_cast<double>(m);
      sum += std::polar(1.0, phase0) * geometric(a - b + wn, end - m);
      m = end;
    }
    return sum;
  }

 private:
  long spp_;
  long N_;
  double fs_;
  std::vector<double> alpha_;
};

// Diagonally pivoted Cholesky of a Hermitian PSD matrix, stopped once the
// largest remaining pivot drops below tol * max diag. On return
// G(perm[i], perm[j]) ~= (F F^H)(i, j) with F n x rank. Unlike LDLT this stays
// accurate when G is numerically rank deficient, which a fine Doppler grid makes it.
void pivoted_cholesky(const Eigen::MatrixXcd& G, Eigen::MatrixXcd& F, Eigen::VectorXi& perm,
                      double tol = 1e-13) {
  const Eigen::Index n = G.rows();
  Eigen::MatrixXcd A = G;
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXd d = A.diagonal().real();
  perm = Eigen::VectorXi::LinSpaced(n, 0, static_cast<int>(n - 1));
  const double floor = tol * (n > 0 ? d.maxCoeff() : 0.0);
  Eigen::Index k = 0;
  for (; k < n; ++k) {
    Eigen::Index p = 0;
    const double dmax = d.tail(n - k).maxCoeff(&p);
    p += k;
    if (!(dmax > floor)) break;
    if (p != k) {
      std::swap(d(k), d(p));
      std::swap(perm(k), perm(p));
      A.row(k).swap(A.row(p));
      A.col(k).swap(A.col(p));
      L.row(k).swap(L.row(p));
    }
    const double lkk = std::sqrt(dmax);
    L(k, k) = lkk;
    const Eigen::Index m = n - k - 1;
    if (m > 0) {
      L.col(k).tail(m) = (A.col(k).tail(m) - L.block(k + 1, 0, m, k) * L.row(k).head(k).adjoint()) / lkk;
      d.tail(m) -= L.col(k).tail(m).cwiseAbs2();
    }
  }
  F = L.leftCols(k);
}

}  // namespace

struct MatchedFilterModel::Impl {
  SearchGrid grid;
  std::size_t truth = 0;
  double fs = 0.0;
  double energy = 0.0;
  Eigen::MatrixXcd G;
  Eigen::MatrixXcd F;    // n x rank lower-trapezoidal factor of the permuted G
  Eigen::VectorXi perm;  // z[perm[i]] = (F w)[i]
  Eigen::VectorXcd S;
};

MatchedFilterModel::MatchedFilterModel(const WaveformParams& params, const FrequencySequence& seq,
                                       const SearchGrid& grid, std::size_t truth_index)
    : impl_(std::make_unique<Impl>()) {
  params.validate(true);
  grid.validate();
  if (seq.alphabet() != params.M) throw ParameterError("sequence alphabet differs from params.M");
  if (truth_index >= grid.size()) throw ParameterError("truth index outside the grid");

  auto& I = *impl_;
  I.grid = grid;
  I.truth = truth_index;
  I.fs = params.sample_rate();

  const SegmentCorrelator corr(params, seq);
  I.energy = static_cast<double>(corr.samples());

  // Delays in whole samples.
  auto to_samples = [&](double tau) {
    const double x = tau * I.fs;
    const double r = std::round(x);
    if (std::abs(x - r) > 1e-6) throw ParameterError("fast matched-filter model needs whole-sample grid delays");
    return static_cast<long>(r);
  };
  const long d0 = to_samples(grid.tau_min);
  const long dstep = grid.n_tau > 1 ? to_samples(grid.tau_min + grid.tau_step) - d0 : 0;

  // A table over delay and Doppler index differences.
  const int nt = grid.n_tau;
  const int nw = grid.n_omega;
  Eigen::MatrixXcd A(2 * nt - 1, 2 * nw - 1);
  for (int di = -(nt - 1); di <= nt - 1; ++di)
    for (int dj = -(nw - 1); dj <= nw - 1; ++dj)
      A(di + nt - 1, dj + nw - 1) = corr(static_cast<long>(di) * dstep, dj * grid.omega_step);

  const auto n = static_cast<Eigen::Index>(grid.size());
  I.G.resize(n, n);
  for (int i1 = 0; i1 < nt; ++i1) {
    const double d1 = static_cast<double>(d0 + i1 * dstep);
    for (int j1 = 0; j1 < nw; ++j1) {
      const auto g1 = static_cast<Eigen::Index>(grid.index(i1, j1));
      for (int i2 = 0; i2 < nt; ++i2) {
        for (int j2 = 0; j2 < nw; ++j2) {
          const auto g2 = static_cast<Eigen::Index>(grid.index(i2, j2));
          const double dw = (j2 - j1) * grid.omega_step;
          I.G(g1, g2) = std::polar(1.0, dw * d1 / I.fs) * A(i2 - i1 + nt - 1, j2 - j1 + nw - 1);
        }
      }
    }
  }
  I.S = I.G.col(static_cast<Eigen::Index>(truth_index));

  pivoted_cholesky(I.G, I.F, I.perm);
}

MatchedFilterModel::~MatchedFilterModel() = default;
MatchedFilterModel::MatchedFilterModel(MatchedFilterModel&&) noexcept = default;
MatchedFilterModel& MatchedFilterModel::operator=(MatchedFilterModel&&) noexcept = default;

std::size_t MatchedFilterModel::size() const { return impl_->grid.size(); }
std::size_t MatchedFilterModel::truth_index() const { return impl_->truth; }
const SearchGrid& MatchedFilterModel::grid() const { return impl_->grid; }
double MatchedFilterModel::sample_rate() const { return impl_->fs; }
double MatchedFilterModel::energy() const { return impl_->energy; }

std::complex<double> MatchedFilterModel::gram(std::size_t g1, std::size_t g2) const {
  return impl_->G(static_cast<Eigen::Index>(g1), static_cast<Eigen::Index>(g2));
}

std::complex<double> MatchedFilterModel::signal(std::size_t g) const {
  return impl_->S(static_cast<Eigen::Index>(g));
}

void MatchedFilterModel::draw_noise(Rng& rng, cvec& out) const {
  const auto& I = *impl_;
  const Eigen::Index r = I.F.cols();
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  Eigen::VectorXcd w(r);
  for (Eigen::Index k = 0; k < r; ++k) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    w(k) = cd(re, im);
  }
  const Eigen::VectorXcd v = I.F * w;
  out.assign(static_cast<std::size_t>(v.size()), cd{});
  for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(I.perm(i))] = v(i);
}

EstimationResult MatchedFilterModel::estimate(std::complex<double> b, double noise_var,
                                              std::span<const std::complex<double>> z) const {
  const auto& I = *impl_;
  if (z.size() != I.grid.size()) throw ParameterError("noise vector size differs from the grid");
  const double s = std::sqrt(std::max(noise_var, 0.0));
  EstimationResult best;
  best.peak_metric = -1.0;
  for (int i = 0; i < I.grid.n_tau; ++i) {
    for (int j = 0; j < I.grid.n_omega; ++j) {
      const std::size_t g = I.grid.index(i, j);
      const double v = std::norm(b * I.S(static_cast<Eigen::Index>(g)) + s * z[g]);
      if (v > best.peak_metric) best = {I.grid.tau(i), I.grid.omega(j), v, i, j};
    }
  }
  return best;
}

}  // namespace fskjcr
