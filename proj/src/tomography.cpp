#include "nanoqi/tomography.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include <Eigen/Eigenvalues>

namespace nanoqi {

namespace {

constexpr int kParams = 16;
using ParamVector = Eigen::Matrix<double, kParams, 1>;
using ParamMatrix = Eigen::Matrix<double, kParams, kParams>;

std::array<Eigen::Matrix2cd, 4> paulis() {
  const cplx i{0.0, 1.0};
  Eigen::Matrix2cd id, x, y, z;
  id << 1, 0, 0, 1;
  x << 0, 1, 1, 0;
  y << 0, -i, i, 0;
  z << 1, 0, 0, -1;
  return {id, x, y, z};
}

Eigen::Matrix4cd kron(const Eigen::Matrix2cd &a, const Eigen::Matrix2cd &b) {
  Eigen::Matrix4cd out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
  return out;
}

void check_counts(std::span<const MeasurementSetting> settings, std::span<const double> counts) {
  if (settings.size() != counts.size()) throw std::invalid_argument("settings and counts differ in length");
  double total = 0.0;
  for (double n : counts) {
    if (!(n >= 0.0)) throw std::invalid_argument("counts must be non-negative");
    total += n;
  }
  if (total <= 0.0) throw std::invalid_argument("all counts are zero");
}

// Log-likelihood normalized by the total count N, over T~ = T / sqrt(N):
// l(T~) = sum nu_i log m_i - m_i with nu_i = n_i / N, m_i = |T~ p_i|^2.
class Likelihood {
 public:
  Likelihood(std::span<const MeasurementSetting> settings, std::span<const double> counts) {
    for (const auto &s : settings) projectors_.push_back(s.projector_vector());
    for (double n : counts) total_ += n;
    for (double n : counts) nu_.push_back(n / total_);
  }

  double total() const { return total_; }

  static Eigen::Matrix4cd unpack(const ParamVector &x) {
    Eigen::Matrix4cd t = Eigen::Matrix4cd::Zero();
    int k = 0;
    for (int i = 0; i < 4; ++i) t(i, i) = x(k++);
    for (int i = 1; i < 4; ++i)
      for (int j = 0; j < i; ++j) {
        t(i, j) = cplx(x(k), x(k + 1));
        k += 2;
      }
    return t;
  }

  static ParamVector pack(const Eigen::Matrix4cd &t) {
    ParamVector x;
    int k = 0;
    for (int i = 0; i < 4; ++i) x(k++) = t(i, i).real();
    for (int i = 1; i < 4; ++i)
      for (int j = 0; j < i; ++j) {
        x(k++) = t(i, j).real();
        x(k++) = t(i, j).imag();
      }
    return x;
  }

  double value(const ParamVector &x) const {
    const Eigen::Matrix4cd t = unpack(x);
    double l = 0.0;
    for (std::size_t i = 0; i < projectors_.size(); ++i) {
      const double m = (t * projectors_[i]).squaredNorm();
      if (nu_[i] > 0.0) {
        if (!(m > 0.0)) return -std::numeric_limits<double>::infinity();
        l += nu_[i] * std::log(m);
      }
      l -= m;
    }
    return l;
  }

  ParamVector gradient(const ParamVector &x) const {
    const Eigen::Matrix4cd t = unpack(x);
    Eigen::Matrix4cd a = Eigen::Matrix4cd::Zero();
    for (std::size_t i = 0; i < projectors_.size(); ++i) {
      const double m = (t * projectors_[i]).squaredNorm();
      const double w = (nu_[i] > 0.0 ? nu_[i] / m : 0.0) - 1.0;
      a += w * projectors_[i] * projectors_[i].adjoint();
    }
    return pack(2.0 * t * a);
  }

  // Unnormalized Poisson log-likelihood sum n log(mu) - mu.
  double poisson_log_likelihood(const ParamVector &x) const {
    const Eigen::Matrix4cd t = unpack(x);
    double l = 0.0;
    for (std::size_t i = 0; i < projectors_.size(); ++i) {
      const double mu = total_ * (t * projectors_[i]).squaredNorm();
      const double n = nu_[i] * total_;
      if (n > 0.0) l += n * std::log(mu);
      l -= mu;
    }
    return l;
  }

 private:
  std::vector<Eigen::Vector4cd> projectors_;
  std::vector<double> nu_;
  double total_ = 0.0;
};

// Lower-triangular T with T†T = m, m Hermitian positive definite.
Eigen::Matrix4cd lower_factor(const Eigen::Matrix4cd &m) {
  Eigen::Matrix4cd j = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i) j(i, 3 - i) = 1.0;
  const Eigen::Matrix4cd l = Eigen::LLT<Eigen::Matrix4cd>(j * m * j).matrixL();
  return j * l.adjoint() * j;
}

Eigen::Matrix4cd project_physical(const Eigen::Matrix4cd &rho, double floor) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (rho + rho.adjoint()));
  Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0);
  if (ev.sum() <= 0.0) ev.setConstant(0.25);
  ev /= ev.sum();
  ev = (1.0 - floor) * ev + Eigen::Vector4d::Constant(floor / 4.0);
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

std::vector<ArmSpec> standard_arms() {
  return {arm_linear("H", polarization::H()), arm_linear("V", polarization::V()),
          arm_linear("D", polarization::D()), arm_linear("A", polarization::A()),
          arm_circular(+1), arm_circular(-1)};
}

std::vector<MeasurementSetting> standard_settings() {
  const auto arms = standard_arms();
  std::vector<MeasurementSetting> settings;
  for (const auto &a : arms)
    for (const auto &b : arms) settings.push_back({a, b, a.label + b.label});
  return settings;
}

std::vector<double> predicted_counts(const Eigen::Matrix4cd &rho, std::span<const MeasurementSetting> settings,
                                     double scale) {
  std::vector<double> out;
  out.reserve(settings.size());
  for (const auto &s : settings) out.push_back(scale * coincidence_probability(rho, s));
  return out;
}

Eigen::Matrix4cd linear_inversion(std::span<const MeasurementSetting> settings, std::span<const double> counts) {
  check_counts(settings, counts);
  const auto sigma = paulis();
  std::array<Eigen::Matrix4cd, 16> basis;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) basis[4 * a + b] = kron(sigma[a], sigma[b]);

  Eigen::MatrixXd design(static_cast<Eigen::Index>(settings.size()), 16);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(settings.size()));
  for (std::size_t i = 0; i < settings.size(); ++i) {
    const Eigen::Vector4cd v = settings[i].projector_vector();
    for (int k = 0; k < 16; ++k)
      design(static_cast<Eigen::Index>(i), k) = 0.25 * (v.adjoint() * basis[k] * v)(0, 0).real();
    rhs(static_cast<Eigen::Index>(i)) = counts[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 16) throw std::invalid_argument("measurement settings are not tomographically complete");
  const Eigen::VectorXd x = qr.solve(rhs);
  if (!(x(0) > 0.0)) throw std::invalid_argument("linear inversion produced a non-positive trace");

  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int k = 0; k < 16; ++k) rho += (x(k) / x(0)) * basis[k];
  rho *= 0.25;
  return 0.5 * (rho + rho.adjoint());
}

TomographyResult mle_reconstruct(std::span<const MeasurementSetting> settings, std::span<const double> counts,
                                 const MleOptions &options) {
  const Eigen::Matrix4cd start = project_physical(linear_inversion(settings, counts), 1e-3);
  const Likelihood lik(settings, counts);

  // Scale the start so that sum m_i = sum nu_i = 1, the stationary scale.
  double predicted = 0.0;
  for (const auto &s : settings) predicted += coincidence_probability(start, s);
  ParamVector x = Likelihood::pack(lower_factor(start / predicted));

  // BFGS on f = -l with Armijo backtracking.
  double f = -lik.value(x);
  ParamVector g = -lik.gradient(x);
  ParamMatrix h = ParamMatrix::Identity();
  TomographyResult result;
  result.likelihood_trace.push_back(-f);

  int it = 0;
  for (; it < options.max_iterations && g.norm() >= options.tolerance; ++it) {
    ParamVector dir = -h * g;
    if (dir.dot(g) >= 0.0) {
      h.setIdentity();
      dir = -g;
    }
    double step = 1.0, f_new = 0.0;
    ParamVector x_new;
    bool accepted = false;
    for (int k = 0; k < 60; ++k, step *= 0.5) {
      x_new = x + step * dir;
      f_new = -lik.value(x_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * dir.dot(g)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (h.isIdentity()) break;
      h.setIdentity();
      continue;
    }
    const ParamVector g_new = -lik.gradient(x_new);
    const ParamVector s = x_new - x, y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-16) {
      const double r = 1.0 / sy;
      const ParamMatrix id = ParamMatrix::Identity();
      h = (id - r * s * y.transpose()) * h * (id - r * y * s.transpose()) + r * s * s.transpose();
    }
    x = x_new;
    f = f_new;
    g = g_new;
    result.likelihood_trace.push_back(-f);
  }

  const Eigen::Matrix4cd t = Likelihood::unpack(x);
  Eigen::Matrix4cd rho = t.adjoint() * t;
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  result.rho = DensityMatrix(rho);
  result.log_likelihood = lik.poisson_log_likelihood(x);
  result.iterations = it;
  result.converged = g.norm() < options.tolerance;
  return result;
}

std::vector<double> simulate_counts(const Eigen::Matrix4cd &rho, std::span<const MeasurementSetting> settings,
                                    double scale, std::uint64_t seed) {
  const auto expected = predicted_counts(rho, settings, scale);
  std::vector<double> out;
  out.reserve(expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i)
    out.push_back(static_cast<double>(sample_counts(1.0, expected[i], derive_seed(seed, i))));
  return out;
}

std::map<std::string, double> bootstrap_errors(std::span<const MeasurementSetting> settings,
                                               std::span<const double> counts, const MetricSet &metrics,
                                               const BootstrapOptions &options) {
  if (options.n_resamples < 2) throw std::invalid_argument("bootstrap needs at least two resamples");
  check_counts(settings, counts);
  const auto n = static_cast<std::size_t>(options.n_resamples);
  std::vector<std::vector<double>> values(metrics.size(), std::vector<double>(n));

  auto replica = [&](std::size_t r) {
    std::vector<double> resampled(counts.begin(), counts.end());
    if (options.poisson_resample) {
      std::mt19937_64 rng(derive_seed(options.seed, r));
      for (auto &c : resampled) {
        if (c > 0.0) c = static_cast<double>(std::poisson_distribution<std::int64_t>(c)(rng));
      }
    }
    const Eigen::Matrix4cd rho = mle_reconstruct(settings, resampled, options.mle).rho.matrix();
    for (std::size_t m = 0; m < metrics.size(); ++m) values[m][r] = metrics[m].second(rho);
  };

  unsigned workers = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(n));
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto drain = [&] {
    for (std::size_t r; (r = next++) < n;) {
      try {
        replica(r);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(drain);
  drain();
  for (auto &t : pool) t.join();
  if (error) std::rethrow_exception(error);

  std::map<std::string, double> out;
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    auto v = values[m];
    std::sort(v.begin(), v.end());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    out[metrics[m].first] = std::sqrt(var / static_cast<double>(n - 1));
  }
  return out;
}

}  // namespace nanoqi
