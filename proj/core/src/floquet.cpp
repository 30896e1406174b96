#include "lzs/floquet.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace lzs {

namespace {

const cx I1{0.0, 1.0};

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

int next_pow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

// exp(-i K) for Hermitian K
Mat exp_minus_i_herm(const Mat& k) {
  const int d = static_cast<int>(k.rows());
  if (d == 2) {
    const double k0 = 0.5 * (k(0, 0).real() + k(1, 1).real());
    const double kx = k(0, 1).real();
    const double ky = -k(0, 1).imag();
    const double kz = 0.5 * (k(0, 0).real() - k(1, 1).real());
    const double r = std::sqrt(kx * kx + ky * ky + kz * kz);
    const cx ph = std::exp(-I1 * k0);
    Mat u(2, 2);
    if (r == 0.0) {
      u << ph, 0, 0, ph;
      return u;
    }
    const double c = std::cos(r);
    const cx s = -I1 * std::sin(r) / r;
    u(0, 0) = ph * (c + s * kz);
    u(0, 1) = ph * s * (kx - I1 * ky);
    u(1, 0) = ph * s * (kx + I1 * ky);
    u(1, 1) = ph * (c - s * kz);
    return u;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(k);
  if (es.info() != Eigen::Success) throw std::runtime_error("propagator exponential failed");
  Vec phases(d);
  for (int i = 0; i < d; ++i) phases(i) = std::exp(-I1 * es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// one fourth-order Magnus substep over [t, t + dt] (two-point Gauss rule)
Mat magnus_step(const DrivenModel& model, double t, double dt) {
  constexpr double c1 = 0.5 - 0.28867513459481287;  // 0.5 - sqrt(3)/6
  constexpr double c2 = 0.5 + 0.28867513459481287;
  const Mat h1 = model.hamiltonian(t + c1 * dt);
  const Mat h2 = model.hamiltonian(t + c2 * dt);
  Mat k = (0.5 * dt) * (h1 + h2);
  const double w = std::sqrt(3.0) * dt * dt / 12.0;
  k += (-I1 * w) * (h2 * h1 - h1 * h2);
  return exp_minus_i_herm(k);
}

void fix_column_phases(Mat& v) {
  for (int c = 0; c < v.cols(); ++c) {
    int imax = 0;
    double best = -1.0;
    for (int r = 0; r < v.rows(); ++r) {
      const double a = std::abs(v(r, c));
      if (a > best) {
        best = a;
        imax = r;
      }
    }
    const cx pivot = v(imax, c);
    if (std::abs(pivot) > 0.0) v.col(c) *= std::conj(pivot) / std::abs(pivot);
  }
}

double fold_quasienergy(double e, double omega0) {
  e -= omega0 * std::floor(e / omega0 + 0.5);
  if (e <= -0.5 * omega0) e += omega0;
  return e;
}

// iterative radix-2 transform with kernel exp(+2 pi i j k / n)
void fft_plus(std::vector<cx>& a) {
  const int n = static_cast<int>(a.size());
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * pi / len;
    const cx wl(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      cx w(1.0, 0.0);
      for (int j = 0; j < len / 2; ++j) {
        const cx u = a[i + j];
        const cx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

struct GridResult {
  std::vector<Mat> partial;  // U(t_j), j = 0..n_time-1
  Mat monodromy;
};

GridResult build_grid(const DrivenModel& model, int n_steps, int n_time) {
  const double tau = model.period();
  const int per = std::max(1, n_steps / n_time);
  const double dt = tau / (static_cast<double>(n_time) * per);
  const Mat eye = Mat::Identity(model.dim, model.dim);

  GridResult out;
  out.partial.reserve(static_cast<size_t>(n_time));
  Mat u = eye;
  for (int j = 0; j < n_time; ++j) {
    out.partial.push_back(u);
    for (int s = 0; s < per; ++s) {
      const double t = (static_cast<double>(j) * per + s) * dt;
      u = magnus_step(model, t, dt) * u;
    }
    if ((u.adjoint() * u - eye).cwiseAbs().maxCoeff() > 1e-9)
      throw std::runtime_error("propagator lost unitarity");
  }
  out.monodromy = u;
  return out;
}

}  // namespace

void FloquetSettings::validate() const {
  if (!is_pow2(n_steps) || n_steps < 256)
    throw std::invalid_argument("n_steps must be a power of two >= 256");
  if (!is_pow2(n_time) || n_time < 4)
    throw std::invalid_argument("n_time must be a power of two >= 4");
  if (k_min < 1) throw std::invalid_argument("k_min must be >= 1");
  if (k_max_override < 0) throw std::invalid_argument("k_max_override must be >= 0");
}

Mat propagate_one_period(const DrivenModel& model, int n_steps) {
  if (!is_pow2(n_steps) || n_steps < 256)
    throw std::invalid_argument("n_steps must be a power of two >= 256");
  const double dt = model.period() / n_steps;
  Mat u = Mat::Identity(model.dim, model.dim);
  for (int s = 0; s < n_steps; ++s) u = magnus_step(model, s * dt, dt) * u;
  return u;
}

FloquetBasis floquet_states(const DrivenModel& model, const FloquetSettings& settings) {
  settings.validate();
  if (!(model.omega0 > 0.0)) throw std::invalid_argument("omega0 must be > 0");
  const int d = model.dim;
  const double tau = model.period();

  int k_max = settings.k_max_override;
  if (k_max <= 0) {
    const double span = model.static_span() + 4.0 * model.drive_scale();
    k_max = std::max(settings.k_min,
                     static_cast<int>(std::ceil(span / model.omega0)) + 10);
  }

  const Mat ref = diagonalize_static(model.hamiltonian_static(), d).states;

  for (int attempt = 0;; ++attempt) {
    int n_time = settings.n_time;
    if (4 * k_max > n_time) n_time = next_pow2(4 * k_max);

    GridResult grid = build_grid(model, settings.n_steps, n_time);

    Eigen::ComplexEigenSolver<Mat> es(grid.monodromy);
    if (es.info() != Eigen::Success) throw std::runtime_error("monodromy diagonalization failed");
    Mat w = es.eigenvectors();
    for (int c = 0; c < d; ++c) w.col(c).normalize();
    RealVec quasi(d);
    for (int c = 0; c < d; ++c)
      quasi(c) = fold_quasienergy(-std::arg(es.eigenvalues()(c)) / tau, model.omega0);

    // cluster nearly repeated eigenphases, re-orthonormalize their vectors
    bool degenerate = false;
    {
      std::vector<int> cluster(d, -1);
      int n_clusters = 0;
      for (int i = 0; i < d; ++i) {
        if (cluster[i] >= 0) continue;
        cluster[i] = n_clusters;
        for (int j = i + 1; j < d; ++j) {
          if (cluster[j] >= 0) continue;
          const double gap =
              std::abs(std::arg(es.eigenvalues()(i) * std::conj(es.eigenvalues()(j))));
          if (gap <= 1e-12) cluster[j] = n_clusters;
        }
        ++n_clusters;
      }
      for (int cl = 0; cl < n_clusters; ++cl) {
        std::vector<int> members;
        for (int i = 0; i < d; ++i)
          if (cluster[i] == cl) members.push_back(i);
        if (members.size() < 2) continue;
        degenerate = true;
        Mat block(d, static_cast<int>(members.size()));
        for (size_t c = 0; c < members.size(); ++c) block.col(static_cast<int>(c)) = w.col(members[c]);
        Eigen::HouseholderQR<Mat> qr(block);
        Mat q = qr.householderQ() * Mat::Identity(d, static_cast<int>(members.size()));
        for (size_t c = 0; c < members.size(); ++c) w.col(members[c]) = q.col(static_cast<int>(c));
      }
    }

    // order states by overlap with the static eigenbasis
    {
      std::vector<int> perm(static_cast<size_t>(d), -1);
      std::vector<bool> used(static_cast<size_t>(d), false);
      for (int i = 0; i < d; ++i) {
        int best_j = -1;
        double best = -1.0;
        for (int j = 0; j < d; ++j) {
          if (used[static_cast<size_t>(j)]) continue;
          const double ov = std::norm((ref.col(i).adjoint() * w.col(j)).value());
          if (ov > best) {
            best = ov;
            best_j = j;
          }
        }
        perm[static_cast<size_t>(i)] = best_j;
        used[static_cast<size_t>(best_j)] = true;
      }
      Mat w2(d, d);
      RealVec q2(d);
      for (int i = 0; i < d; ++i) {
        w2.col(i) = w.col(perm[static_cast<size_t>(i)]);
        q2(i) = quasi(perm[static_cast<size_t>(i)]);
      }
      w = w2;
      quasi = q2;
    }
    fix_column_phases(w);

    FloquetBasis basis;
    basis.omega0 = model.omega0;
    basis.dim = d;
    basis.k_max = k_max;
    basis.n_time = n_time;
    basis.quasienergies = quasi;
    basis.monodromy = grid.monodromy;
    basis.degenerate_eigenphases = degenerate;

    basis.states_grid.resize(static_cast<size_t>(n_time));
    for (int j = 0; j < n_time; ++j) {
      const double t = tau * j / n_time;
      Vec ph(d);
      for (int c = 0; c < d; ++c) ph(c) = std::exp(I1 * (quasi(c) * t));
      basis.states_grid[static_cast<size_t>(j)] = grid.partial[static_cast<size_t>(j)] * w * ph.asDiagonal();
    }

    basis.fourier.assign(static_cast<size_t>(2 * k_max + 1), Mat::Zero(d, d));
    std::vector<cx> line(static_cast<size_t>(n_time));
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        for (int j = 0; j < n_time; ++j) line[static_cast<size_t>(j)] = basis.states_grid[static_cast<size_t>(j)](r, c);
        fft_plus(line);
        for (int k = -k_max; k <= k_max; ++k) {
          const int bin = ((k % n_time) + n_time) % n_time;
          basis.fourier[static_cast<size_t>(k + k_max)](r, c) =
              line[static_cast<size_t>(bin)] / static_cast<double>(n_time);
        }
      }
    }

    // normalize the tail against the largest mode anywhere: the k = 0 block
    // can vanish legitimately (all spectral weight on k != 0 harmonics)
    double head = 0.0;
    for (const Mat& a : basis.fourier) head = std::max(head, a.cwiseAbs().maxCoeff());
    const double tail = std::max(basis.fourier_mode(k_max).cwiseAbs().maxCoeff(),
                                 basis.fourier_mode(-k_max).cwiseAbs().maxCoeff());
    if (head > 0.0 && tail > 1e-8 * head) {
      if (attempt >= 3) throw std::runtime_error("fourier tail not converged");
      k_max = static_cast<int>(std::ceil(1.5 * k_max));
      continue;
    }
    return basis;
  }
}

FloquetBasis shift_branch(const FloquetBasis& basis, int state, int shift) {
  if (state < 0 || state >= basis.dim) throw std::invalid_argument("state index out of range");
  FloquetBasis out = basis;
  if (shift == 0) return out;
  out.quasienergies(state) += shift * basis.omega0;
  for (int j = 0; j < basis.n_time; ++j) {
    const double t = basis.time_at(j);
    out.states_grid[static_cast<size_t>(j)].col(state) *= std::exp(I1 * (shift * basis.omega0 * t));
  }
  // periodic part picks up exp(+i shift omega0 t), so modes relabel k -> k + shift
  for (int k = -basis.k_max; k <= basis.k_max; ++k) {
    const int src = k + shift;
    if (src >= -basis.k_max && src <= basis.k_max)
      out.fourier[static_cast<size_t>(k + basis.k_max)].col(state) =
          basis.fourier[static_cast<size_t>(src + basis.k_max)].col(state);
    else
      out.fourier[static_cast<size_t>(k + basis.k_max)].col(state).setZero();
  }
  return out;
}

CouplingElements matrix_elements(const FloquetBasis& basis, const Mat& op) {
  if (op.rows() != basis.dim || op.cols() != basis.dim)
    throw std::invalid_argument("operator dimension mismatch");
  const int kk = basis.k_max;
  CouplingElements out;
  out.dim = basis.dim;
  out.k_max = kk;
  out.blocks.assign(static_cast<size_t>(2 * kk + 1), Mat::Zero(basis.dim, basis.dim));

  std::vector<Mat> lhs(static_cast<size_t>(2 * kk + 1));
  for (int k = -kk; k <= kk; ++k)
    lhs[static_cast<size_t>(k + kk)] = basis.fourier_mode(k).adjoint() * op;

  for (int q = -kk; q <= kk; ++q) {
    Mat acc = Mat::Zero(basis.dim, basis.dim);
    const int k_lo = std::max(-kk, -kk + q);
    const int k_hi = std::min(kk, kk + q);
    for (int k = k_lo; k <= k_hi; ++k)
      acc += lhs[static_cast<size_t>(k + kk)] * basis.fourier_mode(k - q);
    out.blocks[static_cast<size_t>(q + kk)] = acc;
  }
  return out;
}

double CouplingElements::tail_fraction() const {
  const double head = at(0).cwiseAbs().maxCoeff();
  if (head == 0.0) return 0.0;
  return std::max(at(k_max).cwiseAbs().maxCoeff(), at(-k_max).cwiseAbs().maxCoeff()) / head;
}

}  // namespace lzs
