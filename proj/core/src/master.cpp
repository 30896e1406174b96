#include "lzs/master.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <unsupported/Eigen/MatrixFunctions>

namespace lzs {

namespace {

const cx I1{0.0, 1.0};
constexpr double inf = std::numeric_limits<double>::infinity();

Mat unvec(const Vec& v, int d) {
  Mat rho(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) rho(a, b) = v(a * d + b);
  return rho;
}

Vec vec(const Mat& rho) {
  const int d = static_cast<int>(rho.rows());
  Vec v(d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) v(a * d + b) = rho(a, b);
  return v;
}

Mat normalized_candidate(const Vec& v, int d) {
  const Mat raw = unvec(v, d);
  Mat rho = 0.5 * (raw + raw.adjoint());
  const double tr = rho.trace().real();
  if (std::abs(tr) < 1e-12) throw std::runtime_error("steady-state candidate has zero trace");
  return rho / tr;
}

}  // namespace

RateTensor rate_tensor(const FloquetBasis& basis, const std::vector<TaggedElements>& couplings,
                       const std::vector<OhmicBath>& baths) {
  const int d = basis.dim;
  RateTensor out;
  out.dim = d;
  out.r = Mat::Zero(d * d, d * d);

  for (const TaggedElements& te : couplings) {
    const OhmicBath* bath = nullptr;
    for (const OhmicBath& b : baths) {
      if (b.tag == te.bath_tag) {
        bath = &b;
        break;
      }
    }
    if (bath == nullptr) throw std::invalid_argument("coupling references unknown bath tag " + te.bath_tag);
    bath->validate();
    if (te.elems.dim != d) throw std::invalid_argument("coupling element dimension mismatch");

    const int kk = te.elems.k_max;
    for (int a = 0; a < d; ++a) {
      for (int ap = 0; ap < d; ++ap) {
        for (int q = -kk; q <= kk; ++q) {
          const double w = basis.quasienergies(a) - basis.quasienergies(ap) + q * basis.omega0;
          const cx coef = 0.5 * bath->g_weight(w) * te.elems.at(q)(a, ap);
          if (coef == cx{0.0, 0.0}) continue;
          const Mat& rev = te.elems.at(-q);
          for (int b = 0; b < d; ++b)
            for (int bp = 0; bp < d; ++bp) out.r(a * d + b, ap * d + bp) += coef * rev(bp, b);
        }
      }
    }
  }
  return out;
}

Generator build_generator(const FloquetBasis& basis, const RateTensor& rates) {
  const int d = basis.dim;
  if (rates.dim != d) throw std::invalid_argument("rate tensor dimension mismatch");

  Generator gen;
  gen.dim = d;
  gen.omega0 = basis.omega0;
  gen.quasienergies = basis.quasienergies;
  gen.lambda = Mat::Zero(d * d, d * d);

  // complete-positivity pairing: lambda = r + conj(r with (a,b),(a',b')
  // swapped to (b,a),(b',a')) minus the rate outflow, plus the coherent part
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int ap = 0; ap < d; ++ap)
        for (int bp = 0; bp < d; ++bp)
          gen.lambda(a * d + b, ap * d + bp) =
              rates.r(a * d + b, ap * d + bp) + std::conj(rates.r(b * d + a, bp * d + ap));

  Mat s = Mat::Zero(d, d);  // s(c, cp) = sum_e r((e,e), (c,cp))
  for (int c = 0; c < d; ++c)
    for (int cp = 0; cp < d; ++cp)
      for (int e = 0; e < d; ++e) s(c, cp) += rates.r(e * d + e, c * d + cp);

  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int ap = 0; ap < d; ++ap) gen.lambda(a * d + b, ap * d + b) -= s(ap, a);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int bp = 0; bp < d; ++bp) gen.lambda(a * d + b, a * d + bp) -= std::conj(s(bp, b));

  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      gen.lambda(a * d + b, a * d + b) += -I1 * (basis.quasienergies(a) - basis.quasienergies(b));

  double defect = 0.0;
  for (int ap = 0; ap < d; ++ap) {
    for (int bp = 0; bp < d; ++bp) {
      cx col_sum{0.0, 0.0};
      for (int a = 0; a < d; ++a) col_sum += gen.lambda(a * d + a, ap * d + bp);
      defect = std::max(defect, std::abs(col_sum));
    }
  }
  gen.trace_defect = defect;
  const double scale = std::max(gen.lambda.cwiseAbs().maxCoeff(), 1e-30);
  if (defect > 1e-8 * scale) throw std::runtime_error("generator does not preserve the trace");
  return gen;
}

Timescales timescales(const Generator& gen) {
  Eigen::ComplexEigenSolver<Mat> es(gen.lambda, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("generator diagonalization failed");
  const Vec ev = es.eigenvalues();
  const int n = static_cast<int>(ev.size());

  double scale = 0.0;
  int i0 = 0;
  double amin = inf;
  for (int i = 0; i < n; ++i) {
    const double a = std::abs(ev(i));
    scale = std::max(scale, a);
    if (a < amin) {
      amin = a;
      i0 = i;
    }
  }

  Timescales out;
  out.eigenvalues = ev;
  double re_real = -inf;
  double re_cpx = -inf;
  bool any_real = false;
  for (int i = 0; i < n; ++i) {
    if (i == i0) continue;
    if (std::abs(ev(i).imag()) <= 1e-8 * scale) {
      any_real = true;
      re_real = std::max(re_real, ev(i).real());
    } else {
      out.has_complex_pair = true;
      re_cpx = std::max(re_cpx, ev(i).real());
    }
  }
  out.t_relax = (any_real && re_real < 0.0) ? -1.0 / re_real : inf;
  if (out.has_complex_pair) {
    out.t_dephase = (re_cpx < 0.0) ? -1.0 / re_cpx : inf;
    const double inv_pure = 1.0 / *out.t_dephase - 0.5 / out.t_relax;
    out.t_pure = (inv_pure > 0.0) ? 1.0 / inv_pure : inf;
  }
  return out;
}

Mat steady_state(const Generator& gen) {
  const int d = gen.dim;
  Eigen::ComplexEigenSolver<Mat> es(gen.lambda, true);
  if (es.info() != Eigen::Success) throw std::runtime_error("generator diagonalization failed");
  const Vec ev = es.eigenvalues();
  const int n = static_cast<int>(ev.size());

  int i0 = -1, i1 = -1;
  for (int i = 0; i < n; ++i) {
    if (i0 < 0 || std::abs(ev(i)) < std::abs(ev(i0))) {
      i1 = i0;
      i0 = i;
    } else if (i1 < 0 || std::abs(ev(i)) < std::abs(ev(i1))) {
      i1 = i;
    }
  }

  const double fro = gen.lambda.norm();
  if (std::abs(ev(i0)) >= 1e-10 * fro)
    throw std::runtime_error("no eigenvalue close enough to zero for a steady state");
  if (n > 1 && std::abs(ev(i1)) < 1e-10 * fro) {
    throw SteadyStateError("steady state is not unique", normalized_candidate(es.eigenvectors().col(i0), d),
                           normalized_candidate(es.eigenvectors().col(i1), d));
  }

  Mat rho = normalized_candidate(es.eigenvectors().col(i0), d);
  if ((gen.lambda * vec(rho)).norm() > 1e-9 * fro)
    throw std::runtime_error("steady-state residual above tolerance");
  return rho;
}

Evolver::Evolver(const Generator& gen) : dim_(gen.dim), lambda_(gen.lambda) {
  Eigen::ComplexEigenSolver<Mat> es(gen.lambda, true);
  if (es.info() == Eigen::Success) {
    eigenvalues_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
    lu_.compute(vectors_);
    const Mat recon = vectors_ * eigenvalues_.asDiagonal() * lu_.inverse();
    const double err = (recon - gen.lambda).norm();
    if (err <= 1e-9 * std::max(gen.lambda.norm(), 1e-300)) {
      method_ = "eigendecomposition";
      return;
    }
  }
  method_ = "scaling_squaring";
}

Mat Evolver::evolve_to(const Mat& rho0, double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be >= 0");
  Vec v = vec(rho0);
  if (method_ == "eigendecomposition") {
    Vec c = lu_.solve(v);
    for (int i = 0; i < c.size(); ++i) c(i) *= std::exp(eigenvalues_(i) * t);
    v = vectors_ * c;
  } else {
    const Mat scaled = lambda_ * t;
    v = scaled.exp() * v;
  }
  Mat rho = unvec(v, dim_);
  return 0.5 * (rho + rho.adjoint());
}

std::vector<Mat> evolve(const Generator& gen, const Mat& rho0, const std::vector<double>& times) {
  for (size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0)) throw std::invalid_argument("times must be >= 0");
    if (i > 0 && times[i] < times[i - 1]) throw std::invalid_argument("times must be ascending");
  }
  const Evolver ev(gen);
  std::vector<Mat> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(ev.evolve_to(rho0, t));
  return out;
}

Vec initial_state(const DrivenModel& model) {
  const StaticSpectrum sp = diagonalize_static(model.hamiltonian_static(), std::min(2, model.dim));
  if (model.dim >= 2) {
    const double span = std::max(std::abs(sp.energies(1)), 1e-30);
    if (sp.energies(1) - sp.energies(0) <= 1e-12 * span)
      throw std::runtime_error("static ground state is degenerate");
  }
  return sp.states.col(0);
}

Mat initial_density(const FloquetBasis& basis, const Vec& psi0) {
  if (psi0.size() != basis.dim) throw std::invalid_argument("state dimension mismatch");
  const Vec c = basis.state_at(0).adjoint() * psi0;
  return c * c.adjoint();
}

Mat floquet_projector(const FloquetBasis& basis, const Mat& projector) {
  return basis.state_at(0).adjoint() * projector * basis.state_at(0);
}

Mat floquet_projector_period_avg(const FloquetBasis& basis, const Mat& projector) {
  Mat acc = Mat::Zero(basis.dim, basis.dim);
  for (int j = 0; j < basis.n_time; ++j)
    acc += basis.state_at(j).adjoint() * projector * basis.state_at(j);
  return acc / static_cast<double>(basis.n_time);
}

double population(const Mat& g, const Mat& rho_f) { return (g * rho_f).trace().real(); }

double isolated_average(const FloquetBasis& basis, const Mat& projector, const Vec& psi0,
                        long n_periods) {
  const int d = basis.dim;
  if (psi0.size() != d) throw std::invalid_argument("state dimension mismatch");
  const Vec c = basis.state_at(0).adjoint() * psi0;
  const double tau = basis.period();

  // within(b, a) = mean_j exp(-i (e_a - e_b) t_j) <phi_b(t_j)|P|phi_a(t_j)>
  Mat within = Mat::Zero(d, d);
  for (int j = 0; j < basis.n_time; ++j) {
    const double t = basis.time_at(j);
    const Mat gj = basis.state_at(j).adjoint() * projector * basis.state_at(j);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        within(b, a) += std::exp(-I1 * ((basis.quasienergies(a) - basis.quasienergies(b)) * t)) * gj(b, a);
  }
  within /= static_cast<double>(basis.n_time);

  double out = 0.0;
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      const double dlt = basis.quasienergies(a) - basis.quasienergies(b);
      const cx z = std::exp(-I1 * (dlt * tau));
      cx geo;
      if (n_periods <= 0) {
        geo = (std::abs(1.0 - z) < 1e-12) ? 1.0 : 0.0;
      } else if (std::abs(1.0 - z) < 1e-12) {
        geo = 1.0;
      } else {
        geo = (1.0 - std::pow(z, static_cast<double>(n_periods))) /
              (static_cast<double>(n_periods) * (1.0 - z));
      }
      out += (c(a) * std::conj(c(b)) * geo * within(b, a)).real();
    }
  }
  return out;
}

double positivity_defect(const Mat& rho) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  return std::max(0.0, -es.eigenvalues()(0));
}

}  // namespace lzs
