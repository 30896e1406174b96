#include "lzs/model.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace lzs {

namespace {

const cx I1{0.0, 1.0};

Mat pauli_z() {
  Mat s(2, 2);
  s << 1, 0, 0, -1;
  return s;
}

Mat pauli_x() {
  Mat s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

Mat pauli_y() {
  Mat s(2, 2);
  s << 0, -I1, I1, 0;
  return s;
}

void fix_column_phases(Mat& v) {
  for (int c = 0; c < v.cols(); ++c) {
    int imax = 0;
    double best = -1.0;
    for (int r = 0; r < v.rows(); ++r) {
      const double a = std::abs(v(r, c));
      if (a > best + 1e-300 && a > best) {
        best = a;
        imax = r;
      }
    }
    const cx pivot = v(imax, c);
    if (std::abs(pivot) > 0.0) v.col(c) *= std::conj(pivot) / std::abs(pivot);
  }
}

Mat hermitize(const Mat& a) { return 0.5 * (a + a.adjoint()); }

double hermiticity_defect(const Mat& a) { return (a - a.adjoint()).cwiseAbs().maxCoeff(); }

}  // namespace

void FqParams::validate() const {
  if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("alpha must be in (0, 2)");
  if (!(eta > 0.0 && eta < 2.0)) throw std::invalid_argument("eta must be in (0, 2)");
  if (n_charge < 4) throw std::invalid_argument("n_charge must be >= 4");
  if (!std::isfinite(f_dc)) throw std::invalid_argument("f_dc must be finite");
}

void TlsParams::validate() const {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  if (!(i_p > 0.0)) throw std::invalid_argument("i_p must be > 0");
  if (lambda_f < 0.0 || lambda_ch < 0.0 || lambda_cc < 0.0)
    throw std::invalid_argument("coupling magnitudes must be >= 0");
}

JunctionOperators build_junction_operators(const FqParams& params) {
  params.validate();
  const int n = params.n_charge;
  const int w = 2 * n + 1;
  const int d = w * w;

  JunctionOperators ops;
  ops.alpha = params.alpha;
  ops.eta = params.eta;
  ops.n_charge = n;
  ops.dim = d;
  ops.e_p = params.eta * params.eta / 4.0;
  ops.e_m = ops.e_p / (1.0 + 2.0 * params.alpha);

  ops.kinetic = RealVec::Zero(d);
  ops.n_p = RealVec::Zero(d);
  ops.n_m = RealVec::Zero(d);
  ops.cos_sum = RealMat::Zero(d, d);
  ops.c2m = RealMat::Zero(d, d);
  ops.y2m = RealMat::Zero(d, d);

  auto idx = [w, n](int n1, int n2) { return (n1 + n) * w + (n2 + n); };

  for (int n1 = -n; n1 <= n; ++n1) {
    for (int n2 = -n; n2 <= n; ++n2) {
      const int i = idx(n1, n2);
      const double np = n1 + n2;
      const double nm = n1 - n2;
      ops.n_p(i) = np;
      ops.n_m(i) = nm;
      ops.kinetic(i) = ops.e_p * np * np + ops.e_m * nm * nm;
      // cos(phi_1): hop n1 -> n1 +/- 1
      if (n1 < n) {
        ops.cos_sum(i, idx(n1 + 1, n2)) += 0.5;
        ops.cos_sum(idx(n1 + 1, n2), i) += 0.5;
      }
      // cos(phi_2): hop n2 -> n2 +/- 1
      if (n2 < n) {
        ops.cos_sum(i, idx(n1, n2 + 1)) += 0.5;
        ops.cos_sum(idx(n1, n2 + 1), i) += 0.5;
      }
      // e^{i 2 phi_m} hops (n1, n2) -> (n1 + 1, n2 - 1): cos and sin blocks
      if (n1 < n && n2 > -n) {
        const int j = idx(n1 + 1, n2 - 1);
        ops.c2m(i, j) += 0.5;
        ops.c2m(j, i) += 0.5;
        ops.y2m(i, j) += -0.5;  // sin(2 phi_m) = i * y2m
        ops.y2m(j, i) += 0.5;
      }
    }
  }
  return ops;
}

Mat build_fq_hamiltonian_detuned(const JunctionOperators& ops, double f_detune) {
  if (!std::isfinite(f_detune)) throw std::invalid_argument("flux must be finite");
  if (ops.n_charge < 2) throw std::invalid_argument("n_charge too small for the loop couplings");
  const double c = std::cos(2.0 * pi * f_detune);
  const double s = std::sin(2.0 * pi * f_detune);
  RealMat re = (ops.alpha * c) * ops.c2m - ops.cos_sum;
  re.diagonal() += ops.kinetic;
  re.diagonal().array() += 2.0 + ops.alpha;
  Mat h = re.cast<cx>();
  if (s != 0.0) h += (-ops.alpha * s) * (I1 * ops.y2m.cast<cx>());
  return h;
}

Mat build_fq_hamiltonian(const JunctionOperators& ops, double f) {
  if (!std::isfinite(f)) throw std::invalid_argument("flux must be finite");
  return build_fq_hamiltonian_detuned(ops, f - 0.5);
}

Mat loop_current_operator(const JunctionOperators& ops, double f_detune) {
  const double c = std::cos(2.0 * pi * f_detune);
  const double s = std::sin(2.0 * pi * f_detune);
  Mat out = (-ops.alpha * s) * ops.c2m.cast<cx>();
  out += (-ops.alpha * c) * (I1 * ops.y2m.cast<cx>());
  return out;
}

StaticSpectrum diagonalize_static(const Mat& h, int k) {
  if (h.rows() != h.cols()) throw std::invalid_argument("matrix must be square");
  if (k < 1 || k > h.rows()) throw std::invalid_argument("requested level count out of range");
  const int d = static_cast<int>(h.rows());

  StaticSpectrum out;
  const bool is_real = h.imag().cwiseAbs().maxCoeff() == 0.0;
  if (is_real) {
    Eigen::SelfAdjointEigenSolver<RealMat> es(h.real());
    if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed to converge");
    out.energies = es.eigenvalues().head(k);
    out.states = es.eigenvectors().leftCols(k).cast<cx>();
  } else {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed to converge");
    out.energies = es.eigenvalues().head(k);
    out.states = es.eigenvectors().leftCols(k);
  }
  fix_column_phases(out.states);

  const double scale = h.norm();
  for (int c = 0; c < k; ++c) {
    const double resid = (h * out.states.col(c) - out.energies(c) * out.states.col(c)).norm();
    if (resid > 1e-10 * std::max(scale, 1e-30))
      throw std::runtime_error("eigensolver residual above tolerance");
  }
  return out;
}

TlsParams compute_tls_parameters(const JunctionOperators& ops) {
  const Mat h0 = build_fq_hamiltonian_detuned(ops, 0.0);
  const StaticSpectrum sp = diagonalize_static(h0, 2);
  const double delta = sp.energies(1) - sp.energies(0);
  if (delta <= 1e-12 * std::abs(sp.energies(1)))
    throw std::runtime_error("lowest doublet is degenerate; |+/-> mixing undefined");

  // current operator restricted to the lowest doublet; its eigenvectors are
  // the persistent-current states |+> (largest eigenvalue) and |->
  const Mat iop = loop_current_operator(ops, 0.0);
  const Mat i2 = hermitize(sp.states.adjoint() * iop * sp.states);
  Eigen::SelfAdjointEigenSolver<Mat> es(i2);
  const Vec plus = sp.states * es.eigenvectors().col(1);
  const Vec minus = sp.states * es.eigenvectors().col(0);

  TlsParams tls;
  tls.delta = delta;
  tls.i_p = std::abs(es.eigenvalues()(1));
  tls.lambda_f = 2.0 * pi * std::abs((plus.adjoint() * iop * plus).value());
  // charge-noise operators couple as -2 E_k n_k; the magnitudes keep that 2
  tls.lambda_ch =
      2.0 * ops.e_m * std::abs((minus.adjoint() * (ops.n_m.cast<cx>().asDiagonal() * plus)).value());
  tls.lambda_ch_p = 2.0 * ops.e_p *
                    std::abs((minus.adjoint() * (ops.n_p.cast<cx>().asDiagonal() * plus)).value());
  // sensitivity of the potential to the small-junction Josephson energy:
  // the symmetric-point matrix element of d(potential)/d(alpha)
  tls.lambda_cc = std::abs((minus.adjoint() * (ops.c2m.cast<cx>() * plus)).value());
  tls.validate();
  return tls;
}

Mat DrivenModel::hamiltonian(double t) const {
  if (kind == DriveKind::linear_cos) {
    Mat h = h0;
    h += std::cos(omega0 * t) * hc;
    if (hs.size() > 0) h += std::sin(omega0 * t) * hs;
    return h;
  }
  // flux_trig: cos(2 pi f(t)) = -cos(2 pi ft(t)) with ft = f - 1/2, keeping
  // the ft = 0 point exactly real
  const double ft = f_dc + f_ac * std::cos(omega0 * t);
  Mat h = h0;
  h += (-std::cos(2.0 * pi * ft)) * hc;
  h += (-std::sin(2.0 * pi * ft)) * hs;
  return h;
}

Mat DrivenModel::hamiltonian_static() const {
  if (kind == DriveKind::linear_cos) return h0;
  Mat h = h0;
  h += (-std::cos(2.0 * pi * f_dc)) * hc;
  h += (-std::sin(2.0 * pi * f_dc)) * hs;
  return h;
}

double DrivenModel::drive_scale() const {
  const Mat diff = hamiltonian(0.0) - hamiltonian(0.5 * period());
  return 0.5 * diff.cwiseAbs().maxCoeff();
}

double DrivenModel::static_span() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(hamiltonian_static(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(dim - 1) - es.eigenvalues()(0);
}

DrivenModel build_tls_model(const TlsParams& tls, double f_dc, double f_ac, double omega0,
                            const std::vector<TlsCoupling>& couplings) {
  tls.validate();
  if (!(omega0 > 0.0)) throw std::invalid_argument("omega0 must be > 0");
  const double eps0 = 4.0 * pi * tls.i_p * f_dc;
  const double amp = 4.0 * pi * tls.i_p * f_ac;

  DrivenModel m;
  m.kind = DriveKind::linear_cos;
  m.dim = 2;
  m.omega0 = omega0;
  m.f_dc = f_dc;
  m.f_ac = f_ac;
  m.h0 = -0.5 * eps0 * pauli_z() - 0.5 * tls.delta * pauli_x();
  m.hc = -0.5 * amp * pauli_z();
  m.hs = Mat::Zero(2, 2);
  m.projector_plus = Mat::Zero(2, 2);
  m.projector_plus(0, 0) = 1.0;
  for (const TlsCoupling& c : couplings) {
    Mat op;
    switch (c.axis) {
      case PauliAxis::z: op = pauli_z(); break;
      case PauliAxis::y: op = pauli_y(); break;
      case PauliAxis::x: op = pauli_x(); break;
    }
    m.couplings.push_back({-c.strength * op, c.bath_tag});
  }
  return m;
}

MultilevelStatics project_multilevel(const JunctionOperators& ops, double f_dc, int m) {
  if (m < 2 || m > 8) throw std::invalid_argument("level count must be in [2, 8]");
  if (m > ops.dim) throw std::invalid_argument("level count exceeds basis dimension");

  const Mat h = build_fq_hamiltonian_detuned(ops, f_dc);
  const StaticSpectrum sp = diagonalize_static(h, m);
  const Mat& p = sp.states;

  // flux-independent block and the exact cos/sin drive decomposition
  RealMat h_fi = -ops.cos_sum;
  h_fi.diagonal() += ops.kinetic;
  h_fi.diagonal().array() += 2.0 + ops.alpha;

  MultilevelStatics st;
  st.m = m;
  st.f_dc = f_dc;
  st.level_energies = sp.energies - RealVec::Constant(m, sp.energies(0));
  st.h0 = p.adjoint() * (h_fi.cast<cx>() * p) -
          sp.energies(0) * Mat::Identity(m, m);
  st.hc = p.adjoint() * ((-ops.alpha) * ops.c2m.cast<cx>() * p);
  st.hs = p.adjoint() * ((ops.alpha * I1) * ops.y2m.cast<cx>() * p);
  st.flux_op = p.adjoint() * ((2.0 * pi) * loop_current_operator(ops, f_dc) * p);
  st.charge_op = 2.0 * ops.e_m * (p.adjoint() * (ops.n_m.cast<cx>().asDiagonal() * p));

  for (Mat* op : {&st.h0, &st.hc, &st.hs, &st.flux_op, &st.charge_op}) {
    if (hermiticity_defect(*op) > 1e-10)
      throw std::runtime_error("projected operator non-Hermitian beyond tolerance");
    *op = hermitize(*op);
  }

  // measured branch: the subspace the ground state occupies at positive
  // detuning, i.e. negative eigenvalues of the projected loop current
  const Mat i_proj = st.flux_op / (2.0 * pi);
  Eigen::SelfAdjointEigenSolver<Mat> es(i_proj);
  st.projector_plus = Mat::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    if (es.eigenvalues()(i) < 0.0)
      st.projector_plus += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  }
  st.projector_plus = hermitize(st.projector_plus);
  return st;
}

DrivenModel build_multilevel_model(const MultilevelStatics& statics, double f_ac, double omega0,
                                   const std::vector<std::pair<NoiseKind, std::string>>& noise,
                                   double strength) {
  if (!(omega0 > 0.0)) throw std::invalid_argument("omega0 must be > 0");
  DrivenModel m;
  m.kind = DriveKind::flux_trig;
  m.dim = statics.m;
  m.omega0 = omega0;
  m.f_dc = statics.f_dc;
  m.f_ac = f_ac;
  m.h0 = statics.h0;
  m.hc = statics.hc;
  m.hs = statics.hs;
  m.projector_plus = statics.projector_plus;
  for (const auto& [kind, tag] : noise) {
    const Mat& op = (kind == NoiseKind::flux) ? statics.flux_op : statics.charge_op;
    m.couplings.push_back({strength * op, tag});
  }
  return m;
}

}  // namespace lzs
