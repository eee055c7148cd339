#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "compactknap/conic.hpp"

namespace compactknap {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Real = long double;
using MatrixXr = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXr = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using SparseRow = std::vector<std::pair<int, double>>;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDivergence = 1e8;

template <typename Vec>
Vec times(const std::vector<SparseRow> &rows, const Vec &v) {
  Vec out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    typename Vec::Scalar a = 0;
    for (const auto &[idx, coef] : rows[r]) {
      a += coef * v(idx);
    }
    out(static_cast<Eigen::Index>(r)) = a;
  }
  return out;
}

template <typename Vec>
void add_transpose_times(const std::vector<SparseRow> &rows, const Vec &u, Vec &out) {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto ur = u(static_cast<Eigen::Index>(r));
    if (ur == 0) {
      continue;
    }
    for (const auto &[idx, coef] : rows[r]) {
      out(idx) += coef * ur;
    }
  }
}

MatrixXr unpack_ext(const VectorXr &v, int order) {
  const Real root2 = std::sqrt(Real(2));
  MatrixXr m(order, order);
  int k = 0;
  for (int i = 0; i < order; ++i) {
    m(i, i) = v(k++);
    for (int j = i + 1; j < order; ++j) {
      m(i, j) = m(j, i) = v(k++) / root2;
    }
  }
  return m;
}

VectorXr pack_ext(const MatrixXr &m) {
  const Real root2 = std::sqrt(Real(2));
  const int p = static_cast<int>(m.rows());
  VectorXr v(svec::dimension(p));
  int k = 0;
  for (int i = 0; i < p; ++i) {
    v(k++) = m(i, i);
    for (int j = i + 1; j < p; ++j) {
      v(k++) = root2 * (m(i, j) + m(j, i)) / 2;
    }
  }
  return v;
}

double min_eigenvalue(const MatrixXd &m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

MatrixXd sym(const MatrixXd &m) { return 0.5 * (m + m.transpose()); }

// The program as: minimize c.v  s.t.  A v = b,  G v <= h,  smat(v) PSD.
// Rows are scaled to unit 2-norm and c to unit infinity norm.
struct StandardForm {
  int order = 0;
  int dim = 0;
  VectorXd c;
  double cscale = 1.0;
  std::vector<SparseRow> eq;
  VectorXd b;
  std::vector<SparseRow> ineq;
  VectorXd h;
  std::vector<int> row_of, col_of;
  bool trivially_infeasible = false;
};

StandardForm standardize(const ConicProgram &prog) {
  StandardForm sf;
  sf.order = prog.order;
  sf.dim = svec::dimension(prog.order);
  if (static_cast<int>(prog.objective.size()) != sf.dim) {
    throw std::invalid_argument("conic objective has the wrong dimension");
  }
  sf.c = Eigen::Map<const VectorXd>(prog.objective.data(), sf.dim);
  sf.cscale = std::max(1.0, sf.c.cwiseAbs().maxCoeff());
  sf.c /= sf.cscale;

  std::vector<double> b, h;
  for (const ConicRow &row : prog.rows) {
    double norm = 0.0;
    for (const auto &[idx, coef] : row.coefficients) {
      if (idx < 0 || idx >= sf.dim || !std::isfinite(coef)) {
        throw std::invalid_argument("conic row coefficient out of range");
      }
      norm += coef * coef;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      const bool ok = (row.sense == Sense::GreaterEqual && row.rhs <= 0.0) ||
                      (row.sense == Sense::LessEqual && row.rhs >= 0.0) ||
                      (row.sense == Sense::Equal && row.rhs == 0.0);
      sf.trivially_infeasible = sf.trivially_infeasible || !ok;
      continue;
    }
    const double sign = row.sense == Sense::GreaterEqual ? -1.0 : 1.0;
    SparseRow scaled;
    scaled.reserve(row.coefficients.size());
    for (const auto &[idx, coef] : row.coefficients) {
      scaled.emplace_back(idx, sign * coef / norm);
    }
    if (row.sense == Sense::Equal) {
      sf.eq.push_back(std::move(scaled));
      b.push_back(row.rhs / norm);
    } else {
      sf.ineq.push_back(std::move(scaled));
      h.push_back(sign * row.rhs / norm);
    }
  }
  sf.b = Eigen::Map<VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
  sf.h = Eigen::Map<VectorXd>(h.data(), static_cast<Eigen::Index>(h.size()));
  sf.row_of.resize(sf.dim);
  sf.col_of.resize(sf.dim);
  for (int k = 0; k < sf.dim; ++k) {
    const auto [i, j] = svec::entry(k, sf.order);
    sf.row_of[k] = i;
    sf.col_of[k] = j;
  }
  return sf;
}

// Primal-dual iterate: v, y, (s, z) on the orthant and (S, Z) on the PSD cone.
struct Iterate {
  VectorXd v, y, s, z;
  MatrixXd S, Z;
};

// Nesterov-Todd scaling.
struct Scaling {
  VectorXd w;       // orthant: sqrt(s / z)
  VectorXd lam;     // orthant: sqrt(s z)
  MatrixXd R;       // PSD: scaled dual is R^T Z R, scaled primal R^{-1} S R^{-T}
  MatrixXd Rinv;
  MatrixXd K;       // PSD: the normal-equation block is U -> K U K
  VectorXd lam_psd; // PSD: eigenvalues of the scaled point
};

bool compute_scaling(const Iterate &it, Scaling &sc) {
  sc.w = (it.s.array() / it.z.array()).sqrt();
  sc.lam = (it.s.array() * it.z.array()).sqrt();
  Eigen::LLT<MatrixXd> ls(it.S);
  Eigen::LLT<MatrixXd> lz(it.Z);
  if (ls.info() != Eigen::Success || lz.info() != Eigen::Success) {
    return false;
  }
  const MatrixXd Ls = ls.matrixL();
  const MatrixXd Lz = lz.matrixL();
  Eigen::JacobiSVD<MatrixXd> svd(Lz.transpose() * Ls, Eigen::ComputeFullU | Eigen::ComputeFullV);
  sc.lam_psd = svd.singularValues();
  if (sc.lam_psd.minCoeff() <= 0.0) {
    return false;
  }
  const VectorXd inv_sqrt = sc.lam_psd.array().rsqrt();
  sc.R = Ls * svd.matrixV() * inv_sqrt.asDiagonal();
  const MatrixXd Ls_inv =
      Ls.triangularView<Eigen::Lower>().solve(MatrixXd::Identity(it.S.rows(), it.S.cols()));
  sc.Rinv = sc.lam_psd.array().sqrt().matrix().asDiagonal() * svd.matrixV().transpose() * Ls_inv;
  sc.K = sym(sc.Rinv.transpose() * sc.Rinv);
  return true;
}

/**
 * Normal equations H dv + A^T dy = r, A dv = by with
 * H = G^T diag(d) G + (svec of U -> K U K). H is factored in double;
 * refinement residuals are evaluated in extended precision straight from
 * G, d and K.
 */
class NormalSystem {
public:
  explicit NormalSystem(const StandardForm &sf) : sf_(sf) {
    at_ = MatrixXd::Zero(sf.dim, static_cast<Eigen::Index>(sf.eq.size()));
    for (std::size_t r = 0; r < sf.eq.size(); ++r) {
      for (const auto &[idx, coef] : sf.eq[r]) {
        at_(idx, static_cast<Eigen::Index>(r)) = coef;
      }
    }
  }

  bool factor(const VectorXr &d, const MatrixXd &K) {
    d_ = d;
    k_ = K.cast<Real>();
    const int N = sf_.dim;
    MatrixXd h(N, N);
    for (int col = 0; col < N; ++col) {
      const int c = sf_.row_of[col];
      const int dd = sf_.col_of[col];
      for (int row = col; row < N; ++row) {
        const int a = sf_.row_of[row];
        const int bb = sf_.col_of[row];
        double v;
        if (a != bb && c != dd) {
          v = K(a, c) * K(bb, dd) + K(a, dd) * K(bb, c);
        } else if (a == bb && c != dd) {
          v = svec::kSqrt2 * K(a, c) * K(a, dd);
        } else if (a != bb) {
          v = svec::kSqrt2 * K(c, a) * K(c, bb);
        } else {
          v = K(a, c) * K(a, c);
        }
        h(row, col) = v;
      }
    }
    for (std::size_t r = 0; r < sf_.ineq.size(); ++r) {
      const double weight = static_cast<double>(d(static_cast<Eigen::Index>(r)));
      const SparseRow &row = sf_.ineq[r];
      for (const auto &[i1, c1] : row) {
        const double wc = weight * c1;
        for (const auto &[i2, c2] : row) {
          if (i2 >= i1) {
            h(i2, i1) += wc * c2;
          }
        }
      }
    }
    const double scale = std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
    double reg = 0.0;
    for (int attempt = 0; attempt < 6; ++attempt) {
      if (reg > 0.0) {
        h.diagonal().array() += reg - (attempt > 1 ? reg / 100.0 : 0.0);
      }
      llt_.compute(h);
      if (llt_.info() == Eigen::Success) {
        break;
      }
      reg = reg == 0.0 ? 1e-13 * scale : reg * 100.0;
    }
    if (llt_.info() != Eigen::Success) {
      return false;
    }
    if (at_.cols() > 0) {
      hinv_at_ = llt_.solve(at_);
      schur_.compute(at_.transpose() * hinv_at_);
      if (schur_.info() != Eigen::Success) {
        return false;
      }
    }
    return true;
  }

  /// H v in extended precision.
  VectorXr apply(const VectorXd &v) const {
    const VectorXr vr = v.cast<Real>();
    VectorXr gv = times(sf_.ineq, vr);
    gv.array() *= d_.array();
    const MatrixXr m = unpack_ext(vr, sf_.order);
    VectorXr out = pack_ext(k_ * m * k_);
    add_transpose_times(sf_.ineq, gv, out);
    return out;
  }

  void solve(const VectorXr &r, const VectorXd &by, VectorXd &dv, VectorXd &dy) const {
    solveOnce(r.cast<double>(), by, dv, dy);
    const Real rnorm = std::max<Real>(r.norm(), Real(1e-300));
    for (int pass = 0; pass < 3; ++pass) {
      VectorXr e1 = r - apply(dv);
      VectorXd e2 = by;
      if (at_.cols() > 0) {
        e1 -= (at_ * dy).cast<Real>();
        e2 -= at_.transpose() * dv;
      }
      if (e1.norm() <= Real(1e-17) * rnorm && e2.norm() <= 1e-16 * std::max(1.0, by.norm())) {
        break;
      }
      VectorXd cv, cy;
      solveOnce(e1.cast<double>(), e2, cv, cy);
      dv += cv;
      if (cy.size() > 0) {
        dy += cy;
      }
    }
  }

private:
  void solveOnce(const VectorXd &r, const VectorXd &by, VectorXd &dv, VectorXd &dy) const {
    if (at_.cols() == 0) {
      dv = llt_.solve(r);
      dy.resize(0);
      return;
    }
    const VectorXd hr = llt_.solve(r);
    dy = schur_.solve(at_.transpose() * hr - by);
    dv = hr - hinv_at_ * dy;
  }

  const StandardForm &sf_;
  MatrixXd at_;
  VectorXr d_;
  MatrixXr k_;
  Eigen::LLT<MatrixXd> llt_;
  MatrixXd hinv_at_;
  Eigen::LLT<MatrixXd> schur_;
};

struct Residuals {
  VectorXd rx, ry, rz;
  MatrixXd Rz;
  double pres = 0.0, dres = 0.0, gap = 0.0, pcost = 0.0, dcost = 0.0, relgap = 0.0;
};

struct Direction {
  VectorXd dv, dy, dz, ds;
  MatrixXd dZ, dS;
  VectorXd dst, dzt; // scaled orthant directions
  MatrixXd dSt, dZt; // scaled PSD directions
};

class InteriorPoint {
public:
  explicit InteriorPoint(const StandardForm &sf) : sf_(sf), system_(sf) {
    nrm_b_ = std::max(1.0, sf.b.norm());
    nrm_h_ = std::max(1.0, sf.h.norm());
    nrm_c_ = std::max(1.0, sf.c.norm());
    degree_ = static_cast<double>(sf.ineq.size() + sf.order);
  }

  // Starting point from two least-squares solves with identity scaling,
  // shifted into the cones when needed.
  bool initialize(Iterate &it) {
    const int N = sf_.dim;
    const int p = sf_.order;
    const int ml = static_cast<int>(sf_.ineq.size());
    if (!system_.factor(VectorXr::Ones(ml), MatrixXd::Identity(p, p))) {
      return false;
    }
    VectorXd dv, dy;
    VectorXr r = VectorXr::Zero(N);
    add_transpose_times(sf_.ineq, VectorXr(sf_.h.cast<Real>()), r);
    system_.solve(r, sf_.b, dv, dy);
    it.v = dv;
    it.s = sf_.h - times(sf_.ineq, dv);
    it.S = svec::unpack(dv, p);

    system_.solve(VectorXr(-sf_.c.cast<Real>()), VectorXd::Zero(sf_.b.size()), dv, dy);
    it.y = dy;
    it.z = times(sf_.ineq, dv);
    it.Z = -svec::unpack(dv, p);
    shift_into_cone(it.s, it.S);
    shift_into_cone(it.z, it.Z);
    return true;
  }

  Residuals residuals(const Iterate &it) const {
    Residuals r;
    r.rx = sf_.c - svec::pack(it.Z);
    addEqualityTranspose(it.y, r.rx);
    add_transpose_times(sf_.ineq, it.z, r.rx);
    r.ry = times(sf_.eq, it.v) - sf_.b;
    r.rz = times(sf_.ineq, it.v) + it.s - sf_.h;
    r.Rz = it.S - svec::unpack(it.v, sf_.order);
    const double rz_norm = std::sqrt(r.rz.squaredNorm() + svec::pack(r.Rz).squaredNorm());
    r.pres = std::max(r.ry.norm() / nrm_b_, rz_norm / nrm_h_);
    r.dres = r.rx.norm() / nrm_c_;
    r.gap = it.s.dot(it.z) + (it.S.cwiseProduct(it.Z)).sum();
    r.pcost = sf_.c.dot(it.v);
    r.dcost = -sf_.b.dot(it.y) - sf_.h.dot(it.z);
    r.relgap = r.gap * sf_.cscale / (1.0 + sf_.cscale * (std::abs(r.pcost) + std::abs(r.dcost)));
    return r;
  }

  double mu(const Residuals &r) const { return r.gap / degree_; }

  bool prepare(const Iterate &it) {
    if (!compute_scaling(it, sc_)) {
      return false;
    }
    const VectorXr w = sc_.w.cast<Real>();
    return system_.factor(VectorXr((w.array() * w.array()).inverse()), sc_.K);
  }

  // Newton direction for the scaled complementarity target (dc, Dc). The
  // primal steps come from the primal residual equations and dZ from the dual
  // residual equation, so solve errors only perturb complementarity.
  Direction direction(const Residuals &r, const VectorXd &dc, const MatrixXd &Dc) const {
    Direction dir;
    const VectorXd u = (dc.array() / sc_.lam.array()).matrix();
    MatrixXd U(Dc.rows(), Dc.cols());
    for (int i = 0; i < U.rows(); ++i) {
      for (int j = 0; j < U.cols(); ++j) {
        U(i, j) = 2.0 * Dc(i, j) / (sc_.lam_psd(i) + sc_.lam_psd(j));
      }
    }
    const VectorXr w = sc_.w.cast<Real>();
    const VectorXr dl = (w.array() * w.array()).inverse().matrix(); // z / s
    const VectorXr bz = -r.rz.cast<Real>() - (w.array() * u.cast<Real>().array()).matrix();
    const MatrixXd Bz = -r.Rz - sc_.R * U * sc_.R.transpose();

    VectorXr rhs = -r.rx.cast<Real>();
    const VectorXr dbz = (dl.array() * bz.array()).matrix();
    add_transpose_times(sf_.ineq, dbz, rhs);
    const MatrixXr kr = sc_.K.cast<Real>();
    rhs -= pack_ext(kr * Bz.cast<Real>() * kr);
    system_.solve(rhs, -r.ry, dir.dv, dir.dy);

    const VectorXr gdv = times(sf_.ineq, VectorXr(dir.dv.cast<Real>()));
    dir.ds = (-gdv - r.rz.cast<Real>()).cast<double>();
    dir.dS = svec::unpack(dir.dv, sf_.order) - r.Rz;
    dir.dz = ((gdv - bz).array() * dl.array()).matrix().cast<double>();
    VectorXd dual = r.rx;
    addEqualityTranspose(dir.dy, dual);
    add_transpose_times(sf_.ineq, dir.dz, dual);
    dir.dZ = svec::unpack(dual, sf_.order);

    dir.dst = (dir.ds.array() / sc_.w.array()).matrix();
    dir.dzt = (sc_.w.array() * dir.dz.array()).matrix();
    dir.dSt = sym(sc_.Rinv * dir.dS * sc_.Rinv.transpose());
    dir.dZt = sym(sc_.R.transpose() * dir.dZ * sc_.R);
    return dir;
  }

  // Largest primal and dual steps keeping the scaled point in the cones.
  std::pair<double, double> maxSteps(const Direction &dir) const {
    const VectorXd isq = sc_.lam_psd.array().rsqrt();
    const auto limit = [&](const VectorXd &d, const MatrixXd &D) {
      double alpha = kInf;
      for (int i = 0; i < d.size(); ++i) {
        if (d(i) < 0.0) {
          alpha = std::min(alpha, -sc_.lam(i) / d(i));
        }
      }
      const double e = min_eigenvalue(sym(isq.asDiagonal() * D * isq.asDiagonal()));
      if (e < 0.0) {
        alpha = std::min(alpha, -1.0 / e);
      }
      return alpha;
    };
    return {limit(dir.dst, dir.dSt), limit(dir.dzt, dir.dZt)};
  }

  const Scaling &scaling() const { return sc_; }

private:
  void addEqualityTranspose(const VectorXd &y, VectorXd &out) const {
    for (std::size_t k = 0; k < sf_.eq.size(); ++k) {
      const double yk = y(static_cast<Eigen::Index>(k));
      for (const auto &[idx, coef] : sf_.eq[k]) {
        out(idx) += coef * yk;
      }
    }
  }

  void shift_into_cone(VectorXd &x, MatrixXd &X) const {
    double t = -kInf;
    if (x.size() > 0) {
      t = std::max(t, -x.minCoeff());
    }
    t = std::max(t, -min_eigenvalue(X));
    const double nrm = std::sqrt(x.squaredNorm() + X.squaredNorm());
    if (t >= -1e-8 * std::max(nrm, 1.0)) {
      x.array() += 1.0 + t;
      X.diagonal().array() += 1.0 + t;
    }
  }

  const StandardForm &sf_;
  NormalSystem system_;
  Scaling sc_;
  double nrm_b_ = 1.0, nrm_h_ = 1.0, nrm_c_ = 1.0, degree_ = 1.0;
};

} // namespace

ConicResult solve_conic(const ConicProgram &prog, const ConicOptions &opts) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };

  ConicResult result;
  const StandardForm sf = standardize(prog);
  if (sf.trivially_infeasible) {
    result.report.status = SolveStatus::Infeasible;
    return result;
  }
  InteriorPoint ipm(sf);
  Iterate it;
  Iterate best;
  Residuals res;
  Residuals best_res;
  double best_merit = kInf;
  int iter = 0;
  int since_best = 0;
  int since_halving = 0;
  const bool started = ipm.initialize(it);
  enum class Stop { Converged, Iterations, Time, Stalled, Infeasible, Unbounded } stop =
      Stop::Stalled;
  if (started) {
    for (;; ++iter) {
      res = ipm.residuals(it);
      const double merit = std::max({res.pres, res.dres, res.relgap});
      if (!std::isfinite(merit) || !std::isfinite(res.pcost) || !std::isfinite(res.dcost)) {
        break;
      }
      // Diverging objectives with the other side feasible certify infeasibility.
      if (res.dres <= 1e-6 && res.pres > opts.feasibility_tol &&
          res.dcost > kDivergence * (1.0 + std::abs(res.pcost))) {
        stop = Stop::Infeasible;
        break;
      }
      if (res.pres <= 1e-6 && res.dres > opts.feasibility_tol &&
          -res.pcost > kDivergence * (1.0 + std::abs(res.dcost))) {
        stop = Stop::Unbounded;
        break;
      }
      ++since_best;
      ++since_halving;
      if (merit < best_merit) {
        if (merit < 0.5 * best_merit) {
          since_halving = 0;
        }
        since_best = 0;
        best_merit = merit;
        best = it;
        best_res = res;
      }
      if (res.pres <= opts.feasibility_tol && res.dres <= opts.feasibility_tol &&
          res.relgap <= opts.gap_tol) {
        stop = Stop::Converged;
        break;
      }
      if (since_best >= 10 || (best_merit <= opts.contract_tol && since_halving >= 5)) {
        break;
      }
      if (iter >= opts.max_iterations) {
        stop = Stop::Iterations;
        break;
      }
      if (elapsed() > opts.time_limit) {
        stop = Stop::Time;
        break;
      }
      if (!ipm.prepare(it)) {
        break;
      }
      const Scaling &sc = ipm.scaling();
      const double mu = ipm.mu(res);
      const VectorXd lam2 = sc.lam.array().square().matrix();
      const MatrixXd Lam2 = sc.lam_psd.array().square().matrix().asDiagonal();
      const MatrixXd eye = MatrixXd::Identity(Lam2.rows(), Lam2.cols());

      // Mehrotra predictor-corrector.
      const Direction aff = ipm.direction(res, -lam2, -Lam2);
      const auto [pa, da] = ipm.maxSteps(aff);
      const double ap = std::min(1.0, pa);
      const double ad = std::min(1.0, da);
      const double gap_aff = (it.s + ap * aff.ds).dot(it.z + ad * aff.dz) +
                             (it.S + ap * aff.dS).cwiseProduct(it.Z + ad * aff.dZ).sum();
      const double sigma = std::pow(std::clamp(gap_aff / res.gap, 0.0, 1.0), 3.0);

      const VectorXd dc = -lam2 - aff.dst.cwiseProduct(aff.dzt) +
                          VectorXd::Constant(lam2.size(), sigma * mu);
      const MatrixXd Dc = -Lam2 - sym(aff.dSt * aff.dZt) + sigma * mu * eye;
      Direction dir = ipm.direction(res, dc, Dc);
      auto [pmax, dmax] = ipm.maxSteps(dir);
      if (std::min(pmax, dmax) < 0.1) {
        // Plain centring step when the corrector barely moves.
        const double target = std::max(sigma, 0.5) * mu;
        Direction alt = ipm.direction(res, -lam2 + VectorXd::Constant(lam2.size(), target),
                                      -Lam2 + target * eye);
        const auto [pa2, da2] = ipm.maxSteps(alt);
        if (std::min(pa2, da2) > std::min(pmax, dmax)) {
          dir = std::move(alt);
          pmax = pa2;
          dmax = da2;
        }
      }
      const double gamma = std::min(opts.step_fraction, 0.9 + 0.09 * std::min({1.0, pmax, dmax}));
      const double alpha_p = std::min(1.0, gamma * pmax);
      const double alpha_d = std::min(1.0, gamma * dmax);
      if (opts.verbose) {
        std::fprintf(stderr,
                     "ipm %3d pres %.2e dres %.2e relgap %.2e pobj %.10g dobj %.10g "
                     "sigma %.2e ap %.2e ad %.2e\n",
                     iter, res.pres, res.dres, res.relgap, res.pcost * sf.cscale,
                     res.dcost * sf.cscale, sigma, alpha_p, alpha_d);
      }
      if (!(std::max(alpha_p, alpha_d) > 1e-10)) {
        break;
      }
      it.v += alpha_p * dir.dv;
      it.s += alpha_p * dir.ds;
      it.S = sym(it.S + alpha_p * dir.dS);
      if (dir.dy.size() > 0) {
        it.y += alpha_d * dir.dy;
      }
      it.z += alpha_d * dir.dz;
      it.Z = sym(it.Z + alpha_d * dir.dZ);
    }
  }

  SolveStatus status = SolveStatus::SolverFailure;
  if (stop == Stop::Infeasible) {
    result.report.status = SolveStatus::Infeasible;
    result.report.iterations = iter;
    result.diagnostics.iterations = iter;
    result.report.wall_time = elapsed();
    return result;
  }
  if (started && stop != Stop::Unbounded && std::isfinite(best_merit)) {
    it = best;
    res = best_res;
    if (stop == Stop::Converged || best_merit <= opts.contract_tol) {
      status = SolveStatus::Optimal;
    } else if (best_merit <= opts.acceptable_tol) {
      status = SolveStatus::Optimal;
      result.diagnostics.reduced_accuracy = true;
    } else if (stop == Stop::Iterations) {
      status = SolveStatus::IterationLimit;
    } else if (stop == Stop::Time) {
      status = SolveStatus::TimeLimit;
    }
  }

  result.diagnostics.iterations = iter;
  result.report.iterations = iter;
  result.report.status = status;
  result.report.wall_time = elapsed();
  if (!started || it.S.size() == 0) {
    result.report.status = SolveStatus::SolverFailure;
    return result;
  }
  const int n = prog.items();
  result.solution = LiftedSolution::fromMatrix(it.S.block(1, 1, n, n), "conic");
  result.solution.y = sym(it.S);
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(result.solution.y, Eigen::EigenvaluesOnly);
  result.diagnostics.min_eigenvalue = eig.eigenvalues()(0);
  result.diagnostics.max_eigenvalue = eig.eigenvalues()(eig.eigenvalues().size() - 1);
  result.diagnostics.primal_residual = res.pres;
  result.diagnostics.dual_residual = res.dres;
  result.diagnostics.gap = res.gap * sf.cscale;
  result.diagnostics.relative_gap = res.relgap;
  result.diagnostics.primal_objective = res.pcost * sf.cscale;
  result.diagnostics.dual_objective = res.dcost * sf.cscale;

  const double obj = prog.evaluate(result.solution.y);
  result.report.objective = obj;
  result.report.bound = res.dcost * sf.cscale;
  result.solution.diag_x.objective = obj;
  result.report.solution = result.solution.diag_x;
  return result;
}

} // namespace compactknap
