#include "compactknap/conic.hpp"

#include <algorithm>
#include <stdexcept>

namespace compactknap {

namespace svec {

std::pair<int, int> entry(int idx, int order) {
  int row = 0;
  int start = 0;
  while (idx >= start + (order - row)) {
    start += order - row;
    ++row;
  }
  return {row, row + (idx - start)};
}

Eigen::VectorXd pack(const Eigen::MatrixXd &m) {
  const int p = static_cast<int>(m.rows());
  Eigen::VectorXd v(dimension(p));
  int k = 0;
  for (int i = 0; i < p; ++i) {
    v(k++) = m(i, i);
    for (int j = i + 1; j < p; ++j) {
      v(k++) = kSqrt2 * 0.5 * (m(i, j) + m(j, i));
    }
  }
  return v;
}

Eigen::MatrixXd unpack(const Eigen::VectorXd &v, int order) {
  Eigen::MatrixXd m(order, order);
  int k = 0;
  for (int i = 0; i < order; ++i) {
    m(i, i) = v(k++);
    for (int j = i + 1; j < order; ++j) {
      m(i, j) = m(j, i) = v(k++) / kSqrt2;
    }
  }
  return m;
}

} // namespace svec

LinearForm &LinearForm::add(int i, int j, double coef) {
  if (i < 0 || j < 0 || i >= order_ || j >= order_) {
    throw std::out_of_range("LinearForm entry outside the matrix");
  }
  entries_[svec::index(i, j, order_)] += i == j ? coef : coef / svec::kSqrt2;
  return *this;
}

std::vector<std::pair<int, double>> LinearForm::encode() const {
  std::vector<std::pair<int, double>> out;
  out.reserve(entries_.size());
  for (const auto &[idx, coef] : entries_) {
    if (coef != 0.0) {
      out.emplace_back(idx, coef);
    }
  }
  return out;
}

void ConicProgram::addRow(const LinearForm &form, Sense sense, double rhs,
                          std::string tag) {
  rows.push_back(ConicRow{form.encode(), sense, rhs, std::move(tag)});
}

std::size_t ConicProgram::countRows(const std::string &tag) const {
  return static_cast<std::size_t>(std::count_if(
      rows.begin(), rows.end(), [&](const ConicRow &r) { return r.tag == tag; }));
}

double ConicProgram::maxRowViolation(const Eigen::MatrixXd &y) const {
  const Eigen::VectorXd v = svec::pack(y);
  double worst = 0.0;
  for (const ConicRow &row : rows) {
    double a = 0.0;
    for (const auto &[idx, coef] : row.coefficients) {
      a += coef * v(idx);
    }
    double viol = 0.0;
    switch (row.sense) {
    case Sense::GreaterEqual:
      viol = row.rhs - a;
      break;
    case Sense::LessEqual:
      viol = a - row.rhs;
      break;
    case Sense::Equal:
      viol = std::abs(a - row.rhs);
      break;
    }
    worst = std::max(worst, viol);
  }
  return worst;
}

double ConicProgram::evaluate(const Eigen::MatrixXd &y) const {
  const Eigen::VectorXd v = svec::pack(y);
  double total = 0.0;
  for (int k = 0; k < v.size(); ++k) {
    total += objective[static_cast<std::size_t>(k)] * v(k);
  }
  return total;
}

LiftedSolution LiftedSolution::fromMatrix(const Eigen::MatrixXd &x,
                                          std::string provenance) {
  const int n = static_cast<int>(x.rows());
  LiftedSolution sol;
  sol.x = 0.5 * (x + x.transpose());
  sol.y.resize(n + 1, n + 1);
  sol.y(0, 0) = 1.0;
  sol.y.block(1, 1, n, n) = sol.x;
  sol.diag_x.values.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    sol.y(0, i + 1) = sol.y(i + 1, 0) = sol.x(i, i);
    sol.diag_x.values[static_cast<std::size_t>(i)] = sol.x(i, i);
  }
  sol.diag_x.provenance = std::move(provenance);
  return sol;
}

LiftedSolution LiftedSolution::lift(const std::vector<double> &v,
                                    std::string provenance) {
  const Eigen::Map<const Eigen::VectorXd> x(v.data(), static_cast<Eigen::Index>(v.size()));
  return fromMatrix(x * x.transpose(), std::move(provenance));
}

double LiftedSolution::minEigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(y, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

} // namespace compactknap
