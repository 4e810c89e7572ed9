#include "hypergroup/opseq.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "hypergroup/error.hpp"

namespace hypergroup {

double MonicChain::sigma(std::size_t k, std::size_t l) const {
  if (l < k) return 0.0;
  if (k >= mixed.size() || l - k >= mixed[k].size()) {
    std::ostringstream os;
    os << "sigma(" << k << "," << l << ") lies outside the computed triangle";
    throw Error(ErrorKind::IndexOutOfRange, os.str());
  }
  return mixed[k][l - k];
}

double MonicChain::norm_sq_log(std::size_t k) const {
  const double s = sigma(k, k);
  if (!(s > 0.0)) {
    throw DegenerateError(k, "||phi_" + std::to_string(k) + "|| vanishes");
  }
  return log_diag[k] + std::log(s);
}

MonicChain modified_chebyshev(const std::vector<double>& d, const PolynomialSystem& sys,
                              std::size_t depth) {
  if (d.size() < 2 * depth || d.empty()) {
    std::ostringstream os;
    os << "depth " << depth << " needs " << 2 * depth << " moments, got " << d.size();
    throw Error(ErrorKind::IndexOutOfRange, os.str());
  }
  if (!(d[0] > 0.0)) throw Error(ErrorKind::InvalidArgument, "d(0) must be positive");

  const std::size_t L = std::min(d.size(), 2 * depth + 1);
  const std::size_t levels = (L - 1) / 2 + 1;  // k with sigma_{k,k} available
  std::vector<XRecurrence> xr(L + 1);
  for (std::size_t l = 0; l <= L; ++l) xr[l] = sys.x_recurrence(l);

  MonicChain ch;
  ch.depth = depth;
  ch.alpha.assign(depth, 0.0);
  ch.beta.assign(depth, 0.0);
  ch.log_diag = sys.leading_coefficient_logs(levels);
  for (double& v : ch.log_diag) v = -v;
  ch.mixed.resize(levels);
  ch.mixed[0].assign(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(L));

  auto set_coefficients = [&](std::size_t k) {
    const auto& row = ch.mixed[k];
    double a = xr[k].same + xr[k].next * row[1] / row[0];
    if (k > 0) {
      const auto& prev = ch.mixed[k - 1];
      a -= xr[k - 1].next * prev[1] / prev[0];
      ch.beta[k] = xr[k - 1].next * row[0] / prev[0];
    }
    ch.alpha[k] = a;
  };
  set_coefficients(0);

  for (std::size_t k = 1; k < levels; ++k) {
    const auto& p1 = ch.mixed[k - 1];
    const double al = ch.alpha[k - 1], be = ch.beta[k - 1];
    const std::size_t count = L - 2 * k;  // l = k .. L-1-k
    std::vector<double> row(count);
    double diag_scale = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
      const std::size_t l = k + j;
      // sigma_{k-1, l+1}, sigma_{k-1, l}, sigma_{k-1, l-1} live at p1[j+2], p1[j+1], p1[j]
      const double t1 = xr[l].next * p1[j + 2];
      const double t2 = (xr[l].same - al) * p1[j + 1];
      const double t3 = xr[l].prev * p1[j];
      double t4 = 0.0;
      if (k >= 2) t4 = be * ch.mixed[k - 2][l - (k - 2)];
      row[j] = t1 + t2 + t3 - t4;
      if (j == 0) diag_scale = std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4);
    }
    const double skk = row[0];
    const bool vanished = !(skk > 1e-11 * diag_scale);
    const bool underflow = !vanished && std::abs(skk) < 1e-250 * d[0];
    ch.mixed[k] = std::move(row);
    if (vanished || underflow) {
      if (k == depth && vanished && !underflow) {
        ch.top_degenerate = true;
        break;
      }
      std::ostringstream os;
      os << "sigma(" << k << "," << k << ") = " << skk
         << (underflow ? " underflowed" : " vanished") << "; chain complete to depth " << k;
      throw DegenerateError(k, os.str());
    }
    if (k < depth) set_coefficients(k);
  }
  return ch;
}

ConnectionTriangle::ConnectionTriangle(std::size_t n) : rows_(n + 1) {
  for (std::size_t k = 0; k <= n; ++k) rows_[k].assign(k + 1, 0.0);
}

Eigen::MatrixXd ConnectionTriangle::matrix() const {
  const auto n = static_cast<Eigen::Index>(rows_.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l <= k; ++l) {
      M(k, l) = rows_[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
    }
  }
  return M;
}

void ConnectionTriangle::write_csv(std::ostream& os) const {
  const auto old = os.precision(17);
  os << "k,l,value\n";
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    for (std::size_t l = 0; l <= k; ++l) os << k << ',' << l << ',' << rows_[k][l] << '\n';
  }
  os.precision(old);
}

ConnectionTriangle connection_from_measure(const MonicChain& chain, const PolynomialSystem& sys) {
  const std::size_t n = chain.depth;
  ConnectionTriangle c(n);
  std::vector<XRecurrence> xr(n + 2);
  for (std::size_t l = 0; l < xr.size(); ++l) xr[l] = sys.x_recurrence(l);
  c.at(0, 0) = 1.0;  // P_0 = 1
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l <= k + 1; ++l) {
      double v = 0.0;
      if (l >= 1) v += xr[l - 1].next * c(k, l - 1);
      v += (xr[l].same - chain.alpha[k]) * c(k, l);
      v += xr[l + 1].prev * c(k, l + 1);
      if (k >= 1) v -= chain.beta[k] * c(k - 1, l);
      c.at(k + 1, l) = v;
    }
  }
  return c;
}

ConnectionTriangle connect_systems(const PolynomialSystem& P, const PolynomialSystem& Q,
                                   std::size_t n) {
  ConnectionTriangle c(n);
  std::vector<XRecurrence> xp(n + 2), xq(n + 1);
  for (std::size_t l = 0; l < xp.size(); ++l) xp[l] = P.x_recurrence(l);
  for (std::size_t l = 0; l < xq.size(); ++l) xq[l] = Q.x_recurrence(l);
  c.at(0, 0) = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l <= k + 1; ++l) {
      double v = 0.0;
      if (l >= 1) v += xp[l - 1].next * c(k, l - 1);
      v += (xp[l].same - xq[k].same) * c(k, l);
      v += xp[l + 1].prev * c(k, l + 1);
      if (k >= 1) v -= xq[k].prev * c(k - 1, l);
      c.at(k + 1, l) = v / xq[k].next;
    }
  }
  return c;
}

double orthonormal_leading_log(const MonicChain& chain, std::size_t k) {
  return -0.5 * chain.norm_sq_log(k);
}

double monic_evaluate(const MonicChain& chain, std::size_t k, double x) {
  if (k > chain.depth) throw Error(ErrorKind::IndexOutOfRange, "monic index beyond chain depth");
  double prev = 0.0, cur = 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double next = (x - chain.alpha[j]) * cur - (j ? chain.beta[j] : 0.0) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace hypergroup
