#include "qlab/distance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qlab {

namespace {

Eigen::VectorXd to_eigen(const Vec& x) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(x.dim()));
  for (std::size_t k = 0; k < x.dim(); ++k) v[static_cast<Eigen::Index>(k)] = x[k];
  return v;
}

Vec from_eigen(const Eigen::VectorXd& v) {
  std::vector<double> c(static_cast<std::size_t>(v.size()));
  for (Eigen::Index k = 0; k < v.size(); ++k) c[static_cast<std::size_t>(k)] = v[k];
  return Vec(std::move(c));
}

}  // namespace

Vec SignedPermutation::apply(const Vec& x) const {
  if (x.dim() != perm.size())
    throw std::invalid_argument("SignedPermutation: dimension mismatch");
  std::vector<double> out(x.dim(), 0.0);
  for (std::size_t i = 0; i < x.dim(); ++i) out[perm[i]] = sign[i] * x[i];
  return Vec(std::move(out));
}

SignedPermutation SignedPermutation::inverse() const {
  SignedPermutation inv;
  inv.perm.resize(perm.size());
  inv.sign.resize(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    inv.perm[perm[i]] = i;
    inv.sign[perm[i]] = sign[i];
  }
  return inv;
}

Eigen::MatrixXd SignedPermutation::matrix() const {
  const auto n = static_cast<Eigen::Index>(perm.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < perm.size(); ++i)
    m(static_cast<Eigen::Index>(perm[i]), static_cast<Eigen::Index>(i)) = sign[i];
  return m;
}

std::vector<SignedPermutation> enumerate_signed_permutations(std::size_t n) {
  if (n == 0 || n > 8)
    throw std::invalid_argument("enumerate_signed_permutations: need 1 <= n <= 8");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<SignedPermutation> group;
  do {
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      SignedPermutation u;
      u.perm = perm;
      u.sign.resize(n);
      for (std::size_t i = 0; i < n; ++i)
        u.sign[i] = (mask >> i) & 1 ? -1 : 1;
      group.push_back(std::move(u));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return group;
}

SignedPermutation random_signed_permutation(std::size_t n, RngStream& rng) {
  SignedPermutation u;
  u.perm.resize(n);
  std::iota(u.perm.begin(), u.perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i)
    std::swap(u.perm[i - 1], u.perm[rng.uniform_index(i)]);
  u.sign.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    u.sign[i] = rng.uniform_index(2) == 0 ? 1 : -1;
  return u;
}

WitnessCertificate witness_certificate(const HomogeneousMap& f,
                                       std::vector<Vec> points,
                                       std::vector<double> coefficients,
                                       const std::optional<Vec>& expected_target) {
  if (points.empty())
    throw std::invalid_argument("witness_certificate: no points");
  if (points.size() != coefficients.size())
    throw std::invalid_argument("witness_certificate: points/coefficients mismatch");
  for (const Vec& x : points)
    if (x.dim() != f.domain.dim)
      throw std::invalid_argument("witness_certificate: point dimension mismatch");

  Vec target = Vec::zeros(f.domain.dim);
  for (std::size_t j = 0; j < points.size(); ++j)
    target = target + coefficients[j] * points[j];
  if (expected_target) {
    const double dev = p_quasinorm(target - *expected_target, PExponent(1.0));
    if (dev > 1e-9)
      throw std::invalid_argument(
          "witness_certificate: reconstruction mismatch (sum c_j x_j != target)");
    target = *expected_target;
  }

  WitnessCertificate cert{std::move(points), std::move(coefficients),
                          std::move(target), 0.0};
  cert.value = recompute_certificate_value(f, cert);
  return cert;
}

double recompute_certificate_value(const HomogeneousMap& f,
                                   const WitnessCertificate& cert) {
  Vec mismatch = f(cert.target);
  for (std::size_t j = 0; j < cert.points.size(); ++j)
    mismatch = mismatch - cert.coefficients[j] * f(cert.points[j]);
  const double num = p_quasinorm(mismatch, f.codomain.p);

  const double cp = f.codomain.p.value();
  double den;
  if (cp >= 1.0) {
    den = p_quasinorm(cert.target, f.domain.p);
    for (std::size_t j = 0; j < cert.points.size(); ++j)
      den += std::fabs(cert.coefficients[j]) * p_quasinorm(cert.points[j], f.domain.p);
  } else {
    double s = std::pow(p_quasinorm(cert.target, f.domain.p), cp);
    for (std::size_t j = 0; j < cert.points.size(); ++j)
      s += std::pow(std::fabs(cert.coefficients[j]), cp) *
           std::pow(p_quasinorm(cert.points[j], f.domain.p), cp);
    den = std::pow(s, 1.0 / cp);
  }
  return den == 0.0 ? 0.0 : num / den;
}

double symmetrize_linear(const Eigen::MatrixXd& ell) {
  if (ell.rows() != ell.cols())
    throw std::invalid_argument("symmetrize_linear: matrix must be square");
  if (ell.rows() == 0)
    throw std::invalid_argument("symmetrize_linear: empty matrix");
  return ell.trace() / static_cast<double>(ell.rows());
}

SymmetricDistBound dist_lb_symmetric(const HomogeneousMap& f,
                                     const std::vector<Vec>& witnesses,
                                     double tol, std::uint64_t seed,
                                     bool allow_heuristic) {
  if (f.domain.dim != f.codomain.dim)
    throw std::invalid_argument("dist_lb_symmetric: map must be an endomorphism");
  if (witnesses.empty())
    throw std::invalid_argument("dist_lb_symmetric: no witnesses");
  if (tol < 0.0) throw std::invalid_argument("dist_lb_symmetric: negative tol");

  SymmetricDistBound out;
  // Equivariance probe: 32 random group elements applied to random points.
  {
    RngStream rng(seed, 0x636f6d6dULL);
    double worst = 0.0;
    bool ok = f.commutes_with_signed_perms;
    for (int i = 0; i < 32; ++i) {
      const SignedPermutation u = random_signed_permutation(f.domain.dim, rng);
      const Vec x = gaussian_vec(f.domain.dim, rng);
      const Vec lhs = f(u.apply(x));
      const Vec rhs = u.apply(f(x));
      const double scale = 1.0 + p_quasinorm(f(x), f.codomain.p);
      const double err = p_quasinorm(lhs - rhs, f.codomain.p) / scale;
      worst = std::max(worst, err);
      if (err > 1e-9) ok = false;
    }
    out.worst_commutation_error = worst;
    out.certified = ok && f.domain.p.value() >= 1.0 && f.codomain.p.value() >= 1.0;
    if (!ok && !allow_heuristic)
      throw std::invalid_argument(
          "dist_lb_symmetric: map does not commute with signed permutations");
  }

  struct Term {
    Vec fx;
    Vec x;
    double nx;
  };
  std::vector<Term> terms;
  double fnorm = 0.0;
  for (const Vec& w : witnesses) {
    const double nw = p_quasinorm(w, f.domain.p);
    if (nw == 0.0)
      throw std::invalid_argument("dist_lb_symmetric: zero witness");
    Term t{f(w), w, nw};
    fnorm = std::max(fnorm, p_quasinorm(t.fx, f.codomain.p) / nw);
    terms.push_back(std::move(t));
  }

  const auto objective = [&](double a) {
    double m = 0.0;
    for (const Term& t : terms)
      m = std::max(m, p_quasinorm(t.fx - a * t.x, f.codomain.p) / t.nx);
    return m;
  };

  // The e_1-style term makes any optimal a satisfy |a| <= 2||f|| + 1; golden
  // section on the unimodal max-of-convex objective.
  double lo = -2.0 * fnorm - 1.0, hi = 2.0 * fnorm + 1.0;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = objective(c), fd = objective(d);
  for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + std::fabs(lo) + std::fabs(hi));
       ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = objective(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = objective(d);
    }
  }
  const double minimum = std::min(objective(0.5 * (lo + hi)), std::min(fc, fd));
  out.value = std::max(0.0, minimum - tol);
  return out;
}

LinearFit best_linear_heuristic(const HomogeneousMap& f,
                                const std::vector<Vec>& samples, int iters,
                                std::uint64_t seed, int restarts) {
  if (samples.empty())
    throw std::invalid_argument("best_linear_heuristic: no samples");
  const auto n = static_cast<Eigen::Index>(f.domain.dim);
  const auto m = static_cast<Eigen::Index>(f.codomain.dim);

  std::vector<Eigen::VectorXd> xs, fs;
  std::vector<double> nx;
  for (const Vec& s : samples) {
    const double nrm = p_quasinorm(s, f.domain.p);
    if (nrm == 0.0) continue;
    xs.push_back(to_eigen(s));
    fs.push_back(to_eigen(f(s)));
    nx.push_back(nrm);
  }
  if (xs.empty())
    throw std::invalid_argument("best_linear_heuristic: all samples are zero");
  const auto cnt = static_cast<Eigen::Index>(xs.size());

  const double cp = f.codomain.p.value();
  const auto pnorm = [cp](const Eigen::VectorXd& r) {
    Vec v = from_eigen(r);
    return p_quasinorm(v, PExponent(cp));
  };
  const auto objective = [&](const Eigen::MatrixXd& ell) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < cnt; ++j)
      worst = std::max(worst, pnorm(fs[j] - ell * xs[j]) / nx[j]);
    return worst;
  };

  // Least-squares initialization: solve X^T L^T ~ F^T, which recovers L
  // exactly whenever f is linear and the samples span the domain.
  Eigen::MatrixXd xt(cnt, n), ft(cnt, m);
  for (Eigen::Index j = 0; j < cnt; ++j) {
    xt.row(j) = xs[j].transpose();
    ft.row(j) = fs[j].transpose();
  }
  Eigen::MatrixXd init = xt.colPivHouseholderQr().solve(ft).transpose();

  Eigen::MatrixXd best_ell = init;
  double best_obj = objective(init);

  RngStream rng(seed, 0x666974ULL);
  for (int r = 0; r < std::max(1, restarts); ++r) {
    // A fit at rounding level cannot be improved by subgradient steps.
    if (best_obj <= 1e-12) break;
    Eigen::MatrixXd ell = init;
    if (r > 0) {
      const double scale = 0.1 * (1.0 + best_obj);
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j) ell(i, j) += scale * rng.gaussian();
    }
    double cur = objective(ell);
    double step = 0.5 * (1.0 + cur);
    for (int it = 0; it < iters && cur > 1e-12; ++it) {
      // epsilon-subgradient: average the active terms' gradients.
      Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, n);
      int active = 0;
      for (Eigen::Index j = 0; j < cnt; ++j) {
        const Eigen::VectorXd res = fs[j] - ell * xs[j];
        const double val = pnorm(res) / nx[j];
        if (val < 0.95 * cur) continue;
        const double rn = pnorm(res);
        if (rn == 0.0) continue;
        Eigen::VectorXd grad(m);
        for (Eigen::Index k = 0; k < m; ++k) {
          const double rk = res[k];
          grad[k] = rk == 0.0
                        ? 0.0
                        : (rk > 0 ? 1.0 : -1.0) *
                              std::pow(std::fabs(rk), cp - 1.0) *
                              std::pow(rn, 1.0 - cp);
        }
        g -= (grad * xs[j].transpose()) / nx[j];  // d/dL of ||f(x)-Lx||/||x||
        ++active;
      }
      if (active == 0) break;
      g /= active;
      const double gn = g.norm();
      if (gn < 1e-16) break;
      bool moved = false;
      double trial = step;
      for (int bt = 0; bt < 25; ++bt) {
        const Eigen::MatrixXd cand = ell - (trial / gn) * g;
        const double cv = objective(cand);
        if (cv < cur) {
          ell = cand;
          cur = cv;
          step = trial * 1.5;
          moved = true;
          break;
        }
        trial *= 0.5;
      }
      if (!moved) {
        step *= 0.25;
        if (step < 1e-12 * (1.0 + cur)) break;
      }
      if (cur < best_obj) {
        best_obj = cur;
        best_ell = ell;
      }
    }
    if (cur < best_obj) {
      best_obj = cur;
      best_ell = ell;
    }
  }
  return LinearFit{best_ell, best_obj};
}

HomogeneousMap subtract_linear(const HomogeneousMap& f, const Eigen::MatrixXd& ell) {
  if (ell.cols() != static_cast<Eigen::Index>(f.domain.dim) ||
      ell.rows() != static_cast<Eigen::Index>(f.codomain.dim))
    throw std::invalid_argument("subtract_linear: matrix shape mismatch");
  HomogeneousMap g;
  g.domain = f.domain;
  g.codomain = f.codomain;
  g.eval = [eval = f.eval, ell](const Vec& x) {
    return eval(x) - from_eigen(ell * to_eigen(x));
  };
  g.q_certified_upper = f.q_certified_upper;
  g.commutes_with_signed_perms = false;
  return g;
}

HomogeneousMap linear_map(const Eigen::MatrixXd& ell, PExponent domain_p,
                          PExponent codomain_p) {
  if (ell.rows() == 0 || ell.cols() == 0)
    throw std::invalid_argument("linear_map: empty matrix");
  HomogeneousMap f;
  f.domain = PNormedSpace{static_cast<std::size_t>(ell.cols()), domain_p};
  f.codomain = PNormedSpace{static_cast<std::size_t>(ell.rows()), codomain_p};
  f.eval = [ell](const Vec& x) { return from_eigen(ell * to_eigen(x)); };
  f.q_certified_upper = 0.0;
  f.commutes_with_signed_perms = false;
  return f;
}

}  // namespace qlab
