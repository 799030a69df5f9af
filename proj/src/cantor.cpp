#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "wildbloch/inner.hpp"

namespace wildbloch::cantor {

namespace {

constexpr int kGaussNodes = 10;
constexpr int kDiscretizationDepth = 17;
constexpr int kAdaptiveExtra = 4;
constexpr double kTolerance = 1e-8;

// Midpoints of the depth-K pieces; each carries mass 2^-K. The measure on a
// piece is symmetric about its midpoint, so moments are off by O(ratio^(2K)).
std::vector<double> discretize(double ratio) {
  std::vector<double> left{0.0};
  double len = 1.0;
  for (int k = 0; k < kDiscretizationDepth; ++k) {
    const double child = len * ratio;
    std::vector<double> next;
    next.reserve(left.size() * 2);
    for (double a : left) {
      next.push_back(a);
      next.push_back(a + len - child);
    }
    left.swap(next);
    len = child;
  }
  for (double& a : left) a += 0.5 * len;
  return left;
}

Rule build_rule(double ratio) {
  const std::vector<double> x01 = discretize(ratio);
  const std::size_t n = x01.size();
  const double w = 1.0 / static_cast<double>(n);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = 2.0 * x01[i] - 1.0;

  // Stieltjes procedure with orthonormal recurrences.
  std::vector<double> alpha(kGaussNodes), beta(kGaussNodes, 0.0);
  std::vector<double> p_prev(n, 0.0), p(n, 1.0);
  for (int k = 0; k < kGaussNodes; ++k) {
    double a = 0.0;
    for (std::size_t i = 0; i < n; ++i) a += w * t[i] * p[i] * p[i];
    alpha[k] = a;
    if (k + 1 == kGaussNodes) break;
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = (t[i] - a) * p[i] - beta[k] * p_prev[i];
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += w * q[i] * q[i];
    nrm = std::sqrt(nrm);
    beta[k + 1] = nrm;
    for (std::size_t i = 0; i < n; ++i) q[i] /= nrm;
    p_prev.swap(p);
    p.swap(q);
  }
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(kGaussNodes, kGaussNodes);
  for (int k = 0; k < kGaussNodes; ++k) {
    jac(k, k) = alpha[k];
    if (k + 1 < kGaussNodes) jac(k, k + 1) = jac(k + 1, k) = beta[k + 1];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  Rule r;
  double total = 0.0;
  for (int k = 0; k < kGaussNodes; ++k) {
    r.nodes.push_back(0.5 * (es.eigenvalues()(k) + 1.0));
    const double v0 = es.eigenvectors()(0, k);
    r.weights.push_back(v0 * v0);
    total += v0 * v0;
  }
  for (double& wk : r.weights) wk /= total;
  return r;
}

struct Accumulator {
  cplx z;
  double zdefect;
  double theta;
  double dy;
  double one_minus_r;
  const Rule* rule;
  double ratio;
  int cap;
  cplx herglotz{0.0};
  double poisson = 0.0;
  cplx dker{0.0};
  double bound = 0.0;
  double worst_distance = 1e300;
  int max_depth = 0;

  void apply_rule(double a, double len, double w) {
    for (std::size_t g = 0; g < rule->nodes.size(); ++g) {
      const cplx zeta = std::polar(1.0, a + len * rule->nodes[g]);
      const cplx diff = zeta - z;
      const double wg = w * rule->weights[g];
      herglotz += wg * (zeta + z) / diff;
      poisson += wg * zdefect / std::norm(diff);
      dker += wg * 2.0 * zeta / (diff * diff);
    }
  }

  void visit(double a, double len, double w, int depth) {
    max_depth = std::max(max_depth, depth);
    const double c = a + 0.5 * len;
    const double delta = std::remainder(theta - c, kTwoPi);
    const double dx = std::max(0.0, std::abs(delta) - 0.5 * len);
    const double dist = std::hypot(dx, dy);
    const double chord = std::max(one_minus_r, std::abs(std::polar(1.0, c) - z) - 0.5 * len);
    if (dist >= 4.0 * len) {
      apply_rule(a, len, w);
      // Gauss error on the Bernstein ellipse that stays dist - b away from the pole.
      const double h = 0.5 * len;
      const double ea = h + 0.5 * dist;
      const double eb = std::sqrt(ea * ea - h * h);
      const double rho = (ea + eb) / h;
      const double cs = chord * std::max(dist - eb, 0.25 * dist) / dist;
      const double kmax = 4.0 / cs + 6.0 / (cs * cs);
      bound += w * kmax * 64.0 / (15.0 * (rho * rho - 1.0)) * std::pow(rho, -2.0 * kGaussNodes);
      return;
    }
    if (depth >= cap) {
      apply_rule(a, len, w);
      const double d = chord;
      bound += w * len * (4.0 / (d * d) + 4.0 / (d * d * d));
      worst_distance = std::min(worst_distance, d);
      return;
    }
    const double child = len * ratio;
    visit(a, child, 0.5 * w, depth + 1);
    visit(a + len - child, child, 0.5 * w, depth + 1);
  }
};

}  // namespace

const Rule& gauss_rule(double ratio) {
  static std::mutex mu;
  static std::map<double, Rule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(ratio);
  if (it == cache.end()) it = cache.emplace(ratio, build_rule(ratio)).first;
  return it->second;
}

Integrals integrate(const CantorSpec& c, cplx z, double zdefect) {
  Accumulator acc;
  acc.z = z;
  acc.zdefect = zdefect;
  acc.theta = std::arg(z);
  acc.dy = -0.5 * std::log1p(-zdefect);
  acc.one_minus_r = zdefect / (1.0 + std::abs(z));
  acc.rule = &gauss_rule(c.ratio);
  acc.ratio = c.ratio;
  acc.cap = c.depth;
  acc.visit(c.center - 0.5 * c.length, c.length, 1.0, 0);
  if (acc.bound > kTolerance) {
    // adaptive refinement near the support
    Accumulator deep = acc;
    deep.herglotz = 0.0;
    deep.poisson = 0.0;
    deep.dker = 0.0;
    deep.bound = 0.0;
    deep.worst_distance = 1e300;
    deep.max_depth = 0;
    deep.cap = c.depth + kAdaptiveExtra;
    deep.visit(c.center - 0.5 * c.length, c.length, 1.0, 0);
    acc = deep;
  }
  if (acc.bound > kTolerance) {
    std::ostringstream os;
    os << "Cantor quadrature bound " << acc.bound << " exceeds " << kTolerance << " at z = " << z
       << " (distance to unresolved support " << acc.worst_distance << ")";
    throw QuadratureError(os.str(), acc.worst_distance, acc.bound);
  }
  Integrals out;
  out.herglotz = cplx(acc.poisson, acc.herglotz.imag());
  out.kernel_deriv = acc.dker;
  out.error_bound = acc.bound;
  out.max_depth = acc.max_depth;
  return out;
}

}  // namespace wildbloch::cantor
