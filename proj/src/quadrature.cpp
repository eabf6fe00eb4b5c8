#include "ups/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace ups {
namespace {

// Golub-Welsch on the symmetric Jacobi matrix with off-diagonal beta.
Rule1D golub_welsch(int order, const std::function<double(int)>& beta, double mu0) {
  MatR J = MatR::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    J(k, k - 1) = beta(k);
    J(k - 1, k) = beta(k);
  }
  Eigen::SelfAdjointEigenSolver<MatR> es(J);
  Rule1D r;
  r.nodes.resize(static_cast<std::size_t>(order));
  r.weights.resize(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    r.nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    r.weights[static_cast<std::size_t>(i)] = mu0 * v * v;
  }
  // symmetrize: the rules are even, so average mirrored pairs
  for (int i = 0; i < order / 2; ++i) {
    const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(order - 1 - i);
    const double x = 0.5 * (r.nodes[b] - r.nodes[a]);
    const double w = 0.5 * (r.weights[a] + r.weights[b]);
    r.nodes[a] = -x;
    r.nodes[b] = x;
    r.weights[a] = w;
    r.weights[b] = w;
  }
  if (order % 2 == 1) r.nodes[static_cast<std::size_t>(order / 2)] = 0.0;
  return r;
}

// Newton polish of Hermite nodes using the normalized three-term recurrence.
void polish_hermite(Rule1D& r) {
  const int n = static_cast<int>(r.nodes.size());
  for (int i = 0; i < n; ++i) {
    double x = r.nodes[static_cast<std::size_t>(i)];
    double dp = 0.0;
    for (int it = 0; it < 4; ++it) {
      // orthonormal Hermite functions h_k(x) = H_k e^{-x^2/2} / norm
      double p0 = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
      double p1 = std::sqrt(2.0) * x * p0;
      if (n == 1) {
        dp = -x * p0;
        break;
      }
      for (int k = 2; k <= n; ++k) {
        const double p2 = std::sqrt(2.0 / k) * x * p1 - std::sqrt((k - 1.0) / k) * p0;
        p0 = p1;
        p1 = p2;
      }
      // p1 = h_n, p0 = h_{n-1}; h_n' = sqrt(2n) h_{n-1} - x h_n
      dp = std::sqrt(2.0 * n) * p0 - x * p1;
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    r.nodes[static_cast<std::size_t>(i)] = x;
    // w_i = 1 / (n psi_{n-1}(x_i)^2) for the orthonormal polynomials psi,
    // and h_{n-1} = psi_{n-1} e^{-x^2/2}.
    double q0 = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    double q1 = std::sqrt(2.0) * x * q0;
    double hm1 = q0;
    if (n >= 2) {
      for (int k = 2; k <= n - 1; ++k) {
        const double q2 = std::sqrt(2.0 / k) * x * q1 - std::sqrt((k - 1.0) / k) * q0;
        q0 = q1;
        q1 = q2;
      }
      hm1 = q1;
    }
    r.weights[static_cast<std::size_t>(i)] = std::exp(-x * x) / (n * hm1 * hm1);
  }
}

template <class Build>
const Rule1D& cached_rule(std::map<int, Rule1D>& cache, std::mutex& mu, int order, Build&& build) {
  if (order < 1) throw std::invalid_argument("quadrature order must be positive");
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build(order)).first;
  return it->second;
}

template <class T>
T pairwise_range(const T* v, std::size_t n) {
  if (n == 0) return T(0);
  if (n <= 8) {
    T s = v[0];
    for (std::size_t i = 1; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_range(v, h) + pairwise_range(v + h, n - h);
}

constexpr std::size_t kChunk = 4096;

// Sums f over tensor indices [0, total) with a deterministic reduction tree.
// Optionally also sums |term| into *l1.
Complex tensor_sum(std::size_t total, const std::function<Complex(std::size_t)>& term, double* l1 = nullptr) {
  const std::size_t chunks = (total + kChunk - 1) / kChunk;
  std::vector<Complex> partial(chunks);
  std::vector<double> partial_abs(chunks);
  auto work = [&](std::size_t c0, std::size_t c1) {
    std::vector<Complex> buf;
    std::vector<double> abuf;
    for (std::size_t c = c0; c < c1; ++c) {
      const std::size_t lo = c * kChunk, hi = std::min(total, lo + kChunk);
      buf.resize(hi - lo);
      abuf.resize(hi - lo);
      for (std::size_t i = lo; i < hi; ++i) {
        buf[i - lo] = term(i);
        abuf[i - lo] = std::abs(buf[i - lo]);
      }
      partial[c] = pairwise_range(buf.data(), buf.size());
      partial_abs[c] = pairwise_range(abuf.data(), abuf.size());
    }
  };
  const unsigned threads = std::min<std::size_t>(quadrature_threads(), std::max<std::size_t>(1, chunks));
  if (threads <= 1) {
    work(0, chunks);
  } else {
    std::vector<std::thread> pool;
    const std::size_t per = (chunks + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t c0 = t * per, c1 = std::min(chunks, c0 + per);
      if (c0 < c1) pool.emplace_back(work, c0, c1);
    }
    for (auto& th : pool) th.join();
  }
  if (l1) *l1 = pairwise_range(partial_abs.data(), partial_abs.size());
  return pairwise_range(partial.data(), partial.size());
}

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > std::numeric_limits<std::size_t>::max() / b) return std::numeric_limits<std::size_t>::max();
    r *= b;
  }
  return r;
}

}  // namespace

const Rule1D& gauss_hermite_rule(int order) {
  static std::map<int, Rule1D> cache;
  static std::mutex mu;
  return cached_rule(cache, mu, order, [](int n) {
    Rule1D r = golub_welsch(n, [](int k) { return std::sqrt(k / 2.0); }, std::sqrt(std::numbers::pi));
    polish_hermite(r);
    return r;
  });
}

const Rule1D& gauss_legendre_rule(int order) {
  static std::map<int, Rule1D> cache;
  static std::mutex mu;
  return cached_rule(cache, mu, order, [](int n) {
    return golub_welsch(n, [](int k) { return k / std::sqrt(4.0 * k * k - 1.0); }, 2.0);
  });
}

Complex pairwise_sum(const std::vector<Complex>& v) { return pairwise_range(v.data(), v.size()); }
double pairwise_sum(const std::vector<double>& v) { return pairwise_range(v.data(), v.size()); }

unsigned quadrature_threads() {
  if (const char* env = std::getenv("UPS_THREADS")) {
    const long t = std::strtol(env, nullptr, 10);
    if (t >= 1) return static_cast<unsigned>(t);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : std::min(hw, 16u);
}

namespace {

struct Whitening {
  MatR M;  // xi = c + M t turns pi (xi - c)^T Q (xi - c) into t^T t
  double jac = 1.0;
};

Whitening whiten(const MatR& Q) {
  const int d = static_cast<int>(Q.rows());
  Eigen::LLT<MatR> llt(Q);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("gauss_hermite_integrate: envelope not positive definite");
  const MatR L = llt.matrixL();
  Whitening w;
  w.M = L.transpose().triangularView<Eigen::Upper>().solve(MatR::Identity(d, d)) / std::sqrt(std::numbers::pi);
  double log_jac = -0.5 * d * std::log(std::numbers::pi);
  for (int i = 0; i < d; ++i) log_jac -= std::log(L(i, i));
  w.jac = std::exp(log_jac);
  return w;
}

// Tensor rule with its own order per axis.
QuadResult gh_tensor(const VecFunction& f, const VecR& center, const MatR& M, double jac, const std::vector<int>& orders) {
  const int d = static_cast<int>(orders.size());
  std::vector<const Rule1D*> rules(d);
  std::vector<std::vector<double>> scaled(d);
  std::size_t total = 1;
  for (int k = 0; k < d; ++k) {
    rules[k] = &gauss_hermite_rule(orders[k]);
    const auto m = static_cast<std::size_t>(orders[k]);
    total *= m;
    scaled[k].resize(m);
    for (std::size_t j = 0; j < m; ++j) {
      scaled[k][j] = rules[k]->weights[j] * std::exp(rules[k]->nodes[j] * rules[k]->nodes[j]);
    }
  }
  auto term = [&](std::size_t idx) {
    VecR t(d);
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      const std::size_t m = scaled[k].size();
      const std::size_t j = idx % m;
      idx /= m;
      t(k) = rules[k]->nodes[j];
      w *= scaled[k][j];
    }
    return w * f(VecR(center + M * t));
  };
  QuadResult out;
  double l1 = 0.0;
  out.value = jac * tensor_sum(total, term, &l1);
  out.error = jac * l1;  // the caller replaces this with a convergence estimate
  out.evaluations = total;
  return out;
}

// Orthonormal basis whose first column is u / |u|.
MatR aligned_basis(const VecR& u) {
  const int d = static_cast<int>(u.size());
  MatR B = MatR::Identity(d, d);
  B.col(0) = u.normalized();
  Eigen::HouseholderQR<MatR> qr(B);
  MatR O = qr.householderQ() * MatR::Identity(d, d);
  if (O.col(0).dot(u) < 0) O.col(0) = -O.col(0);
  return O;
}

}  // namespace

QuadResult gauss_hermite_integrate(const VecFunction& f, const MatR& Q, const VecR& center, int order) {
  const int d = static_cast<int>(Q.rows());
  if (center.size() != d) throw std::invalid_argument("gauss_hermite_integrate: center dimension mismatch");
  const Whitening w = whiten(Q);
  QuadResult out = gh_tensor(f, center, w.M, w.jac, std::vector<int>(d, order));
  out.error = 0.0;
  return out;
}

QuadResult gauss_hermite_adaptive(const VecFunction& f, const MatR& Q, const VecR& center, double rel_tol,
                                  std::size_t max_nodes, const VecR& frequency) {
  const int d = static_cast<int>(Q.rows());
  if (center.size() != d) throw std::invalid_argument("gauss_hermite_adaptive: center dimension mismatch");
  const Whitening w = whiten(Q);
  MatR M = w.M;
  // A linear phase exp(2 pi i k.xi) is a function of k^T M t only; rotate
  // that direction onto the first axis and refine it faster than the rest.
  bool aligned = false;
  if (frequency.size() == d && d > 1) {
    const VecR u = w.M.transpose() * frequency;
    if (u.norm() > 1e-12) {
      M = w.M * aligned_basis(u);
      aligned = true;
    }
  }
  static const int ladder[] = {6, 8, 10, 12, 14, 16, 20, 24, 32, 40, 48, 64, 96, 128};
  static const int lead[] = {16, 24, 32, 48, 64, 96, 128, 128, 128, 128, 128, 128, 128, 128};
  std::vector<std::vector<int>> levels;
  for (std::size_t i = 0; i < std::size(ladder); ++i) {
    std::vector<int> o(d, ladder[i]);
    if (aligned) o[0] = std::max(lead[i], ladder[i]);
    std::size_t nodes = 1;
    for (int x : o) nodes *= static_cast<std::size_t>(x);
    if (nodes <= max_nodes) levels.push_back(std::move(o));
  }
  if (levels.size() < 2) throw std::invalid_argument("gauss_hermite_adaptive: node budget too small for dimension");
  // tolerance relative to int |f|, as oscillatory integrals may cancel far
  // below the size of their integrand
  QuadResult prev = gh_tensor(f, center, M, w.jac, levels[0]);
  std::size_t evals = prev.evaluations;
  for (std::size_t i = 1; i < levels.size(); ++i) {
    QuadResult cur = gh_tensor(f, center, M, w.jac, levels[i]);
    evals += cur.evaluations;
    const double l1 = cur.error;
    const double diff = std::abs(cur.value - prev.value);
    cur.error = diff;
    cur.evaluations = evals;
    if (diff <= rel_tol * std::max(std::abs(cur.value), l1) || diff <= 1e-300) {
      cur.converged = true;
      return cur;
    }
    prev = cur;
  }
  prev.converged = false;
  prev.evaluations = evals;
  return prev;
}

QuadResult gauss_legendre_box(const VecFunction& f, const VecR& lo, const VecR& hi, int order) {
  const int d = static_cast<int>(lo.size());
  const Rule1D& rule = gauss_legendre_rule(order);
  const auto m = static_cast<std::size_t>(order);
  const VecR mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  const double vol = half.prod();
  auto term = [&](std::size_t idx) {
    VecR x(d);
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      const std::size_t j = idx % m;
      idx /= m;
      x(k) = mid(k) + half(k) * rule.nodes[j];
      w *= rule.weights[j];
    }
    return w * f(x);
  };
  QuadResult out;
  out.evaluations = ipow(m, d);
  out.value = vol * tensor_sum(out.evaluations, term);
  return out;
}

namespace {

struct Panel {
  double a, b;
  Complex value;
  double error;
  unsigned depth;
};

// G7-K15 on a finite panel of g.
Panel gk15(const ScalarFunction& g, double a, double b, unsigned depth) {
  using rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  static const auto& xk = rule::abscissa();
  static const auto& wk = rule::weights();
  static const auto& wg = boost::math::quadrature::gauss<double, 7>::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const Complex f0 = g(c);
  Complex kr = wk[0] * f0, ga = wg[0] * f0;
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const Complex fs = g(c - h * xk[i]) + g(c + h * xk[i]);
    kr += wk[i] * fs;
    if (i % 2 == 0) ga += wg[i / 2] * fs;
  }
  return {a, b, h * kr, std::abs(h * (kr - ga)), depth};
}

}  // namespace

QuadResult integrate_1d(const ScalarFunction& f, double a, double b, double rel_tol, double abs_tol,
                        unsigned max_depth) {
  QuadResult out;
  if (a == b) return out;
  if (a > b) {
    out = integrate_1d(f, b, a, rel_tol, abs_tol, max_depth);
    out.value = -out.value;
    return out;
  }
  if (std::isinf(a) && std::isinf(b)) {
    const QuadResult l = integrate_1d(f, a, 0.0, rel_tol, 0.5 * abs_tol, max_depth);
    const QuadResult r = integrate_1d(f, 0.0, b, rel_tol, 0.5 * abs_tol, max_depth);
    out.value = l.value + r.value;
    out.error = l.error + r.error;
    out.evaluations = l.evaluations + r.evaluations;
    out.converged = l.converged && r.converged;
    return out;
  }
  std::size_t evals = 0;
  // half-lines map to [0, 1) by x = a + t / (1 - t)
  ScalarFunction g;
  double lo = a, hi = b;
  if (std::isinf(b)) {
    g = [&](double t) -> Complex {
      ++evals;
      if (t >= 1.0) return 0.0;
      const double u = 1.0 - t;
      return f(a + t / u) / (u * u);
    };
    lo = 0.0;
    hi = 1.0;
  } else if (std::isinf(a)) {
    g = [&](double t) -> Complex {
      ++evals;
      if (t >= 1.0) return 0.0;
      const double u = 1.0 - t;
      return f(b - t / u) / (u * u);
    };
    lo = 0.0;
    hi = 1.0;
  } else {
    g = [&](double x) -> Complex {
      ++evals;
      return f(x);
    };
  }
  auto worse = [](const Panel& x, const Panel& y) { return x.error < y.error; };
  std::vector<Panel> heap{gk15(g, lo, hi, 0)};
  Complex total = heap[0].value;
  double err = heap[0].error;
  const std::size_t max_panels = 4096;
  bool stuck = false;
  while (err > std::max(rel_tol * std::abs(total), abs_tol) && heap.size() < max_panels) {
    std::pop_heap(heap.begin(), heap.end(), worse);
    const Panel w = heap.back();
    if (w.depth >= max_depth + 12) {
      stuck = true;
      std::push_heap(heap.begin(), heap.end(), worse);
      break;
    }
    heap.pop_back();
    const double mid = 0.5 * (w.a + w.b);
    const Panel l = gk15(g, w.a, mid, w.depth + 1), r = gk15(g, mid, w.b, w.depth + 1);
    total += l.value + r.value - w.value;
    err += l.error + r.error - w.error;
    heap.push_back(l);
    std::push_heap(heap.begin(), heap.end(), worse);
    heap.push_back(r);
    std::push_heap(heap.begin(), heap.end(), worse);
  }
  // recompute sums to shed the drift of the running updates
  std::vector<Complex> vs;
  double e = 0.0;
  for (const Panel& p : heap) {
    vs.push_back(p.value);
    e += p.error;
  }
  out.value = pairwise_sum(vs);
  out.error = e;
  out.evaluations = evals;
  out.converged = !stuck && e <= std::max(rel_tol * std::abs(out.value), abs_tol) * (1 + 1e-12);
  return out;
}

QuadResult integrate_1d_pieces(const ScalarFunction& f, const std::vector<double>& breaks, double rel_tol,
                               double abs_tol, unsigned max_depth) {
  QuadResult total;
  std::vector<Complex> parts;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i] < breaks[i + 1])) continue;
    const QuadResult r = integrate_1d(f, breaks[i], breaks[i + 1], rel_tol, abs_tol, max_depth);
    parts.push_back(r.value);
    total.error += r.error;
    total.evaluations += r.evaluations;
    total.converged = total.converged && r.converged;
  }
  total.value = pairwise_sum(parts);
  return total;
}

}  // namespace ups
