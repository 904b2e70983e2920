#include "euler/integrate.hpp"
#include "euler/convergence.hpp"
#include "euler/random.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/Dense>

#include <omp.h>

#include <cmath>
#include <map>

namespace euler {

using nlohmann::json;

namespace {

Polytope sector_polytope(const IntegralSpec& spec) {
  spec.validate();
  for (const auto& z : spec.s)
    if (z.re <= 0) throw PreconditionError("sector decomposition needs Re(s) > 0");
  Polytope P = parametric_polytope(spec);
  if (!P.full_dimensional()) throw PreconditionError("P(s) is not full-dimensional");
  return P;
}

// Vertex of Delta(f) minimizing r·alpha; unique for r interior to a fan cone.
Exponent minimizing_exponent(const LaurentPolynomial& f, const IntVec& r) {
  Exponent best;
  long bv = 0;
  bool tie = false;
  for (const auto& e : f.support()) {
    long v = 0;
    for (size_t j = 0; j < e.size(); ++j) v += r[j] * e[j];
    if (best.empty() || v < bv) {
      best = e;
      bv = v;
      tie = false;
    } else if (v == bv) {
      tie = true;
    }
  }
  if (tie) throw NumericError("sector direction is not generic for a Newton polytope");
  return best;
}

RatVec sector_vertex(const IntegralSpec& spec, const std::vector<Exponent>& summands) {
  RatVec v(spec.n(), 0);
  for (size_t i = 0; i < spec.ell(); ++i)
    for (size_t j = 0; j < spec.n(); ++j) v[j] += spec.s[i].re * summands[i][j];
  return v;
}

RatVec sector_rates(const IntegralSpec& spec, const std::vector<IntVec>& rays, const RatVec& v) {
  RatVec nu = spec.re_nu(), out;
  for (const auto& r : rays) {
    Rational l = 0;
    for (size_t j = 0; j < r.size(); ++j) l += r[j] * (nu[j] - v[j]);
    out.push_back(l);
  }
  return out;
}

}  // namespace

std::vector<Sector> sector_decompose(const IntegralSpec& spec) {
  Polytope P = sector_polytope(spec);
  const size_t n = spec.n();
  NormalFan fan = normal_fan(P);
  RatVec centroid(n, 0);
  for (const auto& v : P.vertices())
    for (size_t j = 0; j < n; ++j) centroid[j] += v[j];
  for (auto& c : centroid) c /= static_cast<long>(P.vertices().size());

  std::vector<Sector> out;
  for (size_t vi = 0; vi < P.vertices().size(); ++vi) {
    const RatVec& v = P.vertices()[vi];
    std::vector<IntVec> rays;
    for (size_t k : fan.cones[vi]) rays.push_back(fan.rays[k]);
    std::vector<std::vector<IntVec>> pieces;
    if (rays.size() == n) {
      pieces.push_back(rays);
    } else {
      // Triangulate the cross-section {r : r·(centroid - v) = 1} of the cone.
      std::map<RatVec, size_t> index;
      std::vector<RatVec> pts;
      for (size_t k = 0; k < rays.size(); ++k) {
        RatVec d(n);
        for (size_t j = 0; j < n; ++j) d[j] = centroid[j] - v[j];
        Rational l = dot(rays[k], d);
        RatVec q = to_rational(rays[k]);
        for (auto& x : q) x /= l;
        index[q] = k;
        pts.push_back(q);
      }
      for (const auto& simplex : pulling_triangulation(convex_hull(pts))) {
        std::vector<IntVec> piece;
        for (const auto& q : simplex) piece.push_back(rays[index.at(q)]);
        pieces.push_back(piece);
      }
    }
    for (auto& piece : pieces) {
      Sector s;
      s.vertex = vi;
      s.v = v;
      s.rays = piece;
      std::vector<RatVec> M;
      IntVec dir(n, 0);
      for (const auto& r : piece) {
        M.push_back(to_rational(r));
        for (size_t j = 0; j < n; ++j) dir[j] += r[j];
      }
      s.abs_det = abs(determinant(M));
      for (const auto& f : spec.polys) s.summands.push_back(minimizing_exponent(f, dir));
      if (sector_vertex(spec, s.summands) != v) throw NumericError("sector summands do not add up to the vertex");
      s.rates = sector_rates(spec, piece, v);
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<Rational> envelope_volumes(const IntegralSpec& spec) {
  auto sectors = sector_decompose(spec);
  std::vector<Rational> vol;
  for (const auto& s : sectors) {
    if (vol.size() <= s.vertex) vol.resize(s.vertex + 1, 0);
    Rational term = s.abs_det;
    for (const auto& l : s.rates) {
      if (l <= 0) throw PreconditionError("nu is not interior to P(s)");
      term /= l;
    }
    vol[s.vertex] += term;
  }
  return vol;
}

// ---------------------------------------------------------------- kernels

namespace {

struct Model {
  size_t n = 0, ell = 0;
  std::vector<std::vector<double>> logc;                  // per poly, per term
  std::vector<std::vector<std::vector<double>>> alpha;    // per poly, per term
  struct Term {
    cplx coeff;
    std::vector<double> s_re, s_im, nu_re, nu_im;
  };
  std::vector<Term> terms;
};

struct SectorKernel {
  std::vector<double> A;  // row-major n × n, column k = ray k
  std::vector<double> lambda;
  double log_det = 0;
  double log_lambda = 0;
};

Model build_model(const std::vector<std::pair<cplx, IntegralSpec>>& terms) {
  const auto& spec = terms.front().second;
  Model m;
  m.n = spec.n();
  m.ell = spec.ell();
  for (const auto& f : spec.polys) {
    std::vector<double> lc;
    std::vector<std::vector<double>> al;
    for (const auto& [e, c] : f.terms()) {
      if (c <= 0) throw PreconditionError("integration needs positive coefficients");
      lc.push_back(std::log(to_double(c)));
      al.emplace_back(e.begin(), e.end());
    }
    m.logc.push_back(lc);
    m.alpha.push_back(al);
  }
  for (const auto& [c, sp] : terms) {
    Model::Term t;
    t.coeff = c;
    for (const auto& z : sp.s) {
      t.s_re.push_back(to_double(z.re));
      t.s_im.push_back(to_double(z.im));
    }
    for (const auto& z : sp.nu) {
      t.nu_re.push_back(to_double(z.re));
      t.nu_im.push_back(to_double(z.im));
    }
    m.terms.push_back(t);
  }
  return m;
}

SectorKernel build_kernel(const Sector& s, const RatVec& rates) {
  const size_t n = s.rays.size();
  SectorKernel k;
  k.A.assign(n * n, 0);
  for (size_t c = 0; c < n; ++c)
    for (size_t r = 0; r < n; ++r) k.A[r * n + c] = static_cast<double>(s.rays[c][r]);
  k.log_det = std::log(to_double(s.abs_det));
  for (const auto& l : rates) {
    double d = to_double(l);
    if (!(d > 0)) throw NumericError("nonpositive importance rate in a convergent sector");
    k.lambda.push_back(d);
    k.log_lambda += std::log(d);
  }
  return k;
}

// |det A| g(-A z) / q(z) summed over the model terms, where
// q(z) = prod_k lambda_k exp(-lambda_k z_k).
cplx weight(const Model& m, const SectorKernel& k, const double* z, double* y, double* logf) {
  const size_t n = m.n;
  double logq = k.log_lambda;
  for (size_t c = 0; c < n; ++c) logq -= k.lambda[c] * z[c];
  for (size_t r = 0; r < n; ++r) {
    double acc = 0;
    for (size_t c = 0; c < n; ++c) acc += k.A[r * n + c] * z[c];
    y[r] = -acc;
  }
  for (size_t i = 0; i < m.ell; ++i) {
    const auto& lc = m.logc[i];
    const auto& al = m.alpha[i];
    double mx = -INFINITY;
    double buf[64];
    std::vector<double> big;
    double* e = lc.size() <= 64 ? buf : (big.resize(lc.size()), big.data());
    for (size_t t = 0; t < lc.size(); ++t) {
      double v = lc[t];
      for (size_t j = 0; j < n; ++j) v += al[t][j] * y[j];
      e[t] = v;
      mx = std::max(mx, v);
    }
    double sum = 0;
    for (size_t t = 0; t < lc.size(); ++t) sum += std::exp(e[t] - mx);
    logf[i] = mx + std::log(sum);
  }
  cplx w = 0;
  for (const auto& t : m.terms) {
    double re = k.log_det - logq, im = 0;
    for (size_t j = 0; j < n; ++j) {
      re += t.nu_re[j] * y[j];
      im += t.nu_im[j] * y[j];
    }
    for (size_t i = 0; i < m.ell; ++i) {
      re -= t.s_re[i] * logf[i];
      im -= t.s_im[i] * logf[i];
    }
    double mag = std::exp(re);
    w += t.coeff * cplx(mag * std::cos(im), mag * std::sin(im));
  }
  return w;
}

struct BatchSums {
  double re = 0, im = 0, re2 = 0, im2 = 0;
};

BatchSums run_batch(const Model& m, const SectorKernel& k, uint64_t seed, long count) {
  std::mt19937_64 rng(seed);
  std::vector<double> z(m.n), y(m.n), logf(m.ell);
  BatchSums b;
  for (long s = 0; s < count; ++s) {
    for (size_t c = 0; c < m.n; ++c) z[c] = -std::log(uniform_open0(rng)) / k.lambda[c];
    cplx w = weight(m, k, z.data(), y.data(), logf.data());
    b.re += w.real();
    b.im += w.imag();
    b.re2 += w.real() * w.real();
    b.im2 += w.imag() * w.imag();
  }
  return b;
}

void check_same_polys(const std::vector<std::pair<cplx, IntegralSpec>>& terms) {
  if (terms.empty()) throw PreconditionError("empty combination");
  for (const auto& [c, sp] : terms) {
    if (sp.n() != terms[0].second.n() || !(sp.polys == terms[0].second.polys))
      throw PreconditionError("combination terms must share their polynomials");
    auto rep = check_convergence(sp);
    if (!rep.converges) throw PreconditionError("integral does not converge: nu is not interior to P(s)");
  }
}

// Sectors of the first spec with per-ray rates minimized over all terms.
std::vector<std::pair<Sector, RatVec>> combined_sectors(const std::vector<std::pair<cplx, IntegralSpec>>& terms) {
  std::vector<std::pair<Sector, RatVec>> out;
  for (const auto& s : sector_decompose(terms[0].second)) {
    RatVec rates = s.rates;
    for (size_t m = 1; m < terms.size(); ++m) {
      const auto& sp = terms[m].second;
      auto r = sector_rates(sp, s.rays, sector_vertex(sp, s.summands));
      for (size_t k = 0; k < rates.size(); ++k) rates[k] = std::min(rates[k], r[k]);
    }
    out.push_back({s, rates});
  }
  return out;
}

// Pointwise weight bounds for a single real spec.
void sector_bounds(const IntegralSpec& spec, const Sector& s, SectorResult& r) {
  if (!spec.real_parameters()) return;
  double base = to_double(s.abs_det);
  for (const auto& l : s.rates) base /= to_double(l);
  double lo = base, hi = base;
  for (size_t i = 0; i < spec.ell(); ++i) {
    double si = to_double(spec.s[i].re);
    Rational M = 0;
    for (const auto& [e, c] : spec.polys[i].terms()) M += c;
    lo *= std::pow(to_double(M), -si);
    hi *= std::pow(to_double(spec.polys[i].coefficient(s.summands[i])), -si);
  }
  r.has_bounds = true;
  r.lower = lo;
  r.upper = hi;
}

QuadratureResult run_mc(const std::vector<std::pair<cplx, IntegralSpec>>& terms, const McOptions& opt) {
  if (opt.samples < 1) throw PreconditionError("samples must be positive");
  check_same_polys(terms);
  Model model = build_model(terms);
  auto sectors = combined_sectors(terms);
  const size_t S = sectors.size();
  std::vector<SectorKernel> kernels;
  std::vector<double> envelope;
  double total_env = 0;
  for (const auto& [s, rates] : sectors) {
    kernels.push_back(build_kernel(s, rates));
    double u = std::exp(kernels.back().log_det - kernels.back().log_lambda);
    for (size_t i = 0; i < terms[0].second.ell(); ++i)
      u *= std::pow(to_double(terms[0].second.polys[i].coefficient(s.summands[i])),
                    -to_double(terms[0].second.s[i].re));
    envelope.push_back(u);
    total_env += u;
  }
  // Samples proportional to the envelope mass, at least one small batch each.
  std::vector<long> count(S);
  struct Item {
    size_t sector;
    long batch, size;
  };
  std::vector<Item> items;
  for (size_t k = 0; k < S; ++k) {
    count[k] = std::max<long>(kBatchSize / 16,
                              std::llround(static_cast<double>(opt.samples) * envelope[k] / total_env));
    for (long b = 0, done = 0; done < count[k]; ++b, done += kBatchSize)
      items.push_back({k, b, std::min(kBatchSize, count[k] - done)});
  }
  std::vector<BatchSums> sums(items.size());
  const long nitems = static_cast<long>(items.size());
  auto work = [&](long i) {
    const auto& it = items[static_cast<size_t>(i)];
    sums[static_cast<size_t>(i)] = run_batch(model, kernels[it.sector],
                                             stream_seed(opt.seed, it.sector, static_cast<uint64_t>(it.batch)), it.size);
  };
  if (opt.parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < nitems; ++i) work(i);
  } else {
    for (long i = 0; i < nitems; ++i) work(i);
  }

  QuadratureResult out;
  out.seed = opt.seed;
  out.backend = "monte-carlo";
  std::vector<BatchSums> per(S);
  for (size_t i = 0; i < items.size(); ++i) {
    auto& p = per[items[i].sector];
    p.re += sums[i].re;
    p.im += sums[i].im;
    p.re2 += sums[i].re2;
    p.im2 += sums[i].im2;
  }
  double var_re = 0, var_im = 0;
  for (size_t k = 0; k < S; ++k) {
    const double N = static_cast<double>(count[k]);
    SectorResult r;
    r.sector = k;
    r.vertex = sectors[k].first.vertex;
    r.samples = count[k];
    double mre = per[k].re / N, mim = per[k].im / N;
    r.estimate = cplx(mre, mim);
    double sre = std::max(0.0, per[k].re2 / N - mre * mre) * N / std::max(1.0, N - 1);
    double sim = std::max(0.0, per[k].im2 / N - mim * mim) * N / std::max(1.0, N - 1);
    r.std_error = std::sqrt(sre / N);
    r.std_error_im = std::sqrt(sim / N);
    if (terms.size() == 1) sector_bounds(terms[0].second, sectors[k].first, r);
    out.estimate += r.estimate;
    var_re += r.std_error * r.std_error;
    var_im += r.std_error_im * r.std_error_im;
    out.samples += count[k];
    out.sectors.push_back(r);
  }
  out.std_error = std::sqrt(var_re);
  out.std_error_im = std::sqrt(var_im);
  return out;
}

}  // namespace

QuadratureResult evaluate(const IntegralSpec& spec, const McOptions& opt) {
  return run_mc({{cplx(1), spec}}, opt);
}

QuadratureResult evaluate_combination(const std::vector<std::pair<cplx, IntegralSpec>>& terms,
                                      const McOptions& opt) {
  return run_mc(terms, opt);
}

void gauss_laguerre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("Gauss-Laguerre needs at least one node");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    J(i, i) = 2 * i + 1;
    if (i + 1 < n) J(i, i + 1) = J(i + 1, i) = i + 1;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes.assign(n, 0);
  weights.assign(n, 0);
  // Polish each node by Newton on L_n, then w = x / ((n+1) L_{n+1}(x))^2.
  auto laguerre = [n](double x, double& ln, double& ln1, double& dln) {
    double p0 = 1, p1 = 1 - x;
    for (int k = 1; k < n; ++k) {
      double p2 = ((2 * k + 1 - x) * p1 - k * p0) / (k + 1);
      p0 = p1;
      p1 = p2;
    }
    ln = p1;  // L_n
    ln1 = ((2 * n + 1 - x) * p1 - n * p0) / (n + 1);
    dln = n * (p1 - p0) / x;
  };
  for (int i = 0; i < n; ++i) {
    double x = es.eigenvalues()[i], ln, ln1, dln;
    for (int it = 0; it < 6; ++it) {
      laguerre(x, ln, ln1, dln);
      x -= ln / dln;
    }
    laguerre(x, ln, ln1, dln);
    nodes[static_cast<size_t>(i)] = x;
    weights[static_cast<size_t>(i)] = x / ((n + 1.0) * (n + 1.0) * ln1 * ln1);
  }
}

QuadratureResult evaluate_gauss_laguerre(const IntegralSpec& spec, int nodes) {
  if (spec.n() > 2) throw PreconditionError("the Gauss-Laguerre backend supports n <= 2");
  std::vector<std::pair<cplx, IntegralSpec>> terms = {{cplx(1), spec}};
  check_same_polys(terms);
  Model model = build_model(terms);
  std::vector<double> x, w;
  gauss_laguerre(nodes, x, w);
  QuadratureResult out;
  out.backend = "gauss-laguerre";
  const size_t n = spec.n();
  size_t idx = 0;
  for (const auto& s : sector_decompose(spec)) {
    SectorKernel k = build_kernel(s, s.rates);
    std::vector<double> z(n), y(n), logf(spec.ell());
    cplx sum = 0;
    long total = 1;
    for (size_t j = 0; j < n; ++j) total *= nodes;
    for (long g = 0; g < total; ++g) {
      long rest = g;
      double wt = 1;
      for (size_t j = 0; j < n; ++j) {
        size_t a = static_cast<size_t>(rest % nodes);
        rest /= nodes;
        z[j] = x[a] / k.lambda[j];
        wt *= w[a];
      }
      sum += wt * weight(model, k, z.data(), y.data(), logf.data());
    }
    SectorResult r;
    r.sector = idx++;
    r.vertex = s.vertex;
    r.estimate = sum;
    r.samples = total;
    sector_bounds(spec, s, r);
    out.estimate += sum;
    out.samples += total;
    out.sectors.push_back(r);
  }
  return out;
}

QuadratureResult evaluate_powered(const IntegralSpec& spec, const Rational& delta, const McOptions& opt) {
  if (delta <= 0) throw PreconditionError("delta must be positive");
  return evaluate(rescaled(spec, 1 / delta), opt);
}

QuadratureResult evaluate_Idelta(const IntegralSpec& spec, const Rational& delta, const McOptions& opt) {
  QuadratureResult r = evaluate_powered(spec, delta, opt);
  double scale = std::pow(to_double(delta), -static_cast<double>(spec.n()));
  r.estimate *= scale;
  r.std_error *= scale;
  r.std_error_im *= scale;
  for (auto& s : r.sectors) {
    s.estimate *= scale;
    s.std_error *= scale;
    s.std_error_im *= scale;
    s.lower *= scale;
    s.upper *= scale;
  }
  return r;
}

json to_json(const Sector& s) {
  json rays = json::array();
  for (const auto& r : s.rays) rays.push_back(r);
  return {{"vertex", rational_vector_json(s.v)},
          {"vertex_index", s.vertex},
          {"rays", rays},
          {"abs_det", rational_json(s.abs_det)},
          {"rates", rational_vector_json(s.rates)},
          {"summands", s.summands}};
}

json to_json(const QuadratureResult& r) {
  json sec = json::array();
  for (const auto& s : r.sectors) {
    json j = {{"sector", s.sector},
              {"vertex_index", s.vertex},
              {"estimate", s.estimate.real()},
              {"estimate_im", s.estimate.imag()},
              {"std_error", s.std_error},
              {"std_error_im", s.std_error_im},
              {"samples", s.samples}};
    if (s.has_bounds) {
      j["lower_bound"] = s.lower;
      j["upper_bound"] = s.upper;
    }
    sec.push_back(j);
  }
  return {{"estimate", r.estimate.real()},
          {"estimate_im", r.estimate.imag()},
          {"std_error", r.std_error},
          {"std_error_im", r.std_error_im},
          {"samples", r.samples},
          {"seed", r.seed},
          {"backend", r.backend},
          {"sectors", sec}};
}

}  // namespace euler
