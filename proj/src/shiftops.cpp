#include "euler/shiftops.hpp"

#include "euler/convergence.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace euler {

using json = nlohmann::json;

ShiftOperator ShiftOperator::constant(size_t ell, size_t n, const RationalFunction& c) {
  ShiftOperator op(ell, n);
  op.add_term(IntVec(ell + n, 0), c);
  return op;
}

ShiftOperator ShiftOperator::constant(size_t ell, size_t n, const Rational& c) {
  return constant(ell, n, RationalFunction::constant(ell + n, c));
}

ShiftOperator ShiftOperator::monomial(size_t ell, size_t n, const IntVec& shift, const Rational& c) {
  ShiftOperator op(ell, n);
  op.add_term(shift, RationalFunction::constant(ell + n, c));
  return op;
}

void ShiftOperator::add_term(const IntVec& shift, const RationalFunction& c) {
  if (shift.size() != nparams() || c.nvars() != nparams()) throw std::invalid_argument("ShiftOperator: shape mismatch");
  if (c.is_zero()) return;
  auto it = terms_.find(shift);
  if (it == terms_.end()) {
    terms_.emplace(shift, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) terms_.erase(it);
}

ShiftOperator ShiftOperator::operator-() const {
  ShiftOperator r(ell_, n_);
  for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
  return r;
}

ShiftOperator operator+(const ShiftOperator& a, const ShiftOperator& b) {
  ShiftOperator r = a;
  for (const auto& [k, c] : b.terms_) r.add_term(k, c);
  return r;
}

ShiftOperator operator-(const ShiftOperator& a, const ShiftOperator& b) { return a + (-b); }

ShiftOperator operator*(const ShiftOperator& a, const ShiftOperator& b) {
  if (a.ell_ != b.ell_ || a.n_ != b.n_) throw std::invalid_argument("ShiftOperator: shape mismatch");
  ShiftOperator r(a.ell_, a.n_);
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      // sigma^ka cb(p) = cb(p + ka) sigma^ka.
      RationalFunction moved = cb;
      for (size_t j = 0; j < ka.size(); ++j)
        if (ka[j] != 0) moved = moved.shifted(j, Rational(ka[j]));
      IntVec k(ka.size());
      for (size_t j = 0; j < k.size(); ++j) k[j] = ka[j] + kb[j];
      r.add_term(k, ca * moved);
    }
  }
  return r;
}

bool operator==(const ShiftOperator& a, const ShiftOperator& b) {
  if (a.ell_ != b.ell_ || a.n_ != b.n_ || a.terms_.size() != b.terms_.size()) return false;
  auto ia = a.terms_.begin();
  for (auto ib = b.terms_.begin(); ib != b.terms_.end(); ++ia, ++ib)
    if (ia->first != ib->first || !(ia->second == ib->second)) return false;
  return true;
}

cplx ShiftOperator::apply(const std::function<cplx(const std::vector<cplx>&)>& F, const std::vector<cplx>& p) const {
  cplx sum = 0;
  for (const auto& [k, c] : terms_) {
    std::vector<cplx> q = p;
    for (size_t j = 0; j < q.size(); ++j) q[j] += static_cast<double>(k[j]);
    sum += c.evaluate(p) * F(q);
  }
  return sum;
}

std::string to_string(const ShiftOperator& op) {
  if (op.is_zero()) return "0";
  auto params = parameter_names(op.ell(), op.n());
  std::string out;
  for (const auto& [k, c] : op.terms()) {
    std::string sig;
    for (size_t j = 0; j < k.size(); ++j) {
      if (k[j] == 0) continue;
      if (!sig.empty()) sig += "*";
      sig += j < op.ell() ? "sigma_s[" + std::to_string(j + 1) + "]" : "sigma_nu[" + std::to_string(j - op.ell() + 1) + "]";
      if (k[j] != 1) sig += "^" + std::to_string(k[j]);
    }
    bool negative = false;
    std::string coeff;
    if (c.is_polynomial() && c.num().size() == 1 &&
        c.num().terms().begin()->first == Exponent(c.nvars(), 0)) {
      Rational v = c.num().terms().begin()->second;
      negative = v < 0;
      Rational a = abs(v);
      if (a != 1 || sig.empty()) coeff = is_integer(a) ? to_string(a) : "(" + to_string(a) + ")";
    } else {
      coeff = "(" + to_string(c, params) + ")";
    }
    std::string term = coeff.empty() ? sig : (sig.empty() ? coeff : coeff + "*" + sig);
    if (out.empty()) out = (negative ? "-" : "") + term;
    else out += (negative ? " - " : " + ") + term;
  }
  return out;
}

json to_json(const ShiftOperator& op) {
  auto params = parameter_names(op.ell(), op.n());
  json terms = json::array();
  for (const auto& [k, c] : op.terms())
    terms.push_back({{"shift", k}, {"num", to_string(c.num(), params)}, {"den", to_string(c.den(), params)}});
  return {{"text", to_string(op)}, {"params", params}, {"terms", terms}};
}

std::vector<ShiftOperator> annihilator_generators(const IntegralSpec& spec) {
  spec.validate();
  const size_t ell = spec.ell(), n = spec.n(), P = ell + n;
  std::vector<ShiftOperator> out;
  auto shift_of = [&](size_t i, const Exponent& alpha) {
    IntVec k(P, 0);
    k[i] = 1;
    for (size_t j = 0; j < n; ++j) k[ell + j] = alpha[j];
    return k;
  };
  for (size_t i = 0; i < ell; ++i) {
    ShiftOperator op = ShiftOperator::constant(ell, n, Rational(1));
    for (const auto& [alpha, c] : spec.polys[i].terms())
      op.add_term(shift_of(i, alpha), RationalFunction::constant(P, -c));
    out.push_back(op);
  }
  for (size_t j = 0; j < n; ++j) {
    ShiftOperator op(ell, n);
    // sigma_{nu_j}^{-1} nu_j = (nu_j - 1) sigma_{nu_j}^{-1}.
    IntVec down(P, 0);
    down[ell + j] = -1;
    op.add_term(down, RationalFunction(LaurentPolynomial::variable(P, ell + j) - LaurentPolynomial::constant(P, 1)));
    for (size_t i = 0; i < ell; ++i) {
      for (const auto& [alpha, c] : spec.polys[i].terms()) {
        if (alpha[j] == 0) continue;
        Exponent beta = alpha;
        beta[j] -= 1;
        op.add_term(shift_of(i, beta), RationalFunction((-c * alpha[j]) * LaurentPolynomial::variable(P, i)));
      }
    }
    out.push_back(op);
  }
  return out;
}

Rational pochhammer(const Rational& g, int a) {
  Rational r = 1;
  if (a >= 0) {
    for (int k = 0; k < a; ++k) r *= g + k;
    return r;
  }
  for (int k = 1; k <= -a; ++k) {
    if (g - k == 0) throw PreconditionError("pochhammer: zero factor (" + to_string(g) + ")_" + std::to_string(a));
    r *= g - k;
  }
  return Rational(1) / r;
}

RationalFunction pochhammer(const LaurentPolynomial& g, int a) {
  const size_t P = g.nvars();
  LaurentPolynomial prod = LaurentPolynomial::constant(P, 1);
  if (a >= 0) {
    for (int k = 0; k < a; ++k) prod *= g + LaurentPolynomial::constant(P, k);
    return RationalFunction(prod);
  }
  for (int k = 1; k <= -a; ++k) prod *= g - LaurentPolynomial::constant(P, k);
  return RationalFunction(LaurentPolynomial::constant(P, 1), prod);
}

Rational beta_reduction(int a, int b, const Rational& s, const Rational& nu) {
  Rational den = pochhammer(1 + nu - s, b - a);
  if (den == 0) throw PreconditionError("beta_reduction: pole at s = " + to_string(s) + ", nu = " + to_string(nu));
  return pochhammer(1 - s, -a) * pochhammer(nu, b) / den;
}

RationalFunction beta_reduction(int a, int b) {
  auto s = LaurentPolynomial::variable(2, 0), nu = LaurentPolynomial::variable(2, 1);
  auto one = LaurentPolynomial::constant(2, 1);
  return pochhammer(one - s, -a) * pochhammer(nu, b) / pochhammer(one + nu - s, b - a);
}

ShiftReport verify_shift(const IntegralSpec& spec, const ShiftOperator& op, const McOptions& opt) {
  spec.validate();
  if (!spec.positive_mode) throw PreconditionError("verify_shift requires positive-coefficient mode");
  if (op.ell() != spec.ell() || op.n() != spec.n()) throw PreconditionError("operator shape does not match the integral");
  ShiftReport rep;
  rep.seed = opt.seed;
  if (op.is_zero()) {
    rep.passed = true;
    return rep;
  }
  std::vector<cplx> p;
  RatVec exact;
  for (const auto& z : spec.s) p.push_back(z.to_complex()), exact.push_back(z.re);
  for (const auto& z : spec.nu) p.push_back(z.to_complex()), exact.push_back(z.re);
  std::vector<std::pair<cplx, IntegralSpec>> terms;
  for (const auto& [k, c] : op.terms()) {
    IntegralSpec shifted = spec;
    for (size_t i = 0; i < spec.ell(); ++i) shifted.s[i].re += k[i];
    for (size_t j = 0; j < spec.n(); ++j) shifted.nu[j].re += k[spec.ell() + j];
    if (!check_convergence(shifted).converges) {
      std::string where;
      for (const auto& z : shifted.s) where += (where.empty() ? "s = (" : ", ") + to_string(z);
      where += "), nu = (";
      for (size_t j = 0; j < shifted.nu.size(); ++j) where += (j ? ", " : "") + to_string(shifted.nu[j]);
      throw PreconditionError("shifted point " + where + ") is outside the convergence domain");
    }
    cplx coeff = spec.real_parameters() ? cplx(to_double(c.evaluate(exact))) : c.evaluate(p);
    std::vector<ExactComplex> point = shifted.s;
    point.insert(point.end(), shifted.nu.begin(), shifted.nu.end());
    rep.points.push_back({point, coeff});
    terms.push_back({coeff, shifted});
  }
  auto q = evaluate_combination(terms, opt);
  rep.estimate = q.estimate;
  rep.std_error = std::hypot(q.std_error, q.std_error_im);
  // Relations such as 1 - sigma_s f(sigma_nu) cancel sample by sample, leaving
  // only rounding; the floor is relative to sum |c_k| |I_k| on the same samples.
  for (auto& t : terms) t.first = std::abs(t.first);
  rep.scale = std::abs(evaluate_combination(terms, opt).estimate);
  rep.threshold = 10 * rep.std_error + 1e-10 * rep.scale;
  rep.samples = q.samples;
  rep.passed = std::abs(q.estimate) <= rep.threshold;
  return rep;
}

json to_json(const ShiftReport& r) {
  json pts = json::array();
  for (const auto& [pt, c] : r.points) {
    json coords = json::array();
    for (const auto& z : pt) coords.push_back(parameter_json(z));
    pts.push_back({{"point", coords}, {"coefficient", c.real()}, {"coefficient_im", c.imag()}});
  }
  return {{"estimate", r.estimate.real()}, {"estimate_im", r.estimate.imag()}, {"std_error", r.std_error},
          {"threshold", r.threshold},      {"scale", r.scale},      {"passed", r.passed},               {"samples", r.samples},
          {"seed", r.seed},                {"points", pts}};
}

}  // namespace euler
