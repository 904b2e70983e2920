#include "euler/symbolic.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace euler {

using json = nlohmann::json;

LaurentPolynomial substitute(const LaurentPolynomial& f, size_t j, const LaurentPolynomial& value) {
  LaurentPolynomial out(f.nvars());
  for (const auto& [e, c] : f.terms()) {
    if (e[j] < 0) throw std::invalid_argument("substitute: negative exponent");
    Exponent rest = e;
    rest[j] = 0;
    out += LaurentPolynomial::monomial(rest, c) * value.pow(static_cast<unsigned>(e[j]));
  }
  return out;
}

LaurentPolynomial shift_variable(const LaurentPolynomial& f, size_t j, const Rational& a) {
  if (a == 0) return f;
  LaurentPolynomial value = LaurentPolynomial::variable(f.nvars(), j) + LaurentPolynomial::constant(f.nvars(), a);
  return substitute(f, j, value);
}

Rational evaluate_exact(const LaurentPolynomial& f, const RatVec& x) {
  Rational sum = 0;
  for (const auto& [e, c] : f.terms()) {
    Rational m = c;
    for (size_t j = 0; j < e.size(); ++j) {
      if (e[j] == 0) continue;
      if (e[j] < 0 && x[j] == 0) throw std::domain_error("evaluate_exact: division by zero");
      Rational base = e[j] > 0 ? x[j] : Rational(1) / x[j];
      for (int r = 0; r < std::abs(e[j]); ++r) m *= base;
    }
    sum += m;
  }
  return sum;
}

Rational leading_coefficient(const LaurentPolynomial& f) {
  return f.is_zero() ? Rational(0) : f.terms().rbegin()->second;
}

Rational first_coefficient(const LaurentPolynomial& f) {
  return f.is_zero() ? Rational(0) : f.terms().begin()->second;
}

std::optional<LaurentPolynomial> divide_exact(const LaurentPolynomial& a, const LaurentPolynomial& b) {
  if (b.is_zero()) throw std::domain_error("divide_exact: zero divisor");
  const auto& [lb, cb] = *b.terms().rbegin();
  LaurentPolynomial q(a.nvars()), r = a;
  // With a single divisor and a monomial order, b | a iff every leading term
  // met along the way is divisible by LT(b).
  while (!r.is_zero()) {
    const auto& [lr, cr] = *r.terms().rbegin();
    Exponent e(lr.size());
    for (size_t j = 0; j < e.size(); ++j) {
      e[j] = lr[j] - lb[j];
      if (e[j] < 0 && lb[j] >= 0 && lr[j] >= 0) return std::nullopt;
    }
    auto t = LaurentPolynomial::monomial(e, cr / cb);
    q += t;
    r = r - t * b;
  }
  return q;
}

// ---------------------------------------------------------------------------
// RationalFunction

RationalFunction::RationalFunction(size_t nvars)
    : num_(nvars), den_(LaurentPolynomial::constant(nvars, 1)) {}

RationalFunction::RationalFunction(LaurentPolynomial num)
    : num_(std::move(num)), den_(LaurentPolynomial::constant(num_.nvars(), 1)) {}

RationalFunction::RationalFunction(LaurentPolynomial num, LaurentPolynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
  normalize();
}

RationalFunction RationalFunction::constant(size_t nvars, const Rational& c) {
  return RationalFunction(LaurentPolynomial::constant(nvars, c));
}

bool RationalFunction::is_polynomial() const {
  return den_.size() == 1 && den_.terms().begin()->first == Exponent(den_.nvars(), 0);
}

void RationalFunction::normalize() {
  if (num_.is_zero()) {
    den_ = LaurentPolynomial::constant(num_.nvars(), 1);
    return;
  }
  if (auto q = divide_exact(num_, den_)) {
    num_ = *q;
    den_ = LaurentPolynomial::constant(num_.nvars(), 1);
    return;
  }
  Rational lc = leading_coefficient(den_);
  num_ = (Rational(1) / lc) * num_;
  den_ = (Rational(1) / lc) * den_;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
  return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.is_zero()) throw std::domain_error("division by the zero rational function");
  return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

bool operator==(const RationalFunction& a, const RationalFunction& b) {
  return a.num_ * b.den_ == b.num_ * a.den_;
}

RationalFunction RationalFunction::shifted(size_t j, const Rational& a) const {
  return RationalFunction(shift_variable(num_, j, a), shift_variable(den_, j, a));
}

Rational RationalFunction::evaluate(const RatVec& x) const {
  Rational d = evaluate_exact(den_, x);
  if (d == 0) throw std::domain_error("rational function evaluated at a pole");
  return evaluate_exact(num_, x) / d;
}

cplx RationalFunction::evaluate(const std::vector<cplx>& x) const {
  return euler::evaluate(num_, x) / euler::evaluate(den_, x);
}

std::string to_string(const RationalFunction& f, const std::vector<std::string>& vars) {
  if (f.is_polynomial()) return to_string(f.num(), vars);
  return "(" + to_string(f.num(), vars) + ")/(" + to_string(f.den(), vars) + ")";
}

std::vector<std::string> parameter_names(size_t ell, size_t n) {
  std::vector<std::string> out;
  for (size_t i = 0; i < ell; ++i) out.push_back(ell == 1 ? "s" : "s" + std::to_string(i + 1));
  for (size_t j = 0; j < n; ++j) out.push_back(n == 1 ? "nu" : "nu" + std::to_string(j + 1));
  return out;
}

// ---------------------------------------------------------------------------
// WeylOperator

namespace {

long total(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0L); }

// Descending total degree, then descending lexicographic.
int compare_desc(const Exponent& a, const Exponent& b) {
  long ta = total(a), tb = total(b);
  if (ta != tb) return ta > tb ? -1 : 1;
  if (a == b) return 0;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end()) ? -1 : 1;
}

Rational binomial(int n, int k) {
  Rational r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

Rational falling(int n, int k) {
  Rational r = 1;
  for (int i = 0; i < k; ++i) r *= n - i;
  return r;
}

}  // namespace

bool WeylOperator::KeyLess::operator()(const Key& a, const Key& b) const {
  int c = compare_desc(a.d, b.d);
  if (c != 0) return c < 0;
  return compare_desc(a.x, b.x) < 0;
}

WeylOperator WeylOperator::constant(size_t nvars, const LaurentPolynomial& c) {
  WeylOperator op(nvars, c.nvars());
  op.add_term(Exponent(nvars, 0), Exponent(nvars, 0), c);
  return op;
}

WeylOperator WeylOperator::constant(size_t nvars, size_t nparams, const Rational& c) {
  return constant(nvars, LaurentPolynomial::constant(nparams, c));
}

WeylOperator WeylOperator::variable(size_t nvars, size_t nparams, size_t j) {
  WeylOperator op(nvars, nparams);
  Exponent x(nvars, 0);
  x[j] = 1;
  op.add_term(x, Exponent(nvars, 0), LaurentPolynomial::constant(nparams, 1));
  return op;
}

WeylOperator WeylOperator::derivative(size_t nvars, size_t nparams, size_t j, int power) {
  WeylOperator op(nvars, nparams);
  Exponent d(nvars, 0);
  d[j] = power;
  op.add_term(Exponent(nvars, 0), d, LaurentPolynomial::constant(nparams, 1));
  return op;
}

WeylOperator WeylOperator::theta(size_t nvars, size_t nparams, size_t j) {
  WeylOperator op(nvars, nparams);
  Exponent e(nvars, 0);
  e[j] = 1;
  op.add_term(e, e, LaurentPolynomial::constant(nparams, 1));
  return op;
}

void WeylOperator::add_term(const Exponent& x, const Exponent& d, const LaurentPolynomial& c) {
  if (c.is_zero()) return;
  if (x.size() != nvars_ || d.size() != nvars_ || c.nvars() != nparams_)
    throw std::invalid_argument("WeylOperator: shape mismatch");
  for (size_t j = 0; j < nvars_; ++j)
    if (x[j] < 0 || d[j] < 0) throw std::invalid_argument("WeylOperator: negative exponent");
  Key k{x, d};
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(std::move(k), c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

WeylOperator WeylOperator::operator-() const {
  WeylOperator r(nvars_, nparams_);
  for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
  return r;
}

WeylOperator operator+(const WeylOperator& a, const WeylOperator& b) {
  WeylOperator r = a;
  if (r.nvars_ == 0 && r.terms_.empty()) r = WeylOperator(b.nvars_, b.nparams_);
  for (const auto& [k, c] : b.terms_) r.add_term(k.x, k.d, c);
  return r;
}

WeylOperator operator-(const WeylOperator& a, const WeylOperator& b) { return a + (-b); }

WeylOperator operator*(const LaurentPolynomial& c, const WeylOperator& a) {
  WeylOperator r(a.nvars_, a.nparams_);
  for (const auto& [k, t] : a.terms_) r.add_term(k.x, k.d, c * t);
  return r;
}

WeylOperator operator*(const WeylOperator& a, const WeylOperator& b) {
  if (a.nvars_ != b.nvars_) throw std::invalid_argument("WeylOperator: variable count mismatch");
  const size_t n = a.nvars_;
  WeylOperator r(n, std::max(a.nparams_, b.nparams_));
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      // d^p x^q = sum_k C(p,k) q!/(q-k)! x^{q-k} d^{p-k}, independently per variable.
      std::vector<std::vector<std::pair<int, Rational>>> choices(n);
      for (size_t j = 0; j < n; ++j) {
        int p = ka.d[j], q = kb.x[j];
        for (int k = 0; k <= std::min(p, q); ++k) choices[j].push_back({k, binomial(p, k) * falling(q, k)});
      }
      std::vector<size_t> idx(n, 0);
      LaurentPolynomial base = ca * cb;
      while (true) {
        Exponent x(n), d(n);
        Rational w = 1;
        for (size_t j = 0; j < n; ++j) {
          int k = choices[j][idx[j]].first;
          w *= choices[j][idx[j]].second;
          x[j] = ka.x[j] + kb.x[j] - k;
          d[j] = ka.d[j] - k + kb.d[j];
        }
        r.add_term(x, d, w * base);
        size_t j = 0;
        while (j < n && ++idx[j] == choices[j].size()) idx[j++] = 0;
        if (j == n) break;
      }
    }
  }
  return r;
}

bool operator==(const WeylOperator& a, const WeylOperator& b) {
  if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
  auto ia = a.terms_.begin();
  for (auto ib = b.terms_.begin(); ib != b.terms_.end(); ++ia, ++ib)
    if (ia->first.x != ib->first.x || ia->first.d != ib->first.d || !(ia->second == ib->second)) return false;
  return true;
}

WeylOperator WeylOperator::normalized() const {
  if (terms_.empty() || first_coefficient(terms_.begin()->second) > 0) return *this;
  return -*this;
}

WeylOperator WeylOperator::substitute_parameters(const RatVec& values) const {
  if (values.size() != nparams_) throw std::invalid_argument("substitute_parameters: wrong value count");
  WeylOperator r(nvars_, 0);
  for (const auto& [k, c] : terms_)
    r.add_term(k.x, k.d, LaurentPolynomial::constant(0, evaluate_exact(c, values)));
  return r;
}

namespace {

std::string derivative_text(const Exponent& d, const std::vector<std::string>& vars, bool index_labels) {
  std::string out;
  for (size_t j = 0; j < d.size(); ++j) {
    if (d[j] == 0) continue;
    if (!out.empty()) out += "*";
    out += "d[" + (index_labels ? std::to_string(j + 1) : vars[j]) + "]";
    if (d[j] != 1) out += "^" + std::to_string(d[j]);
  }
  return out;
}

std::string variable_text(const Exponent& x, const std::vector<std::string>& vars) {
  std::string out;
  for (size_t j = 0; j < x.size(); ++j) {
    if (x[j] == 0) continue;
    if (!out.empty()) out += "*";
    out += vars[j];
    if (x[j] != 1) out += "^" + std::to_string(x[j]);
  }
  return out;
}

}  // namespace

std::string to_string(const WeylOperator& op, const std::vector<std::string>& vars,
                      const std::vector<std::string>& params, bool index_labels) {
  if (op.is_zero()) return "0";
  std::string out;
  for (const auto& [k, c] : op.terms()) {
    std::string mono = variable_text(k.x, vars);
    std::string der = derivative_text(k.d, vars, index_labels);
    std::string body = mono;
    if (!der.empty()) body += (body.empty() ? "" : "*") + der;
    // Pull a sign out of the coefficient when most of its terms are negative.
    int balance = 0;
    for (const auto& [e, v] : c.terms()) balance += v < 0 ? 1 : -1;
    bool negative = balance > 0 || (balance == 0 && first_coefficient(c) < 0);
    LaurentPolynomial a = negative ? -c : c;
    std::string coeff;
    const Exponent& e0 = a.terms().begin()->first;
    bool is_const = a.size() == 1 && std::all_of(e0.begin(), e0.end(), [](int e) { return e == 0; });
    if (is_const) {
      Rational v = a.terms().begin()->second;
      if (v != 1 || body.empty()) coeff = to_string(v);
    } else if (a.size() == 1 && a.terms().begin()->second == 1) {
      coeff = to_string(a, params);
    } else {
      coeff = "(" + to_string(a, params) + ")";
    }
    std::string term = coeff.empty() ? body : (body.empty() ? coeff : coeff + "*" + body);
    if (out.empty()) out = (negative ? "-" : "") + term;
    else out += (negative ? " - " : " + ") + term;
  }
  return out;
}

json to_json(const WeylOperator& op, const std::vector<std::string>& vars, const std::vector<std::string>& params,
             bool index_labels) {
  json terms = json::array();
  for (const auto& [k, c] : op.terms()) terms.push_back({{"coeff", to_string(c, params)}, {"x", k.x}, {"d", k.d}});
  return {{"text", to_string(op, vars, params, index_labels)}, {"vars", vars}, {"terms", terms}};
}

}  // namespace euler
